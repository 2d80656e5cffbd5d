//! HFPSS(BP_ℝ) with two v̄-generators on the integer stems.
//!
//! cargo run --example bpr

use rosq::engine::run_bpr;
use rosq::pages::{BprGroup, PointData, Window};

fn main() -> rosq::Result<()> {
    let window = Window::integer((0, 16), (0, 16))?;
    let run = run_bpr(&window, 2, None, 6)?;
    for (page, arrows) in run.pages.iter().zip(&run.arrows) {
        println!("{}: {} points, {} arrows", page.page, page.interior_count(), arrows.len());
    }
    println!("E∞ in filtration 0:");
    for (td, p) in run.einfty.interior().filter(|(td, _)| td.s == 0) {
        if let PointData::Bpr { basis, group: BprGroup::Free { rank, index_log2 } } = p {
            let basis: Vec<String> = basis.iter().map(|m| m.to_string()).collect();
            println!("  {td}: rank {rank}, index 2^{index_log2}, basis {}", basis.join(", "));
        }
    }
    Ok(())
}
