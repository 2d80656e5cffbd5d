//! The E₂ page of HFPSS(E_n) on a small RO(C₂) window.
//!
//! cargo run --example e2_page -- [n]

use rosq::pages::{build_e2_en, PointData, Truncation, Window};

fn main() -> rosq::Result<()> {
    let n: u32 = std::env::args().nth(1).map_or(Ok(2), |s| s.parse()).expect("height");
    let window = Window::new((-4, 6), (-2, 2), (0, 4))?;
    let e2 = build_e2_en(n, &window, Truncation::default_for(n))?;
    println!("E2 of E_{n} on {window}: {} occupied points", e2.interior_count());
    for (td, p) in e2.interior() {
        if let PointData::En { monomial, descriptor } = p {
            println!("{td:>14}  {descriptor:<14} {monomial}");
        }
    }
    Ok(())
}
