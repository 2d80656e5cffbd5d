//! Page-by-page differentials in the integer-graded part of HFPSS(E_3).
//!
//! cargo run --example differentials

use rosq::engine::run_to_einfty;
use rosq::pages::Window;

fn main() -> rosq::Result<()> {
    let window = Window::integer((-4, 36), (0, 40))?;
    let run = run_to_einfty(3, &window, 6, 6)?;
    for (page, arrows) in run.pages.iter().zip(&run.arrows) {
        println!("{}: {} nonzero points, {} arrows", page.page, page.interior_count(), arrows.len());
        for d in arrows.iter().filter(|d| run.einfty.is_interior(d.source) && d.source.a() <= 12) {
            let image = d.image.as_ref().map_or(String::new(), |m| m.to_string());
            println!("  d{} {} -> {}  [{}]  {}", d.r, d.source, d.target, d.map, image);
        }
    }
    for (page, count) in run.summary() {
        println!("{page}: {count}");
    }
    Ok(())
}
