//! The period of the integer-graded E∞ page, heights 1 to 4.
//!
//! cargo run --example periodicity

use rosq::engine::{page_length, run_to_einfty};
use rosq::homotopy::periodicity;
use rosq::pages::Window;

fn main() -> rosq::Result<()> {
    for n in 1..=4 {
        let width = 1i64 << (n + 3);
        let window = Window::integer((0, width), (0, i64::from(page_length(n))))?;
        let run = run_to_einfty(n, &window, 6, n + 3)?;
        match periodicity(&run.einfty)? {
            Some(p) => println!("n={n}: period {p}"),
            None => println!("n={n}: no period within stems 0..{width}"),
        }
    }
    Ok(())
}
