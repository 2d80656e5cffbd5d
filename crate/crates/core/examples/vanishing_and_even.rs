//! The (kρ − 1)-stem vanishing and the strongly-even check.
//!
//! cargo run --example vanishing_and_even -- [n]

use rosq::engine::run_to_einfty;
use rosq::homotopy::{check_strongly_even, check_vanishing_krho_minus_1};
use rosq::pages::{Span, Window};

fn main() -> rosq::Result<()> {
    let n: u32 = std::env::args().nth(1).map_or(Ok(3), |s| s.parse()).expect("height");
    let window = Window::new((-8, 8), (-3, 3), (0, 4 * (1 << n) + 3))?;
    let run = run_to_einfty(n, &window, 6, n + 3)?;
    let ks = Span::new(-2, 2);
    for v in check_vanishing_krho_minus_1(&run, ks)? {
        println!("stem {}ρ-1: {}", v.k, if v.pass() { "zero" } else { "NOT zero" });
        for p in &v.points {
            println!("  l={:<2} {:<32} dies on {} (predicted d{})", p.ell, p.monomial, p.death_page.map_or("-".into(), |r| format!("d{r}")), p.expected_death_page);
        }
    }
    for v in check_strongly_even(&run, ks)? {
        println!("stem {}ρ: {} on {} -> {} ({})", v.k, v.bottom, v.bottom_monomial, v.restriction, if v.pass() { "ok" } else { "FAIL" });
    }
    Ok(())
}
