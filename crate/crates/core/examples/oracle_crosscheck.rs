//! Compare the descriptor engine with the brute-force subquotient oracle.
//!
//! cargo run --release --example oracle_crosscheck -- [n]

use rosq::engine::run_to_einfty;
use rosq::oracle::{compare_with_engine, oracle_page_homology};
use rosq::pages::Window;

fn main() -> rosq::Result<()> {
    let n: u32 = std::env::args().nth(1).map_or(Ok(2), |s| s.parse()).expect("height");
    let window = Window::new((-8, 16), (-2, 2), (0, 24))?;
    let run = run_to_einfty(n, &window, 4, 5)?;
    let report = oracle_page_homology(&window, n, 4, 5, n)?;
    for page in &report.pages {
        let total: u64 = page.orders.values().sum();
        println!("{}: {} nonzero points, total order 2^{total}", page.page, page.orders.len());
    }
    let mismatches = compare_with_engine(&run, &report);
    println!("mismatches: {}", mismatches.len());
    for m in mismatches.iter().take(5) {
        println!("  {m:?}");
    }
    Ok(())
}
