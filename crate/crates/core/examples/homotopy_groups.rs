//! Integer-stem E∞ columns: KO at n = 1 and the first stems of E_2^{hC_2}.
//!
//! cargo run --example homotopy_groups

use rosq::engine::run_to_einfty;
use rosq::homotopy::{homotopy_groups, Extension};
use rosq::pages::{Span, Window};

fn main() -> rosq::Result<()> {
    for n in [1, 2] {
        let run = run_to_einfty(n, &Window::integer((-4, 20), (0, 12))?, 6, n + 3)?;
        println!("height {n}");
        for r in homotopy_groups(&run.einfty, Span::new(0, 16))? {
            let group = match &r.extension {
                Extension::Resolved(g) => g.clone(),
                Extension::ExtensionsUnresolved => "extensions-unresolved".into(),
            };
            let column: Vec<String> = r.entries.iter().map(|e| format!("s={} {}", e.s, e.group)).collect();
            println!("  {:>3}  {group:<24} {}", r.stem.a, column.join(" | "));
        }
    }
    Ok(())
}
