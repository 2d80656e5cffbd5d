//! Save a run to the binary cache, read it back and export JSON.
//!
//! cargo run --example cache_round_trip -- [path]

use rosq::cli::cache::{export_json, load, save, serialize, CacheEntry};
use rosq::engine::run_to_einfty;
use rosq::pages::Window;

fn main() -> rosq::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "e2.rosq".into());
    let run = run_to_einfty(2, &Window::new((-8, 24), (-2, 2), (0, 24))?, 6, 5)?;
    let entry = CacheEntry::from_run(&run);
    save(&entry, path.as_ref())?;
    let back = load(path.as_ref())?;
    assert_eq!(serialize(&back), serialize(&entry));
    println!("{path}: {} bytes, {} pages, identical on reload", serialize(&entry).len(), back.pages.len());
    let json = export_json(&back)?;
    println!("json export: {} bytes", json.len());
    Ok(())
}
