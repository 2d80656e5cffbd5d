//! Write SVG and JSON charts of every page of HFPSS(E_3).
//!
//! cargo run --example charts -- [out-dir]

use std::path::PathBuf;

use rosq::chart::{render, Format};
use rosq::engine::run_to_einfty;
use rosq::pages::Window;

fn main() -> rosq::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "charts".into()));
    std::fs::create_dir_all(&out)?;
    let window = Window::integer((-4, 36), (0, 40))?;
    let run = run_to_einfty(3, &window, 6, 6)?;
    let pages = run.pages.iter().zip(run.arrows.iter().map(Vec::as_slice)).chain([(&run.einfty, &[][..])]);
    for (lattice, arrows) in pages {
        for (format, ext) in [(Format::Svg, "svg"), (Format::Json, "json")] {
            let path = out.join(format!("n3_{}.{ext}", lattice.page.to_string().to_lowercase()));
            std::fs::write(&path, render(lattice, arrows, window.stems, window.filtration, format)?)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
