//! Which of h_i, h_j², g_k survive to E∞ of HFPSS(E_n).
//!
//! cargo run --example detection -- [n]

use rosq::detection::{certify_detection, detection_window, DetectionClass, Family};
use rosq::engine::run_to_einfty;
use rosq::pages::Truncation;

fn main() -> rosq::Result<()> {
    let n: u32 = std::env::args().nth(1).map_or(Ok(3), |s| s.parse()).expect("height");
    let t = Truncation::default_for(n);
    for index in 1..=n + 1 {
        for family in [Family::H, Family::HSquared, Family::G] {
            let class = DetectionClass::new(family, index)?;
            let run = run_to_einfty(n, &detection_window(class, n), t.series_deg, t.witt_prec)?;
            let r = certify_detection(class, &run)?;
            println!(
                "{:<6} stem {:>3}  {:<28} -> {:<32} {}",
                r.class,
                r.stem,
                r.bpr_monomial,
                r.image_monomial.as_deref().unwrap_or("0"),
                r.verdict
            );
        }
    }
    Ok(())
}
