//! Arithmetic in 𝔽_{2ⁿ}, W(𝔽_{2ⁿ})/2^M and truncated power series.
//!
//! cargo run --example coefficients

use rosq::coefficients::{witt_reduce, GaloisField, TruncatedSeries, TruncatedWitt};

fn main() -> rosq::Result<()> {
    let f = GaloisField::new(3)?;
    let x = f.basis(1);
    println!("F8 = F2[x]/({:#b}); x^7 = {:?}, x^-1 = {:?}", f.polynomial(), x.pow(7).bits(), x.inverse().map(|y| y.bits()));

    let w = TruncatedWitt::new(3, 4)?;
    let a = w.element(&[1, 2, 0]);
    let b = w.element(&[3, 0, 1]);
    let p = a * b;
    println!("in W(F8)/16: (1 + 2x)(3 + x^2) = {:?}, valuation {:?}", (0..3).map(|j| p.coeff(j)).collect::<Vec<_>>(), p.valuation());
    println!("reduced mod 2: {:?}", witt_reduce(p).bits());

    let u1 = TruncatedSeries::variable(2, 4, 1, w.one());
    let u2 = TruncatedSeries::variable(2, 4, 2, w.one());
    let s = u1.series_add(&u2)?;
    let cube = s.series_mul(&s)?.series_mul(&s)?;
    println!("(u1 + u2)^3 has {} terms below degree 4", cube.terms().count());
    Ok(())
}
