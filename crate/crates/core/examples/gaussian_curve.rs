//! Builds the Gaussian-field curve, locates its branch points and labels
//! the sheets at a few points of the upper half-plane.
//!
//! cargo run --example gaussian_curve -- 2.0 0.5

use num_complex::Complex64 as C;
use spectral_curve::curve::gaussian_curve;
use spectral_curve::sheets::{branch_structure, Sheets};

fn main() -> spectral_curve::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("a number"));
    let a = args.next().unwrap_or(2.0);
    let x2 = args.next().unwrap_or(0.5);
    let curve = gaussian_curve(a, x2)?;
    println!("c2 {:?}\nc1 {:?}\nc0 {:?}", curve.c2.coeffs(), curve.c1.coeffs(), curve.c0.coeffs());

    let branch = branch_structure(&curve, 1e-6)?;
    println!("I1 {:?}  I2 {:?}", branch.i1, branch.i2);
    let sheets = Sheets::new(&curve, &branch)?;
    for z in [C::new(0.0, 1.0), C::new(a, 0.5), C::new(-3.0 * a, 2.0)] {
        let v = sheets.label(z)?;
        println!("z {z:.3}  f1 {:.6}  f2 {:.6}  r3 {:.6}", v.f1, v.f2, v.r3);
    }
    Ok(())
}
