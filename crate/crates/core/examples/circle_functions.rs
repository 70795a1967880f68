//! Coefficient/sample transforms, norms and the symmetry group on S¹.

use num_complex::Complex64;
use tomas_stein::spectral::{apply_symmetry, inner_product, weighted_norm, SymmetryElement};
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let f = CircleFunction::constant(Complex64::new(1.0, 0.0), 3)
        .add(&CircleFunction::mode(2, 3).scale(Complex64::new(0.5, -0.25)));
    let samples = f.samples(16)?;
    let back = CircleFunction::from_samples(samples, 3)?;
    println!("round trip error {:.2e}", back.sub(&f).norm());
    println!("‖f‖ = {:.12}, ⟨f, 1⟩ = {:.12}", f.norm(), inner_product(&f, &CircleFunction::constant(1.0.into(), 3)));
    for s in [0.0, 0.5, 1.0] {
        println!("H^{s} norm {:.6}", weighted_norm(&f, s));
    }

    let g = apply_symmetry(&f, &SymmetryElement::rotation(std::f64::consts::FRAC_PI_3))?;
    println!("rotation keeps the norm: {:.12}", g.norm());
    let ft = apply_symmetry(&f, &SymmetryElement::reflection())?;
    println!("f̃ coefficients: {:?}", ft.coeffs());
    let m = apply_symmetry(&CircleFunction::constant(1.0.into(), 0), &SymmetryElement::modulation([1.0, 0.0]))?;
    println!("e^{{i cos θ}} needs bandwidth {}; value at θ = 0: {:.12}", m.bandwidth(), m.eval(0.0));

    let sq = CircleFunction::square_wave(64);
    for s in [0.4, 0.6] {
        let wide = CircleFunction::square_wave(512);
        println!("square wave H^{s}: N = 64 {:.4}, N = 512 {:.4}", weighted_norm(&sq, s), weighted_norm(&wide, s));
    }
    Ok(())
}
