//! The quotient at constants and the Euler-Lagrange residual there.

use std::f64::consts::PI;

use num_complex::Complex64;
use tomas_stein::bessel::six_bessel_integral;
use tomas_stein::variational::{constant_estimate, el_residual, quotient, quotient_from_functional, ConstantSource};
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let one = CircleFunction::constant(Complex64::new(1.0, 0.0), 0);
    let (t0, _) = six_bessel_integral([0; 6])?;
    let from_t0 = ((2.0 * PI).powi(7) * t0).powf(1.0 / 6.0) / (2.0 * PI).sqrt();
    println!("quotient(1): extension {:.14}", quotient(&one)?);
    println!("             functional {:.14}", quotient_from_functional(&one)?);
    println!("             from T0    {from_t0:.14}");
    let est = constant_estimate(ConstantSource::FromConstants)?;
    println!("estimate {:.14} (source {}, conditional {})", est.value, est.source, est.conditional);
    let el = el_residual(&one)?;
    println!("{}", el.summary());
    println!("λ from the constant estimate: {:.12}", el.lambda_paper);
    Ok(())
}
