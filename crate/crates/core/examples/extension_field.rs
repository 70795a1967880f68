//! The extension `(fσ)^` on a polar grid, its L⁶ norm and decay.

use num_complex::Complex64;
use tomas_stein::extension::{decay_check, default_grid, extend, extension_at, mode_envelope};
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let one = CircleFunction::constant(Complex64::new(1.0, 0.0), 0);
    let field = extend(&one, &default_grid(0))?;
    println!("F(0) = {:.12} (2π = {:.12})", field.origin, 2.0 * std::f64::consts::PI);
    println!("‖(σ)^‖_L6 = {:.12}", field.l6_norm()?);
    let d = decay_check(&field, 10.0);
    println!("sup ρ^(1/2)|F|/(2π) over ρ ≥ 10: {:.6}, bounded by 1: {}", d.envelope, d.holds);

    let f = CircleFunction::from_coeffs(vec![
        Complex64::new(0.3, 0.1),
        Complex64::new(1.0, 0.0),
        Complex64::new(-0.2, 0.4),
    ]);
    for rho in [0.0, 2.0, 20.0] {
        println!("F_f({rho}, π/4) = {:.10}", extension_at(&f, rho, std::f64::consts::FRAC_PI_4)?);
    }
    let field = extend(&f, &default_grid(1))?;
    println!("‖(fσ)^‖_L6 / ‖f‖ = {:.10}", field.l6_norm()? / f.norm());
    for k in [0, 3, 8] {
        println!("mode {k}: sup ρ^(1/2)|J_k| on [10, 200] = {:.4}", mode_envelope(k, 10.0, 200.0, 0.05)?);
    }
    Ok(())
}
