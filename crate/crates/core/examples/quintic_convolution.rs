//! `Q(f,f,f,f̃,f̃)` by the polar engine and by tensor contraction, the
//! autoconvolution densities and the quintilinear bounds.

use std::f64::consts::PI;

use tomas_stein::bessel::{build_tensor, RadialGrid};
use tomas_stein::quintic::density::mass;
use tomas_stein::quintic::{auto_density, quintic_convolve, quintic_self, quintilinear_bound_check, sup_bound_check};
use tomas_stein::solver::random_start;
use tomas_stein::spectral::inner_product;
use tomas_stein::variational::quotient;

fn main() -> tomas_stein::Result<()> {
    let f = random_start(3, 1);
    let polar = quintic_self(&f, 3)?;
    let tensor = build_tensor(3, &RadialGrid::new(200.0, true))?;
    let ft = f.conj_reflect();
    let contracted = quintic_convolve([&f, &f, &f, &ft, &ft], &tensor)?;
    println!("polar vs tensor: {:.2e}", polar.sub(&contracted).norm() / polar.norm());
    let pairing = inner_product(&polar, &f).re;
    let l6 = quotient(&f)? * f.norm();
    println!("⟨Q(f), f⟩ = {pairing:.10}, (2π)^-2 ‖(fσ)^‖⁶ = {:.10}", l6.powi(6) / (2.0 * PI).powi(2));

    for k in 2..=5 {
        let d = auto_density(k, &[0.5, 1.5, 2.5])?;
        println!("μ_{k} at 0.5, 1.5, 2.5: {:?}", d.values);
    }
    println!("mass of μ_5 / (2π)^5 = {:.12}", mass(5)? / (2.0 * PI).powi(5));
    let sup = sup_bound_check(5, 4.99)?;
    println!("Ĉ₅ = {:.8} at r = {} (grid refinement change {:.1e})", sup.sup, sup.argmax, sup.relative_change);

    let gs: Vec<_> = (0..5).map(|s| random_start(4, 10 + s)).collect();
    let refs = [&gs[0], &gs[1], &gs[2], &gs[3], &gs[4]];
    for s in [0.0, 0.5] {
        let r = quintilinear_bound_check(refs, s, Some(sup.sup))?;
        println!("s = {s}: ratio {:.4e}, bound {:.4e}", r.ratio, r.bound.unwrap_or(f64::NAN));
    }
    Ok(())
}
