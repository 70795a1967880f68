//! Hölder and difference-quotient estimates, interpolation and the
//! sharp/flat split.

use tomas_stein::regularity::{
    calh_profile, decay_slope, holder_profile, inclusion_constant, interpolation_constant, regularity_profile,
    sample_grid, sharp_flat_split,
};
use tomas_stein::solver::random_start;
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let sq = CircleFunction::square_wave(64);
    let fit = decay_slope(&sq, (8, 64))?;
    println!("square wave decay slope {:.4} (residual {:.2e})", fit.slope, fit.residual);
    for alpha in [0.3, 0.7] {
        let h = holder_profile(&sq, alpha, sample_grid(64))?;
        println!("Λ^{alpha}: value {:.4}, diverging {}", h.value, h.diverging);
    }
    for s in [0.3, 0.5, 0.7] {
        let p = calh_profile(&sq, s);
        println!("𝓗^{s}: value {:.4}, diverging {}", p.value, p.diverging);
    }
    let f = random_start(16, 3);
    for (b, a) in [(0.2, 0.4), (0.3, 0.9)] {
        println!("interpolation constant (β, α) = ({b}, {a}): {:.4}", interpolation_constant(&f, b, a)?);
    }
    println!("inclusion constant H^0.3 ⊂ 𝓗^0.6: {:.4}", inclusion_constant(&f, 0.3, 0.6)?);
    for eta in [0.2, 0.1, 0.05] {
        let (_, _, r) = sharp_flat_split(&sq, eta, 0.25)?;
        println!("η = {eta}: cutoff {}, Lip(f♯) {:.3}, bounds hold {}", r.cutoff, r.sharp_lipschitz, r.bounds_hold);
    }
    let p = regularity_profile(&sq, &[0.5], &[0.5])?;
    println!("{}", serde_json::to_string(&p.to_json()["slope"]).unwrap_or_default());
    Ok(())
}
