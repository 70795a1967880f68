//! Smoothing of the quintic convolution on a rough input.

use tomas_stein::regularity::smoothing::{smoothing_experiment, SmoothingConfig};
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let sq = CircleFunction::square_wave(64);
    let r = smoothing_experiment(&sq, None, &SmoothingConfig::default())?;
    println!("decay slope {:.4} → {:.4}, gain {:.4}", r.input_slope.slope, r.output_slope.slope, r.gain);
    println!(
        "Lipschitz estimate {:.6} (grid {}), refined {:.6} (grid {}), change {:.1e}",
        r.lipschitz.value, r.lipschitz.grid, r.lipschitz_refined.value, r.lipschitz_refined.grid, r.lipschitz_change
    );
    println!("difference exponent {:.4}, linear constant {:.4}", r.difference_exponent, r.linear_constant);
    println!("η-balance: p {:.4}, fitted δ {:.4}, 1/(1+p) {:.4}", r.eta.p, r.eta.delta, r.eta.predicted_delta);
    for (eta, k, lip) in &r.eta.splits {
        println!("  η = {eta}: cutoff {k}, Lip(f♯)/calH {lip:.3}");
    }
    Ok(())
}
