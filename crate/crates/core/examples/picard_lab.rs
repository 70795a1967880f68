//! Contraction iteration around a computed extremizer.

use num_complex::Complex64;
use tomas_stein::solver::{ascend, normalize_lambda, picard_iterate, AscentConfig, PicardConfig, PicardState};
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let start = CircleFunction::constant(Complex64::new(1.0, 0.0), 16)
        .add(&CircleFunction::mode(1, 16).scale(Complex64::new(0.3, 0.0)));
    let r = ascend(&start, &AscentConfig::default())?;
    let (f, lambda) = normalize_lambda(&r.f)?;
    println!("λ before normalization {lambda:.10}");
    for eps in [0.05, 0.02, 0.005] {
        let state = PicardState::new(&f, PicardConfig { eps, ..PicardConfig::default() })?;
        let st = picard_iterate(state, 100)?;
        println!(
            "ε = {eps}: K = {}, ball radius {:.3e}, {} steps, converged {}, max ratio {:.3e} (𝓗ˢ {:.3e}), ‖h − g‖ {:.1e}",
            st.cutoff,
            st.ball_radius,
            st.history.len(),
            st.converged,
            st.max_ratio_l2().unwrap_or(f64::NAN),
            st.max_ratio_calh().unwrap_or(f64::NAN),
            st.distance_to_g()
        );
    }
    Ok(())
}
