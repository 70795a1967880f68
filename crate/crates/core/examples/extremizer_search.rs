//! Normalized ascent on the quotient from several random starts.

use num_complex::Complex64;
use tomas_stein::solver::{ascend, ascend_many, random_start, reduce_symmetry, AscentConfig};
use tomas_stein::variational::{constant_estimate, el_residual, quotient, ConstantSource};
use tomas_stein::CircleFunction;

fn main() -> tomas_stein::Result<()> {
    let q1 = quotient(&CircleFunction::constant(Complex64::new(1.0, 0.0), 0))?;
    let config = AscentConfig::default();
    let start = CircleFunction::constant(Complex64::new(1.0, 0.0), 16)
        .add(&CircleFunction::mode(1, 16).scale(Complex64::new(0.3, 0.0)));
    let r = ascend(&start, &config)?;
    println!("from 1 + 0.3e^(iθ): quotient {:.14} after {} steps, residual {:.1e}", r.quotient, r.trace.len(), r.residual);
    print!("{}", r.trace_jsonl().lines().take(3).map(|l| format!("{l}\n")).collect::<String>());

    let starts: Vec<_> = (0..5).map(|s| random_start(16, s)).collect();
    for (seed, r) in ascend_many(&starts, &config).into_iter().enumerate() {
        let r = r?;
        let red = reduce_symmetry(&r.f)?;
        println!(
            "seed {seed}: quotient {:.14} (gap {:.1e}), converged {}, ξ = ({:.4}, {:.4}), reduced tail {:.1e}",
            r.quotient,
            (r.quotient - q1).abs() / q1,
            r.converged,
            red.xi[0],
            red.xi[1],
            red.tail(4)
        );
    }
    let est = constant_estimate(ConstantSource::FromSolver(&r))?;
    println!("solver estimate {:.14}", est.value);
    println!("{}", el_residual(&r.f)?.summary());
    Ok(())
}
