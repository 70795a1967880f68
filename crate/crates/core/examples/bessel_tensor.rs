//! Six-fold Bessel integrals, the tabulated tensor and its binary cache.

use tomas_stein::bessel::tensor::admissible_classes;
use tomas_stein::bessel::{bessel_j, build_tensor, cache, six_bessel_integral, RadialGrid};

fn main() -> tomas_stein::Result<()> {
    println!("J_0(1) = {:.16}, J_5(10) = {:.16}", bessel_j(0, 1.0)?, bessel_j(5, 10.0)?);
    let (t0, e0) = six_bessel_integral([0; 6])?;
    println!("T0 = ∫ J0⁶ ρ dρ = {t0:.15} (error estimate {e0:.1e})");
    let (t5, _) = six_bessel_integral([5, 0, 0, 5, 0, 0])?;
    println!("T(5,0,0;5,0,0) = {t5:.15}");

    for n in 0..=3 {
        println!("N = {n}: {} admissible classes", admissible_classes(n).len());
    }
    let start = std::time::Instant::now();
    let tensor = build_tensor(4, &RadialGrid::new(200.0, true))?;
    println!(
        "N = 4 tensor: {} entries, cutoff {}, checksum {:#018x}, built in {:.2?}",
        tensor.len(),
        tensor.cutoff,
        tensor.checksum(),
        start.elapsed()
    );
    let path = std::env::temp_dir().join("tomas-stein-n4.bin");
    let back = cache::cache_roundtrip(&tensor, &path)?;
    println!("cache at {} read back with checksum {:#018x}", path.display(), back.checksum());
    let csv = cache::to_csv(&tensor);
    println!("{}", csv.lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}
