// Seeded sampling of random permutations for d = 4, 5, where exhaustive
// enumeration is out of reach.

use permupower::classify::{class_bound, classify_sampled};

pub fn run_example() -> permupower::Result<()> {
    for d in [4, 5] {
        let (h, stats) = classify_sampled(d, 50_000, 42, None)?;
        println!(
            "d={d}  mean {:.4} +/- {:.4}  classes observed >= {} (bound {})",
            stats.mean_epsilon,
            stats.std_error,
            h.classes().len(),
            class_bound(d)?
        );
    }
    let (h, _) = classify_sampled(4, 1_000, 1, None)?;
    print!("{}", h.to_csv()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
