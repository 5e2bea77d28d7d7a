// Exhaustive entangling-class histograms for d = 2 and d = 3, with the
// class-count bound and the size of the non-entangling set.

use permupower::classify::{class_bound, classify_exhaustive, e0_stats};

pub fn run_example() -> permupower::Result<()> {
    for d in 2..=3 {
        let h = classify_exhaustive(d)?;
        print!("{h}");
        println!(
            "classes {} (bound {}), non-entangling {}",
            h.classes().len(),
            class_bound(d)?,
            e0_stats(d)?.count
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
