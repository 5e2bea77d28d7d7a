// Exhaustive classification with per-chunk checkpoint files; a second run
// reads the finished chunks instead of recomputing them.

use permupower::classify::{classify_exhaustive_with, ClassifyOptions};

pub fn run_example() -> permupower::Result<()> {
    let dir = std::env::temp_dir().join(format!("permupower-checkpoints-{}", std::process::id()));
    let opts = ClassifyOptions {
        checkpoint_dir: Some(dir.clone()),
        ..Default::default()
    };
    let first = classify_exhaustive_with(3, &opts)?;
    let chunks = std::fs::read_dir(&dir)?.count();
    let resumed = classify_exhaustive_with(3, &opts)?;
    assert_eq!(first, resumed);
    println!("{chunks} chunk files in {}", dir.display());
    println!("{}", resumed.to_json()?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
