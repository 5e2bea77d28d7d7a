// Orthogonal Latin squares: constructions for every supported order, the
// permutations they induce, and exact pair counts for small sides.

use permupower::entangle::{block_array, check_block_conditions};
use permupower::entangling_power;
use permupower::latin::{construct_mols, count_orthogonal_pairs, enumerate_latin_squares};

pub fn run_example() -> permupower::Result<()> {
    let pair = construct_mols(4)?;
    println!("{pair}");
    let p = pair.superimpose();
    println!("induced permutation:\n{p}");
    println!("block array {:?}", block_array(&p).expect("one entry per block"));

    for d in 2..=12 {
        match construct_mols(d) {
            Ok(pair) => {
                let p = pair.superimpose();
                let eps = entangling_power(&p)?.epsilon;
                println!("d={d:>2}  eps={eps}  block conditions {}", check_block_conditions(&p).all());
            }
            Err(e) => println!("d={d:>2}  {e}"),
        }
    }

    for d in 1..=4 {
        println!(
            "side {d}: {} Latin squares, {} ordered orthogonal pairs",
            enumerate_latin_squares(d)?.len(),
            count_orthogonal_pairs(d)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
