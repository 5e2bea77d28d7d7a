// Side 6 has no orthogonal Latin squares. The best known permutation and
// the nearly orthogonal squares it is compared against.

use permupower::builtins::d6_hat;
use permupower::entangle::check_block_conditions;
use permupower::entangling_power;
use permupower::latin::{construct_mols, near_orthogonal_d6_squares, superimpose};

pub fn run_example() -> permupower::Result<()> {
    let p = d6_hat();
    let r = entangling_power(&p)?;
    println!("{p}");
    println!("Q_P={} Q_PS={} eps={} ({:.6})", r.q_p, r.q_ps, r.epsilon, r.epsilon.to_f64());
    println!("block conditions {:?}", check_block_conditions(&p));
    println!("d/(d+1) = {:.6}", 6.0 / 7.0);

    let (a, b) = near_orthogonal_d6_squares();
    match superimpose(&a, &b) {
        Ok(_) => println!("unexpected: squares are orthogonal"),
        Err(e) => println!("nearly orthogonal squares: {e}"),
    }
    if let Err(e) = construct_mols(6) {
        println!("{e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
