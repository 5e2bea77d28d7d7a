// The combinatorial formula against the dense linear-entropy oracle, and
// the entanglement of the four-party state of a maximal permutation.

use permupower::builtins;
use permupower::entangling_power;
use permupower::latin::construct_mols;
use permupower::oracle::{oracle_power, two_qubit_power, split_entropies, Unitary};
use permupower::perm::random_perm;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> permupower::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 2..=5 {
        let p = random_perm(d, &mut rng)?;
        let exact = entangling_power(&p)?.epsilon;
        let dense = oracle_power(&Unitary::from_biperm(&p)?)?;
        println!("d={d}  exact {exact} = {:.12}  oracle {dense:.12}", exact.to_f64());
    }

    // CNOT sits at canonical parameters (pi/4, 0, 0)
    let cnot = oracle_power(&Unitary::from_biperm(&builtins::cnot())?)?;
    println!("CNOT oracle {cnot:.12}  closed form {:.12}", two_qubit_power(std::f64::consts::FRAC_PI_4, 0.0, 0.0)?);

    let u = Unitary::from_biperm(&construct_mols(3)?.superimpose())?;
    for (cut, s) in split_entropies(&u)? {
        println!("  {cut:<6} S_L = {s:.12}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
