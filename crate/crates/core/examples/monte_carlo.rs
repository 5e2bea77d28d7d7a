// Monte Carlo average over Haar-random product inputs, seeded.

use permupower::builtins;
use permupower::entangling_power;
use permupower::oracle::{mc_power, Unitary};

pub fn run_example() -> permupower::Result<()> {
    for (name, p) in [("cnot", builtins::cnot()), ("r9", builtins::matrix_r()), ("d6hat", builtins::d6_hat())] {
        let exact = entangling_power(&p)?.epsilon;
        let est = mc_power(&Unitary::from_biperm(&p)?, 20_000, 42)?;
        println!(
            "{name:>6}  MC {:.5} +/- {:.5}  exact {exact} ({:.5})",
            est.mean,
            est.std_error,
            exact.to_f64()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
