// Exact entangling power of the named permutations.

use permupower::builtins::builtin;
use permupower::entangling_power;

pub fn run_example() -> permupower::Result<()> {
    for name in ["identity", "swap", "cnot", "m", "r9", "d6hat", "min:4", "mols:5"] {
        let p = builtin(name, Some(3))?;
        let r = entangling_power(&p)?;
        println!(
            "{name:>8}  d={}  Q_P={:<4} Q_PS={:<4} eps={} ({:.6})",
            r.d,
            r.q_p,
            r.q_ps,
            r.epsilon,
            r.epsilon.to_f64()
        );
    }
    let cnot = entangling_power(&builtin("cnot", None)?)?;
    println!("{}", serde_json::to_string(&cnot).map_err(permupower::Error::from)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
