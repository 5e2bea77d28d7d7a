// Permutations with zero entangling power are local permutations, possibly
// followed by the swap. Every such permutation at d = 2 with its witness.

use permupower::classify::e0_stats;
use permupower::entangling_power;
use permupower::perm::{detect_non_entangling, enumerate_perms};

pub fn run_example() -> permupower::Result<()> {
    for p in enumerate_perms(2, false)? {
        if let Some(w) = detect_non_entangling(&p) {
            assert_eq!(w.reconstruct(), p);
            assert!(entangling_power(&p)?.epsilon.is_zero());
            println!(
                "{:?}  {:?}  A={:?} B={:?}",
                p.one_line(),
                w.kind,
                w.p_a.one_line(),
                w.p_b.one_line()
            );
        }
    }
    for d in 2..=6 {
        let s = e0_stats(d)?;
        println!("d={d}  |E0| = {}  fraction {}", s.count, s.fraction);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> permupower::Result<()> {
    run_example()
}
