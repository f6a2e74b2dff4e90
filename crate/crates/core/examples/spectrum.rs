//! Spectral decomposition of a step kernel and the cycle trace identity.

use graphon::spectral::{cycle_trace_check, decompose, rooted_cycle_identity, DEFAULT_TOLERANCE};
use graphon::rational::{decimal, q};
use graphon::StepKernel;

fn main() -> graphon::Result<()> {
    let w = StepKernel::new(
        vec![q(1, 4), q(1, 4), q(1, 2)],
        vec![
            vec![q(0, 1), q(1, 1), q(1, 2)],
            vec![q(1, 1), q(1, 3), q(0, 1)],
            vec![q(1, 2), q(0, 1), q(3, 4)],
        ],
    )?;
    let d = decompose(&w, DEFAULT_TOLERANCE)?;
    println!("eigenvalues: {:?}", d.eigenvalues);
    d.check(&w).expect("decomposition is consistent");

    for n in 3..=8 {
        let (exact, sum) = cycle_trace_check(&w, n)?;
        println!("t(C{n}) = {:<22} sum of lambda^{n} = {sum:.15}", decimal(&exact));
    }
    for part in 0..3 {
        let (direct, spectral) = rooted_cycle_identity(&w, 4, part)?;
        println!("rooted C4 at part {part}: {} vs {spectral:.15}", decimal(&direct));
    }
    Ok(())
}
