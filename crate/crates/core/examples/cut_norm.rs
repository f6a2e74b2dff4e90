//! Cut norms, cut distance bounds and the local window test.

use graphon::constructions::odd_girth_family;
use graphon::cutnorm::{cut_distance_upper, cut_norm, density_lipschitz_check, local_window_check};
use graphon::kernel::constant_graphon;
use graphon::rational::{fmt_q, q};
use graphon::{SimpleGraph, StepKernel};

fn main() -> graphon::Result<()> {
    let checker = StepKernel::equal_parts(vec![
        vec![q(1, 2), q(-1, 2), q(1, 4)],
        vec![q(-1, 2), q(1, 2), q(-1, 4)],
        vec![q(1, 4), q(-1, 4), q(0, 1)],
    ])?;
    let c = cut_norm(&checker)?;
    println!("cut norm {} attained on S={:?} T={:?}", fmt_q(&c.value), c.s, c.t);

    let a = constant_graphon(q(1, 2))?;
    let b = StepKernel::equal_parts(vec![vec![q(3, 5), q(2, 5)], vec![q(2, 5), q(3, 5)]])?;
    println!("cut distance upper bound: {}", fmt_q(&cut_distance_upper(&a, &b)?));
    let (lhs, rhs) = density_lipschitz_check(&SimpleGraph::cycle(4), &a, &b)?;
    println!("|t(C4,W) - t(C4,W')| = {} <= {}", fmt_q(&lhs), fmt_q(&rhs));

    let family = odd_girth_family(3, 5, &q(1, 60))?;
    for (i, w) in local_window_check(&family, &q(1, 10))?.iter().enumerate() {
        println!("color {i}: cut {} ({}), sup {} ({})", w.cut_norm, w.cut_ok, w.sup_deviation, w.sup_ok);
    }
    Ok(())
}
