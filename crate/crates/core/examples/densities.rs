//! Homomorphism densities of small graphs in step graphons.

use graphon::homdensity::{density, density_with, sidorenko_holds, DensityOptions};
use graphon::kernel::constant_graphon;
use graphon::rational::{fmt_q, q};
use graphon::{SimpleGraph, StepKernel};

fn main() -> graphon::Result<()> {
    let half = constant_graphon(q(1, 2))?;
    let bipartite = StepKernel::equal_parts(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]])?;
    let skew = StepKernel::new(
        vec![q(1, 3), q(2, 3)],
        vec![vec![q(1, 1), q(1, 4)], vec![q(1, 4), q(1, 2)]],
    )?;

    let graphs = [
        ("K2", SimpleGraph::complete(2)),
        ("P3", SimpleGraph::path(3)),
        ("K3", SimpleGraph::complete(3)),
        ("C4", SimpleGraph::cycle(4)),
        ("C5", SimpleGraph::cycle(5)),
        ("K2,3", SimpleGraph::complete_bipartite(2, 3)),
    ];
    println!("{:<6} {:>10} {:>10} {:>14}", "H", "1/2", "bipartite", "skew");
    for (name, h) in &graphs {
        println!(
            "{:<6} {:>10} {:>10} {:>14}",
            name,
            fmt_q(&density(h, &half)?),
            fmt_q(&density(h, &bipartite)?),
            fmt_q(&density(h, &skew)?),
        );
    }

    // Both evaluation routes agree exactly.
    let c5 = SimpleGraph::cycle(5);
    let a = density_with(&c5, &skew, DensityOptions::brute_force())?;
    let b = density_with(&c5, &skew, DensityOptions::elimination())?;
    assert_eq!(a, b);

    let c4 = SimpleGraph::cycle(4);
    println!("Sidorenko inequality for C4 in the skew graphon: {}", sidorenko_holds(&c4, &skew)?);
    Ok(())
}
