//! W-random graphs, template colorings and convergence of sampled counts.

use graphon::constructions::odd_girth_template;
use graphon::homcount::Budget;
use graphon::rational::q;
use graphon::sampler::{convergence_report, mono_count, sample_coloring, sample_w_random, CountMode, Source};
use graphon::{SimpleGraph, StepKernel};

fn main() -> graphon::Result<()> {
    let w = StepKernel::equal_parts(vec![vec![q(9, 10), q(1, 10)], vec![q(1, 10), q(1, 2)]])?;
    let g = sample_w_random(&w, 200, 7)?;
    println!("G(200, W): {} edges", g.graph.edge_count());

    let t = odd_girth_template(3, 5, &q(1, 60))?;
    let colored = sample_coloring(&t, 40, 7)?;
    let c5 = SimpleGraph::cycle(5);
    println!("edges per color {:?}", colored.color_counts());
    println!("labeled monochromatic C5 per color {:?}", mono_count(&colored, &c5, CountMode::Injective)?);

    let report = convergence_report(&Source::Graphon(w), &SimpleGraph::complete(3), &[25, 50, 100], 100, 7, CountMode::Injective, Budget::default())?;
    println!("exact t(K3, W) = {}", report.exact_decimal);
    for r in &report.rows {
        println!("n={:<4} mean {:.6} se {:.6} deviation {:.6}", r.n, r.mean, r.standard_error, r.deviation);
    }
    Ok(())
}
