//! Reflected graphs `H^n` and the family `K_{2a,2b,C5}`.

use graphon::graph::graph_stats;
use graphon::homdensity::{build_k2a2b_c5, density, reflect};
use graphon::rational::{fmt_q, pow, q};
use graphon::{SimpleGraph, StepKernel};

fn main() -> graphon::Result<()> {
    let w = StepKernel::equal_parts(vec![vec![q(1, 3), q(3, 4)], vec![q(3, 4), q(1, 5)]])?;
    let c4 = SimpleGraph::cycle(4);
    for n in 1..=3 {
        let r = reflect(&c4, &[0, 2], n)?;
        println!("C4 reflected {n} times: {} vertices, {} edges, t = {}", r.vertex_count(), r.edge_count(), fmt_q(&density(&r, &w)?));
    }
    let p3 = SimpleGraph::path(3);
    let doubled = reflect(&p3, &[0], 2)?;
    println!("t(P3 doubled at an end) = {}, t(P3)^2 = {}", fmt_q(&density(&doubled, &w)?), fmt_q(&pow(&density(&p3, &w)?, 2)));

    for (a, b) in [(1, 1), (1, 2), (2, 2)] {
        let h = build_k2a2b_c5(a, b)?;
        let s = graph_stats(&h)?;
        println!("K_(2*{a},2*{b},C5): {} vertices, {} edges, girth {:?}, chromatic {}", s.vertices, s.edges, s.girth, s.chromatic_number);
    }
    Ok(())
}
