//! Binary and chromatic colorings, commonness margins and bounds on κ(H).

use graphon::constructions::{binary_coloring, chromatic_coloring, kappa_upper};
use graphon::homdensity::{commonness_margin, density, mono_sum};
use graphon::rational::fmt_q;
use graphon::SimpleGraph;

fn main() -> graphon::Result<()> {
    let k3 = SimpleGraph::complete(3);
    let c5 = SimpleGraph::cycle(5);
    for k in 2..=4 {
        let t = binary_coloring(k)?;
        let per_color: Vec<String> = t.colors().iter().map(|w| density(&c5, w).map(|d| fmt_q(&d))).collect::<Result<_, _>>()?;
        println!("binary k={k}: C5 per color {per_color:?}, margin {}", fmt_q(&commonness_margin(&t, &c5)?));
    }

    let t = chromatic_coloring(4, 3)?;
    println!("chromatic q=4 from 3 colors: K3 mono sum {}", fmt_q(&mono_sum(&t, &k3)?));

    let bowtie = SimpleGraph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])?;
    for (name, h) in [("K3", k3), ("C5", c5), ("bowtie", bowtie), ("C4", SimpleGraph::cycle(4))] {
        let b = kappa_upper(&h);
        println!("kappa({name}): search {:?}, formula {:?}, note {:?}", b.k_search, b.k_formula, b.diagnostic);
    }
    Ok(())
}
