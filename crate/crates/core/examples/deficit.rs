//! Perturbation expansions and local deficit polynomials.
//!
//! `t(H, p + εU)` is a polynomial in `ε`; for the odd-girth kernel the
//! first non-constant term of the summed deficit sits at the girth.

use graphon::constructions::{local_deficit, odd_girth_kernel, predicted_leading_coefficient};
use graphon::homdensity::{epsilon_expansion, random_coloring_value};
use graphon::rational::{decimal, fmt_q, q};
use graphon::SimpleGraph;

fn main() -> graphon::Result<()> {
    let c5 = SimpleGraph::cycle(5);
    let u = odd_girth_kernel(5)?;
    let expansion = epsilon_expansion(&c5, &q(1, 3), &u)?;
    let coeffs: Vec<String> = expansion.coefficients().iter().map(fmt_q).collect();
    println!("t(C5, 1/3 + eps U5) = {coeffs:?}");

    let bowtie = SimpleGraph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])?;
    for (name, h) in [("K3", SimpleGraph::complete(3)), ("C5", c5.clone()), ("bowtie", bowtie)] {
        for k in [3, 4, 5] {
            let d = local_deficit(&h, k)?;
            let (power, lead) = d.leading_perturbation().expect("non-bipartite graphs perturb");
            let predicted = predicted_leading_coefficient(&h, k)?;
            let eps = q(1, 20 * k as i64);
            println!(
                "{name:<7} k={k} leading eps^{power}: {} (predicted {}), value minus k^(1-|E|) at eps={}: {}",
                fmt_q(lead),
                fmt_q(&predicted),
                fmt_q(&eps),
                decimal(&(d.evaluate(&eps) - random_coloring_value(k, &h))),
            );
        }
    }
    Ok(())
}
