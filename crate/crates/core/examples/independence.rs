//! Lower bounds on the δ-independence ratio and low-degree peeling.

use graphon::independence::{alpha_lower, low_degree_peel, verify_certificate, AlphaOptions};
use graphon::rational::{fmt_q, q};
use graphon::StepKernel;

fn main() -> graphon::Result<()> {
    let w = StepKernel::new(
        vec![q(1, 5), q(2, 5), q(2, 5)],
        vec![
            vec![q(0, 1), q(1, 1), q(9, 10)],
            vec![q(1, 1), q(1, 20), q(1, 2)],
            vec![q(9, 10), q(1, 2), q(3, 5)],
        ],
    )?;
    for delta in [q(0, 1), q(1, 20), q(1, 5)] {
        let a = alpha_lower(&w, &delta, AlphaOptions::with_resolution(6))?;
        let h: Vec<String> = a.h.weights().iter().map(fmt_q).collect();
        println!("delta={}: alpha >= {} with h={h:?}", fmt_q(&delta), fmt_q(&a.bound));
        assert!(verify_certificate(&w, &delta, &a.h)?);
    }

    let peel = low_degree_peel(&w, &q(1, 2))?;
    println!(
        "peel: parts {:?} in {} layers, |A|={}, internal {} <= {}",
        peel.parts,
        peel.layers.len(),
        fmt_q(&peel.measure),
        fmt_q(&peel.internal),
        fmt_q(&peel.bound),
    );
    Ok(())
}
