//! The permutation family of a graphon with constant diagonal.

use graphon::constructions::permutation_family;
use graphon::homdensity::{density, mono_sum};
use graphon::kernel::{diagonal_average, split_parts};
use graphon::rational::{fmt_q, q};
use graphon::{SimpleGraph, StepKernel};

fn main() -> graphon::Result<()> {
    let w = StepKernel::equal_parts(vec![
        vec![q(1, 5), q(4, 5), q(1, 2)],
        vec![q(4, 5), q(1, 3), q(1, 10)],
        vec![q(1, 2), q(1, 10), q(1, 4)],
    ])?;
    let (averaged, avg) = diagonal_average(&w)?;
    println!("diagonal average {}", fmt_q(&avg));
    let wpp = split_parts(&averaged, 2)?;
    let family = permutation_family(&wpp, 1)?;
    println!("{} colors on {} parts", family.k(), family.sizes().len());

    let c5 = SimpleGraph::cycle(5);
    let first = density(&SimpleGraph::complete(2), &family.colors()[0])?;
    println!("edge density of each color: {}", fmt_q(&first));
    println!("t(C5, Wpp) = {}", fmt_q(&density(&c5, &wpp)?));
    println!("mono sum of C5 over the family = {}", fmt_q(&mono_sum(&family, &c5)?));
    Ok(())
}
