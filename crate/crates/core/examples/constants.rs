//! The certified constants of the recursion, level by level.

use graphon::constructions::{certified_constants, Search};
use graphon::rational::decimal;

fn show(s: &Search) -> String {
    match s {
        Search::Found(n) => n.to_string(),
        Search::Capped(Some(est)) => format!("beyond scan limit (about {est:.4e})"),
        Search::Capped(None) => "beyond scan limit".into(),
    }
}

fn main() -> graphon::Result<()> {
    let c = certified_constants(3)?;
    for l in &c.levels {
        println!(
            "level {}: p0={} eps0={} delta0={} d0={} n0={} delta_k={} n_k={}",
            l.k,
            decimal(&l.p0),
            decimal(&l.eps0),
            decimal(&l.delta0),
            decimal(&l.d0),
            show(&l.n0),
            decimal(&l.delta_k),
            show(&l.n_k),
        );
    }
    Ok(())
}
