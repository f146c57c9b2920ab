//! Monomial-series kernel of an egg against the closed form on the axis.
use suita_lab::bergman::{kernel_egg_axis, reinhardt_partial_sums};
use suita_lab::{CPoint, DomainSpec};

fn main() -> suita_lab::Result<()> {
    let mu = 0.25;
    let egg = DomainSpec::egg(mu)?;
    for p in [0.1, 0.3, 0.5, 0.7] {
        let sums = reinhardt_partial_sums(&egg, &CPoint::real2(0.0, p), 60)?;
        let closed = kernel_egg_axis(mu, p)?;
        let at = |d: usize| (sums[d] - closed).abs() / closed;
        println!("p = {p}: rel err at degree 10 {:.2e}, 30 {:.2e}, 60 {:.2e}", at(10), at(30), at(60));
    }
    // Off the axis only the series is available.
    let z = CPoint::real2(0.4, 0.3);
    println!("K{z} ~ {:.6}", reinhardt_partial_sums(&egg, &z, 60)?.last().unwrap());
    Ok(())
}
