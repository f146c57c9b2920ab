//! Monte Carlo indicatrix volumes against closed forms.
use suita_lab::indicatrix::mc_volume;
use suita_lab::metrics::metric_oracle;
use suita_lab::{CPoint, DomainSpec, Tau};

fn main() -> suita_lab::Result<()> {
    let cases = [
        (DomainSpec::ball(2)?, CPoint::real2(0.0, 0.5)),
        (DomainSpec::siegel(2)?, CPoint::real2(0.0, -1.0)),
        (DomainSpec::egg(0.25)?, CPoint::zeros(2)),
        (DomainSpec::egg(2.0)?, CPoint::zeros(2)),
    ];
    for (spec, z) in cases {
        let oracle = metric_oracle(&spec, &z, Tau::Kobayashi)?;
        let est = mc_volume(&oracle, 1_000_000, 42)?;
        let exact = oracle.exact_volume().or_else(|| spec.volume().ok());
        println!("{spec} at {z}: {:.5} +- {:.5} (exact {:?}, R = {:.3})", est.value, est.std_error, exact, est.bounding_radius);
    }
    Ok(())
}
