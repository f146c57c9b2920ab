//! F on the unit ball, exact and by Monte Carlo.
use suita_lab::{suita_invariant, CPoint, DomainSpec, Method, Tau};

fn main() -> suita_lab::Result<()> {
    let ball = DomainSpec::ball(2)?;
    for z in [CPoint::zeros(2), CPoint::real2(0.0, 0.5), CPoint::real2(0.6, -0.3)] {
        let exact = suita_invariant(&ball, &z, Tau::Kobayashi, Method::Exact)?;
        let mc = suita_invariant(&ball, &z, Tau::Kobayashi, Method::MonteCarlo { samples: 1_000_000, seed: 1 })?;
        println!("z = {z}: exact F = {:.15}, mc F = {:.5} +- {:.5}", exact.f, mc.f, mc.f_error);
    }
    Ok(())
}
