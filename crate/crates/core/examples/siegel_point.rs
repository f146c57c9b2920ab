//! The Siegel domain at ('0,-1): kernel, indicatrix and the Cayley pullback.
use std::f64::consts::PI;

use suita_lab::bergman::{kernel_ball, kernel_siegel, KernelOracle};
use suita_lab::metrics::{kobayashi_ball_oracle, pullback_metric};
use suita_lab::transforms::cayley;
use suita_lab::{suita_invariant, CPoint, DomainSpec, HoloMap, Method, Tau};

fn main() -> suita_lab::Result<()> {
    let p = CPoint::real2(0.0, -1.0);
    println!("K(p*) = {:e}  (1/(4 pi^2) = {:e})", kernel_siegel(2, &p)?, 1.0 / (4.0 * PI * PI));

    let via_ball = KernelOracle::pullback(HoloMap::Cayley, KernelOracle::closed_form(DomainSpec::ball(2)?));
    println!("pulled back from the ball: {:e}", via_ball.eval(&p)?);
    println!("ball kernel at the image {}: {:e}", cayley(&p)?, kernel_ball(2, &cayley(&p)?)?);

    let metric = pullback_metric(&kobayashi_ball_oracle(&cayley(&p)?)?, &HoloMap::Cayley, &p)?;
    println!("indicatrix volume = {:.6} (4 pi^2 = {:.6})", metric.exact_volume().unwrap(), 4.0 * PI * PI);

    let siegel = DomainSpec::siegel(2)?;
    let r = suita_invariant(&siegel, &p, Tau::Kobayashi, Method::MonteCarlo { samples: 1_000_000, seed: 7 })?;
    println!("mc F = {:.5} +- {:.5}", r.f, r.f_error);
    Ok(())
}
