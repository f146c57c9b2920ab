//! Scaling the ball at (0,1): F stays 1 while kernel and indicatrix approach
//! their Siegel values.
use suita_lab::scaling::{build_sequence, convergence_report, hausdorff_flip_fraction, local_grid};
use suita_lab::{CPoint, DomainSpec, Method, Tau};

fn main() -> suita_lab::Result<()> {
    let seq = build_sequence(&DomainSpec::ball(2)?, &CPoint::real2(0.0, 1.0), 15, 0.5)?;
    let report = convergence_report(&seq, Tau::Kobayashi, Method::MonteCarlo { samples: 200_000, seed: 11 })?;
    print!("{}", report.to_csv());
    println!("{:?}", report.check());

    let egg = build_sequence(&DomainSpec::egg(0.25)?, &CPoint::real2(0.0, 1.0), 14, 0.5)?;
    let grid = local_grid(1.0, 8);
    for j in [2, 6, 10, 14] {
        println!("egg step {j}: delta = {:.3e}, grid flips vs Siegel = {:.4}", egg.step(j)?.delta, hausdorff_flip_fraction(&egg, j, &grid)?);
    }
    Ok(())
}
