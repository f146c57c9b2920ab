//! Kernel stability at the origin for inflated and translated balls.
use suita_lab::bergman::{inflate_ball_family, ramadanov_run, translate_ball_family, KernelOracle};
use suita_lab::{CPoint, DomainSpec};

fn main() -> suita_lab::Result<()> {
    let w = CPoint::zeros(2);
    let limit = KernelOracle::closed_form(DomainSpec::ball(2)?);

    let inflate = ramadanov_run(&inflate_ball_family(50)?, &limit, &w, None, 1e-3)?;
    let translate = ramadanov_run(&translate_ball_family(&CPoint::real2(0.0, 0.5), 50)?, &limit, &w, None, 1e-3)?;
    println!("j   inflate_err   translate_err");
    for (a, b) in inflate.rows.iter().zip(&translate.rows).filter(|(a, _)| a.j % 5 == 0 || a.j == 1) {
        println!("{:<3} {:.3e}     {:.3e}", a.j, a.abs_err, b.abs_err);
    }
    // (1 + 1/j)^{-4} approaches 1 like 4/j, so the inflated family is slow.
    println!("converged: inflate {}, translate {}", inflate.converged(), translate.converged());
    Ok(())
}
