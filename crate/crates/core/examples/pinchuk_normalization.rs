//! Second-order normalization at a strongly pseudoconvex boundary point.
use num_complex::Complex64;
use suita_lab::transforms::pinchuk_normalize;
use suita_lab::{CPoint, DomainSpec};

fn main() -> suita_lab::Result<()> {
    let zeta = CPoint::real2(0.0, 1.0);
    for spec in [DomainSpec::ball(2)?, DomainSpec::egg(0.25)?, DomainSpec::egg(3.0)?] {
        let data = pinchuk_normalize(&spec, &zeta)?;
        let (h, q) = (&data.hermitian_form, &data.quadratic_form);
        println!("{spec}: h11 = {}, h12 = {}, h22 = {}, q11 = {}, q12 = {}", h[(0, 0)], h[(0, 1)], h[(1, 1)], q[(0, 0)], q[(0, 1)]);
        for t in [1e-1, 1e-2, 1e-3] {
            let w = CPoint::c2(Complex64::new(t, 0.0), Complex64::new(0.0, 0.0));
            println!("  rho~({t}, 0) / t^2 = {:.10}", data.normalized_defining_value(&spec, &w)? / (t * t));
        }
    }
    match pinchuk_normalize(&DomainSpec::egg(0.25)?, &CPoint::real2(1.0, 0.0)) {
        Err(e) => println!("at (1,0): {e}"),
        Ok(_) => println!("at (1,0): unexpectedly normalized"),
    }
    Ok(())
}
