//! Reference computations that share no code with the library.
#![allow(dead_code, clippy::too_many_arguments, clippy::needless_range_loop)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Egg volume by slicing: each `z₂`-slice is a disc of area `π(1 − |z₂|^{2μ})`.
pub fn egg_volume_quadrature(mu: f64) -> f64 {
    simpson(&|r: f64| PI * (1.0 - r.powf(2.0 * mu)) * 2.0 * PI * r, 0.0, 1.0, 1e-14)
}

/// `K(0, p) = Σ_b p^{2b} / ‖z₂^b‖²`, the norms by quadrature over slices.
pub fn egg_axis_kernel_quadrature(mu: f64, p: f64) -> f64 {
    let mut sum = 0.0;
    for b in 0..4000 {
        let term_weight = p.powi(2 * b);
        if term_weight < 1e-20 {
            break;
        }
        let norm = simpson(
            &|r: f64| r.powi(2 * b) * PI * (1.0 - r.powf(2.0 * mu)) * 2.0 * PI * r,
            0.0,
            1.0,
            1e-14 * PI * PI / (b as f64 + 1.0).powi(2),
        );
        sum += term_weight / norm;
    }
    sum
}

/// `n!/πⁿ (1 − |z|²)^{−(n+1)}` written out for the test side.
pub fn ball_kernel(z: &[Complex64]) -> f64 {
    let n = z.len();
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let s: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    fact / PI.powi(n as i32) / (1.0 - s).powi(n as i32 + 1)
}

fn cayley(z: &[Complex64]) -> Vec<Complex64> {
    let n = z.len();
    let zn = z[n - 1];
    let d = Complex64::new(1.0, 0.0) - zn;
    let mut w: Vec<Complex64> = z[..n - 1].iter().map(|c| c * 2f64.sqrt() / d).collect();
    w.push((Complex64::new(1.0, 0.0) + zn) / d);
    w
}

/// Siegel kernel as the Cayley pullback of the ball kernel, with the complex
/// Jacobian determinant taken by central differences.
pub fn siegel_kernel_fd(z: &[Complex64]) -> f64 {
    let n = z.len();
    let h = 1e-6;
    let mut jac = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 0..n {
        let mut zp = z.to_vec();
        let mut zm = z.to_vec();
        zp[k] += h;
        zm[k] -= h;
        let (fp, fm) = (cayley(&zp), cayley(&zm));
        for i in 0..n {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let det = complex_det(jac);
    ball_kernel(&cayley(z)) * det.norm_sqr()
}

fn complex_det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].norm().partial_cmp(&a[j][c].norm()).unwrap()).unwrap();
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let d = a[c][c];
        det *= d;
        for r in c + 1..n {
            let f = a[r][c] / d;
            for k in c..n {
                let t = a[c][k];
                a[r][k] -= f * t;
            }
        }
    }
    det
}

/// Second-order coefficients `(h, q)` of `t ↦ f(t e^{iθ})` at `t = 0`, where
/// `f(w) = h|w|² + 2 Re(q w²) + O(|w|³)`: the mean over θ and the `e^{2iθ}`
/// Fourier coefficient, Richardson-extrapolated from radii `t` and `2t`.
pub fn second_order_coefficients<F: Fn(Complex64) -> f64>(f: F, t: f64) -> (f64, Complex64) {
    let m = 16;
    let extract = |r: f64| {
        let mut mean = 0.0;
        let mut mode2 = Complex64::new(0.0, 0.0);
        for k in 0..m {
            let th = 2.0 * PI * k as f64 / m as f64;
            let v = f(Complex64::from_polar(r, th));
            mean += v;
            mode2 += v * Complex64::from_polar(1.0, -2.0 * th);
        }
        (mean / (m as f64 * r * r), mode2 / (m as f64 * r * r))
    };
    let (h1, q1) = extract(t);
    let (h2, q2) = extract(2.0 * t);
    ((4.0 * h1 - h2) / 3.0, (q1 * 4.0 - q2) / 3.0)
}

/// Hit-or-miss volume of `{v : inside(v)}` inside the box `[−R, R]^{2n}`,
/// using a plain xorshift generator.
pub fn box_mc_volume<F: Fn(&[Complex64]) -> bool>(n: usize, radius: f64, samples: u64, seed: u64, inside: F) -> (f64, f64) {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut hits = 0u64;
    for _ in 0..samples {
        for c in v.iter_mut() {
            *c = Complex64::new((2.0 * next() - 1.0) * radius, (2.0 * next() - 1.0) * radius);
        }
        if inside(&v) {
            hits += 1;
        }
    }
    let box_vol = (2.0 * radius).powi(2 * n as i32);
    let f = hits as f64 / samples as f64;
    (f * box_vol, box_vol * (f * (1.0 - f) / samples as f64).sqrt())
}

/// Prints and returns the verdict of one acceptance line.
pub fn report(name: &str, ok: bool, detail: impl std::fmt::Display) -> bool {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}
