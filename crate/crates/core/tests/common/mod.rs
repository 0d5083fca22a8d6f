//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Reference eigenvalues of the `k0 a = 30`, `U0 = 1.5` slab: `(m, eps_R, Gamma/2)`.
pub const TABLE: [(u32, f64, f64); 17] = [
    (24, -0.973621, 0.0051042),
    (25, -0.928842, 0.0083833),
    (26, -0.882236, 0.0107847),
    (27, -0.833802, 0.0128120),
    (28, -0.783540, 0.0146215),
    (29, -0.731450, 0.0162860),
    (30, -0.677533, 0.0178462),
    (31, -0.621788, 0.0193273),
    (32, -0.564215, 0.0207462),
    (33, -0.504815, 0.0221150),
    (34, -0.443587, 0.0234424),
    (35, -0.380531, 0.0247350),
    (36, -0.315647, 0.0259981),
    (37, -0.248936, 0.0272358),
    (38, -0.180397, 0.0284514),
    (39, -0.110031, 0.0296476),
    (40, -0.037836, 0.0308267),
];

/// Winding number of `f` around the counter-clockwise polygon `corners`.
///
/// Each edge is sampled uniformly and bisected wherever the argument jumps by
/// more than `max_step` radians between neighbours.
pub fn winding_number<F>(f: F, corners: &[Complex64], max_step: f64) -> i64
where
    F: Fn(Complex64) -> Complex64,
{
    fn arg_change<F: Fn(Complex64) -> Complex64>(
        f: &F,
        a: Complex64,
        b: Complex64,
        fa: Complex64,
        fb: Complex64,
        max_step: f64,
        depth: u32,
    ) -> f64 {
        let d = (fb / fa).arg();
        if d.abs() <= max_step || depth == 0 {
            return d;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        arg_change(f, a, mid, fa, fm, max_step, depth - 1)
            + arg_change(f, mid, b, fm, fb, max_step, depth - 1)
    }

    let mut total = 0.0;
    for (i, &a) in corners.iter().enumerate() {
        let b = corners[(i + 1) % corners.len()];
        let n = 400;
        let pts: Vec<Complex64> = (0..=n)
            .map(|j| a + (b - a) * (j as f64 / n as f64))
            .collect();
        let vals: Vec<Complex64> = pts.iter().map(|&z| f(z)).collect();
        for j in 0..n {
            total += arg_change(&f, pts[j], pts[j + 1], vals[j], vals[j + 1], max_step, 30);
        }
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i64
}

/// Real-arithmetic quantization function on the real radiation band, written
/// out directly: `cos 2QA - i g sin 2QA` with `g = (K^2 + Q^2) / (2KQ)`.
pub fn real_axis_denominator(eps: f64, a: f64, u0: f64) -> Complex64 {
    let k = (2.0 * (eps + 1.0)).sqrt();
    let q = (2.0 * u0 * (eps + u0)).sqrt();
    let g = (k * k + q * q) / (2.0 * k * q);
    Complex64::new((2.0 * q * a).cos(), -g * (2.0 * q * a).sin())
}

/// Lowest even guided mode of the slab: `Q tan(QA) = kappa` by bisection,
/// with `Q^2 = 2 U0 (eps + U0)` and `kappa^2 = -2 (eps + 1)`.
///
/// Returns `(eps, Q, kappa)`.
pub fn even_guided_mode(a: f64, u0: f64) -> (f64, f64, f64) {
    let q_of = |e: f64| (2.0 * u0 * (e + u0)).sqrt();
    let kappa_of = |e: f64| (-2.0 * (e + 1.0)).max(0.0).sqrt();
    let g = |e: f64| {
        let q = q_of(e);
        q * (q * a).sin() - kappa_of(e) * (q * a).cos()
    };
    // first branch of tan: Q A in (0, pi/2)
    let top = ((std::f64::consts::FRAC_PI_2 / a).powi(2) / (2.0 * u0) - u0).min(-1.0);
    let (mut lo, mut hi) = (-u0 + 1e-15, top - 1e-12);
    assert!(
        g(lo) < 0.0 && g(hi) > 0.0,
        "no sign change for the even guided mode"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e = 0.5 * (lo + hi);
    (e, q_of(e), kappa_of(e))
}

/// Even guided profile: `cos(Qx)` inside, matched `exp(-kappa(|x| - A))` outside.
pub fn even_guided_profile(a: f64, q: f64, kappa: f64, x: f64) -> f64 {
    if x.abs() <= a {
        (q * x).cos()
    } else {
        (q * a).cos() * (-kappa * (x.abs() - a)).exp()
    }
}

/// Local maxima of `values`, strict on both sides.
pub fn peaks(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}
