//! Special functions used throughout the crate.
//!
//! Polynomials are evaluated with upward three-term recurrences, which are
//! stable for the small degrees that bound-state work needs.

use crate::error::{Error, Result};

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(x)` together with `H_n'(x) = 2n H_{n-1}(x)`.
pub fn hermite_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, 2.0 * n as f64 * prev)
}

/// All real zeros of `H_n`, ascending.
///
/// The positive zeros of `H_n` interlace with those of `H_{n-1}`, so each
/// degree supplies certified brackets for the next. Zeros are mirrored about
/// the origin and the middle zero of an odd degree is exactly `0`.
pub fn hermite_zeros(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let mut positive: Vec<f64> = Vec::new();
    for degree in 2..=n {
        // every zero of H_degree lies below sqrt(2 degree + 1)
        let upper = (2.0 * degree as f64 + 1.0).sqrt() + 1.0;
        let mut edges = Vec::with_capacity(positive.len() + 2);
        edges.push(0.0);
        edges.extend(positive.iter().copied());
        edges.push(upper);
        let skip_first = degree % 2 == 1;
        let mut next = Vec::with_capacity(degree / 2);
        for (i, pair) in edges.windows(2).enumerate() {
            if skip_first && i == 0 {
                continue;
            }
            next.push(bisect_root(|x| hermite_eval(degree, x), pair[0], pair[1]));
        }
        positive = next;
    }
    let mut zeros: Vec<f64> = positive.iter().rev().map(|z| -z).collect();
    if n % 2 == 1 {
        zeros.push(0.0);
    }
    zeros.extend(positive);
    zeros
}

// Bisection to the resolution of f64 on a bracket with a sign change.
fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Generalized Laguerre polynomial `L_n^{(b)}(z)` of degree `n`, parameter `b`.
pub fn laguerre_eval(n: usize, b: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + b - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + b - z) * cur - (kf + b) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of `Γ(x)` for `x > 0` (Lanczos, g = 7, nine terms).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (std::f64::consts::PI * x).sin();
        return Ok((std::f64::consts::PI / s).ln() - log_gamma(1.0 - x)?);
    }
    let xm = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (xm + i as f64);
    }
    let t = xm + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (xm + 0.5) * t.ln() - t + series.ln())
}

/// Composite Simpson integral of uniformly spaced samples.
///
/// With an even number of samples the last three intervals use the 3/8 rule,
/// so cubics stay exact either way.
pub fn integrate_samples(grid: &[f64], values: &[f64]) -> Result<f64> {
    if grid.len() != values.len() {
        return Err(Error::InvalidInput(format!(
            "abscissae ({}) and samples ({}) differ in length",
            grid.len(),
            values.len()
        )));
    }
    if grid.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 samples, got {}",
            grid.len()
        )));
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::InvalidInput("abscissae must increase".into()));
    }
    for (i, x) in grid.iter().enumerate() {
        let expected = grid[0] + i as f64 * h;
        if (x - expected).abs() > 1e-6 * h {
            return Err(Error::InvalidInput(format!(
                "non-uniform spacing at index {i}"
            )));
        }
    }
    simpson_uniform(h, values)
}

/// [`integrate_samples`] for samples at known uniform spacing `h`.
pub fn simpson_uniform(h: f64, values: &[f64]) -> Result<f64> {
    let count = values.len();
    if count < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 samples, got {count}"
        )));
    }
    let simpson_end = if count % 2 == 1 { count - 1 } else { count - 4 };
    let mut acc = 0.0;
    if simpson_end > 0 {
        acc += values[0] + values[simpson_end];
        for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
            acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        acc *= h / 3.0;
    }
    if count % 2 == 0 {
        let t = &values[count - 4..];
        acc += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uniform(a: f64, b: f64, count: usize) -> Vec<f64> {
        let h = (b - a) / (count - 1) as f64;
        (0..count).map(|i| a + i as f64 * h).collect()
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_eval(0, 3.7), 1.0);
        assert_eq!(hermite_eval(3, 0.0), 0.0);
        assert_eq!(hermite_eval(2, 1.0), 2.0);
        // H_4 = 16x^4 - 48x^2 + 12
        let x = 0.3_f64;
        let expected = 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
        assert!((hermite_eval(4, x) - expected).abs() < 1e-12);
    }

    #[test]
    fn hermite_origin_values() {
        let mut ratio = 1.0_f64; // (2p)!/p!
        for p in 0..15usize {
            if p > 0 {
                ratio *= (2 * p) as f64 * (2 * p - 1) as f64 / p as f64;
            }
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let got = hermite_eval(2 * p, 0.0);
            assert!((got - sign * ratio).abs() <= 1e-14 * ratio, "p={p}");
            assert_eq!(hermite_eval(2 * p + 1, 0.0), 0.0);
        }
    }

    #[test]
    fn hermite_zero_examples() {
        assert_eq!(hermite_zeros(1), vec![0.0]);
        let z2 = hermite_zeros(2);
        assert_eq!(z2.len(), 2);
        assert!((z2[0] + 0.5_f64.sqrt()).abs() < 1e-15);
        assert!((z2[1] - 0.5_f64.sqrt()).abs() < 1e-15);
        let z3 = hermite_zeros(3);
        assert_eq!(z3[1], 0.0);
        assert!((z3[2] - 1.5_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hermite_zeros_are_sign_changes() {
        for n in 1..=40 {
            let zeros = hermite_zeros(n);
            assert_eq!(zeros.len(), n);
            for w in zeros.windows(2) {
                assert!(w[0] < w[1]);
            }
            for &z in &zeros {
                let step = 1e-9 * z.abs().max(1.0);
                let lo = hermite_eval(n, z - step);
                let hi = hermite_eval(n, z + step);
                assert!(lo * hi < 0.0, "no sign change at n={n} z={z}");
            }
        }
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre_eval(0, 2.5, 7.0), 1.0);
        assert_eq!(laguerre_eval(1, 2.0, 1.0), 2.0);
        assert_eq!(laguerre_eval(2, 0.0, 0.0), 1.0);
        // L_2^b(z) = ((b+1)(b+2) - 2(b+2) z + z^2) / 2
        let (b, z) = (1.5_f64, 0.7_f64);
        let expected = ((b + 1.0) * (b + 2.0) - 2.0 * (b + 2.0) * z + z * z) / 2.0;
        assert!((laguerre_eval(2, b, z) - expected).abs() < 1e-14);
    }

    #[test]
    fn laguerre_at_origin_matches_gamma_ratio() {
        for n in 0..25usize {
            for &b in &[0.0, 0.5, 1.0, 3.25, 7.0] {
                let expected = (log_gamma(n as f64 + b + 1.0).unwrap()
                    - log_gamma(b + 1.0).unwrap()
                    - log_gamma(n as f64 + 1.0).unwrap())
                .exp();
                let got = laguerre_eval(n, b, 0.0);
                assert!(
                    ((got - expected) / expected).abs() < 1e-10,
                    "n={n} b={b}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        let half = (std::f64::consts::PI.sqrt() / 2.0).ln();
        assert!((log_gamma(1.5).unwrap() - half).abs() < 1e-13);
        assert!((log_gamma(5.0).unwrap() - 24.0_f64.ln()).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_against_factorial_and_half_integer_products() {
        // integers: ln (n-1)! by summation
        let mut ln_fact = 0.0_f64;
        for n in 1..=200usize {
            if n > 1 {
                ln_fact += ((n - 1) as f64).ln();
            }
            let got = log_gamma(n as f64).unwrap();
            assert!((got - ln_fact).abs() < 1e-12, "n={n}: {got} vs {ln_fact}");
        }
        // half integers: Γ(p + 1/2) = √π (2p)! / (4^p p!)
        let mut ln_half = 0.5 * std::f64::consts::PI.ln();
        for p in 0..199usize {
            if p > 0 {
                ln_half += (p as f64 - 0.5).ln();
            }
            let x = p as f64 + 0.5;
            let got = log_gamma(x).unwrap();
            assert!((got - ln_half).abs() < 1e-12, "x={x}: {got} vs {ln_half}");
        }
    }

    #[test]
    fn simpson_examples() {
        let xs = uniform(0.0, 1.0, 101);
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert!((integrate_samples(&xs, &ys).unwrap() - 1.0 / 3.0).abs() < 1e-8);

        let zeros = vec![0.0; 11];
        assert_eq!(integrate_samples(&uniform(0.0, 1.0, 11), &zeros).unwrap(), 0.0);

        let xs = uniform(0.0, std::f64::consts::PI, 201);
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        assert!((integrate_samples(&xs, &ys).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn simpson_rejects_short_or_ragged_input() {
        assert!(matches!(
            integrate_samples(&[0.0, 1.0], &[1.0, 1.0]),
            Err(Error::InvalidInput(_))
        ));
        assert!(integrate_samples(&[0.0, 1.0, 3.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(integrate_samples(&[0.0, 1.0, 2.0], &[1.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn hermite_parity(n in 0usize..=30, x in -5.0f64..5.0) {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = hermite_eval(n, -x);
            let b = sign * hermite_eval(n, x);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn simpson_exact_for_cubics(
            c in proptest::array::uniform4(-3.0f64..3.0),
            a in -2.0f64..0.0,
            len in 0.5f64..3.0,
            count in 3usize..40,
        ) {
            let b = a + len;
            let xs = uniform(a, b, count);
            let ys: Vec<f64> = xs.iter().map(|x| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x).collect();
            let anti = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
            let exact = anti(b) - anti(a);
            let got = integrate_samples(&xs, &ys).unwrap();
            let scale = c.iter().map(|v| v.abs()).sum::<f64>().max(1e-3) * 40.0;
            prop_assert!((got - exact).abs() <= 1e-12 * scale, "{got} vs {exact}");
        }
    }
}
