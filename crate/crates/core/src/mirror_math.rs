//! Bessel functions of the first kind and the mirror interference factors.
//!
//! A sinusoidally moving mirror phase-modulates every reflected photon. The
//! Fourier coefficients of that modulation are products of integer-order
//! Bessel functions; everything downstream (reexcitation amplitudes, mode
//! coefficients, sideband strengths) is built from the functions here.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Orders kept beyond `ceil(z)` when a formally infinite Bessel sum is cut.
pub const TRUNCATION_MARGIN: usize = 15;

/// Sign of the half-angle phase in [`pi_factor_closed`].
///
/// Pinned by comparing both evaluation paths at `(z, theta) = (1.0, 0.5)`;
/// see [`determine_phase_sign`] and its test.
pub const PHASE_SIGN: i32 = 1;

/// Truncation order for Bessel-indexed sums: all sums run over `|n| <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BesselOrderRange {
    pub n_max: usize,
}

impl BesselOrderRange {
    /// Default window for argument `z`: `ceil(|z|) + 15`.
    pub fn for_argument(z: f64) -> Self {
        Self {
            n_max: z.abs().ceil() as usize + TRUNCATION_MARGIN,
        }
    }

    /// Uses `n_max` when given, otherwise the default window for `z`.
    pub fn resolve(z: f64, n_max: Option<usize>) -> Self {
        n_max.map_or_else(|| Self::for_argument(z), |n_max| Self { n_max })
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_max as i64)..=self.n_max as i64
    }
}

/// `J_n(x)` for integer `n` and real `x`, accurate to about 1e-14 absolute
/// for the moderate arguments used here.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("bessel_j", format!("argument {x} is not finite")));
    }
    let order = n.unsigned_abs() as usize;
    let table = bessel_j_orders(order, x)?;
    Ok(signed_order(&table, n))
}

/// `J_0(x), ..., J_{n_max}(x)`.
///
/// Taylor series for `|x| <= 2`; for larger arguments, Miller's downward
/// recurrence normalised with `J_0 + 2 sum J_{2k} = 1`. Negative arguments use
/// `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j_orders(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::domain("bessel_j", format!("argument {x} is not finite")));
    }
    let ax = x.abs();
    let mut values = if ax == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if ax <= 2.0 {
        (0..=n_max).map(|n| taylor(n, ax)).collect()
    } else {
        miller(n_max, ax)
    };
    if x < 0.0 {
        for (n, v) in values.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(values)
}

/// Looks up `J_n` for a signed order in a table of non-negative orders.
/// Orders beyond the table are treated as zero.
pub fn signed_order(table: &[f64], n: i64) -> f64 {
    let k = n.unsigned_abs() as usize;
    match table.get(k) {
        Some(&v) if n < 0 && k % 2 == 1 => -v,
        Some(&v) => v,
        None => 0.0,
    }
}

fn taylor(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= -q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || k > 200 {
            break;
        }
    }
    sum
}

fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let top = (n_max as f64).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()).ceil() as usize;
    start += start % 2;

    let mut out = vec![0.0; n_max + 1];
    let mut above = 0.0; // J_{k+1}
    let mut current = 1e-30; // J_k, unnormalised
    let mut norm = 0.0;
    for k in (0..=start).rev() {
        if k <= n_max {
            out[k] = current;
        }
        if k == 0 {
            norm += current;
        } else if k % 2 == 0 {
            norm += 2.0 * current;
        }
        if k == 0 {
            break;
        }
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        if current.abs() > 1e250 {
            // rescale everything accumulated so far
            let s = 1e-250;
            current *= s;
            above *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Truncated convolution `Pi_m(z, theta) = sum_n J_n(z) J_{m-n}(z) e^{i n theta}`
/// over `|n| <= n_max`.
pub fn pi_factor_sum(m: i64, z: f64, theta: f64, range: Option<BesselOrderRange>) -> Result<C64> {
    let range = range.unwrap_or_else(|| BesselOrderRange::for_argument(z));
    let table = bessel_j_orders(range.n_max + m.unsigned_abs() as usize, z)?;
    Ok(pi_from_table(&table, m, theta, range.n_max))
}

fn pi_from_table(table: &[f64], m: i64, theta: f64, n_max: usize) -> C64 {
    let n_max = n_max as i64;
    (-n_max..=n_max)
        .map(|n| {
            let w = signed_order(table, n) * signed_order(table, m - n);
            C64::from_polar(w, n as f64 * theta)
        })
        .sum()
}

/// Interference factors `Pi_m` for `-m_max <= m <= m_max`, computed with the
/// truncated convolution. Index `m + m_max` holds `Pi_m`.
pub fn pi_factors(z: f64, theta: f64, m_max: usize, range: Option<BesselOrderRange>) -> Result<Vec<C64>> {
    let range = range.unwrap_or_else(|| BesselOrderRange::for_argument(z));
    let table = bessel_j_orders(range.n_max + m_max, z)?;
    let m_max = m_max as i64;
    Ok((-m_max..=m_max)
        .map(|m| pi_from_table(&table, m, theta, range.n_max))
        .collect())
}

/// Closed form `Pi_m(z, theta) = J_m(2 z cos(theta/2)) e^{i sigma m theta / 2}`
/// with `sigma = PHASE_SIGN`.
///
/// Follows from `sin(nu t) + sin(nu t - theta) = 2 cos(theta/2) sin(nu t - theta/2)`.
pub fn pi_factor_closed(m: i64, z: f64, theta: f64) -> Result<C64> {
    pi_closed_with_sign(m, z, theta, PHASE_SIGN)
}

fn pi_closed_with_sign(m: i64, z: f64, theta: f64, sign: i32) -> Result<C64> {
    let arg = 2.0 * z * (0.5 * theta).cos();
    let j = bessel_j(m, arg)?;
    Ok(C64::from_polar(j, sign as f64 * m as f64 * theta / 2.0))
}

/// Chooses the half-angle phase sign by matching the closed form against the
/// direct sum at `(z, theta) = (1.0, 0.5)` for `|m| <= 3`.
pub fn determine_phase_sign() -> Result<i32> {
    let (z, theta) = (1.0, 0.5);
    let mut best = (f64::INFINITY, 0);
    for sign in [1, -1] {
        let mut err: f64 = 0.0;
        for m in -3..=3 {
            let direct = pi_factor_sum(m, z, theta, None)?;
            let closed = pi_closed_with_sign(m, z, theta, sign)?;
            err = err.max((direct - closed).norm());
        }
        if err < best.0 {
            best = (err, sign);
        }
    }
    Ok(best.1)
}

/// Smallest `m_max` for which `sum_{|m| > m_max} |Pi_m|^2 < tol`.
pub fn pi_truncation_order(z: f64, theta: f64, tol: f64) -> Result<usize> {
    let range = BesselOrderRange::for_argument(2.0 * z);
    let width = range.n_max;
    let pis = pi_factors(z, theta, width, Some(range))?;
    let centre = width as i64;
    let weight = |m: i64| pis[(centre + m) as usize].norm_sqr();
    let mut tail = 0.0;
    for m in (1..=width as i64).rev() {
        let next = tail + weight(m) + weight(-m);
        if next >= tol {
            return Ok(m as usize);
        }
        tail = next;
    }
    Ok(0)
}

/// Jacobi–Anger coefficient of the moving standing-wave mode,
/// `A_n = (e^{ikx} - (-1)^n e^{-ikx}) J_n(z) / 2i`, evaluated in its reduced
/// form: `sin(kx) J_n` for even `n`, `-i cos(kx) J_n` for odd `n`.
pub fn mode_coefficient_a(n: i64, k0x: f64, z: f64) -> Result<C64> {
    let j = bessel_j(n, z)?;
    Ok(mode_coefficient_from(n, k0x, j))
}

pub(crate) fn mode_coefficient_from(n: i64, k0x: f64, j_n: f64) -> C64 {
    if n % 2 == 0 {
        C64::new(k0x.sin() * j_n, 0.0)
    } else {
        C64::new(0.0, -k0x.cos() * j_n)
    }
}

/// `(e^x - 1) / x`, continuous through `x = 0`.
pub(crate) fn exprel(x: C64) -> C64 {
    if x.norm() < 1e-5 {
        C64::new(1.0, 0.0) + x / 2.0 + x * x / 6.0
    } else {
        (x.exp() - 1.0) / x
    }
}
