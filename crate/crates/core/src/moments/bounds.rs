//! Explicit bounds: the generating-function bound on `f_k`, the entropy
//! bounds on binomials and the class-size lower bound.

use num_bigint::BigUint;

use crate::cycle_type::CycleType;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, pow_u};

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `ln(x^{-k} prod_j (1 + x^j)^{c_j})` at `x = e^u`.
fn log_objective(t: &CycleType, k: usize, u: f64) -> f64 {
    let mut v = -(k as f64) * u;
    for (&j, &c) in t.counts() {
        v += c as f64 * softplus(j as f64 * u);
    }
    v
}

/// `min_{x > 0} ln(x^{-k} prod_j (1 + x^j)^{c_j})`. The objective is convex
/// in `ln x`; golden-section search over `ln x` in `[-60, 5]`.
pub fn fk_upper_bound_ln(t: &CycleType, k: usize) -> f64 {
    const TOL: f64 = 1e-10;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (-60.0f64, 5.0f64);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = log_objective(t, k, x1);
    let mut f2 = log_objective(t, k, x2);
    while b - a > TOL * (1.0 + a.abs().max(b.abs())) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = log_objective(t, k, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = log_objective(t, k, x2);
        }
    }
    [f1, f2, log_objective(t, k, a), log_objective(t, k, b)]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Upper bound on `f_k`: the minimum of `x^{-k} prod_j (1 + x^j)^{c_j}`.
pub fn fk_upper_bound(t: &CycleType, k: usize) -> f64 {
    fk_upper_bound_ln(t, k).exp()
}

/// `h(x) = x ln(1/x) + (1 - x) ln(1/(1 - x))`.
pub fn entropy_h(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Precondition(format!("h needs 0 < x < 1, got {x}")));
    }
    Ok(-x * x.ln() - (1.0 - x) * (-x).ln_1p())
}

/// `(lower, upper)` with `lower <= C(n, k) <= upper = e^{h(k/n) n}`, where
/// `lower = sqrt(n / (8 k (n - k))) e^{h(k/n) n}`.
pub fn binom_entropy_bounds(n: usize, k: usize) -> Result<(f64, f64)> {
    if k == 0 || 2 * k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= n/2, got n = {n}, k = {k}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let ln_upper = entropy_h(kf / nf)? * nf;
    let ln_lower = ln_upper + 0.5 * (nf / (8.0 * kf * (nf - kf))).ln();
    Ok((ln_lower.exp(), ln_upper.exp()))
}

/// `C(n, k) <= e^{h(k/n) n}` in exact integers:
/// `C(n, k) k^k (n - k)^{n - k} <= n^n`.
pub fn binom_entropy_upper_holds(n: usize, k: usize) -> bool {
    binomial(n, k) * pow_u(k as u64, k) * pow_u((n - k) as u64, n - k) <= pow_u(n as u64, n)
}

/// `|class| >= n! / n^c`, checked exactly.
pub fn class_size_lower_bound_holds(t: &CycleType) -> bool {
    let n = t.degree();
    t.class_size() * pow_u(n as u64, t.total_cycles()) >= factorial(n)
}

/// `n! / n^c` rounded up, the lower bound itself.
pub fn class_size_lower_bound(t: &CycleType) -> BigUint {
    let n = t.degree();
    let den = pow_u(n as u64, t.total_cycles());
    let nf = factorial(n);
    (&nf + &den - 1u32) / den
}
