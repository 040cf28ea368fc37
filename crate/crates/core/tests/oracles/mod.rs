//! Closed-form reference values, written independently of the library.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of the Choi matrix of the pseudoinverse antidegrading
/// candidate for the qubit transpose-depolarizing channel, with
/// multiplicities 4, 2, 2. Diverges at `t = -1`.
pub fn antidegrading_candidate_eigs(t: f64) -> [f64; 3] {
    let l1 = (-3.0 * t.powi(3) + t * t - t - 1.0) / (2.0 * (t - 1.0) * (3.0 * t * t + 1.0));
    let disc = -18.0 * t.powi(6) - 6.0 * t.powi(5) + t.powi(4) - 8.0 * t.powi(3) - 2.0 * t + 1.0;
    let num = 3.0 * t.powi(4) + 2.0 * t.powi(3) + 2.0 * t * t + 2.0 * t - 1.0;
    let den = 2.0 * (t - 1.0) * (t + 1.0) * (3.0 * t * t + 1.0);
    let root = 2.0 * t * disc.max(0.0).sqrt();
    [l1, (num + root) / den, (num - root) / den]
}

/// Sorted multiset `{l1 x4, l2 x2, l3 x2}`.
pub fn antidegrading_candidate_spectrum(t: f64) -> Vec<f64> {
    let [a, b, c] = antidegrading_candidate_eigs(t);
    let mut v = vec![a, a, a, a, b, b, c, c];
    v.sort_by(f64::total_cmp);
    v
}

/// The 16x4 antidegrading candidate superoperator for the explicit
/// 4-dimensional environment.
pub fn antidegrading_candidate(t: f64) -> DMatrix<f64> {
    let s = (-3.0 * t * t - 2.0 * t + 1.0).sqrt();
    let r2 = 2.0_f64.sqrt();
    let mut a = DMatrix::zeros(16, 4);
    let p = (3.0 * t.powi(3) + t * t + t - 1.0) / (2.0 * (t - 1.0) * (3.0 * t * t + 1.0));
    let q = (3.0 * t.powi(3) - t * t + t + 1.0) / (-6.0 * t.powi(3) + 6.0 * t * t - 2.0 * t + 2.0);
    let u = t / (r2 * (1.0 - t));
    let w = t * s / (r2 * (1.0 - t * t));
    let v = t * s / (2.0 - 2.0 * t * t);
    a[(0, 0)] = p;
    a[(0, 3)] = q;
    a[(1, 1)] = u;
    a[(3, 1)] = w;
    a[(4, 2)] = u;
    a[(5, 0)] = (t + 1.0) / (6.0 * t * t + 2.0);
    a[(5, 3)] = (t + 1.0) / (6.0 * t * t + 2.0);
    a[(6, 1)] = u;
    a[(7, 0)] = v;
    a[(7, 3)] = -v;
    a[(9, 2)] = u;
    a[(10, 0)] = q;
    a[(10, 3)] = p;
    a[(11, 2)] = -w;
    a[(12, 2)] = w;
    a[(13, 0)] = v;
    a[(13, 3)] = -v;
    a[(14, 1)] = -w;
    a[(15, 0)] = (1.0 - 3.0 * t) / (6.0 * t * t + 2.0);
    a[(15, 3)] = (1.0 - 3.0 * t) / (6.0 * t * t + 2.0);
    a
}

/// Trace of the candidate's Choi matrix.
pub fn candidate_choi_trace(t: f64) -> f64 {
    4.0 / (1.0 + 3.0 * t * t)
}

/// Diagonal of `Tr_B` of the candidate's Choi matrix (the rest vanishes).
pub fn candidate_choi_output_trace(t: f64) -> [f64; 4] {
    let n = 1.0 + 3.0 * t * t;
    [
        (1.0 + t) / n,
        (1.0 + t) / n,
        (1.0 + t) / n,
        (1.0 - 3.0 * t) / n,
    ]
}

fn xlogx(p: f64, base: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.ln() / base.ln()
    }
}

/// Coherent information of the qubit TD complement at `I/2`, in bits.
pub fn qubit_complement_capacity(t: f64) -> f64 {
    -3.0 * xlogx((1.0 + t) / 4.0, 2.0) - xlogx((1.0 - 3.0 * t) / 4.0, 2.0) - 1.0
}

/// Coherent information of the qutrit TD complement at `I/3`, in trits.
pub fn qutrit_complement_capacity(t: f64) -> f64 {
    let a = (1.0 + 2.0 * t) / 9.0;
    let b = (1.0 - 4.0 * t) / 9.0;
    -6.0 * xlogx(a, 3.0) - 3.0 * xlogx(b, 3.0) - 1.0
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - Complex64::new(*y, 0.0)).norm())
        .fold(0.0, f64::max)
}

/// `n` points on `(lo, hi]`, excluding `lo`.
pub fn half_open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

/// `n` points on `[lo, hi]`.
pub fn closed_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
