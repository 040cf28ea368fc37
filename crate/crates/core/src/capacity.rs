//! Entropies, coherent information and quantum-capacity values.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{Channel, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, ComplexMatrix, Tolerance, C64};
use crate::zoo::{known_antidegradable_range, TdParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    CovariantClosedForm,
    CovariantMixedInput,
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CapacityStatus {
    /// The value is the quantum capacity.
    Proven,
    /// The value is believed to be the capacity on numerical grounds.
    NumericalEvidence,
    /// Only the one-shot coherent information, no capacity claim.
    OneShot,
}

#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub value: f64,
    pub base: f64,
    pub input_state: DensityMatrix,
    pub method: Method,
    pub status: CapacityStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 300,
            seed: 0,
        }
    }
}

fn check_base(base: f64) -> Result<()> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::OutOfRange(format!(
            "logarithm base must exceed 1, got {base}"
        )));
    }
    Ok(())
}

/// `-p log_base p`, zero at `p = 0`.
fn h(p: f64, base: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log(base)
    }
}

/// Entropy of a Hermitian matrix; eigenvalues below `psd_tol * trace` are
/// clipped to zero without renormalizing.
fn matrix_entropy(m: &ComplexMatrix, base: f64, tol: &Tolerance) -> Result<f64> {
    let tr = m.trace().re;
    let cut = tol.psd_tol * tr.abs();
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|l| if l < cut { 0.0 } else { h(l, base) })
        .sum())
}

pub fn von_neumann_entropy(rho: &DensityMatrix, base: f64) -> Result<f64> {
    check_base(base)?;
    matrix_entropy(rho.matrix(), base, &Tolerance::default())
}

fn coherent_info_matrix(
    c: &Channel,
    comp: &Channel,
    rho: &ComplexMatrix,
    base: f64,
    tol: &Tolerance,
) -> Result<f64> {
    let out = c.apply_matrix(rho)?;
    let env = comp.apply_matrix(rho)?;
    Ok(matrix_entropy(&out, base, tol)? - matrix_entropy(&env, base, tol)?)
}

/// `H(c(rho)) - H(c^(rho))`.
pub fn coherent_information(c: &Channel, rho: &DensityMatrix, base: f64) -> Result<f64> {
    check_base(base)?;
    let tol = Tolerance::default();
    if rho.dim() != c.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for a channel on dimension {}",
            rho.dim(),
            c.d_in()
        )));
    }
    let comp = c.complement(&tol)?;
    coherent_info_matrix(c, &comp, rho.matrix(), base, &tol)
}

/// Coherent information at the maximally mixed input. This is the capacity
/// for covariant (conjugate) degradable channels; neither property is
/// checked here, hence the status.
pub fn covariant_capacity(c: &Channel, base: f64) -> Result<CapacityResult> {
    let rho = DensityMatrix::maximally_mixed(c.d_in());
    Ok(CapacityResult {
        value: coherent_information(c, &rho, base)?,
        base,
        input_state: rho,
        method: Method::CovariantMixedInput,
        status: CapacityStatus::NumericalEvidence,
    })
}

/// Closed-form coherent information of the transpose-depolarizing complement
/// at the maximally mixed input, in bits for `d = 2` and trits for `d = 3`.
pub fn td_complement_capacity(d: usize, t: f64) -> Result<CapacityResult> {
    let params = TdParams::new(d, t)?;
    let t = params.t;
    let (value, base) = match d {
        2 => {
            let a = (1.0 + t) / 4.0;
            let b = (1.0 - 3.0 * t) / 4.0;
            (3.0 * h(a, 2.0) + h(b, 2.0) - 1.0, 2.0)
        }
        3 => {
            let a = (1.0 + 2.0 * t) / 9.0;
            let b = (1.0 - 4.0 * t) / 9.0;
            (6.0 * h(a, 3.0) + 3.0 * h(b, 3.0) - 1.0, 3.0)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "closed form only for d = 2, 3, got {d}"
            )))
        }
    };
    let range = known_antidegradable_range(d)?;
    let status = match (d, range.contains(t)) {
        (2, true) => CapacityStatus::Proven,
        (_, true) => CapacityStatus::NumericalEvidence,
        (_, false) => CapacityStatus::OneShot,
    };
    Ok(CapacityResult {
        value,
        base,
        input_state: DensityMatrix::maximally_mixed(d),
        method: Method::CovariantClosedForm,
        status,
    })
}

/// `rho = A A^dag / Tr(A A^dag)` with `A` read from `2 d^2` reals.
fn state_from_params(x: &[f64], d: usize) -> ComplexMatrix {
    let a = DMatrix::from_fn(d, d, |i, j| {
        let k = 2 * (i * d + j);
        C64::new(x[k], x[k + 1])
    });
    let g = &a * a.adjoint();
    let tr = g.trace().re;
    g.unscale(tr)
}

struct Objective<'a> {
    c: &'a Channel,
    comp: Channel,
    base: f64,
    tol: Tolerance,
}

impl Objective<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        let rho = state_from_params(x, self.c.d_in());
        coherent_info_matrix(self.c, &self.comp, &rho, self.base, &self.tol)
            .unwrap_or(f64::NEG_INFINITY)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        const EPS: f64 = 1e-6;
        let mut y = x.to_vec();
        (0..x.len())
            .map(|i| {
                y[i] = x[i] + EPS;
                let up = self.eval(&y);
                y[i] = x[i] - EPS;
                let down = self.eval(&y);
                y[i] = x[i];
                (up - down) / (2.0 * EPS)
            })
            .collect()
    }

    /// Gradient ascent with an adaptive step.
    fn climb(&self, mut x: Vec<f64>, max_iters: usize) -> (f64, Vec<f64>) {
        let mut f = self.eval(&x);
        let mut step = 0.5;
        for _ in 0..max_iters {
            let g = self.gradient(&x);
            let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gnorm < 1e-10 {
                break;
            }
            let mut improved = false;
            while step > 1e-12 {
                let y: Vec<f64> = x
                    .iter()
                    .zip(&g)
                    .map(|(a, b)| a + step * b / gnorm)
                    .collect();
                let fy = self.eval(&y);
                if fy > f {
                    x = y;
                    f = fy;
                    step *= 2.0;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        (f, x)
    }
}

/// Maximizes the coherent information over input states. Restart 0 starts
/// at the maximally mixed state, restart `r` at a random state seeded with
/// `seed + r`; the best value wins, ties to the lowest restart. The result
/// is a lower bound on the one-shot capacity.
pub fn one_shot_optimize(c: &Channel, cfg: &OptimizerConfig, base: f64) -> Result<CapacityResult> {
    check_base(base)?;
    let tol = Tolerance::default();
    let obj = Objective {
        c,
        comp: c.complement(&tol)?,
        base,
        tol,
    };
    let d = c.d_in();
    let n = 2 * d * d;
    let restarts = cfg.restarts.max(1);
    let results: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = if r == 0 {
                let mut x = vec![0.0; n];
                for i in 0..d {
                    x[2 * (i * d + i)] = 1.0;
                }
                x
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
                (0..n).map(|_| rng.sample(StandardNormal)).collect()
            };
            obj.climb(x0, cfg.max_iters)
        })
        .collect();
    let mut best = 0;
    for (i, (f, _)) in results.iter().enumerate() {
        if *f > results[best].0 {
            best = i;
        }
    }
    let (value, x) = &results[best];
    Ok(CapacityResult {
        value: *value,
        base,
        input_state: DensityMatrix::new(state_from_params(x, d), &tol)?,
        method: Method::Optimized,
        status: CapacityStatus::OneShot,
    })
}
