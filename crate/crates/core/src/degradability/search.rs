//! Solution family of `M * D = target` and the search for a channel in it.
//!
//! Writing `vec(M D) = (M (x) I) vec(D)`, the kernel of `M (x) I` is spanned
//! by `b_i (x) e_c` with `b_i` spanning `ker M`, so every solution is
//! `D = D0 + K A` for the orthonormal kernel matrix `K` and an arbitrary
//! coefficient matrix `A`. The search alternates between projecting the
//! Choi matrix of `D` onto the PSD cone and projecting back onto the
//! solutions that are also trace preserving.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{candidate_map, verify_certificate};
use crate::channel::{choi_to_superop, superop_to_choi, SuperOp};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigs, hermitian_part, kernel_basis, pseudoinverse, ComplexMatrix, ComplexVector,
    Tolerance, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Relaxation factor of the PSD step, in `(0, 2)`.
    pub step: f64,
    pub seed: u64,
    pub tol: Tolerance,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            step: 1.0,
            seed: 0,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KernelFamily {
    pub map: SuperOp,
    pub target: SuperOp,
    /// Minimum-norm solution.
    pub base: SuperOp,
    /// Orthonormal columns spanning `ker M`.
    kernel: ComplexMatrix,
}

impl KernelFamily {
    /// Dimension of `ker(M (x) I)`.
    pub fn dim(&self) -> usize {
        self.kernel.ncols() * self.target_cols()
    }

    pub fn kernel_of_map(&self) -> &ComplexMatrix {
        &self.kernel
    }

    fn target_cols(&self) -> usize {
        self.base.matrix().ncols()
    }

    /// Basis of `ker(M (x) I)` as row-major flattenings of `D`, ordered by
    /// kernel vector then output column.
    pub fn basis(&self) -> Vec<ComplexVector> {
        let (rows, cols) = self.base.matrix().shape();
        let mut out = Vec::with_capacity(self.dim());
        for b in self.kernel.column_iter() {
            for c in 0..cols {
                let mut v = ComplexVector::zeros(rows * cols);
                for r in 0..rows {
                    v[r * cols + c] = b[r];
                }
                out.push(v);
            }
        }
        out
    }

    /// `D0 + sum_i coeffs[i] * basis[i]`.
    pub fn member(&self, coeffs: &[C64]) -> Result<SuperOp> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a family of dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        let a = DMatrix::from_row_slice(self.kernel.ncols(), self.target_cols(), coeffs);
        SuperOp::new(
            self.base.d_in(),
            self.base.d_out(),
            self.base.matrix() + &self.kernel * a,
        )
    }
}

pub fn kernel_family(m: &SuperOp, target: &SuperOp, tol: &Tolerance) -> Result<KernelFamily> {
    let cand = candidate_map(m, target, tol)?;
    if !cand.consistent {
        return Err(Error::InconsistentSystem {
            residual: cand.residual,
        });
    }
    let vectors = kernel_basis(m.matrix(), tol);
    let kernel = if vectors.is_empty() {
        DMatrix::zeros(m.matrix().ncols(), 0)
    } else {
        DMatrix::from_columns(&vectors)
    };
    Ok(KernelFamily {
        map: m.clone(),
        target: target.clone(),
        base: cand.map,
        kernel,
    })
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub certificate: SuperOp,
    pub restart: usize,
    pub iterations: usize,
}

/// Orthogonal projection onto `{D0 + K A : D trace preserving}`.
struct Projector<'a> {
    family: &'a KernelFamily,
    tp: ComplexMatrix,
    tp_pinv: ComplexMatrix,
    rhs: ComplexVector,
}

impl<'a> Projector<'a> {
    fn new(family: &'a KernelFamily, tol: &Tolerance) -> Self {
        let d = family.base.d_in();
        let e = family.base.d_out();
        let cols = family.target_cols();
        let k = family.kernel.ncols();
        let base = family.base.matrix();
        // row (a, b) of D: sum_l D[(a*d+b), (l*e+l)] = delta_ab
        let mut tp = DMatrix::zeros(d * d, k * cols);
        let mut rhs = ComplexVector::zeros(d * d);
        for row in 0..d * d {
            let mut s = C64::new(if row / d == row % d { 1.0 } else { 0.0 }, 0.0);
            for l in 0..e {
                let c = l * e + l;
                s -= base[(row, c)];
                for i in 0..k {
                    tp[(row, i * cols + c)] = family.kernel[(row, i)];
                }
            }
            rhs[row] = s;
        }
        let tp_pinv = pseudoinverse(&tp, tol);
        Self {
            family,
            tp,
            tp_pinv,
            rhs,
        }
    }

    fn project(&self, d: &ComplexMatrix) -> ComplexMatrix {
        let f = self.family;
        let k = f.kernel.ncols();
        let cols = f.target_cols();
        let coeffs = f.kernel.adjoint() * (d - f.base.matrix());
        let mut a = ComplexVector::from_fn(k * cols, |j, _| coeffs[(j / cols, j % cols)]);
        a -= &self.tp_pinv * (&self.tp * &a - &self.rhs);
        let coeffs = DMatrix::from_fn(k, cols, |i, c| a[i * cols + c]);
        f.base.matrix() + &f.kernel * coeffs
    }
}

fn hermitize(d: &SuperOp) -> ComplexMatrix {
    let choi = superop_to_choi(d);
    let h =
        crate::channel::ChoiMatrix::new(choi.d_in(), choi.d_out(), hermitian_part(choi.matrix()))
            .expect("same shape");
    choi_to_superop(&h).into_matrix()
}

fn run_restart(
    family: &KernelFamily,
    proj: &Projector<'_>,
    cfg: &SearchConfig,
    restart: usize,
) -> Option<SearchHit> {
    let tol = &cfg.tol;
    let (d_in, d_out) = (family.base.d_in(), family.base.d_out());
    let wrap = |m: ComplexMatrix| SuperOp::new(d_in, d_out, m).ok();

    let start = if restart == 0 {
        family.base.matrix().clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
        let k = family.kernel.ncols();
        let cols = family.target_cols();
        let scale = family.base.matrix().norm().max(1.0) / ((k * cols).max(1) as f64).sqrt();
        let a = DMatrix::from_fn(k, cols, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * scale
        });
        let raw = wrap(family.base.matrix() + &family.kernel * a)?;
        hermitize(&raw)
    };
    let mut d = proj.project(&start);

    for it in 0..=cfg.max_iters {
        let op = wrap(d.clone())?;
        let choi = superop_to_choi(&op);
        let eig = hermitian_eigs(choi.matrix()).ok()?;
        let tr = choi.trace();
        if eig.min() >= 0.5 * tol.psd_floor(tr) {
            let check = verify_certificate(&family.map, &family.target, &op, tol).ok()?;
            return check.passed.then_some(SearchHit {
                certificate: op,
                restart,
                iterations: it,
            });
        }
        if it == cfg.max_iters {
            break;
        }
        let shift = tol.psd_tol * tr.abs();
        let psd = eig.map_spectrum(|l| l.max(shift));
        let psd = crate::channel::ChoiMatrix::new(choi.d_in(), choi.d_out(), psd).ok()?;
        let target = choi_to_superop(&psd).into_matrix();
        let relaxed = &d + (target - &d).scale(cfg.step);
        d = proj.project(&relaxed);
    }
    None
}

/// Looks for a channel in the family. Restarts run in parallel, restart `r`
/// seeded with `seed + r` (restart 0 starts at the minimum-norm solution);
/// the lowest successful restart index wins, so the result depends only on
/// the configuration. `None` says nothing about existence.
pub fn kernel_search(family: &KernelFamily, cfg: &SearchConfig) -> Option<SearchHit> {
    let proj = Projector::new(family, &cfg.tol);
    let restarts = if family.kernel.ncols() == 0 {
        1
    } else {
        cfg.restarts.max(1)
    };
    (0..restarts)
        .into_par_iter()
        .find_map_first(|r| run_restart(family, &proj, cfg, r))
}
