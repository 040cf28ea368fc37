//! Channel data model: states, the three channel representations and the
//! conversions between them, plus structural checks (CP, TP, unital, PPT).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, col_flatten, hermitian_eigs, hermitian_part, hermiticity_deviation, identity,
    numeric_rank, partial_trace_second, row_flatten, unflatten, ComplexMatrix, ComplexVector,
    HermitianEigen, Tolerance, C64, ONE,
};

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if !matrix.is_square() || matrix.is_empty() {
            return Err(Error::NotState(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !linalg::is_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let deviation = hermiticity_deviation(&matrix);
        if deviation > tol.residual_tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > tol.residual_tol {
            return Err(Error::NotState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigs(&matrix)?.min();
        if min < tol.psd_floor(1.0) {
            return Err(Error::NotState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self {
            matrix: hermitian_part(&matrix),
        })
    }

    /// For matrices that are density matrices by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: hermitian_part(&matrix),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: identity(d).unscale(d as f64),
        }
    }

    /// `|psi><psi| / <psi|psi>`
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotState("zero or non-finite state vector".into()));
        }
        let v = psi.unscale(n);
        Ok(Self {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut m = DMatrix::zeros(d, d);
        m[(i, i)] = ONE;
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Positive operator without the unit-trace requirement. Only used for the
/// unnormalized maximally entangled vector `sum_i |ii>`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnnormalizedState {
    matrix: ComplexMatrix,
}

impl UnnormalizedState {
    /// `sum_{i,j} |ii><jj|`, trace `d`.
    pub fn maximally_entangled(d: usize) -> Self {
        let mut m = DMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                m[(i * d + i, j * d + j)] = ONE;
            }
        }
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Ordered list of `d_out x d_in` Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    d_in: usize,
    d_out: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty Kraus set".into()))?;
        let (d_out, d_in) = first.shape();
        if d_in == 0 || d_out == 0 {
            return Err(Error::DimensionMismatch("zero-sized Kraus operator".into()));
        }
        if let Some(bad) = operators.iter().find(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator of shape {:?}, expected {:?}",
                bad.shape(),
                (d_out, d_in)
            )));
        }
        if !operators.iter().all(linalg::is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            d_in,
            d_out,
            operators,
        })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `|| sum_i K_i^dag K_i - I ||_F`
    pub fn tp_deviation(&self) -> f64 {
        let mut s = DMatrix::<C64>::zeros(self.d_in, self.d_in);
        for k in &self.operators {
            s += k.adjoint() * k;
        }
        (s - identity(self.d_in)).norm()
    }

    pub fn is_trace_preserving(&self, tol: &Tolerance) -> bool {
        self.tp_deviation() <= tol.residual_tol
    }

    /// Appends zero operators up to `n` in total. Enlarges the environment of
    /// the complement without changing the channel.
    pub fn padded(&self, n: usize) -> Self {
        let mut operators = self.operators.clone();
        while operators.len() < n {
            operators.push(DMatrix::zeros(self.d_out, self.d_in));
        }
        Self { operators, ..*self }
    }

    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "input {:?} for a channel on dimension {}",
                rho.shape(),
                self.d_in
            )));
        }
        let mut out = DMatrix::zeros(self.d_out, self.d_out);
        for k in &self.operators {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    /// Stinespring isometry `W: A -> B (x) E`, `W[(j * n + e, i)] = K_e[(j, i)]`.
    pub fn stinespring_isometry(&self) -> ComplexMatrix {
        let n = self.len();
        DMatrix::from_fn(self.d_out * n, self.d_in, |row, i| {
            self.operators[row % n][(row / n, i)]
        })
    }
}

/// Choi matrix in the basis `|k><mu|_A (x) |l><nu|_B`, composite row index
/// `k * d_out + l`. A trace-preserving channel has `Tr_B R = I_A`, so trace `d_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    d_in: usize,
    d_out: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(d_in: usize, d_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = d_in * d_out;
        if n == 0 || matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {:?} for d_in={d_in}, d_out={d_out}",
                matrix.shape()
            )));
        }
        if !linalg::is_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            d_in,
            d_out,
            matrix,
        })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr_B R`, a `d_in x d_in` matrix.
    pub fn trace_output(&self) -> ComplexMatrix {
        partial_trace_second(&self.matrix, self.d_in, self.d_out)
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigs(&self.matrix)
    }
}

/// `d_in^2 x d_out^2` matrix acting from the right on row-flattened states.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    d_in: usize,
    d_out: usize,
    matrix: ComplexMatrix,
}

impl SuperOp {
    pub fn new(d_in: usize, d_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        if d_in == 0 || d_out == 0 || matrix.shape() != (d_in * d_in, d_out * d_out) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator {:?} for d_in={d_in}, d_out={d_out}",
                matrix.shape()
            )));
        }
        if !linalg::is_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            d_in,
            d_out,
            matrix,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d_in: d,
            d_out: d,
            matrix: identity(d * d),
        }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `unflatten(row(rho) * M)` for an arbitrary `d_in x d_in` operator.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "input {:?} for a superoperator on dimension {}",
                rho.shape(),
                self.d_in
            )));
        }
        let out = row_flatten(rho) * &self.matrix;
        unflatten(out.as_slice(), self.d_out, self.d_out)
    }

    /// Applies the map to a state; fails if the output is not a state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_matrix(rho.matrix())?, &Tolerance::default())
    }

    /// `self` first, then `next`.
    pub fn compose(&self, next: &SuperOp) -> Result<SuperOp> {
        compose(self, next)
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        superop_to_choi(self)
    }
}

/// `R = sum_e vec(K_e^T) vec(K_e^T)^dag`, i.e. `(id (x) M)(Phi)`.
pub fn kraus_to_choi(k: &KrausSet) -> ChoiMatrix {
    let n = k.d_in * k.d_out;
    let mut r = DMatrix::<C64>::zeros(n, n);
    for op in &k.operators {
        let v = col_flatten(&op.transpose());
        r += &v * v.adjoint();
    }
    ChoiMatrix {
        d_in: k.d_in,
        d_out: k.d_out,
        matrix: r,
    }
}

/// Eigen-Kraus decomposition, operators ordered by descending weight.
pub fn choi_to_kraus(r: &ChoiMatrix, tol: &Tolerance) -> Result<KrausSet> {
    let eig = r.eigen()?;
    let tr = r.trace();
    if eig.min() < tol.psd_floor(tr) {
        return Err(Error::NotCp {
            min_eigenvalue: eig.min(),
        });
    }
    let keep = tol.psd_tol * tr.abs();
    let mut operators = Vec::new();
    for i in (0..eig.values.len()).rev() {
        let lambda = eig.values[i];
        if lambda <= keep {
            continue;
        }
        let v = eig.vectors.column(i);
        // v[i * d_out + l] = K[l, i]
        let kt = unflatten(v.as_slice(), r.d_in, r.d_out)?;
        operators.push(kt.transpose().scale(lambda.sqrt()));
    }
    if operators.is_empty() {
        operators.push(DMatrix::zeros(r.d_out, r.d_in));
    }
    KrausSet::new(operators)
}

/// Reshuffle `R[(k, l), (mu, nu)] -> M[(k, mu), (l, nu)]`.
pub fn choi_to_superop(r: &ChoiMatrix) -> SuperOp {
    let (di, dout) = (r.d_in, r.d_out);
    let m = DMatrix::from_fn(di * di, dout * dout, |row, col| {
        let (k, mu) = (row / di, row % di);
        let (l, nu) = (col / dout, col % dout);
        r.matrix[(k * dout + l, mu * dout + nu)]
    });
    SuperOp {
        d_in: di,
        d_out: dout,
        matrix: m,
    }
}

/// Inverse permutation of [`choi_to_superop`].
pub fn superop_to_choi(m: &SuperOp) -> ChoiMatrix {
    let (di, dout) = (m.d_in, m.d_out);
    let r = DMatrix::from_fn(di * dout, di * dout, |row, col| {
        let (k, l) = (row / dout, row % dout);
        let (mu, nu) = (col / dout, col % dout);
        m.matrix[(k * di + mu, l * dout + nu)]
    });
    ChoiMatrix {
        d_in: di,
        d_out: dout,
        matrix: r,
    }
}

pub fn apply(m: &SuperOp, rho: &DensityMatrix) -> Result<DensityMatrix> {
    m.apply(rho)
}

/// `Tr_A[(rho^T (x) I_B) R]`
pub fn apply_choi(r: &ChoiMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(apply_choi_matrix(r, rho.matrix())?, &Tolerance::default())
}

pub fn apply_choi_matrix(r: &ChoiMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (r.d_in, r.d_in) {
        return Err(Error::DimensionMismatch(format!(
            "input {:?} for a Choi matrix with d_in={}",
            rho.shape(),
            r.d_in
        )));
    }
    let dout = r.d_out;
    Ok(DMatrix::from_fn(dout, dout, |l, nu| {
        let mut s = C64::new(0.0, 0.0);
        for k in 0..r.d_in {
            for mu in 0..r.d_in {
                s += rho[(k, mu)] * r.matrix[(k * dout + l, mu * dout + nu)];
            }
        }
        s
    }))
}

/// First `m`, then `n`.
pub fn compose(m: &SuperOp, n: &SuperOp) -> Result<SuperOp> {
    if m.d_out != n.d_in {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose a map into dimension {} with a map from dimension {}",
            m.d_out, n.d_in
        )));
    }
    Ok(SuperOp {
        d_in: m.d_in,
        d_out: n.d_out,
        matrix: &m.matrix * &n.matrix,
    })
}

/// Complementary channel with Kraus operators `(K^_j)[(e, i)] = (K_e)[(j, i)]`,
/// so `[C^(rho)]_{e,f} = Tr[K_f^dag K_e rho]`. The environment dimension is
/// the number of Kraus operators.
pub fn complement(k: &KrausSet, tol: &Tolerance) -> Result<Channel> {
    let deviation = k.tp_deviation();
    if deviation > tol.residual_tol {
        return Err(Error::NotTp { deviation });
    }
    let n = k.len();
    let ops = (0..k.d_out)
        .map(|j| DMatrix::from_fn(n, k.d_in, |e, i| k.operators[e][(j, i)]))
        .collect();
    Channel::from_kraus("complement", KrausSet::new(ops)?, tol)
}

/// CP iff the smallest Choi eigenvalue is above `-psd_tol * Tr R`.
pub fn is_cp(r: &ChoiMatrix, tol: &Tolerance) -> Result<(bool, f64)> {
    let min = r.eigen()?.min();
    Ok((min >= tol.psd_floor(r.trace()), min))
}

/// TP iff `|| Tr_B R - I ||_F <= residual_tol`.
pub fn is_tp(r: &ChoiMatrix, tol: &Tolerance) -> (bool, f64) {
    let dev = (r.trace_output() - identity(r.d_in)).norm();
    (dev <= tol.residual_tol, dev)
}

pub fn is_unital(c: &Channel, tol: &Tolerance) -> Result<bool> {
    let out = c
        .superop
        .apply_matrix(&identity(c.d_in()).unscale(c.d_in() as f64))?;
    let want = identity(c.d_out()).unscale(c.d_out() as f64);
    Ok((out - want).norm() <= tol.residual_tol)
}

pub fn choi_rank(c: &Channel, tol: &Tolerance) -> usize {
    numeric_rank(c.choi.matrix(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    /// Input factor.
    A,
    /// Output factor.
    B,
}

pub fn partial_transpose(r: &ChoiMatrix, subsystem: Subsystem) -> ComplexMatrix {
    let dout = r.d_out;
    let n = r.d_in * dout;
    DMatrix::from_fn(n, n, |row, col| {
        let (k, l) = (row / dout, row % dout);
        let (mu, nu) = (col / dout, col % dout);
        match subsystem {
            Subsystem::A => r.matrix[(mu * dout + l, k * dout + nu)],
            Subsystem::B => r.matrix[(k * dout + nu, mu * dout + l)],
        }
    })
}

/// PPT iff the partial transpose (either factor; the spectra agree) is PSD.
pub fn is_ppt(r: &ChoiMatrix, tol: &Tolerance) -> Result<bool> {
    let pt = partial_transpose(r, Subsystem::A);
    Ok(hermitian_eigs(&pt)?.min() >= tol.psd_floor(r.trace()))
}

/// Completely positive trace-preserving map with all three representations
/// cached at construction.
#[derive(Debug, Clone)]
pub struct Channel {
    label: String,
    kraus: KrausSet,
    choi: ChoiMatrix,
    superop: SuperOp,
}

impl Channel {
    pub fn from_kraus(label: impl Into<String>, kraus: KrausSet, tol: &Tolerance) -> Result<Self> {
        let deviation = kraus.tp_deviation();
        if deviation > tol.residual_tol {
            return Err(Error::NotTp { deviation });
        }
        let choi = kraus_to_choi(&kraus);
        let superop = choi_to_superop(&choi);
        Ok(Self {
            label: label.into(),
            kraus,
            choi,
            superop,
        })
    }

    /// Accepts only Choi matrices normalized as `Tr_B R = I` (trace `d_in`);
    /// other normalizations are rejected rather than rescaled.
    pub fn from_choi(label: impl Into<String>, choi: ChoiMatrix, tol: &Tolerance) -> Result<Self> {
        let deviation = hermiticity_deviation(choi.matrix());
        if deviation > tol.residual_tol {
            return Err(Error::NotHermitian { deviation });
        }
        let (tp, deviation) = is_tp(&choi, tol);
        if !tp {
            return Err(Error::NotTp { deviation });
        }
        let kraus = choi_to_kraus(&choi, tol)?;
        let superop = choi_to_superop(&choi);
        Ok(Self {
            label: label.into(),
            kraus,
            choi,
            superop,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn d_in(&self) -> usize {
        self.kraus.d_in
    }

    pub fn d_out(&self) -> usize {
        self.kraus.d_out
    }

    /// Number of Kraus operators, i.e. the output dimension of [`Channel::complement`].
    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &KrausSet {
        &self.kraus
    }

    pub fn choi(&self) -> &ChoiMatrix {
        &self.choi
    }

    pub fn superop(&self) -> &SuperOp {
        &self.superop
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.superop.apply(rho)
    }

    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.superop.apply_matrix(rho)
    }

    pub fn complement(&self, tol: &Tolerance) -> Result<Channel> {
        Ok(complement(&self.kraus, tol)?.with_label(format!("complement({})", self.label)))
    }
}
