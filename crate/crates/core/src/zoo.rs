//! Concrete channel families: transpose-depolarizing, depolarizing, the
//! explicit qubit transpose-depolarizing complement, the asymmetric cloner
//! parametrization and the mixed-symmetry positive map.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::channel::{superop_to_choi, Channel, ChoiMatrix, KrausSet, SuperOp, UnnormalizedState};
use crate::error::{Error, Result};
use crate::io;
use crate::linalg::{from_real_rows, identity, swap_matrix, ComplexMatrix, Tolerance, C64};

/// Slack on CP-range endpoints so that literals like `1.0 / 3.0` are accepted.
const RANGE_SLACK: f64 = 1e-12;

fn check_range(family: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !value.is_finite() || value < lo - RANGE_SLACK || value > hi + RANGE_SLACK {
        return Err(Error::OutOfCpRange {
            family,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// `rho -> t rho^T + (1 - t) I / d`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdParams {
    pub d: usize,
    pub t: f64,
}

pub fn td_cp_range(d: usize) -> (f64, f64) {
    (-1.0 / (d as f64 - 1.0), 1.0 / (d as f64 + 1.0))
}

impl TdParams {
    pub fn new(d: usize, t: f64) -> Result<Self> {
        check_dim(d)?;
        let (lo, hi) = td_cp_range(d);
        check_range("transpose-depolarizing", t, lo, hi)?;
        Ok(Self { d, t })
    }
}

/// `rho -> s rho + (1 - s) I / d`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolParams {
    pub d: usize,
    pub s: f64,
}

pub fn depol_cp_range(d: usize) -> (f64, f64) {
    let d2 = (d * d) as f64;
    (-1.0 / (d2 - 1.0), 1.0)
}

impl DepolParams {
    pub fn new(d: usize, s: f64) -> Result<Self> {
        check_dim(d)?;
        let (lo, hi) = depol_cp_range(d);
        check_range("depolarizing", s, lo, hi)?;
        Ok(Self { d, s })
    }
}

/// Choi matrix `t SWAP + (1 - t)/d I`.
pub fn td_choi(d: usize, t: f64) -> ChoiMatrix {
    let m = swap_matrix(d).scale(t) + identity(d * d).scale((1.0 - t) / d as f64);
    ChoiMatrix::new(d, d, m).expect("square by construction")
}

pub fn td_channel(params: TdParams, tol: &Tolerance) -> Result<Channel> {
    Channel::from_choi(
        format!("td:d={},t={}", params.d, params.t),
        td_choi(params.d, params.t),
        tol,
    )
}

pub fn depolarizing(params: DepolParams, tol: &Tolerance) -> Result<Channel> {
    let d = params.d;
    let phi = UnnormalizedState::maximally_entangled(d)
        .matrix()
        .scale(params.s);
    let m = phi + identity(d * d).scale((1.0 - params.s) / d as f64);
    let choi = ChoiMatrix::new(d, d, m)?;
    Channel::from_choi(format!("depol:d={d},s={}", params.s), choi, tol)
}

/// `exp(i pi/2 sigma_Y) = i sigma_Y`
fn y_rotation() -> ComplexMatrix {
    from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]])
}

/// Qubit depolarizing channel followed by the rotation `exp(i pi/2 sigma_Y)`.
/// With `s = -t` this is the qubit transpose-depolarizing channel.
pub fn rotated_depolarizing(s: f64, tol: &Tolerance) -> Result<Channel> {
    let base = depolarizing(DepolParams::new(2, s)?, tol)?;
    let u = y_rotation();
    let ops = base.kraus().operators().iter().map(|k| &u * k).collect();
    Channel::from_kraus(format!("rotated-depol:s={s}"), KrausSet::new(ops)?, tol)
}

/// Output of the explicit 4-dimensional environment representation of the
/// qubit transpose-depolarizing complement. Linear in `rho`.
pub fn td_complement_qubit_output(t: f64, rho: &ComplexMatrix) -> ComplexMatrix {
    let a = (1.0 - 3.0 * t).sqrt() * (1.0 + t).sqrt();
    let s2 = 2.0_f64.sqrt();
    let p = 1.0 + t;
    let r = |i: usize, j: usize| rho[(i, j)];
    let z = C64::new(0.0, 0.0);
    let entries = [
        [
            r(1, 1) * (p / 2.0),
            r(1, 0) * (p / (2.0 * s2)),
            z,
            r(1, 0) * (a / (2.0 * s2)),
        ],
        [
            r(0, 1) * (p / (2.0 * s2)),
            (r(0, 0) + r(1, 1)) * (p / 4.0),
            r(1, 0) * (p / (2.0 * s2)),
            (r(0, 0) - r(1, 1)) * (a / 4.0),
        ],
        [
            z,
            r(0, 1) * (p / (2.0 * s2)),
            r(0, 0) * (p / 2.0),
            r(0, 1) * (-a / (2.0 * s2)),
        ],
        [
            r(0, 1) * (a / (2.0 * s2)),
            (r(0, 0) - r(1, 1)) * (a / 4.0),
            r(1, 0) * (-a / (2.0 * s2)),
            (r(0, 0) + r(1, 1)) * ((1.0 - 3.0 * t) / 4.0),
        ],
    ];
    DMatrix::from_fn(4, 4, |i, j| entries[i][j])
}

/// Superoperator of a linear map given as a closure, built row by row from
/// the matrix units `|k><mu|`.
pub fn superop_of_map(
    d_in: usize,
    d_out: usize,
    f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> Result<SuperOp> {
    let mut m = DMatrix::zeros(d_in * d_in, d_out * d_out);
    for k in 0..d_in {
        for mu in 0..d_in {
            let mut e = DMatrix::zeros(d_in, d_in);
            e[(k, mu)] = C64::new(1.0, 0.0);
            let out = f(&e);
            if out.shape() != (d_out, d_out) {
                return Err(Error::DimensionMismatch(format!(
                    "map returned {:?}, expected {d_out}x{d_out}",
                    out.shape()
                )));
            }
            for l in 0..d_out {
                for nu in 0..d_out {
                    m[(k * d_in + mu, l * d_out + nu)] = out[(l, nu)];
                }
            }
        }
    }
    SuperOp::new(d_in, d_out, m)
}

/// Qubit transpose-depolarizing complement with the explicit 4-dimensional
/// environment (symmetric triplet plus singlet-like direction).
pub fn td_complement_qubit(t: f64, tol: &Tolerance) -> Result<Channel> {
    let (lo, hi) = td_cp_range(2);
    check_range("transpose-depolarizing", t, lo, hi)?;
    let t = t.clamp(lo, hi);
    let m = superop_of_map(2, 4, |rho| td_complement_qubit_output(t, rho))?;
    Channel::from_choi(format!("td-comp:t={t}"), superop_to_choi(&m), tol)
}

/// Known antidegrading map from the 4-dimensional environment back to the
/// qubit, valid for the qubit transpose-depolarizing channel at `t = -2/3`
/// with the environment of [`td_complement_qubit`].
pub fn td_antidegrading_certificate() -> SuperOp {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rows: [[f64; 4]; 16] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -h, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, -h, 0.0, 0.0],
        [0.0, 0.0, -h, 0.0],
        [0.5, 0.0, 0.0, 0.5],
        [0.0, -h, 0.0, 0.0],
        [-0.5, 0.0, 0.0, 0.5],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -h, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, h, 0.0],
        [0.0, 0.0, -h, 0.0],
        [-0.5, 0.0, 0.0, 0.5],
        [0.0, h, 0.0, 0.0],
        [0.5, 0.0, 0.0, 0.5],
    ];
    let m = DMatrix::from_fn(16, 4, |i, j| C64::new(rows[i][j], 0.0));
    SuperOp::new(4, 2, m).expect("16x4 literal")
}

/// Optimal universal asymmetric 1 -> 1+1 cloner, asymmetry `p`.
///
/// `alpha^2 = p^2 / (2(1-p+p^2))`, `beta^2 = (1-p)^2 / (2(1-p+p^2))`,
/// `t = 2 alpha beta`. These satisfy `alpha^2 + alpha beta + beta^2 = 1/2`;
/// the pair on the unit ellipse is [`ClonerParams::mixed_symmetry_coefficients`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClonerParams {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
}

pub fn cloner_params(p: f64) -> Result<ClonerParams> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!(
            "cloner asymmetry p={p} outside [0, 1]"
        )));
    }
    let n = 2.0 * (1.0 - p + p * p);
    let alpha = p / n.sqrt();
    let beta = (1.0 - p) / n.sqrt();
    Ok(ClonerParams {
        p,
        alpha,
        beta,
        t: 2.0 * alpha * beta,
    })
}

impl ClonerParams {
    /// `(sqrt(2) alpha, sqrt(2) beta)`, on `a^2 + ab + b^2 = 1` with `ab = t`.
    pub fn mixed_symmetry_coefficients(&self) -> (f64, f64) {
        let s = std::f64::consts::SQRT_2;
        (s * self.alpha, s * self.beta)
    }
}

/// `rho -> (1/d) X (I (x) rho) X^dag` with `X = (a+b) P_sym + (a-b) P_anti`.
/// Positive but not trace preserving off the normalization ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedSymmetryMap {
    pub alpha: f64,
    pub beta: f64,
    pub d: usize,
}

impl MixedSymmetryMap {
    pub fn new(alpha: f64, beta: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self { alpha, beta, d })
    }

    /// Coefficients whose output spectrum matches the qubit
    /// transpose-depolarizing complement: `a + b = sqrt(1+t)`, `a - b = sqrt(1-3t)`.
    pub fn for_td_qubit(t: f64) -> Result<Self> {
        let (lo, hi) = td_cp_range(2);
        check_range("transpose-depolarizing", t, lo, hi)?;
        let plus = (1.0 + t).max(0.0).sqrt();
        let minus = (1.0 - 3.0 * t).max(0.0).sqrt();
        Self::new((plus + minus) / 2.0, (plus - minus) / 2.0, 2)
    }

    pub fn operator(&self) -> ComplexMatrix {
        let d = self.d;
        let swap = swap_matrix(d);
        let id = identity(d * d);
        let p_sym = (&id + &swap).scale(0.5);
        let p_anti = (&id - &swap).scale(0.5);
        p_sym.scale(self.alpha + self.beta) + p_anti.scale(self.alpha - self.beta)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d, self.d) {
            return Err(Error::DimensionMismatch(format!(
                "input {:?} for the mixed-symmetry map on dimension {}",
                rho.shape(),
                self.d
            )));
        }
        let x = self.operator();
        let lifted = identity(self.d).kronecker(rho);
        Ok((&x * lifted * x.adjoint()).unscale(self.d as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Evidence {
    Proven,
    NumericalEvidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnownRange {
    pub lo: f64,
    pub hi: f64,
    pub evidence: Evidence,
}

impl KnownRange {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo - RANGE_SLACK && t <= self.hi + RANGE_SLACK
    }
}

/// Parameter interval on which the transpose-depolarizing channel is known
/// to be antidegradable (its complement degradable).
pub fn known_antidegradable_range(d: usize) -> Result<KnownRange> {
    match d {
        2 => Ok(KnownRange {
            lo: -2.0 / 3.0,
            hi: 1.0 / 3.0,
            evidence: Evidence::Proven,
        }),
        3 => Ok(KnownRange {
            lo: -0.5,
            hi: 0.25,
            evidence: Evidence::NumericalEvidence,
        }),
        _ => Err(Error::Unsupported(format!(
            "no known antidegradable range for d={d}"
        ))),
    }
}

/// Textual channel specification as accepted by the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// `td:d=2,t=-0.5`
    Td(TdParams),
    /// `depol:d=3,s=0.5`
    Depol(DepolParams),
    /// `td-comp:t=0.2`
    TdComplementQubit(f64),
    /// `cloner:p=0.5`, the qubit TD complement at the cloner's `t`.
    Cloner(f64),
    /// `id:d=2`
    Identity(usize),
    /// `file:path/to/channel.json`
    File(PathBuf),
}

fn parse_kv(body: &str) -> Result<Vec<(String, String)>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

struct Fields(Vec<(String, String)>);

impl Fields {
    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.0.iter().position(|(k, _)| k == key) {
            None => Ok(None),
            Some(i) => {
                let (_, v) = self.0.remove(i);
                v.parse()
                    .map(Some)
                    .map_err(|_| Error::Parse(format!("invalid value '{v}' for '{key}'")))
            }
        }
    }

    fn require<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.take(key)?
            .ok_or_else(|| Error::Parse(format!("missing '{key}'")))
    }

    fn finish(self) -> Result<()> {
        match self.0.first() {
            Some((k, _)) => Err(Error::Parse(format!("unknown or duplicate key '{k}'"))),
            None => Ok(()),
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:params, got '{s}'")))?;
        if kind == "file" {
            if body.is_empty() {
                return Err(Error::Parse("empty file path".into()));
            }
            return Ok(Self::File(PathBuf::from(body)));
        }
        let mut f = Fields(parse_kv(body)?);
        let spec = match kind {
            "td" => Self::Td(TdParams::new(f.require("d")?, f.require("t")?)?),
            "depol" => Self::Depol(DepolParams::new(f.require("d")?, f.require("s")?)?),
            "td-comp" => {
                let t: f64 = f.require("t")?;
                let (lo, hi) = td_cp_range(2);
                check_range("transpose-depolarizing", t, lo, hi)?;
                Self::TdComplementQubit(t)
            }
            "cloner" => {
                let p = f.require("p")?;
                cloner_params(p)?;
                Self::Cloner(p)
            }
            "id" => {
                let d: usize = f.require("d")?;
                if d == 0 {
                    return Err(Error::Parse("dimension must be positive".into()));
                }
                Self::Identity(d)
            }
            other => return Err(Error::Parse(format!("unknown channel kind '{other}'"))),
        };
        f.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Td(p) => write!(f, "td:d={},t={}", p.d, p.t),
            Self::Depol(p) => write!(f, "depol:d={},s={}", p.d, p.s),
            Self::TdComplementQubit(t) => write!(f, "td-comp:t={t}"),
            Self::Cloner(p) => write!(f, "cloner:p={p}"),
            Self::Identity(d) => write!(f, "id:d={d}"),
            Self::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl ChannelSpec {
    pub fn build(&self, tol: &Tolerance) -> Result<Channel> {
        let c = match self {
            Self::Td(p) => td_channel(*p, tol)?,
            Self::Depol(p) => depolarizing(*p, tol)?,
            Self::TdComplementQubit(t) => td_complement_qubit(*t, tol)?,
            Self::Cloner(p) => td_complement_qubit(cloner_params(*p)?.t, tol)?,
            Self::Identity(d) => {
                Channel::from_kraus("id", KrausSet::new(vec![identity(*d)])?, tol)?
            }
            Self::File(path) => return io::load_channel(path, tol),
        };
        Ok(c.with_label(self.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{choi_rank, is_cp, is_unital};
    use crate::linalg::{eigenvalues, hermitian_eigs};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerance = Tolerance {
        rank_tol: 1e-10,
        psd_tol: 1e-9,
        residual_tol: 1e-9,
    };

    #[test]
    fn td_at_zero_is_completely_depolarizing() {
        let c = td_channel(TdParams::new(3, 0.0).unwrap(), &TOL).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = sample::density(&mut rng, 3);
        let out = c.apply(&rho).unwrap();
        assert!((out.matrix() - identity(3).unscale(3.0)).norm() < 1e-12);
    }

    #[test]
    fn td_cp_boundary_has_zero_eigenvalue() {
        let e = eigenvalues(td_choi(2, 1.0 / 3.0).matrix()).unwrap();
        assert!(e[0].abs() < 1e-15);
        let c = td_channel(TdParams::new(2, 1.0 / 3.0).unwrap(), &TOL).unwrap();
        assert_eq!(choi_rank(&c, &TOL), 3);
    }

    #[test]
    fn td_choi_spectrum() {
        let t = -0.4;
        let e = eigenvalues(td_choi(2, t).matrix()).unwrap();
        let hi = t + (1.0 - t) / 2.0;
        let lo = -t + (1.0 - t) / 2.0;
        let mut want = [hi, hi, hi, lo];
        want.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn cp_ranges_enforced() {
        assert!(TdParams::new(2, 0.34).is_err());
        assert!(TdParams::new(2, -1.01).is_err());
        assert!(TdParams::new(3, -0.5).is_ok());
        assert!(TdParams::new(3, 0.26).is_err());
        assert!(DepolParams::new(2, -1.0 / 3.0).is_ok());
        assert!(DepolParams::new(2, -0.34).is_err());
        assert!(DepolParams::new(2, 1.01).is_err());
        assert!(TdParams::new(1, 0.0).is_err());
        assert!(td_complement_qubit(0.4, &TOL).is_err());
    }

    #[test]
    fn families_are_unital() {
        for t in [-1.0, -0.3, 0.0, 1.0 / 3.0] {
            let c = td_channel(TdParams::new(2, t).unwrap(), &TOL).unwrap();
            assert!(is_unital(&c, &TOL).unwrap());
        }
        for s in [-1.0 / 3.0, 0.0, 0.5, 1.0] {
            let c = depolarizing(DepolParams::new(2, s).unwrap(), &TOL).unwrap();
            assert!(is_unital(&c, &TOL).unwrap());
        }
    }

    #[test]
    fn depolarizing_endpoints() {
        let c = depolarizing(DepolParams::new(2, 1.0).unwrap(), &TOL).unwrap();
        assert!((c.superop().matrix() - identity(4)).norm() < 1e-12);
        let c = depolarizing(DepolParams::new(2, 0.0).unwrap(), &TOL).unwrap();
        assert!((c.choi().matrix() - identity(4).unscale(2.0)).norm() < 1e-12);
    }

    #[test]
    fn td_is_rotated_depolarizing() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for t in [-1.0 / 3.0, -0.1, 0.2, 1.0 / 3.0] {
            let td = td_channel(TdParams::new(2, t).unwrap(), &TOL).unwrap();
            let rot = rotated_depolarizing(-t, &TOL).unwrap();
            let rho = sample::density(&mut rng, 2);
            let a = td.apply_matrix(rho.matrix()).unwrap();
            let b = rot.apply_matrix(rho.matrix()).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn td_complement_on_maximally_mixed() {
        let t = -0.3;
        let out = td_complement_qubit_output(t, &identity(2).unscale(2.0));
        let want = [
            (1.0 + t) / 4.0,
            (1.0 + t) / 4.0,
            (1.0 + t) / 4.0,
            (1.0 - 3.0 * t) / 4.0,
        ];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!((out[(i, j)] - C64::new(w, 0.0)).norm() < 1e-15);
            }
        }
        let c = td_complement_qubit(t, &TOL).unwrap();
        assert!(!is_unital(&c, &TOL).unwrap());
        assert!(is_cp(c.choi(), &TOL).unwrap().0);
    }

    #[test]
    fn td_complement_template_matches_complement_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for t in [-0.9, -2.0 / 3.0, 0.0, 0.25] {
            let comp = td_channel(TdParams::new(2, t).unwrap(), &TOL)
                .unwrap()
                .complement(&TOL)
                .unwrap();
            let tmpl = td_complement_qubit(t, &TOL).unwrap();
            let rho = sample::density(&mut rng, 2);
            let a = eigenvalues(&comp.apply_matrix(rho.matrix()).unwrap()).unwrap();
            let b = eigenvalues(&tmpl.apply_matrix(rho.matrix()).unwrap()).unwrap();
            // the eigen-Kraus environment can be smaller; compare the top entries
            let k = a.len().min(b.len());
            for i in 0..k {
                assert!((a[a.len() - 1 - i] - b[b.len() - 1 - i]).abs() < 1e-10);
            }
            for x in &b[..b.len() - k] {
                assert!(x.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cloner_values() {
        assert!((cloner_params(0.5).unwrap().t - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cloner_params(0.0).unwrap().t, 0.0);
        assert_eq!(cloner_params(1.0).unwrap().t, 0.0);
        assert!((cloner_params(1.0 / 3.0).unwrap().t - 2.0 / 7.0).abs() < 1e-15);
        assert!(cloner_params(1.2).is_err());
        for p in [0.0, 0.2, 0.5, 0.9] {
            let c = cloner_params(p).unwrap();
            let n = c.alpha * c.alpha + c.alpha * c.beta + c.beta * c.beta;
            assert!((n - 0.5).abs() < 1e-14);
            let (a, b) = c.mixed_symmetry_coefficients();
            assert!((a * a + a * b + b * b - 1.0).abs() < 1e-14);
            assert!((a * b - c.t).abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_symmetry_trace_is_ellipse() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = sample::density(&mut rng, 2);
        for (a, b) in [(0.3, 0.7), (1.0, -0.2), (0.5, 0.5)] {
            let m = MixedSymmetryMap::new(a, b, 2).unwrap();
            let tr = m.apply(rho.matrix()).unwrap().trace().re;
            assert!((tr - (a * a + a * b + b * b)).abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_symmetry_equal_coefficients_is_symmetric() {
        let m = MixedSymmetryMap::new(0.6, 0.6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = sample::density(&mut rng, 3);
        let out = m.apply(rho.matrix()).unwrap();
        let swap = swap_matrix(3);
        assert!((&swap * &out - &out).norm() < 1e-14);
    }

    #[test]
    fn mixed_symmetry_spectrum_matches_td_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for t in [-0.8, -0.2, 0.1, 1.0 / 3.0] {
            let m = MixedSymmetryMap::for_td_qubit(t).unwrap();
            let rho = sample::density(&mut rng, 2);
            let a = eigenvalues(&m.apply(rho.matrix()).unwrap()).unwrap();
            let b = eigenvalues(&td_complement_qubit_output(t, rho.matrix())).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12, "t={t}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn known_ranges() {
        let r = known_antidegradable_range(2).unwrap();
        assert_eq!(
            (r.lo, r.hi, r.evidence),
            (-2.0 / 3.0, 1.0 / 3.0, Evidence::Proven)
        );
        let r = known_antidegradable_range(3).unwrap();
        assert_eq!(
            (r.lo, r.hi, r.evidence),
            (-0.5, 0.25, Evidence::NumericalEvidence)
        );
        assert!(matches!(
            known_antidegradable_range(4),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn certificate_literal_is_cp_with_eigenvalue_two() {
        let c = td_antidegrading_certificate();
        let e = hermitian_eigs(superop_to_choi(&c).matrix()).unwrap();
        assert!(e.min() > -1e-14);
        assert!((e.max() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "td:d=2,t=-0.5".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Td(TdParams { d: 2, t: -0.5 })
        );
        assert_eq!(
            "depol:s=0.5,d=3".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Depol(DepolParams { d: 3, s: 0.5 })
        );
        assert_eq!(
            "cloner:p=0.5".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Cloner(0.5)
        );
        assert_eq!(
            "file:x.json".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::File("x.json".into())
        );
        for bad in [
            "td:d=2",
            "td:d=2,t=abc",
            "td:d=2,t=0.5",
            "foo:x=1",
            "td",
            "td:d=2,t=0,q=1",
        ] {
            assert!(bad.parse::<ChannelSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn spec_build_labels() {
        let c = "td:d=2,t=-1"
            .parse::<ChannelSpec>()
            .unwrap()
            .build(&TOL)
            .unwrap();
        assert_eq!(c.label(), "td:d=2,t=-1");
        let c = "cloner:p=0.5"
            .parse::<ChannelSpec>()
            .unwrap()
            .build(&TOL)
            .unwrap();
        assert_eq!((c.d_in(), c.d_out()), (2, 4));
    }
}
