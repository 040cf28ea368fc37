//! Decision engine for degradability and its three relatives.
//!
//! Every query reduces to the composition equation `M * D = target` for an
//! unknown superoperator `D`. The pseudoinverse gives the minimum-norm
//! candidate; it is conclusive only when the solution is unique. Otherwise
//! the affine family of all solutions can be searched for a channel, and only
//! a found channel is ever reported.

mod screen;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use screen::{ecd_screen, ScreenReport};
pub use search::{kernel_family, kernel_search, KernelFamily, SearchConfig, SearchHit};

use crate::channel::{is_tp, superop_to_choi, Channel, SuperOp};
use crate::error::{Error, Result};
use crate::io::{SuperOpDoc, SCHEMA_VERSION};
use crate::linalg::{
    hermitian_eigs, hermiticity_deviation, numeric_rank, pseudoinverse, swap_matrix, ComplexMatrix,
    Tolerance, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    /// `D o N = N^`
    Degradable,
    /// `A o N^ = N`
    Antidegradable,
    /// `D o N = C o N^`
    ConjDegradable,
    /// `A o N^ = C o N`
    ConjAntidegradable,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::Degradable,
        Mode::Antidegradable,
        Mode::ConjDegradable,
        Mode::ConjAntidegradable,
    ];

    pub fn is_conjugate(self) -> bool {
        matches!(self, Mode::ConjDegradable | Mode::ConjAntidegradable)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Degradable => "degradable",
            Mode::Antidegradable => "antidegradable",
            Mode::ConjDegradable => "conj-degradable",
            Mode::ConjAntidegradable => "conj-antidegradable",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Mode::ALL
            .into_iter()
            .find(|m| m.to_string() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown mode '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Yes => "YES",
            Status::No => "NO",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    /// The pseudoinverse candidate itself is a channel.
    CandidateIsChannel,
    /// The kernel search produced a channel.
    SearchFoundChannel,
    /// The solution is unique and not a channel.
    UniqueCandidateNotChannel,
    /// No linear map solves the composition equation.
    Inconsistent,
    /// The candidate is not a channel but other solutions exist.
    NonUnique,
}

#[derive(Debug, Clone)]
pub struct Query {
    pub channel: Channel,
    pub mode: Mode,
    /// Run the kernel search when the candidate is inconclusive.
    pub search: bool,
}

/// Permutation superoperator of entrywise complex conjugation on Hermitian
/// inputs: `C[(k * d + mu, mu * d + k)] = 1`.
pub fn swap_superop(d: usize) -> SuperOp {
    SuperOp::new(d, d, swap_matrix(d)).expect("d^2 x d^2 permutation")
}

/// `M` and `target` of the composition equation `M * D = target` for a mode.
#[derive(Debug, Clone)]
pub struct Problem {
    pub map: SuperOp,
    pub target: SuperOp,
}

pub fn problem_for(channel: &Channel, mode: Mode, tol: &Tolerance) -> Result<Problem> {
    let comp = channel.complement(tol)?;
    let (map, target) = match mode {
        Mode::Degradable | Mode::ConjDegradable => {
            (channel.superop().clone(), comp.superop().clone())
        }
        Mode::Antidegradable | Mode::ConjAntidegradable => {
            (comp.superop().clone(), channel.superop().clone())
        }
    };
    let target = if mode.is_conjugate() {
        target.compose(&swap_superop(target.d_out()))?
    } else {
        target
    };
    Ok(Problem { map, target })
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub map: SuperOp,
    pub consistent: bool,
    pub residual: f64,
}

/// `D = pinv(M) * target`; consistent iff `||M D - target||_F <= residual_tol`.
pub fn candidate_map(m: &SuperOp, target: &SuperOp, tol: &Tolerance) -> Result<Candidate> {
    if m.d_in() != target.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "map input dimension {} differs from target input dimension {}",
            m.d_in(),
            target.d_in()
        )));
    }
    let d = pseudoinverse(m.matrix(), tol) * target.matrix();
    let residual = (m.matrix() * &d - target.matrix()).norm();
    Ok(Candidate {
        map: SuperOp::new(m.d_out(), target.d_out(), d)?,
        consistent: residual <= tol.residual_tol,
        residual,
    })
}

/// Unique iff `M` (`d_a^2 x d_b^2`) has full rank and `d_b <= d_a`.
pub fn uniqueness(d_a: usize, d_b: usize, rank_m: usize) -> bool {
    rank_m == (d_a * d_a).min(d_b * d_b) && d_b <= d_a
}

/// `d_target^2 (d_b^2 - rank M)`, the dimension of `ker(M (x) I)`.
pub fn kernel_dim(d_b: usize, d_target: usize, rank_m: usize) -> usize {
    d_target * d_target * (d_b * d_b - rank_m)
}

/// Independent check of a proposed map `D` for `M * D = target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub residual: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
    /// `||Tr_B R - I||_F` of the certificate's Choi matrix.
    pub tp_deviation: f64,
    /// Largest trace defect on the image of `M`, over matrix-unit inputs.
    pub image_tp_deviation: f64,
    pub passed: bool,
}

pub fn verify_certificate(
    m: &SuperOp,
    target: &SuperOp,
    cert: &SuperOp,
    tol: &Tolerance,
) -> Result<CertificateCheck> {
    if cert.d_in() != m.d_out() || cert.d_out() != target.d_out() || m.d_in() != target.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "certificate {}->{} does not fit map {}->{} and target {}->{}",
            cert.d_in(),
            cert.d_out(),
            m.d_in(),
            m.d_out(),
            target.d_in(),
            target.d_out()
        )));
    }
    let residual = (m.matrix() * cert.matrix() - target.matrix()).norm();
    let choi = superop_to_choi(cert);
    let hermiticity = hermiticity_deviation(choi.matrix());
    let min_eigenvalue = hermitian_eigs(choi.matrix())?.min();
    let trace = choi.trace();
    let (_, tp_deviation) = is_tp(&choi, tol);

    let d = m.d_in();
    let mut image_tp_deviation = 0.0_f64;
    for k in 0..d {
        for mu in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(k, mu)] = C64::new(1.0, 0.0);
            let sigma = m.apply_matrix(&e)?;
            let out = cert.apply_matrix(&sigma)?;
            image_tp_deviation = image_tp_deviation.max((out.trace() - sigma.trace()).norm());
        }
    }

    let passed = residual <= tol.residual_tol
        && hermiticity <= tol.residual_tol
        && min_eigenvalue >= tol.psd_floor(trace)
        && tp_deviation <= tol.residual_tol;
    Ok(CertificateCheck {
        residual,
        hermiticity,
        min_eigenvalue,
        trace,
        tp_deviation,
        image_tp_deviation,
        passed,
    })
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub reason: Reason,
    pub map: SuperOp,
    pub target: SuperOp,
    pub candidate: SuperOp,
    /// Ascending.
    pub candidate_choi_eigs: Vec<f64>,
    pub unique: bool,
    pub kernel_dim: usize,
    pub certificate: Option<SuperOp>,
    pub residual: f64,
    pub consistent: bool,
    pub search_attempted: bool,
}

/// Decides `exists channel D: M * D = target`.
pub fn decide_maps(
    m: &SuperOp,
    target: &SuperOp,
    cfg: &SearchConfig,
    search: bool,
) -> Result<Verdict> {
    let tol = &cfg.tol;
    let cand = candidate_map(m, target, tol)?;
    let rank_m = numeric_rank(m.matrix(), tol);
    let unique = uniqueness(m.d_in(), m.d_out(), rank_m);
    let kdim = kernel_dim(m.d_out(), target.d_out(), rank_m);
    let eigs = hermitian_eigs(superop_to_choi(&cand.map).matrix())?.values;

    let mut verdict = Verdict {
        status: Status::Inconclusive,
        reason: Reason::NonUnique,
        map: m.clone(),
        target: target.clone(),
        candidate: cand.map.clone(),
        candidate_choi_eigs: eigs,
        unique,
        kernel_dim: kdim,
        certificate: None,
        residual: cand.residual,
        consistent: cand.consistent,
        search_attempted: false,
    };

    if !cand.consistent {
        verdict.status = Status::No;
        verdict.reason = Reason::Inconsistent;
        return Ok(verdict);
    }
    if verify_certificate(m, target, &cand.map, tol)?.passed {
        verdict.status = Status::Yes;
        verdict.reason = Reason::CandidateIsChannel;
        verdict.certificate = Some(cand.map);
        return Ok(verdict);
    }
    if unique {
        verdict.status = Status::No;
        verdict.reason = Reason::UniqueCandidateNotChannel;
        return Ok(verdict);
    }
    if search {
        verdict.search_attempted = true;
        let family = kernel_family(m, target, tol)?;
        if let Some(hit) = kernel_search(&family, cfg) {
            verdict.status = Status::Yes;
            verdict.reason = Reason::SearchFoundChannel;
            verdict.certificate = Some(hit.certificate);
        }
    }
    Ok(verdict)
}

pub fn decide(q: &Query, cfg: &SearchConfig) -> Result<Verdict> {
    let p = problem_for(&q.channel, q.mode, &cfg.tol)?;
    decide_maps(&p.map, &p.target, cfg, q.search)
}

/// Serialized verdict. Loadable as a [`crate::io::CertificateDoc`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub schema_version: u32,
    pub label: String,
    pub mode: Mode,
    pub status: Status,
    pub reason: Reason,
    pub unique: bool,
    pub consistent: bool,
    pub kernel_dim: usize,
    pub residual: f64,
    pub eigenvalues: Vec<f64>,
    pub search_attempted: bool,
    pub map: SuperOpDoc,
    pub target: SuperOpDoc,
    pub candidate: SuperOpDoc,
    pub certificate: Option<SuperOpDoc>,
}

impl Verdict {
    pub fn to_doc(&self, label: &str, mode: Mode) -> VerdictDoc {
        VerdictDoc {
            schema_version: SCHEMA_VERSION,
            label: label.to_string(),
            mode,
            status: self.status,
            reason: self.reason,
            unique: self.unique,
            consistent: self.consistent,
            kernel_dim: self.kernel_dim,
            residual: self.residual,
            eigenvalues: self.candidate_choi_eigs.clone(),
            search_attempted: self.search_attempted,
            map: SuperOpDoc::from_superop(&self.map),
            target: SuperOpDoc::from_superop(&self.target),
            candidate: SuperOpDoc::from_superop(&self.candidate),
            certificate: self.certificate.as_ref().map(SuperOpDoc::from_superop),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::sample;
    use crate::zoo::{td_channel, TdParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn td(t: f64) -> Channel {
        td_channel(TdParams::new(2, t).unwrap(), &Tolerance::default()).unwrap()
    }

    #[test]
    fn swap_superop_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = sample::hermitian(&mut rng, 2);
        let c = swap_superop(2);
        let out = c.apply_matrix(&h).unwrap();
        assert!((out - h.map(|z| z.conj())).norm() < 1e-15);
        assert_eq!(c.compose(&c).unwrap().matrix(), &identity(4));
    }

    #[test]
    fn candidate_for_identity_map_is_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = sample::kraus(&mut rng, 2, 3, 2);
        let target = Channel::from_kraus("r", k, &Tolerance::default()).unwrap();
        let c = candidate_map(
            &SuperOp::identity(2),
            target.superop(),
            &Tolerance::default(),
        )
        .unwrap();
        assert!(c.consistent);
        assert!(c.residual < 1e-14);
        assert!((c.map.matrix() - target.superop().matrix()).norm() < 1e-14);
    }

    #[test]
    fn uniqueness_rule() {
        assert!(uniqueness(2, 2, 4));
        assert!(!uniqueness(2, 2, 3));
        assert!(!uniqueness(2, 4, 4));
        assert!(uniqueness(3, 2, 4));
        assert!(!uniqueness(3, 9, 9));
        assert_eq!(kernel_dim(4, 2, 4), 48);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("degradable".parse::<Mode>().unwrap(), Mode::Degradable);
        assert_eq!(
            "CONJ_ANTIDEGRADABLE".parse::<Mode>().unwrap(),
            Mode::ConjAntidegradable
        );
        assert!("sideways".parse::<Mode>().is_err());
    }

    #[test]
    fn qubit_td_degradable_only_at_minus_one() {
        let cfg = SearchConfig::default();
        let v = decide(
            &Query {
                channel: td(-1.0),
                mode: Mode::Degradable,
                search: false,
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(v.status, Status::Yes);
        for t in [-0.9, -0.5, 0.2, 1.0 / 3.0] {
            let v = decide(
                &Query {
                    channel: td(t),
                    mode: Mode::Degradable,
                    search: false,
                },
                &cfg,
            )
            .unwrap();
            assert!(v.unique, "t={t}");
            assert_eq!(v.status, Status::No, "t={t}");
            assert!(v.candidate_choi_eigs[0] < 0.0);
        }
        // constant output: the channel cannot be post-processed into its complement
        let v = decide(
            &Query {
                channel: td(0.0),
                mode: Mode::Degradable,
                search: true,
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(
            (v.status, v.reason, v.unique),
            (Status::No, Reason::Inconsistent, false)
        );
    }

    #[test]
    fn qubit_td_antidegradable_needs_search_at_boundary() {
        let cfg = SearchConfig {
            seed: 3,
            ..SearchConfig::default()
        };
        let q = Query {
            channel: td(-2.0 / 3.0),
            mode: Mode::Antidegradable,
            search: false,
        };
        let v = decide(&q, &cfg).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(!v.unique);
        assert_eq!(v.kernel_dim, 48);
        // two distinct negative eigenvalues, multiplicities 4 and 2
        let neg: Vec<f64> = v
            .candidate_choi_eigs
            .iter()
            .copied()
            .filter(|&x| x < -1e-9)
            .collect();
        assert_eq!(neg.len(), 6);
        assert!((neg[0] - neg[1]).abs() < 1e-9 && (neg[2] - neg[5]).abs() < 1e-9);
        assert!((neg[1] - neg[2]).abs() > 0.1);
        let v = decide(&Query { search: true, ..q }, &cfg).unwrap();
        assert_eq!(v.status, Status::Yes);
        let cert = v.certificate.unwrap();
        assert!(
            verify_certificate(&v.map, &v.target, &cert, &cfg.tol)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn conjugate_target_equals_conjugated_candidate() {
        let tol = Tolerance::default();
        let c = td(0.1);
        let plain = problem_for(&c, Mode::Antidegradable, &tol).unwrap();
        let conj = problem_for(&c, Mode::ConjAntidegradable, &tol).unwrap();
        let a = candidate_map(&plain.map, &plain.target, &tol).unwrap().map;
        let b = candidate_map(&conj.map, &conj.target, &tol).unwrap().map;
        let a_conj = a.compose(&swap_superop(2)).unwrap();
        assert!((a_conj.matrix() - b.matrix()).norm() < 1e-12);
        assert_eq!(
            numeric_rank(a.matrix(), &tol),
            numeric_rank(b.matrix(), &tol)
        );
    }

    #[test]
    fn verify_rejects_wrong_shapes_and_bad_maps() {
        let tol = Tolerance::default();
        let id = SuperOp::identity(2);
        assert!(verify_certificate(&id, &id, &SuperOp::identity(3), &tol).is_err());
        let check = verify_certificate(&id, &id, &id, &tol).unwrap();
        assert!(check.passed);
        let mut m = identity(4);
        m[(0, 0)] = C64::new(1.1, 0.0);
        let bad = SuperOp::new(2, 2, m).unwrap();
        assert!(!verify_certificate(&id, &id, &bad, &tol).unwrap().passed);
    }

    #[test]
    fn verdict_doc_serializes() {
        let v = decide(
            &Query {
                channel: td(0.2),
                mode: Mode::Degradable,
                search: false,
            },
            &SearchConfig::default(),
        )
        .unwrap();
        let doc = v.to_doc("td", Mode::Degradable);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"status\":\"NO\""));
        let back: VerdictDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }
}
