//! Quick exclusion rules for channels that are conjugate degradable but not
//! degradable.

use serde::{Deserialize, Serialize};

use crate::channel::{is_ppt, Channel};
use crate::error::Result;
use crate::linalg::{numeric_rank, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub hopeless: bool,
    pub reasons: Vec<String>,
    pub d_in: usize,
    pub d_out: usize,
    pub d_env: usize,
    pub complement_choi_rank: usize,
    /// Necessary for conjugate degradability.
    pub complement_ppt: bool,
}

/// A channel can be exclusively conjugate degradable only if its complement
/// has a bound-entangled Choi matrix, which rules out `d_out <= d_in`, low
/// Choi rank of the complement, and a 2x2 complement.
pub fn ecd_screen(c: &Channel, tol: &Tolerance) -> Result<ScreenReport> {
    let comp = c.complement(tol)?;
    let (d_in, d_out, d_env) = (c.d_in(), c.d_out(), comp.d_out());
    let rank = numeric_rank(comp.choi().matrix(), tol);
    let complement_ppt = is_ppt(comp.choi(), tol)?;

    let mut reasons = Vec::new();
    if d_out <= d_in {
        reasons.push(format!(
            "output dimension {d_out} does not exceed input dimension {d_in}"
        ));
    }
    if rank <= d_in.max(d_env) {
        reasons.push(format!(
            "complement Choi rank {rank} <= max(d_in, d_env) = {}, so PPT implies separable",
            d_in.max(d_env)
        ));
    }
    if d_in == 2 && d_env == 2 {
        reasons.push("complement Choi matrix lives on 2x2, no bound entanglement".into());
    }
    Ok(ScreenReport {
        hopeless: !reasons.is_empty(),
        reasons,
        d_in,
        d_out,
        d_env,
        complement_choi_rank: rank,
        complement_ppt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausSet;
    use crate::linalg::identity;
    use crate::sample;
    use crate::zoo::{td_channel, TdParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn qubit_td_and_identity_are_hopeless() {
        let tol = Tolerance::default();
        let td = td_channel(TdParams::new(2, -0.3).unwrap(), &tol).unwrap();
        let r = ecd_screen(&td, &tol).unwrap();
        assert!(r.hopeless);
        assert!(r.reasons[0].contains("output dimension"));
        let id =
            Channel::from_kraus("id", KrausSet::new(vec![identity(3)]).unwrap(), &tol).unwrap();
        assert!(ecd_screen(&id, &tol).unwrap().hopeless);
    }

    #[test]
    fn wide_random_channel_can_pass() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c = Channel::from_kraus("r", sample::kraus(&mut rng, 2, 5, 3), &tol).unwrap();
        let r = ecd_screen(&c, &tol).unwrap();
        assert_eq!((r.d_in, r.d_out, r.d_env), (2, 5, 3));
        // complement Choi rank is min(d_in * d_env, d_out) = 5 > max(2, 3)
        assert_eq!(r.complement_choi_rank, 5);
        assert!(!r.hopeless, "{:?}", r.reasons);
    }
}
