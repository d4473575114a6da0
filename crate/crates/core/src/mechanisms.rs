//! Synthetic amputation under MCAR, MAR and MNAR mechanisms.
//!
//! Each row draws one uniform number from a ChaCha8 stream seeded with the
//! caller's seed; the target cell is made missing when the draw falls below
//! the row's missingness probability. MCAR uses `psi` everywhere; MAR uses
//! `psi + boost` where the driver column exceeds the threshold; MNAR does
//! the same on the target's own value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::table::Table;

#[derive(Debug, Clone, PartialEq)]
pub enum MechanismKind {
    Mcar,
    Mar { driver: String },
    Mnar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MechanismSpec {
    pub kind: MechanismKind,
    pub psi: f64,
    pub target: String,
    pub threshold: f64,
    pub boost: f64,
}

impl MechanismSpec {
    pub fn mcar(target: impl Into<String>, psi: f64) -> Self {
        MechanismSpec { kind: MechanismKind::Mcar, psi, target: target.into(), threshold: 0.0, boost: 0.0 }
    }

    pub fn mar(target: impl Into<String>, driver: impl Into<String>, psi: f64, threshold: f64, boost: f64) -> Self {
        MechanismSpec {
            kind: MechanismKind::Mar { driver: driver.into() },
            psi,
            target: target.into(),
            threshold,
            boost,
        }
    }

    pub fn mnar(target: impl Into<String>, psi: f64, threshold: f64, boost: f64) -> Self {
        MechanismSpec { kind: MechanismKind::Mnar, psi, target: target.into(), threshold, boost }
    }

    fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !prob(self.psi) || !prob(self.boost) || !prob(self.psi + self.boost) {
            return Err(Error::Validation(format!(
                "psi ({}) and psi + boost ({}) must lie in [0, 1]",
                self.psi,
                self.psi + self.boost
            )));
        }
        if !self.threshold.is_finite() {
            return Err(Error::Validation("threshold must be finite".into()));
        }
        if let MechanismKind::Mar { driver } = &self.kind {
            if driver == &self.target {
                return Err(Error::Validation("MAR driver must differ from the target".into()));
            }
        }
        Ok(())
    }
}

/// Per-row missingness probabilities for `spec` on `table`.
pub fn missingness_probabilities(table: &Table, spec: &MechanismSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let target = table.column(&spec.target)?.require_f64()?;
    let high = spec.psi + spec.boost;
    match &spec.kind {
        MechanismKind::Mcar => Ok(vec![spec.psi; table.n_rows()]),
        MechanismKind::Mar { driver } => {
            let col = table.column(driver)?;
            let values = col.require_f64()?;
            if col.n_missing() > 0 {
                return Err(Error::Validation(format!("MAR driver `{driver}` must be fully observed")));
            }
            Ok(values.into_iter().map(|v| if v.unwrap() > spec.threshold { high } else { spec.psi }).collect())
        }
        MechanismKind::Mnar => Ok(target
            .into_iter()
            .map(|v| match v {
                Some(x) if x > spec.threshold => high,
                _ => spec.psi,
            })
            .collect()),
    }
}

/// Make target cells missing at random according to `spec`. Deterministic
/// for a given seed; on nabular input the shadow records the new missings.
pub fn amputate<F: Frame>(target: &F, spec: &MechanismSpec, seed: u64) -> Result<F> {
    let table = target.data();
    let probs = missingness_probabilities(table, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<usize> = probs
        .iter()
        .enumerate()
        .filter_map(|(r, &p)| {
            let u: f64 = rng.gen();
            (u < p).then_some(r)
        })
        .collect();
    let idx = table.index_of(&spec.target)?;
    let col = table.columns()[idx].with_missing(rows);
    target.with_data_synced(table.with_replaced(idx, col)?)
}
