use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;

use crate::baselines::{
    fit_abeley_mh, fit_cylindrical_jpsn, validate_partition, AbeLeyPrior, CylBlock, MhConfig,
};
use crate::data::{Coord, PolyCylDataset};
use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::mcmc::{run_gibbs, ChainConfig, PriorSpec};

use super::crps::{crps_circular, crps_linear};
use super::holdout::Holdout;

/// Posterior predictive draws per masked entry, keyed by `(record, coordinate)`.
pub type Predictions = BTreeMap<(usize, Coord), Vec<f64>>;

/// A model that can be fitted to masked data and return predictive draws of
/// every masked entry.
pub trait Fitter {
    fn name(&self) -> &str;
    fn predict(&self, masked: &PolyCylDataset, rng: &mut ChaCha8Rng) -> Result<Predictions>;
}

/// The full JPSN.
#[derive(Debug, Clone)]
pub struct JointJpsnFitter {
    pub prior: PriorSpec,
    pub config: ChainConfig,
}

impl Fitter for JointJpsnFitter {
    fn name(&self) -> &str {
        "jpsn"
    }

    fn predict(&self, masked: &PolyCylDataset, rng: &mut ChaCha8Rng) -> Result<Predictions> {
        let draws = run_gibbs(masked, &self.prior, &self.config, rng)?;
        Ok(draws
            .missing
            .iter()
            .enumerate()
            .map(|(k, &entry)| (entry, draws.imputed_trace(k)))
            .collect())
    }
}

/// Independent `(1, 1)` JPSN per cylindrical unit.
#[derive(Debug, Clone)]
pub struct CylindricalJpsnFitter {
    pub blocks: Vec<CylBlock>,
    pub prior: PriorSpec,
    pub config: ChainConfig,
}

impl Fitter for CylindricalJpsnFitter {
    fn name(&self) -> &str {
        "cyl-jpsn"
    }

    fn predict(&self, masked: &PolyCylDataset, rng: &mut ChaCha8Rng) -> Result<Predictions> {
        let fit = fit_cylindrical_jpsn(masked, &self.blocks, &self.prior, &self.config, rng)?;
        Ok(fit
            .missing()
            .into_iter()
            .map(|(entry, b, k)| (entry, fit.draws[b].imputed_trace(k)))
            .collect())
    }
}

/// Abe-Ley density fitted independently per cylindrical unit.
#[derive(Debug, Clone)]
pub struct AbeLeyFitter {
    pub blocks: Vec<CylBlock>,
    pub prior: AbeLeyPrior,
    pub config: MhConfig,
}

impl Fitter for AbeLeyFitter {
    fn name(&self) -> &str {
        "abeley"
    }

    fn predict(&self, masked: &PolyCylDataset, rng: &mut ChaCha8Rng) -> Result<Predictions> {
        validate_partition(masked.p(), masked.q(), &self.blocks)?;
        let mut out = Predictions::new();
        for block in &self.blocks {
            let sub = masked.select(&[block.angle], &[block.linear])?;
            let draws = fit_abeley_mh(&sub, &self.prior, &self.config, rng)?;
            for (k, &(row, coord)) in draws.missing.iter().enumerate() {
                let full = match coord {
                    Coord::Angle(_) => Coord::Angle(block.angle),
                    Coord::Linear(_) => Coord::Linear(block.linear),
                };
                out.insert((row, full), draws.imputed.iter().map(|v| v[k]).collect());
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub model: String,
    /// Mean CRPS over held-out angles; `None` when none were held out.
    pub crps_circular: Option<f64>,
    pub crps_linear: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryScore {
    pub model: String,
    pub row: usize,
    pub coord: Coord,
    pub crps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
    pub entries: Vec<EntryScore>,
}

/// Scores predictive draws against the held-out truths.
pub fn score_predictions(model: &str, holdout: &Holdout, preds: &Predictions) -> Result<(ScoreRow, Vec<EntryScore>)> {
    let mut entries = Vec::with_capacity(holdout.key.len());
    let (mut circ, mut lin) = (Vec::new(), Vec::new());
    for h in &holdout.key {
        let draws = preds.get(&(h.row, h.coord)).ok_or_else(|| {
            Error::domain(format!("no predictions for record {} entry {:?}", h.row, h.coord))
        })?;
        let crps = match h.coord {
            Coord::Angle(_) => {
                let angles: Vec<Angle> = draws.iter().map(|&v| Angle::new(v)).collect();
                let s = crps_circular(Angle::new(h.truth), &angles)?;
                circ.push(s);
                s
            }
            Coord::Linear(_) => {
                let s = crps_linear(h.truth, draws)?;
                lin.push(s);
                s
            }
        };
        entries.push(EntryScore {
            model: model.to_string(),
            row: h.row,
            coord: h.coord,
            crps,
        });
    }
    let avg = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    Ok((
        ScoreRow {
            model: model.to_string(),
            crps_circular: avg(&circ),
            crps_linear: avg(&lin),
        },
        entries,
    ))
}

/// Fits every model to the masked data in turn and reports mean circular and
/// linear CRPS over the held-out entries, plus per-entry scores.
pub fn compare_models(
    holdout: &Holdout,
    fitters: &[&dyn Fitter],
    rng: &mut ChaCha8Rng,
) -> Result<ScoreTable> {
    if fitters.is_empty() {
        return Err(Error::domain("compare_models needs at least one model"));
    }
    let mut table = ScoreTable {
        rows: Vec::new(),
        entries: Vec::new(),
    };
    for fitter in fitters {
        let name = fitter.name();
        let preds = fitter
            .predict(&holdout.masked, rng)
            .map_err(|e| e.in_model(name))?;
        let (row, entries) = score_predictions(name, holdout, &preds).map_err(|e| e.in_model(name))?;
        table.rows.push(row);
        table.entries.extend(entries);
    }
    Ok(table)
}
