//! Poly-cylindrical observations: `p` angles and `q` reals per record.

use crate::error::{Error, Result};
use crate::geometry::Angle;

/// One record. Masked entries keep a stored value that likelihood code must
/// never read.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCylObservation {
    pub angles: Vec<Angle>,
    pub linears: Vec<f64>,
    /// Missing flags for the angles.
    pub angle_missing: Vec<bool>,
    /// Missing flags for the linear values.
    pub linear_missing: Vec<bool>,
}

impl PolyCylObservation {
    /// A fully observed record.
    pub fn complete(angles: Vec<Angle>, linears: Vec<f64>) -> Self {
        let (p, q) = (angles.len(), linears.len());
        PolyCylObservation {
            angles,
            linears,
            angle_missing: vec![false; p],
            linear_missing: vec![false; q],
        }
    }

    pub fn p(&self) -> usize {
        self.angles.len()
    }

    pub fn q(&self) -> usize {
        self.linears.len()
    }

    pub fn has_missing(&self) -> bool {
        self.angle_missing.iter().chain(&self.linear_missing).any(|&m| m)
    }

    pub fn n_missing(&self) -> usize {
        self.angle_missing
            .iter()
            .chain(&self.linear_missing)
            .filter(|&&m| m)
            .count()
    }

    pub fn observed_angle(&self, i: usize) -> Option<Angle> {
        (!self.angle_missing[i]).then_some(self.angles[i])
    }

    pub fn observed_linear(&self, j: usize) -> Option<f64> {
        (!self.linear_missing[j]).then_some(self.linears[j])
    }
}

/// Identifies a scalar entry of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Angle(usize),
    Linear(usize),
}

/// `T` records of `p` angles and `q` linear values.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCylDataset {
    p: usize,
    q: usize,
    observations: Vec<PolyCylObservation>,
    /// Optional names: `p` angle labels followed by `q` linear labels.
    pub labels: Option<Vec<String>>,
}

impl PolyCylDataset {
    pub fn new(p: usize, q: usize, observations: Vec<PolyCylObservation>) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::domain("dataset needs p + q >= 1"));
        }
        for (t, o) in observations.iter().enumerate() {
            if o.angles.len() != p
                || o.angle_missing.len() != p
                || o.linears.len() != q
                || o.linear_missing.len() != q
            {
                return Err(Error::domain(format!(
                    "observation {t} does not conform to (p, q) = ({p}, {q})"
                )));
            }
        }
        Ok(PolyCylDataset {
            p,
            q,
            observations,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.p + self.q {
            return Err(Error::domain("label count must equal p + q"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[PolyCylObservation] {
        &self.observations
    }

    pub fn observations_mut(&mut self) -> &mut [PolyCylObservation] {
        &mut self.observations
    }

    pub fn n_missing(&self) -> usize {
        self.observations.iter().map(|o| o.n_missing()).sum()
    }

    /// Angle series `i`, including masked entries.
    pub fn angle_series(&self, i: usize) -> Vec<Angle> {
        self.observations.iter().map(|o| o.angles[i]).collect()
    }

    pub fn linear_series(&self, j: usize) -> Vec<f64> {
        self.observations.iter().map(|o| o.linears[j]).collect()
    }

    /// Keeps angle dims `angles` and linear dims `linears`, in that order.
    pub fn select(&self, angles: &[usize], linears: &[usize]) -> Result<Self> {
        if angles.iter().any(|&i| i >= self.p) || linears.iter().any(|&j| j >= self.q) {
            return Err(Error::domain("selected dimension out of range"));
        }
        let observations = self
            .observations
            .iter()
            .map(|o| PolyCylObservation {
                angles: angles.iter().map(|&i| o.angles[i]).collect(),
                angle_missing: angles.iter().map(|&i| o.angle_missing[i]).collect(),
                linears: linears.iter().map(|&j| o.linears[j]).collect(),
                linear_missing: linears.iter().map(|&j| o.linear_missing[j]).collect(),
            })
            .collect();
        let mut out = PolyCylDataset::new(angles.len(), linears.len(), observations)?;
        if let Some(l) = &self.labels {
            let mut labels: Vec<String> = angles.iter().map(|&i| l[i].clone()).collect();
            labels.extend(linears.iter().map(|&j| l[self.p + j].clone()));
            out.labels = Some(labels);
        }
        Ok(out)
    }

    /// Default labels `theta1.., y1..` when none were supplied.
    pub fn labels_or_default(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| {
            (1..=self.p)
                .map(|i| format!("theta{i}"))
                .chain((1..=self.q).map(|j| format!("y{j}")))
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonconforming_records() {
        let o = PolyCylObservation::complete(vec![Angle::ZERO], vec![]);
        assert!(PolyCylDataset::new(1, 1, vec![o.clone()]).is_err());
        assert!(PolyCylDataset::new(0, 0, vec![]).is_err());
        assert!(PolyCylDataset::new(1, 0, vec![o]).is_ok());
    }

    #[test]
    fn select_keeps_masks() {
        let mut o = PolyCylObservation::complete(
            vec![Angle::new(1.0), Angle::new(2.0)],
            vec![3.0, 4.0],
        );
        o.linear_missing[1] = true;
        let ds = PolyCylDataset::new(2, 2, vec![o]).unwrap();
        let sub = ds.select(&[1], &[1]).unwrap();
        assert_eq!(sub.p(), 1);
        assert_eq!(sub.observations()[0].angles[0], Angle::new(2.0));
        assert!(sub.observations()[0].linear_missing[0]);
        assert_eq!(sub.n_missing(), 1);
    }
}
