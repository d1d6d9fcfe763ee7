//! Marked Poisson processes: degree laws, stub marks and seeded sampling.

mod sampling;

pub use sampling::{derive_seed, sample_degrees, sample_marked, sample_poisson, stream_rng, Stream};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Real;

/// Tolerance on the total mass of a parsed degree spec.
const PARSE_SUM_TOL: f64 = 1e-9;
/// Tolerance on the total mass of a constructed distribution.
const SUM_TOL: f64 = 1e-12;

/// A probability law on the positive integers with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    atoms: Vec<(u32, f64)>,
}

impl DegreeDistribution {
    /// Atoms must have distinct values `>= 1` and probabilities in `(0, 1]`
    /// summing to one within `1e-12`. They are stored sorted by value.
    pub fn new(mut atoms: Vec<(u32, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Parameter("degree distribution has no atoms".into()));
        }
        atoms.sort_by_key(|a| a.0);
        for w in atoms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Parameter(format!("duplicate degree value {}", w[0].0)));
            }
        }
        for &(v, p) in &atoms {
            if v == 0 {
                return Err(Error::Parameter("degree values must be at least 1".into()));
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Parameter(format!("probability {p} of degree {v} outside (0, 1]")));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Parameter(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    /// The point mass at `k`.
    pub fn point_mass(k: u32) -> Result<Self> {
        Self::new(vec![(k, 1.0)])
    }

    /// Empirical law of a non-empty sample of positive integers.
    pub fn empirical(values: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut counts = std::collections::BTreeMap::new();
        let mut n = 0usize;
        for v in values {
            *counts.entry(v).or_insert(0usize) += 1;
            n += 1;
        }
        if n == 0 {
            return Err(Error::Parameter("empirical law of an empty sample".into()));
        }
        let atoms: Vec<(u32, f64)> = counts
            .into_iter()
            .map(|(v, c)| (v, c as f64 / n as f64))
            .collect();
        Self::new(normalized(atoms))
    }

    pub fn atoms(&self) -> &[(u32, f64)] {
        &self.atoms
    }

    pub fn prob(&self, k: u32) -> f64 {
        self.atoms.iter().find(|a| a.0 == k).map_or(0.0, |a| a.1)
    }

    /// `P(X >= k)`.
    pub fn tail(&self, k: u32) -> f64 {
        if k <= self.atoms[0].0 {
            return 1.0;
        }
        self.atoms.iter().filter(|a| a.0 >= k).map(|a| a.1).sum()
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.atoms.iter().map(|&(v, p)| (v as f64 - m).powi(2) * p).sum()
    }

    pub fn min_value(&self) -> u32 {
        self.atoms[0].0
    }

    pub fn max_value(&self) -> u32 {
        self.atoms[self.atoms.len() - 1].0
    }
}

fn normalized(mut atoms: Vec<(u32, f64)>) -> Vec<(u32, f64)> {
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    for a in &mut atoms {
        a.1 /= total;
    }
    atoms
}

/// `k` for a point mass, otherwise `v:p` pairs joined by commas.
impl fmt::Display for DegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [(v, p)] = self.atoms[..] {
            if p == 1.0 {
                return write!(f, "{v}");
            }
        }
        for (i, (v, p)) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}:{p}")?;
        }
        Ok(())
    }
}

impl FromStr for DegreeDistribution {
    type Err = Error;

    /// Grammar: a single integer `k` (the point mass at `k`), or
    /// comma-separated `value:probability` pairs.
    fn from_str(text: &str) -> Result<Self> {
        let err = |position: usize, message: String| Error::DegreeSpec { position, message };
        if text.trim().is_empty() {
            return Err(err(0, "empty degree spec".into()));
        }
        if !text.contains(':') {
            let lead = text.len() - text.trim_start().len();
            let k: u32 = text
                .trim()
                .parse()
                .map_err(|_| err(lead, format!("expected an integer, found `{}`", text.trim())))?;
            if k == 0 {
                return Err(err(lead, "degree values must be at least 1".into()));
            }
            return Self::point_mass(k);
        }
        let mut atoms = Vec::new();
        let mut offset = 0;
        for part in text.split(',') {
            let part_offset = offset;
            let start = offset + (part.len() - part.trim_start().len());
            offset += part.len() + 1;
            let Some((v, p)) = part.split_once(':') else {
                return Err(err(start, format!("expected `value:probability`, found `{}`", part.trim())));
            };
            let value: u32 = v
                .trim()
                .parse()
                .map_err(|_| err(start, format!("bad degree value `{}`", v.trim())))?;
            let pstart = part_offset + v.len() + 1;
            let prob: f64 = p
                .trim()
                .parse()
                .map_err(|_| err(pstart, format!("bad probability `{}`", p.trim())))?;
            if value == 0 {
                return Err(err(start, "degree values must be at least 1".into()));
            }
            if !(prob > 0.0 && prob <= 1.0) {
                return Err(err(pstart, format!("probability {prob} outside (0, 1]")));
            }
            if atoms.iter().any(|a: &(u32, f64)| a.0 == value) {
                return Err(err(start, format!("duplicate degree value {value}")));
            }
            atoms.push((value, prob));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > PARSE_SUM_TOL {
            return Err(err(text.len(), format!("probabilities sum to {total}, not 1")));
        }
        Self::new(normalized(atoms))
    }
}

/// Points together with their stub counts.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedPointSet<T> {
    points: PointSet<T>,
    degrees: Vec<u32>,
}

impl<T: Real> MarkedPointSet<T> {
    pub fn new(points: PointSet<T>, degrees: Vec<u32>) -> Result<Self> {
        if degrees.len() != points.len() {
            return Err(Error::contract(format!(
                "{} degrees for {} points",
                degrees.len(),
                points.len()
            )));
        }
        if let Some(i) = degrees.iter().position(|&k| k == 0) {
            return Err(Error::contract(format!("point {i} has no stubs")));
        }
        Ok(Self { points, degrees })
    }

    pub fn points(&self) -> &PointSet<T> {
        &self.points
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn total_stubs(&self) -> u64 {
        self.degrees.iter().map(|&k| k as u64).sum()
    }

    /// Relabels points so that new point `i` is old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let degrees = perm.iter().map(|&i| self.degrees[i]).collect();
        Self { points: self.points.subset(perm), degrees }
    }
}
