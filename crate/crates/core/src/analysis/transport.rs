use std::fmt;
use std::str::FromStr;

use super::components::path_components;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::matching::Matching;
use crate::scalar::Real;

const MAX_CELLS: usize = 50_000_000;

/// Who sends unit masses to whom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportRule {
    /// Every point sends 1 to each of its partners.
    UnitMassPerEdgeEndpoint,
    /// Every vertex of a path component sends 1 to the endpoint nearer in graph
    /// distance, ties to the endpoint with the smaller index.
    PathEndpoint,
}

impl FromStr for TransportRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit-mass-per-edge-endpoint" => Ok(Self::UnitMassPerEdgeEndpoint),
            "path-endpoint" => Ok(Self::PathEndpoint),
            other => Err(Error::UnknownRule(other.to_string())),
        }
    }
}

impl fmt::Display for TransportRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UnitMassPerEdgeEndpoint => "unit-mass-per-edge-endpoint",
            Self::PathEndpoint => "path-endpoint",
        })
    }
}

/// Mass sent and received per cell of a grid tiling the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportLedger {
    pub cell_side: f64,
    pub per_axis: usize,
    pub sent: Vec<u64>,
    pub received: Vec<u64>,
}

impl TransportLedger {
    pub fn total_sent(&self) -> u64 {
        self.sent.iter().sum()
    }

    pub fn total_received(&self) -> u64 {
        self.received.iter().sum()
    }

    /// `received - sent` per cell.
    pub fn discrepancy(&self) -> Vec<i64> {
        self.sent.iter().zip(&self.received).map(|(&s, &r)| r as i64 - s as i64).collect()
    }
}

/// Mass ledger of `rule` on a torus, with cells of side `L / round(L / cell_side)`.
pub fn transport_balance<T: Real>(
    points: &PointSet<T>,
    matching: &Matching<T>,
    cell_side: f64,
    rule: TransportRule,
) -> Result<TransportLedger> {
    let bx = points.bbox();
    if !bx.periodic {
        return Err(Error::contract("transport balance needs a periodic box"));
    }
    if matching.point_count() != points.len() {
        return Err(Error::contract("matching and point set sizes differ"));
    }
    if !(cell_side > 0.0) {
        return Err(Error::Parameter(format!("cell side must be positive, got {cell_side}")));
    }
    let side = bx.side.as_f64();
    let k = ((side / cell_side).round() as usize).max(1);
    let total = k
        .checked_pow(bx.dim as u32)
        .filter(|&t| t <= MAX_CELLS)
        .ok_or_else(|| Error::Resource(format!("{k}^{} cells exceed the limit of {MAX_CELLS}", bx.dim)))?;
    let cs = side / k as f64;
    let cell: Vec<usize> = points
        .iter()
        .map(|p| p.iter().fold(0, |id, &x| id * k + ((x.as_f64() / cs) as usize).min(k - 1)))
        .collect();
    let mut ledger = TransportLedger { cell_side: cs, per_axis: k, sent: vec![0; total], received: vec![0; total] };
    let mut send = |from: usize, to: usize| {
        ledger.sent[cell[from]] += 1;
        ledger.received[cell[to]] += 1;
    };
    match rule {
        TransportRule::UnitMassPerEdgeEndpoint => {
            for e in matching.edges() {
                send(e.i, e.j);
                send(e.j, e.i);
            }
        }
        TransportRule::PathEndpoint => {
            for path in path_components(matching) {
                let len = path.len();
                let (first, last) = (path[0], path[len - 1]);
                for (pos, &v) in path.iter().enumerate() {
                    let (to_first, to_last) = (pos, len - 1 - pos);
                    let target = match to_first.cmp(&to_last) {
                        std::cmp::Ordering::Less => first,
                        std::cmp::Ordering::Greater => last,
                        std::cmp::Ordering::Equal => first.min(last),
                    };
                    send(v, target);
                }
            }
        }
    }
    Ok(ledger)
}
