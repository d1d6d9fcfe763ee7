//! Seeded sampling.
//!
//! Every random draw comes from ChaCha8 (`rand_chacha` 0.9) seeded with
//! `seed_from_u64` and switched to a named stream with `set_stream`, so a
//! given `(seed, stream)` pair yields the same numbers on every platform.
//! Positions and degrees use different streams: changing the degree seed
//! never moves a point.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use super::{DegreeDistribution, MarkedPointSet};
use crate::error::{Error, Result};
use crate::geometry::{BoxSpec, PointSet};
use crate::scalar::Real;

/// Largest expected point count accepted by [`sample_poisson`].
pub const MAX_EXPECTED_POINTS: f64 = 1e9;

/// Threshold between inversion and transformed rejection.
const INVERSION_MAX_MEAN: f64 = 30.0;

/// Named random streams derived from one user seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Positions = 1,
    Degrees = 2,
    Replicas = 3,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// The `index`-th 64-bit word of a stream; used to hand out replica seeds.
pub fn derive_seed(seed: u64, stream: Stream, index: u64) -> u64 {
    let mut rng = stream_rng(seed, stream);
    rng.set_word_pos(index as u128 * 2);
    rng.next_u64()
}

/// Homogeneous Poisson process of the given intensity on the box.
pub fn sample_poisson<T: Real>(bbox: BoxSpec<T>, intensity: f64, seed: u64) -> Result<PointSet<T>> {
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::Parameter(format!("intensity must be non-negative, got {intensity}")));
    }
    let mean = intensity * bbox.volume().as_f64();
    if mean > MAX_EXPECTED_POINTS {
        return Err(Error::Resource(format!(
            "expected {mean:.3e} points exceeds the limit of {MAX_EXPECTED_POINTS:.0e}"
        )));
    }
    let mut rng = stream_rng(seed, Stream::Positions);
    let n = poisson(&mut rng, mean) as usize;
    let side = bbox.side.as_f64();
    let mut coords = Vec::with_capacity(n * bbox.dim);
    for _ in 0..n * bbox.dim {
        let mut x = T::of(rng.random::<f64>() * side);
        if x >= bbox.side {
            x = T::zero();
        }
        coords.push(x);
    }
    PointSet::new(bbox, coords)
}

/// I.i.d. stub counts with law `mu`, drawn by the alias method.
pub fn sample_degrees<T: Real>(
    points: PointSet<T>,
    mu: &DegreeDistribution,
    seed: u64,
) -> Result<MarkedPointSet<T>> {
    let degrees = if let [(k, _)] = mu.atoms() {
        vec![*k; points.len()]
    } else {
        let weights: Vec<f64> = mu.atoms().iter().map(|a| a.1).collect();
        let alias = WeightedAliasIndex::new(weights)
            .map_err(|e| Error::Parameter(format!("degree law: {e}")))?;
        let mut rng = stream_rng(seed, Stream::Degrees);
        (0..points.len())
            .map(|_| mu.atoms()[alias.sample(&mut rng)].0)
            .collect()
    };
    MarkedPointSet::new(points, degrees)
}

/// Positions and degrees from the two streams of one seed.
pub fn sample_marked<T: Real>(
    bbox: BoxSpec<T>,
    intensity: f64,
    mu: &DegreeDistribution,
    seed: u64,
) -> Result<MarkedPointSet<T>> {
    let points = sample_poisson(bbox, intensity, seed)?;
    sample_degrees(points, mu, seed)
}

/// Poisson variate: sequential inversion for small means, Hörmann's PTRS
/// transformed rejection otherwise.
pub(crate) fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean <= INVERSION_MAX_MEAN {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
            // cdf can stall just below 1 from rounding
            if p == 0.0 && k as f64 > mean {
                break;
            }
        }
        return k;
    }
    let slam = mean.sqrt();
    let loglam = mean.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.random::<f64>() - 0.5;
        let v: f64 = rng.random();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        if v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln() <= -mean + k * loglam - ln_factorial(k) {
            return k as u64;
        }
    }
}

/// `ln(k!)` via Stirling's series; exact table for small `k`.
fn ln_factorial(k: f64) -> f64 {
    const SMALL: [f64; 10] = [
        0.0,
        0.0,
        std::f64::consts::LN_2,
        1.791_759_469_228_055,
        3.178_053_830_347_945_7,
        4.787_491_742_782_046,
        6.579_251_212_010_101,
        8.525_161_361_065_415,
        10.604_602_902_745_25,
        12.801_827_480_081_469,
    ];
    if k < 10.0 {
        return SMALL[k as usize];
    }
    let n = k + 1.0;
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    (n - 0.5) * n.ln() - n
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_intensity_is_empty() {
        let bx = BoxSpec::torus(2, 10.0).unwrap();
        assert!(sample_poisson::<f64>(bx, 0.0, 1).unwrap().is_empty());
    }

    #[test]
    fn bad_intensity_and_huge_windows() {
        let bx = BoxSpec::torus(3, 1e4).unwrap();
        assert!(matches!(sample_poisson::<f64>(bx, 1.0, 0), Err(Error::Resource(_))));
        assert!(sample_poisson::<f64>(bx, -1.0, 0).is_err());
    }

    #[test]
    fn same_seed_same_points() {
        let bx = BoxSpec::torus(2, 10.0).unwrap();
        let a = sample_poisson::<f64>(bx, 1.0, 42).unwrap();
        let b = sample_poisson::<f64>(bx, 1.0, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_poisson::<f64>(bx, 1.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degree_seed_does_not_move_points() {
        let bx = BoxSpec::torus(2, 10.0).unwrap();
        let mu: DegreeDistribution = "1:0.5,2:0.5".parse().unwrap();
        let pts = sample_poisson::<f64>(bx, 1.0, 5).unwrap();
        let a = sample_degrees(pts.clone(), &mu, 1).unwrap();
        let b = sample_degrees(pts.clone(), &mu, 2).unwrap();
        assert_eq!(a.points(), b.points());
        assert_ne!(a.degrees(), b.degrees());
    }

    #[test]
    fn point_mass_degrees() {
        let bx = BoxSpec::torus(2, 10.0).unwrap();
        let pts = sample_poisson::<f64>(bx, 1.0, 5).unwrap();
        let m = sample_degrees(pts, &DegreeDistribution::point_mass(2).unwrap(), 0).unwrap();
        assert!(m.degrees().iter().all(|&k| k == 2));
    }

    #[test]
    fn ln_factorial_matches_sum() {
        for k in 0..200u32 {
            let exact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
            assert!((ln_factorial(k as f64) - exact).abs() < 1e-10 * exact.max(1.0), "k = {k}");
        }
    }

    #[test]
    fn poisson_moments_both_regimes() {
        let mut rng = stream_rng(11, Stream::Positions);
        for mean in [0.3, 4.0, 29.0, 31.0, 100.0, 2500.0] {
            let n = 20_000;
            let xs: Vec<f64> = (0..n).map(|_| poisson(&mut rng, mean) as f64).collect();
            let m = xs.iter().sum::<f64>() / n as f64;
            let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (mean / n as f64).sqrt();
            assert!((m - mean).abs() < 5.0 * se, "mean {mean}: got {m}");
            assert!((v / mean - 1.0).abs() < 0.06, "mean {mean}: var {v}");
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..5).map(|i| derive_seed(9, Stream::Replicas, i)).collect();
        let mut t = s.clone();
        t.dedup();
        assert_eq!(s.len(), t.len());
        assert_eq!(s[3], derive_seed(9, Stream::Replicas, 3));
    }
}
