//! Sphere-averaged Jones and bracket polynomials of curve collections:
//! the normalized bracket of every regular projection, averaged over
//! directions on S².
//!
//! For polygonal curves only finitely many diagram types occur, so the
//! estimator keeps a census keyed on the canonical diagram signature and
//! computes each type's polynomial exactly once. The mean is the
//! census-weighted average of the per-type polynomials, accumulated in
//! exact rationals and converted to real coefficients at the end; results
//! are therefore independent of the worker partition.

use crate::bracket::BracketEngine;
use crate::diagram::DiagramError;
use crate::poly::{LaurentPoly, TPoly};
use crate::projection::{project, CurveError, CurveSet, ProjectionError, ProjectionOutcome};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SphereError {
    #[error("sample {sample}: all {attempts} redraws degenerate ({last_reason})")]
    RedrawsExhausted {
        sample: usize,
        attempts: usize,
        last_reason: String,
    },
    #[error("projection: {0}")]
    Projection(#[from] ProjectionError),
    #[error("curves: {0}")]
    Curves(#[from] CurveError),
    #[error("bracket failed on diagram type {signature}: {source}")]
    Bracket {
        signature: String,
        source: DiagramError,
    },
    #[error("sampler config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerMode {
    /// Deterministic low-discrepancy lattice; no error bars.
    FibonacciLattice,
    /// Seeded uniform directions via normalized isotropic 3D Gaussians.
    UniformRandom,
}

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub mode: SamplerMode,
    pub sample_count: usize,
    pub seed: u64,
    pub eps: f64,
    pub max_redraws: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            mode: SamplerMode::FibonacciLattice,
            sample_count: 50_000,
            seed: 0,
            eps: crate::projection::DEFAULT_PROJECTION_EPS,
            max_redraws: 8,
        }
    }
}

/// One diagram type seen on the sphere.
#[derive(Debug, Clone)]
pub struct TypeEntry {
    pub count: u64,
    /// the per-type polynomial (jones_A or bracket, exact coefficients)
    pub value: LaurentPoly,
    /// a direction that produced this type
    pub representative: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct SphereEstimate {
    /// census-weighted average, real coefficients, in A
    pub mean: LaurentPoly,
    /// per-exponent standard error of the mean (random mode only)
    pub stderr: BTreeMap<i64, f64>,
    pub samples_used: u64,
    pub degenerate_count: u64,
    pub type_census: BTreeMap<String, TypeEntry>,
}

impl SphereEstimate {
    pub fn mean_t(&self) -> TPoly {
        self.mean.to_t()
    }

    /// Census cache hits: samples that reused an already-computed type.
    pub fn cache_hits(&self) -> u64 {
        self.samples_used - self.type_census.len() as u64
    }

    pub fn hit_rate(&self) -> f64 {
        if self.samples_used == 0 {
            0.0
        } else {
            self.cache_hits() as f64 / self.samples_used as f64
        }
    }
}

fn golden_ratio() -> f64 {
    (1.0 + 5.0f64.sqrt()) / 2.0
}

/// The i-th point of an n-point Fibonacci lattice on S².
pub fn fibonacci_direction(i: usize, n: usize) -> [f64; 3] {
    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = 2.0 * std::f64::consts::PI * (i as f64) / golden_ratio();
    [r * phi.cos(), r * phi.sin(), z]
}

fn directions(cfg: &SamplerConfig) -> Result<Vec<[f64; 3]>, SphereError> {
    if cfg.sample_count == 0 {
        return Err(SphereError::Config("sample_count must be >= 1".into()));
    }
    if cfg.max_redraws == 0 {
        return Err(SphereError::Config("max_redraws must be >= 1".into()));
    }
    match cfg.mode {
        SamplerMode::FibonacciLattice => Ok((0..cfg.sample_count)
            .map(|i| fibonacci_direction(i, cfg.sample_count))
            .collect()),
        SamplerMode::UniformRandom => {
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
            let mut out = Vec::with_capacity(cfg.sample_count);
            let gauss = |rng: &mut ChaCha12Rng| {
                // Box-Muller
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            };
            while out.len() < cfg.sample_count {
                let v = [gauss(&mut rng), gauss(&mut rng), gauss(&mut rng)];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if n > 1e-6 {
                    out.push([v[0] / n, v[1] / n, v[2] / n]);
                }
            }
            Ok(out)
        }
    }
}

fn rotate_about_axis(v: [f64; 3], axis: usize, angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let (i, j) = match axis {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let mut out = v;
    out[i] = c * v[i] - s * v[j];
    out[j] = s * v[i] + c * v[j];
    out
}

/// Project along `dir`, redrawing with a deterministic jitter when the
/// direction is irregular. Returns the diagram, the direction actually
/// used, and the number of degenerate draws encountered.
fn project_with_redraw(
    curves: &CurveSet,
    dir: [f64; 3],
    sample: usize,
    cfg: &SamplerConfig,
) -> Result<(crate::diagram::LinkoidDiagram, [f64; 3], u64), SphereError> {
    let mut d = dir;
    let mut degenerate = 0u64;
    let mut last_reason = String::new();
    for attempt in 0..cfg.max_redraws {
        match project(curves, d, cfg.eps)? {
            ProjectionOutcome::Diagram(diagram) => return Ok((diagram, d, degenerate)),
            ProjectionOutcome::Degenerate(deg) => {
                degenerate += 1;
                last_reason = format!("{:?}: {}", deg.reason, deg.detail);
                let axis = (sample + attempt) % 3;
                let angle = 10.0 * cfg.eps * (1u64 << attempt.min(40)) as f64;
                d = rotate_about_axis(d, axis, angle);
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                d = [d[0] / n, d[1] / n, d[2] / n];
            }
        }
    }
    Err(SphereError::RedrawsExhausted {
        sample,
        attempts: cfg.max_redraws,
        last_reason,
    })
}

#[derive(Clone, Copy)]
enum Quantity {
    Jones,
    Bracket,
}

fn estimate(
    curves: &CurveSet,
    cfg: &SamplerConfig,
    engine: &BracketEngine,
    what: Quantity,
) -> Result<SphereEstimate, SphereError> {
    if curves.components.is_empty() {
        return Err(SphereError::Projection(ProjectionError::EmptyCurves));
    }
    // no strict point validation here: closure interpolation at s = 0
    // legitimately appends a zero-length edge, dropped during projection
    let dirs = directions(cfg)?;

    // phase 1: classify every direction by diagram signature
    let classified: Result<Vec<(String, [f64; 3], u64)>, SphereError> = dirs
        .par_iter()
        .enumerate()
        .map(|(i, &dir)| {
            let (diagram, used, degenerate) = project_with_redraw(curves, dir, i, cfg)?;
            Ok((diagram.canonical_signature(), used, degenerate))
        })
        .collect();
    let classified = classified?;

    let mut census: BTreeMap<String, (u64, [f64; 3])> = BTreeMap::new();
    let mut degenerate_count = 0u64;
    for (sig, used, deg) in classified {
        degenerate_count += deg;
        let e = census.entry(sig).or_insert((0, used));
        e.0 += 1;
    }

    // phase 2: one polynomial per type, from its representative direction
    let entries: Result<Vec<(String, TypeEntry)>, SphereError> = census
        .par_iter()
        .map(|(sig, &(count, rep))| {
            let (diagram, _, _) = project_with_redraw(curves, rep, 0, cfg)?;
            debug_assert_eq!(&diagram.canonical_signature(), sig);
            let value = match what {
                Quantity::Jones => engine.jones(&diagram).map(|r| r.jones_a),
                Quantity::Bracket => engine.bracket(&diagram),
            }
            .map_err(|e| SphereError::Bracket {
                signature: sig.clone(),
                source: e,
            })?;
            Ok((
                sig.clone(),
                TypeEntry {
                    count,
                    value,
                    representative: rep,
                },
            ))
        })
        .collect();
    let type_census: BTreeMap<String, TypeEntry> = entries?.into_iter().collect();

    // phase 3: exact census-weighted mean, then stderr per exponent
    let n = cfg.sample_count as u64;
    let mut mean_exact = LaurentPoly::zero();
    for entry in type_census.values() {
        let w = BigRational::new(BigInt::from(entry.count), BigInt::from(n));
        mean_exact += &entry.value.scale_rat(&w);
    }
    let mean = mean_exact.to_real();

    let mut stderr = BTreeMap::new();
    if cfg.mode == SamplerMode::UniformRandom && n > 1 {
        let mut exps: Vec<i64> = Vec::new();
        for e in type_census.values() {
            exps.extend(e.value.exponents());
        }
        exps.sort_unstable();
        exps.dedup();
        for e in exps {
            let m = mean_exact.coeff_f64(e);
            let mut ss = 0.0;
            for entry in type_census.values() {
                let v = entry.value.coeff_f64(e);
                ss += entry.count as f64 * (v - m) * (v - m);
            }
            let var = ss / (n as f64 - 1.0);
            stderr.insert(e, (var / n as f64).sqrt());
        }
    }

    Ok(SphereEstimate {
        mean,
        stderr,
        samples_used: n,
        degenerate_count,
        type_census,
    })
}

/// Sphere-averaged Jones polynomial (in A; convert with `mean_t`).
pub fn estimate_jones(curves: &CurveSet, cfg: &SamplerConfig) -> Result<SphereEstimate, SphereError> {
    let engine = BracketEngine::new(crate::bracket::BracketOptions::sphere_default());
    estimate_jones_with(curves, cfg, &engine)
}

pub fn estimate_jones_with(
    curves: &CurveSet,
    cfg: &SamplerConfig,
    engine: &BracketEngine,
) -> Result<SphereEstimate, SphereError> {
    estimate(curves, cfg, engine, Quantity::Jones)
}

/// Sphere-averaged (un-normalized) bracket polynomial.
pub fn estimate_bracket(
    curves: &CurveSet,
    cfg: &SamplerConfig,
) -> Result<SphereEstimate, SphereError> {
    let engine = BracketEngine::new(crate::bracket::BracketOptions::sphere_default());
    estimate_bracket_with(curves, cfg, &engine)
}

pub fn estimate_bracket_with(
    curves: &CurveSet,
    cfg: &SamplerConfig,
    engine: &BracketEngine,
) -> Result<SphereEstimate, SphereError> {
    estimate(curves, cfg, engine, Quantity::Bracket)
}

/// Close the endpoints gradually and estimate at each parameter value.
pub fn sweep(
    curves: &CurveSet,
    s_values: &[f64],
    cfg: &SamplerConfig,
) -> Result<Vec<(f64, SphereEstimate)>, SphereError> {
    let engine = BracketEngine::new(crate::bracket::BracketOptions::sphere_default());
    let mut out = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let closed = curves.interpolate_closure(s)?;
        out.push((s, estimate_jones_with(&closed, cfg, &engine)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
