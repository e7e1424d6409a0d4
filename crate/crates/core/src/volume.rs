//! Dynamical volume estimation: exact box-overlap formulas, Monte Carlo
//! overlap volumes under linear maps, decay-exponent fits, and the
//! empirical optimal-decay exponent for diagonal flows of `SL(n,R)`.
//!
//! Monte Carlo sampling is keyed by `(seed, shard, counter)`, shards are
//! reduced in index order, and hit counts are integers, so estimates are
//! bit-identical across thread counts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::{self, Mat};
use crate::rng::CounterRng;

// ---------------------------------------------------------------------------
// Shapes
// ---------------------------------------------------------------------------

/// A compact body with the origin in its interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Axis-aligned box `Π [-R_i, R_i]`.
    Box { half_widths: Vec<f64> },
    /// Euclidean ball of the given radius.
    Ball { radius: f64, dim: usize },
    /// Euclidean ball tagged as rotation-invariant test body for
    /// bi-invariant flows.
    KInvariantBall { radius: f64, dim: usize },
}

impl Shape {
    pub fn validate(&self) -> Result<(), Error> {
        let ok = match self {
            Shape::Box { half_widths } => {
                !half_widths.is_empty() && half_widths.iter().all(|&r| r > 0.0)
            }
            Shape::Ball { radius, dim } | Shape::KInvariantBall { radius, dim } => {
                *radius > 0.0 && *dim >= 1
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "shape must have positive extents".into(),
            ))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Box { half_widths } => half_widths.len(),
            Shape::Ball { dim, .. } | Shape::KInvariantBall { dim, .. } => *dim,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Shape::Box { half_widths } => half_widths
                .iter()
                .zip(x)
                .all(|(&r, &xi)| xi.abs() <= r),
            Shape::Ball { radius, .. } | Shape::KInvariantBall { radius, .. } => {
                x.iter().map(|v| v * v).sum::<f64>() <= radius * radius
            }
        }
    }

    /// Half-widths of the axis-aligned bounding box.
    pub fn bounding_half_widths(&self) -> Vec<f64> {
        match self {
            Shape::Box { half_widths } => half_widths.clone(),
            Shape::Ball { radius, dim } | Shape::KInvariantBall { radius, dim } => {
                vec![*radius; *dim]
            }
        }
    }

    /// Exact volume of the body.
    pub fn volume(&self) -> f64 {
        match self {
            Shape::Box { half_widths } => half_widths.iter().map(|r| 2.0 * r).product(),
            Shape::Ball { radius, dim } | Shape::KInvariantBall { radius, dim } => {
                unit_ball_volume(*dim) * radius.powi(*dim as i32)
            }
        }
    }
}

/// Volume of the unit ball via the two-step recurrence
/// `V_n = 2π/n · V_{n-2}`.
fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        n => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub shards: u32,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, shards: u32) -> Result<Self, Error> {
        if samples < 1_000 {
            return Err(Error::InvalidInput(
                "need at least 1000 samples".into(),
            ));
        }
        if shards < 1 {
            return Err(Error::InvalidInput("need at least one shard".into()));
        }
        Ok(McConfig {
            samples,
            seed,
            shards,
        })
    }
}

/// A Monte Carlo volume estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Estimate `vol(S ∩ gS)` by uniform sampling in the bounding box of `S`:
/// a point counts when it lies in `S` and `g^{-1} x` does too.
pub fn mc_overlap(shape: &Shape, g: &Mat, cfg: &McConfig) -> Result<McEstimate, Error> {
    shape.validate()?;
    let n = shape.dim();
    if g.len() != n || g.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.len(),
        });
    }
    let det = numeric::det(g);
    if det.abs() < 1e-150 {
        return Err(Error::SingularMap { det });
    }
    let g_inv = numeric::inverse(g)?;
    let half = shape.bounding_half_widths();
    let box_vol: f64 = half.iter().map(|r| 2.0 * r).product();

    let shards = cfg.shards as u64;
    let base = cfg.samples / shards;
    let remainder = cfg.samples % shards;
    // Shard s draws `base` samples plus one of the remainder; reduction is
    // an integer sum in shard order.
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = base + u64::from(shard < remainder);
            let mut rng = CounterRng::new(cfg.seed, shard);
            let mut local = 0u64;
            let mut x = vec![0.0f64; n];
            for _ in 0..count {
                for (xi, &r) in x.iter_mut().zip(&half) {
                    *xi = rng.next_range(-r, r);
                }
                if shape.contains(&x) && shape.contains(&numeric::mat_vec(&g_inv, &x)) {
                    local += 1;
                }
            }
            local
        })
        .collect::<Vec<u64>>()
        .into_iter()
        .sum();

    let p = hits as f64 / cfg.samples as f64;
    let estimate = box_vol * p;
    let stderr = box_vol * (p * (1.0 - p) / cfg.samples as f64).sqrt();
    Ok(McEstimate {
        estimate,
        stderr,
        hits,
        samples: cfg.samples,
    })
}

// ---------------------------------------------------------------------------
// Exact overlap for boxes under diagonal flows
// ---------------------------------------------------------------------------

/// `vol(S ∩ exp(t·diag(u)) S)` for the box with the given half-widths:
/// the per-axis overlap is `2 R_i min(1, e^{t u_i})`. Exponents should sum
/// to zero (volume-preserving flow).
pub fn exact_box_overlap(half_widths: &[f64], exponents: &[f64], t: f64) -> f64 {
    debug_assert_eq!(half_widths.len(), exponents.len());
    debug_assert!(exponents.iter().sum::<f64>().abs() < 1e-9);
    half_widths
        .iter()
        .zip(exponents)
        .map(|(&r, &u)| 2.0 * r * (t * u).exp().min(1.0))
        .product()
}

/// Diagonal flow matrix `diag(e^{t u_1}, ..., e^{t u_n})`.
pub fn diag_flow(u: &[f64], t: f64) -> Mat {
    let n = u.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = (t * u[i]).exp();
    }
    m
}

// ---------------------------------------------------------------------------
// Decay fits
// ---------------------------------------------------------------------------

/// Where decay-fit volumes come from.
#[derive(Debug, Clone, Copy)]
pub enum VolumeSource<'a> {
    MonteCarlo(&'a McConfig),
    /// Closed-form box overlap (zero noise); valid for box shapes only.
    ExactBox,
}

/// Fitted exponential decay rate of `vol(S ∩ g_t S)` along a flow line.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub direction: Vec<f64>,
    /// Decay exponent: `vol ~ e^{-kappa t}`.
    pub kappa: f64,
    /// Coefficient of determination of the log-volume regression.
    pub r2: f64,
    /// `(t_min, t_max)` actually used after the noise floor.
    pub window: (f64, f64),
    pub points_used: usize,
}

/// Signal floor: points with estimate below `10 x stderr` are dropped.
pub const SIGNAL_FLOOR: f64 = 10.0;

/// Minimum usable grid points for a fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Least-squares fit of `log vol(S ∩ g_t S)` against `t` over the grid.
pub fn decay_fit(
    shape: &Shape,
    direction: &[f64],
    t_grid: &[f64],
    source: VolumeSource<'_>,
) -> Result<DecayFit, Error> {
    shape.validate()?;
    if direction.len() != shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.dim(),
            got: direction.len(),
        });
    }
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &t in t_grid {
        let value = match source {
            VolumeSource::MonteCarlo(cfg) => {
                let est = mc_overlap(shape, &diag_flow(direction, t), cfg)?;
                if est.estimate <= SIGNAL_FLOOR * est.stderr || est.estimate <= 0.0 {
                    continue;
                }
                est.estimate
            }
            VolumeSource::ExactBox => {
                let Shape::Box { half_widths } = shape else {
                    return Err(Error::InvalidInput(
                        "exact volumes are available for boxes only".into(),
                    ));
                };
                let v = exact_box_overlap(half_widths, direction, t);
                if v <= 0.0 {
                    continue;
                }
                v
            }
        };
        points.push((t, value.ln()));
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientSignal {
            usable: points.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let n = points.len() as f64;
    let mean_t = points.iter().map(|(t, _)| t).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(t, _)| (t - mean_t).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|(t, y)| (t - mean_t) * (y - mean_y))
        .sum();
    let syy: f64 = points.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 {
        (sxy * sxy) / (sxx * syy)
    } else {
        1.0
    };
    let window = (
        points.iter().map(|(t, _)| *t).fold(f64::INFINITY, f64::min),
        points
            .iter()
            .map(|(t, _)| *t)
            .fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(DecayFit {
        direction: direction.to_vec(),
        kappa: -slope,
        r2,
        window,
        points_used: points.len(),
    })
}

// ---------------------------------------------------------------------------
// q estimation for SL(n,R) diagonal flows
// ---------------------------------------------------------------------------

/// Haar growth exponent along a direction of the trace-zero diagonal space:
/// `Σ_{i<j} |u_i - u_j|` (the dominant-chamber form of the root sum).
pub fn rho_h_direction(u: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            acc += (u[i] - u[j]).abs();
        }
    }
    acc
}

/// Decay exponent of the standard representation along a direction:
/// `1/2 Σ |u_i|`.
pub fn rho_v_standard_direction(u: &[f64]) -> f64 {
    0.5 * u.iter().map(|x| x.abs()).sum::<f64>()
}

/// Minimum distance from the walls accepted by [`q_estimate`].
pub const WALL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct DirectionRow {
    pub direction: Vec<f64>,
    pub rho_h: f64,
    pub kappa: f64,
    pub ratio: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QEstimate {
    pub q_hat: f64,
    pub table: Vec<DirectionRow>,
    pub warnings: Vec<String>,
}

/// Empirical optimal decay exponent for the `SL(n,R)` action defined by the
/// shape's ambient space: sweep dominant unit directions of the diagonal
/// flow, fit the volume decay `kappa` on each, and take the largest ratio
/// `rho_h / kappa`. Directions touching a Weyl wall are rejected with a
/// warning (the Haar density degenerates there).
pub fn q_estimate(
    shape: &Shape,
    directions: &[Vec<f64>],
    t_grid: &[f64],
    cfg: &McConfig,
) -> Result<QEstimate, Error> {
    let n = shape.dim();
    let mut table = Vec::new();
    let mut warnings = Vec::new();
    for u in directions {
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        if u.iter().sum::<f64>().abs() > 1e-9 {
            warnings.push(format!("direction {u:?} rejected: not trace-free"));
            continue;
        }
        let mut sorted = u.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        if sorted != *u {
            warnings.push(format!("direction {u:?} rejected: not dominant"));
            continue;
        }
        let wall_gap = u
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min);
        if wall_gap < WALL_TOLERANCE {
            warnings.push(format!(
                "direction {u:?} rejected: within {WALL_TOLERANCE} of a Weyl wall"
            ));
            continue;
        }
        let fit = decay_fit(shape, u, t_grid, VolumeSource::MonteCarlo(cfg))?;
        if fit.kappa <= 0.0 {
            warnings.push(format!("direction {u:?} rejected: no measurable decay"));
            continue;
        }
        let rho_h = rho_h_direction(u);
        table.push(DirectionRow {
            direction: u.clone(),
            rho_h,
            kappa: fit.kappa,
            ratio: rho_h / fit.kappa,
            r2: fit.r2,
        });
    }
    if table.is_empty() {
        return Err(Error::InsufficientSignal {
            usable: 0,
            needed: 1,
        });
    }
    let q_hat = table.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(QEstimate {
        q_hat,
        table,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// Sandwich check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SandwichCheck {
    /// Smallest compensated volume `vol · e^{+rho_V(t u)}` over the window.
    pub c1_hat: f64,
    /// Largest compensated volume over the window.
    pub c2_hat: f64,
    pub pass: bool,
    pub points_used: usize,
}

/// Maximum allowed spread of the compensated series.
pub const SANDWICH_SPREAD: f64 = 1e3;

/// Test the two-sided exponential envelope: compensate the measured volumes
/// by `e^{+rho_V(t u)}` for the standard-representation decay along `u` and
/// require the spread of the compensated series to stay bounded.
pub fn sandwich_check(
    shape: &Shape,
    u: &[f64],
    t_grid: &[f64],
    cfg: &McConfig,
) -> Result<SandwichCheck, Error> {
    shape.validate()?;
    let mut compensated: Vec<f64> = Vec::new();
    for &t in t_grid {
        let est = mc_overlap(shape, &diag_flow(u, t), cfg)?;
        if est.estimate <= SIGNAL_FLOOR * est.stderr || est.estimate <= 0.0 {
            continue;
        }
        let rho = rho_v_standard_direction(u) * t.abs();
        compensated.push(est.estimate * rho.exp());
    }
    if compensated.len() < 2 {
        return Err(Error::InsufficientSignal {
            usable: compensated.len(),
            needed: 2,
        });
    }
    let c1_hat = compensated.iter().copied().fold(f64::INFINITY, f64::min);
    let c2_hat = compensated
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SandwichCheck {
        c1_hat,
        c2_hat,
        pass: c2_hat / c1_hat < SANDWICH_SPREAD,
        points_used: compensated.len(),
    })
}
