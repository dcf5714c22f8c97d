//! Path generation: exact Gaussian sampling through the covariance
//! Cholesky factor, coupled (B, B^H) generation through the Volterra
//! kernel, path inversion recovering the driver, and the fractional
//! Ornstein-Uhlenbeck process.
//!
//! Determinism contract: a path's variates come from a ChaCha12 stream
//! keyed by splitmix64 expansion of (seed, path index), so ensembles are
//! bitwise reproducible for a given crate version regardless of how the
//! paths are scheduled across threads. Normal variates use the ziggurat
//! sampler from `rand_distr`.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::cov::{covariance_matrix, AlphaParam, Regime, TimeGrid};
use crate::error::{Error, Result};
use crate::ops::pow_plus;
use crate::specfun::{self, regularized_gamma_diff, QuadratureConfig};

/// How an ensemble was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact Gaussian vector via the covariance Cholesky factor.
    Cholesky,
    /// Coupled (B, B^H) via cell-averaged Volterra kernel weights.
    Volterra,
}

/// A batch of simulated paths on a common grid.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    grid: TimeGrid,
    alpha: AlphaParam,
    hfbm_paths: Vec<Vec<f64>>,
    bm_paths: Option<Vec<Vec<f64>>>,
    seed: u64,
    method: Method,
    jitter: f64,
}

impl PathEnsemble {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn alpha(&self) -> &AlphaParam {
        &self.alpha
    }

    pub fn hfbm_paths(&self) -> &[Vec<f64>] {
        &self.hfbm_paths
    }

    /// Driving Brownian paths; present exactly when method is Volterra.
    pub fn bm_paths(&self) -> Option<&[Vec<f64>]> {
        self.bm_paths.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Diagonal jitter applied during factorization (Cholesky method).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn n_paths(&self) -> usize {
        self.hfbm_paths.len()
    }
}

/// Mean-reversion parameters of the fractional Ornstein-Uhlenbeck
/// process dX = -θ X dt + dB^H.
#[derive(Debug, Clone, Copy)]
pub struct FouParams {
    theta: f64,
    x0: f64,
}

impl FouParams {
    pub fn new(theta: f64, x0: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() || !x0.is_finite() {
            return Err(Error::Domain(format!(
                "mean reversion needs theta > 0 and finite x0, got theta = {theta}, x0 = {x0}"
            )));
        }
        Ok(Self { theta, x0 })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// One independent, reproducible stream per (seed, path index).
fn path_rng(seed: u64, path: u64) -> ChaCha12Rng {
    let mut state = seed ^ path.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn standard_normals(rng: &mut ChaCha12Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Exact sampling of the Gaussian vector (B^H(t_1), ..., B^H(t_n)) from
/// the quadrature covariance matrix. A leading t = 0 is carried as an
/// exact-zero column that the factorization treats as a zero pivot, so it
/// never enters the positive-definite part.
pub fn sample_cholesky(
    alpha: &AlphaParam,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    if n_paths == 0 {
        return Err(Error::Domain("need at least one path".into()));
    }
    let cfg = QuadratureConfig::default();
    let matrix = covariance_matrix(alpha, grid, &cfg)?;
    let factor = matrix.cholesky()?;

    let n = grid.len();
    let hfbm_paths: Vec<Vec<f64>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let z = standard_normals(&mut rng, n);
            factor.apply(&z)
        })
        .collect();

    Ok(PathEnsemble {
        grid: grid.clone(),
        alpha: *alpha,
        hfbm_paths,
        bm_paths: None,
        seed,
        method: Method::Cholesky,
        jitter: factor.jitter(),
    })
}

// Cell-averaged Volterra weights for one target row k on the uniform
// grid t_i = iΔ: w_{k,j} = (1/Δ) ∫_{t_{j-1}}^{t_j} K(t_k, s) ds
//   = k Γ(c) [P(c, log(k/(j-1))) - P(c, log(k/j))] / √Γ(α), c = (α+1)/2.
// The j = 1 cell reaches s = 0 where P(c, ∞) = 1. At α = 1 every weight
// is exactly 1 and the construction returns the driver itself.
struct VolterraWeights {
    n: usize,
    c: f64,
    gc_over_norm: f64,
    ln: Vec<f64>,
    unit: bool,
}

impl VolterraWeights {
    fn new(alpha: &AlphaParam, n: usize) -> Result<Self> {
        let c = 0.5 * (alpha.alpha() + 1.0);
        let gc_over_norm = specfun::gamma(c)? / specfun::gamma(alpha.alpha())?.sqrt();
        let ln = (0..=n).map(|i| (i.max(1) as f64).ln()).collect();
        Ok(Self {
            n,
            c,
            gc_over_norm,
            ln,
            unit: alpha.regime() == Regime::Unit,
        })
    }

    fn row(&self, k: usize, out: &mut Vec<f64>) -> Result<()> {
        out.clear();
        if self.unit {
            out.resize(k, 1.0);
            return Ok(());
        }
        debug_assert!(k >= 1 && k <= self.n);
        for j in 1..=k {
            let x_lo = if j == k { 0.0 } else { self.ln[k] - self.ln[j] };
            let x_hi = if j == 1 {
                f64::INFINITY
            } else {
                self.ln[k] - self.ln[j - 1]
            };
            let diff = regularized_gamma_diff(self.c, x_lo, x_hi)?;
            out.push(k as f64 * self.gc_over_norm * diff);
        }
        Ok(())
    }
}

fn require_volterra_grid(grid: &TimeGrid) -> Result<usize> {
    if !grid.is_uniform() || grid.points()[0] != 0.0 {
        return Err(Error::Grid(
            "Volterra sampling needs a uniform grid starting at 0".into(),
        ));
    }
    Ok(grid.len() - 1)
}

/// Coupled (B, B^H) sampling on a uniform grid over [0, T]:
/// B^H(t_k) = Σ_{j≤k} w_{k,j} ΔB_j with exact cell-averaged weights.
pub fn sample_volterra(
    alpha: &AlphaParam,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    if n_paths == 0 {
        return Err(Error::Domain("need at least one path".into()));
    }
    let n = require_volterra_grid(grid)?;
    let step = grid.spacing().expect("uniform grid has a spacing");
    let weights = VolterraWeights::new(alpha, n)?;

    // Packed lower triangle, row k starting at k(k-1)/2.
    let mut packed = Vec::with_capacity(n * (n + 1) / 2);
    let mut row = Vec::new();
    for k in 1..=n {
        weights.row(k, &mut row)?;
        packed.extend_from_slice(&row);
    }

    let sqrt_step = step.sqrt();
    let paths: Vec<(Vec<f64>, Vec<f64>)> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let increments: Vec<f64> = standard_normals(&mut rng, n)
                .into_iter()
                .map(|z| sqrt_step * z)
                .collect();
            let mut bm = vec![0.0; n + 1];
            let mut hfbm = vec![0.0; n + 1];
            for k in 1..=n {
                bm[k] = bm[k - 1] + increments[k - 1];
                let base = k * (k - 1) / 2;
                let mut acc = 0.0;
                for j in 0..k {
                    acc += packed[base + j] * increments[j];
                }
                hfbm[k] = acc;
            }
            (bm, hfbm)
        })
        .collect();

    let (bm_paths, hfbm_paths) = paths.into_iter().unzip();
    Ok(PathEnsemble {
        grid: grid.clone(),
        alpha: *alpha,
        hfbm_paths,
        bm_paths: Some(bm_paths),
        seed,
        method: Method::Volterra,
        jitter: 0.0,
    })
}

/// Terminal values B^H(T) only, drawing each path's variates in the same
/// order as [`sample_volterra`]: path p here equals the last column of
/// the full ensemble's path p bitwise, at O(n) instead of O(n²) work.
pub fn volterra_terminal_samples(
    alpha: &AlphaParam,
    t_max: f64,
    n: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_paths == 0 {
        return Err(Error::Domain("need at least one path".into()));
    }
    let grid = TimeGrid::uniform(t_max, n)?;
    let step = grid.spacing().expect("uniform grid has a spacing");
    let weights = VolterraWeights::new(alpha, n)?;
    let mut last_row = Vec::new();
    weights.row(n, &mut last_row)?;

    let sqrt_step = step.sqrt();
    Ok((0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let mut acc = 0.0;
            // Rounding order mirrors sample_volterra: scale the variate
            // into an increment first, so terminal values match bitwise.
            for w in &last_row {
                let z: f64 = StandardNormal.sample(&mut rng);
                acc += w * (sqrt_step * z);
            }
            acc
        })
        .collect())
}

/// Exact variance of the discretized terminal value: the Volterra sum
/// B^H_n(T) = Σ_j w_{n,j} ΔB_j has variance Δ Σ_j w_{n,j}², which sits
/// below T by the L² projection error of the kernel onto cell-constant
/// functions. The gap is the deterministic discretization bias of the
/// scheme and shrinks as the grid refines.
pub fn volterra_discrete_terminal_variance(
    alpha: &AlphaParam,
    t_max: f64,
    n: usize,
) -> Result<f64> {
    let grid = TimeGrid::uniform(t_max, n)?;
    let step = grid.spacing().expect("uniform grid has a spacing");
    let weights = VolterraWeights::new(alpha, n)?;
    let mut last_row = Vec::new();
    weights.row(n, &mut last_row)?;
    Ok(step * last_row.iter().map(|w| w * w).sum::<f64>())
}

/// Driver reconstruction from an H-fBm ensemble.
#[derive(Debug, Clone)]
pub struct Inversion {
    /// Reconstructed Brownian paths, one per input path.
    pub driver: Vec<Vec<f64>>,
    /// Relative L² path errors against the true driver, when the
    /// ensemble carries one.
    pub rel_l2: Option<Vec<f64>>,
}

/// Recover B from B^H by the inverse representation
/// B(t) = [√Γ(α)/(Γ((α+1)/2)Γ((3-α)/2))] ∫₀ᵗ (log t/s)^{(1-α)/2} dB^H(s),
/// as a left-endpoint Riemann-Stieltjes sum over the grid increments.
///
/// Two cells are special: the first (its left endpoint is s = 0 where the
/// kernel diverges for α < 1) and, for α > 1, the last (the kernel
/// diverges as s ↑ t); both get the exact cell average
/// (t/Δ) Γ((3-α)/2) × incomplete-gamma difference instead of an endpoint
/// value. α = 1 returns the input unchanged.
pub fn invert_path(ensemble: &PathEnsemble) -> Result<Inversion> {
    let alpha = ensemble.alpha();
    if alpha.regime() == Regime::High || alpha.alpha() >= 2.0 {
        return Err(Error::Regime(format!(
            "inversion is defined for alpha in (0, 2), got {}",
            alpha.alpha()
        )));
    }
    let n = require_volterra_grid(ensemble.grid())?;

    if alpha.regime() == Regime::Unit {
        let driver = ensemble.hfbm_paths().to_vec();
        let rel_l2 = ensemble.bm_paths().map(|bm| rel_l2_errors(&driver, bm));
        return Ok(Inversion { driver, rel_l2 });
    }

    let a = alpha.alpha();
    let e = 0.5 * (1.0 - a);
    let c2 = 0.5 * (3.0 - a);
    let gc2 = specfun::gamma(c2)?;
    let c_inv = specfun::gamma(a)?.sqrt() / (specfun::gamma(0.5 * (a + 1.0))? * gc2);
    let ln: Vec<f64> = (0..=n).map(|i| (i.max(1) as f64).ln()).collect();

    // kappa[k-1][j-1] multiplies ΔB^H_j in the sum for B(t_k).
    let mut kappa = Vec::with_capacity(n * (n + 1) / 2);
    for k in 1..=n {
        for j in 1..=k {
            let v = if j == 1 {
                if a < 1.0 {
                    // Cell average: left endpoint sits on the divergence.
                    let (_, q) = specfun::regularized_gamma_pair(c2, ln[k] - ln[1])?;
                    k as f64 * gc2 * q
                } else {
                    // Kernel limit at s = 0 is 0 for α > 1.
                    0.0
                }
            } else if j == k && a > 1.0 {
                // Cell average across the s ↑ t divergence.
                let (p, _) = specfun::regularized_gamma_pair(c2, ln[k] - ln[k - 1])?;
                k as f64 * gc2 * p
            } else {
                pow_plus(ln[k] - ln[j - 1], e)
            };
            kappa.push(v);
        }
    }

    let driver: Vec<Vec<f64>> = ensemble
        .hfbm_paths()
        .par_iter()
        .map(|h| {
            let mut out = vec![0.0; n + 1];
            for (k, o) in out.iter_mut().enumerate().skip(1) {
                let base = k * (k - 1) / 2;
                let acc: f64 = kappa[base..base + k]
                    .iter()
                    .zip(h.windows(2))
                    .map(|(w, pair)| w * (pair[1] - pair[0]))
                    .sum();
                *o = c_inv * acc;
            }
            out
        })
        .collect();

    let rel_l2 = ensemble.bm_paths().map(|bm| rel_l2_errors(&driver, bm));
    Ok(Inversion { driver, rel_l2 })
}

fn rel_l2_errors(reconstructed: &[Vec<f64>], truth: &[Vec<f64>]) -> Vec<f64> {
    reconstructed
        .iter()
        .zip(truth.iter())
        .map(|(r, t)| {
            let (mut num, mut den) = (0.0, 0.0);
            for (a, b) in r.iter().zip(t.iter()) {
                num += (a - b) * (a - b);
                den += b * b;
            }
            if den == 0.0 {
                0.0
            } else {
                (num / den).sqrt()
            }
        })
        .collect()
}

/// Mean relative L² inversion error per resolution, with common random
/// numbers: each level reuses the finest level's increments, summed into
/// dyadically coarser cells, so the reported decay is discretization
/// bias rather than Monte Carlo noise.
pub fn inversion_convergence(
    alpha: &AlphaParam,
    t_max: f64,
    levels: &[usize],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if levels.is_empty() || n_paths == 0 {
        return Err(Error::Domain(
            "convergence study needs levels and paths".into(),
        ));
    }
    let n_max = *levels.iter().max().unwrap();
    for &n in levels {
        if n < 2 || n_max % n != 0 {
            return Err(Error::Grid(format!(
                "levels must divide the finest resolution {n_max}, got {n}"
            )));
        }
    }

    let fine = TimeGrid::uniform(t_max, n_max)?;
    let fine_step = fine.spacing().unwrap();
    let sqrt_step = fine_step.sqrt();

    let mut means = Vec::with_capacity(levels.len());
    for &n in levels {
        let factor = n_max / n;
        let grid = TimeGrid::uniform(t_max, n)?;

        // Coarse increments are block sums of the fine ones, so every
        // level sees the same underlying Brownian motion.
        let coarse_paths: Vec<(Vec<f64>, Vec<f64>)> = (0..n_paths as u64)
            .into_par_iter()
            .map(|p| {
                let mut rng = path_rng(seed, p);
                let fine_inc: Vec<f64> = standard_normals(&mut rng, n_max)
                    .into_iter()
                    .map(|z| sqrt_step * z)
                    .collect();
                let inc: Vec<f64> = fine_inc
                    .chunks_exact(factor)
                    .map(|c| c.iter().sum())
                    .collect();
                let mut bm = vec![0.0; n + 1];
                for k in 1..=n {
                    bm[k] = bm[k - 1] + inc[k - 1];
                }
                (inc, bm)
            })
            .collect();

        let weights = VolterraWeights::new(alpha, n)?;
        let mut packed = Vec::with_capacity(n * (n + 1) / 2);
        let mut row = Vec::new();
        for k in 1..=n {
            weights.row(k, &mut row)?;
            packed.extend_from_slice(&row);
        }

        let (bm_paths, hfbm_paths): (Vec<_>, Vec<_>) = coarse_paths
            .into_par_iter()
            .map(|(inc, bm)| {
                let mut hfbm = vec![0.0; n + 1];
                for (k, hk) in hfbm.iter_mut().enumerate().skip(1) {
                    let base = k * (k - 1) / 2;
                    *hk = packed[base..base + k]
                        .iter()
                        .zip(&inc)
                        .map(|(w, dz)| w * dz)
                        .sum();
                }
                (bm, hfbm)
            })
            .unzip();

        let ensemble = PathEnsemble {
            grid,
            alpha: *alpha,
            hfbm_paths,
            bm_paths: Some(bm_paths),
            seed,
            method: Method::Volterra,
            jitter: 0.0,
        };
        let inv = invert_path(&ensemble)?;
        let errs = inv.rel_l2.expect("driver is present");
        means.push(errs.iter().sum::<f64>() / errs.len() as f64);
    }
    Ok(means)
}

/// Fractional Ornstein-Uhlenbeck paths
/// X(t) = e^{-θt} x₀ + e^{-θt} ∫₀ᵗ e^{θs} dB^H(s),
/// built as left-endpoint Riemann-Stieltjes sums over a fresh Volterra
/// ensemble (one prefix accumulation per path).
pub fn sample_fou(
    alpha: &AlphaParam,
    fou: &FouParams,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if alpha.regime() == Regime::High {
        return Err(Error::Regime(format!(
            "the mean-reverting construction needs alpha in (0, 2), got {}",
            alpha.alpha()
        )));
    }
    let ensemble = sample_volterra(alpha, grid, n_paths, seed)?;
    let pts = grid.points();
    let theta = fou.theta();

    Ok(ensemble
        .hfbm_paths()
        .par_iter()
        .map(|h| {
            let mut out = Vec::with_capacity(pts.len());
            out.push(fou.x0());
            let mut stieltjes = 0.0;
            for k in 1..pts.len() {
                stieltjes += (theta * pts[k - 1]).exp() * (h[k] - h[k - 1]);
                out.push((-theta * pts[k]).exp() * (fou.x0() + stieltjes));
            }
            out
        })
        .collect())
}
