//! Adaptive quadrature shared by the special-function and covariance code.
//!
//! Two rules cover every integral in this crate: a globally adaptive
//! 15-point Gauss-Kronrod scheme for smooth integrands, and a tanh-sinh
//! (double-exponential) rule for integrands with integrable endpoint
//! singularities. Semi-infinite integrals with exponentially decaying
//! tails are truncated; see [`EXP_TAIL_SPAN`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budget for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 512,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Domain(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

/// Span after which an exp(-u)-damped tail is below double resolution.
pub const EXP_TAIL_SPAN: f64 = 80.0;

// 15-point Kronrod abscissae on [-1, 1] (positive half; odd entries are
// the embedded 7-point Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

// 7-point Gauss weights.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

// 15-point Kronrod weights.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss-Kronrod 15/7 panel. Returns (kronrod value, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = kronrod.abs();

    let mut fv = [0.0f64; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[7 + j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    // Scaled deviation from the panel mean, for the QUADPACK error model.
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    if !value.is_finite() {
        return Err(Error::Domain(format!("integrand not finite on [{a}, {b}]")));
    }

    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if round > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round);
    }
    Ok((value, err))
}

struct Segment {
    err: f64,
    value: f64,
    a: f64,
    b: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over [a, b].
///
/// The worst panel (largest error estimate) is bisected until the summed
/// error estimate meets `max(abs_tol, rel_tol * |integral|)` or the
/// subdivision budget is exhausted.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }

    let (value, err) = qk15(f, a, b)?;
    let mut total_value = value;
    let mut total_err = err;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { err, value, a, b });
    let mut splits = 1usize;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total_value.abs());
        if total_err <= target {
            return Ok(total_value);
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::Nonconvergence(format!(
                "adaptive quadrature: error estimate {total_err:.3e} above target {target:.3e} \
                 after {splits} subdivisions"
            )));
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel at floating-point resolution: accept its value as is.
            total_err -= worst.err;
            if heap.is_empty() {
                return Ok(total_value);
            }
            continue;
        }
        let (v1, e1) = qk15(f, worst.a, mid)?;
        let (v2, e2) = qk15(f, mid, worst.b)?;
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            err: e1,
            value: v1,
            a: worst.a,
            b: mid,
        });
        heap.push(Segment {
            err: e2,
            value: v2,
            a: mid,
            b: worst.b,
        });
        splits += 1;
    }
}

// Past |t| = 6 the tanh-sinh weight is below 1e-270; nodes there cannot
// contribute at double precision even against strong integrable
// singularities (exponents down to -0.95 still decay like exp(-0.1 g)).
const TS_T_MAX: f64 = 6.0;
const TS_MAX_LEVEL: u32 = 12;

/// Tanh-sinh (double-exponential) integration of `f` over [a, b].
///
/// Handles integrable singularities at either endpoint: nodes cluster
/// doubly exponentially toward a and b, and non-finite samples at nodes
/// that have collapsed onto an endpoint are skipped. An integrand that is
/// singular at a nonzero endpoint should use [`tanh_sinh_endpoints`]
/// instead: reconstructing the endpoint distance from the node coordinate
/// cancels catastrophically and caps the accuracy near 1e-8.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if a > b {
        return Ok(-tanh_sinh(f, b, a, cfg)?);
    }
    tanh_sinh_endpoints(
        &|da, db| {
            let x = if da <= db { a + da } else { b - db };
            f(x)
        },
        a,
        b,
        cfg,
    )
}

/// Tanh-sinh integration where the integrand is given the exact distances
/// (x - a, b - x) to the interval endpoints instead of x itself.
///
/// Requires a <= b. This form keeps full precision for integrands with
/// algebraic singularities at either endpoint, where the distances shrink
/// below the floating-point granularity of the coordinates.
pub fn tanh_sinh_endpoints<F: Fn(f64, f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a > b {
        return Err(Error::Domain("tanh_sinh_endpoints requires a <= b".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let span = b - a;
    let half = 0.5 * span;

    // Sample the pair of nodes at trapezoidal parameter ±t, returning
    // w(t) * (f(near a) + f(near b)); unusable nodes contribute zero.
    let pair = |t: f64| -> f64 {
        let g = std::f64::consts::FRAC_PI_2 * t.sinh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / g.cosh().powi(2);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        // Distance from the nearer endpoint, without cancellation:
        // 1 - tanh(g) = 2 / (1 + exp(2g)).
        let near = half * 2.0 / (1.0 + (2.0 * g).exp());
        if near == 0.0 {
            return 0.0;
        }
        let far = span - near;
        let mut acc = 0.0;
        let f_lo = f(near, far);
        if f_lo.is_finite() {
            acc += w * f_lo;
        }
        let f_hi = f(far, near);
        if f_hi.is_finite() {
            acc += w * f_hi;
        }
        acc
    };

    let mut h = 1.0;
    let f_center = f(half, half);
    let mut sum = if f_center.is_finite() {
        std::f64::consts::FRAC_PI_2 * f_center
    } else {
        0.0
    };
    let mut k = 1;
    while (k as f64) * h <= TS_T_MAX {
        sum += pair(k as f64 * h);
        k += 1;
    }
    let mut estimate = sum * h * half;

    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        // Halving h keeps the old nodes; only odd multiples are new.
        let mut new_sum = 0.0;
        let mut k = 1;
        while (k as f64) * h <= TS_T_MAX {
            new_sum += pair(k as f64 * h);
            k += 2;
        }
        let refined = 0.5 * estimate + new_sum * h * half;
        let delta = (refined - estimate).abs();
        estimate = refined;
        if level >= 3 && delta <= cfg.abs_tol.max(cfg.rel_tol * estimate.abs()) {
            return Ok(estimate);
        }
    }
    Err(Error::Nonconvergence(format!(
        "tanh-sinh quadrature did not settle within {TS_MAX_LEVEL} refinement levels on [{a}, {b}]"
    )))
}
