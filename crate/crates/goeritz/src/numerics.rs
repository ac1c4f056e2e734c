//! Grid-based numerical verification for the radial-damping construction.
//!
//! The geometric story: a diffeomorphism is straightened near a point by
//! interpolating it with its derivative and then damping the interpolation
//! radially. The estimates that make this work are finite-dimensional and
//! checkable: a bump profile with bounded radial slope keeps the damping
//! map's Jacobian uniformly bounded; an unbounded slope lets a shear create
//! a singular Jacobian (the worrisome example); and a profile whose slope
//! stays below the path-dependent threshold κ₁κ₂ keeps every fiberwise
//! Jacobian determinant positive along an upper-triangular matrix path
//! obtained from the QT factorization.
//!
//! Everything here evaluates closed-form derivatives over deterministic
//! grids and reports the extremes it finds; nothing is asserted that the
//! scan did not actually see.

pub mod mat;

use mat::{dot, vec_norm, Mat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

/// Errors from profile construction, factorization, or grid setup.
#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("slope bound must be positive, got {0}")]
    NonPositiveBound(f64),
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("profile slope reaches {sup}, exceeding the committed bound {bound}")]
    SlopeBoundExceeded { sup: f64, bound: f64 },
    #[error("matrix is numerically singular (pivot {pivot:e})")]
    NearSingular { pivot: f64 },
    #[error("matrix at x = {x} is not upper triangular: entry ({row},{col}) = {value}")]
    NotUpperTriangular { x: f64, row: usize, col: usize, value: f64 },
    #[error("matrix at x = {x} has non-positive diagonal entry {index}: {value}")]
    NonPositiveDiagonal { x: f64, index: usize, value: f64 },
    #[error("matrix sizes along the path differ: {expected} vs {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector input must be non-empty")]
    EmptyVector,
    #[error("bad grid spec: {0}")]
    BadGrid(String),
}

/// A radial damping profile: smooth φ with φ = 0 near 0, φ = 1 past a
/// plateau radius, and a committed bound on s·φ′(s).
pub trait RadialProfile {
    /// (φ(s), φ′(s)); errors when s < 0.
    fn value_and_derivative(&self, s: f64) -> Result<(f64, f64), NumericsError>;

    /// The committed upper bound for s·φ′(s).
    fn slope_bound(&self) -> f64;

    /// The radius past which φ is identically 1.
    fn plateau_radius(&self) -> f64;

    /// A deterministic radial grid covering the profile's transition band,
    /// suitable for scanning; never includes 0.
    fn radial_samples(&self, count: usize) -> Vec<f64>;
}

fn smoothstep(t: f64) -> (f64, f64) {
    // 3t² - 2t³ with derivative 6t(1-t); value and slope vanish at t = 0
    // and the slope vanishes again at t = 1.
    (t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t))
}

/// A polynomial smoothstep ramp on [ε/2, ε].
///
/// φ_ε(s) = φ(s/ε) where φ rises from 0 on [0, 1/2] to 1 at 1 via the cubic
/// smoothstep. The exact supremum of s·φ′(s) is 4/√3 ≈ 2.3094 at every
/// scale; construction fails if the committed bound b₀ is below the grid
/// estimate of that supremum.
#[derive(Debug, Clone)]
pub struct BumpProfile {
    eps: f64,
    b0: f64,
    grid_slope_sup: f64,
}

impl BumpProfile {
    pub fn new(eps: f64, b0: f64) -> Result<Self, NumericsError> {
        if !(eps > 0.0) {
            return Err(NumericsError::NonPositiveScale(eps));
        }
        if !(b0 > 0.0) {
            return Err(NumericsError::NonPositiveBound(b0));
        }
        let mut sup: f64 = 0.0;
        // s·φ′(s) is scale invariant, so check the unscaled profile.
        for k in 1..=2048 {
            let s = 1.25 * k as f64 / 2048.0;
            let (_, der) = unscaled_bump(s);
            sup = sup.max(s * der);
        }
        if sup > b0 {
            return Err(NumericsError::SlopeBoundExceeded { sup, bound: b0 });
        }
        Ok(BumpProfile { eps, b0, grid_slope_sup: sup })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// The grid estimate of sup s·φ′(s) (exact value 4/√3).
    pub fn grid_slope_sup(&self) -> f64 {
        self.grid_slope_sup
    }
}

fn unscaled_bump(s: f64) -> (f64, f64) {
    if s <= 0.5 {
        (0.0, 0.0)
    } else if s >= 1.0 {
        (1.0, 0.0)
    } else {
        let (value, slope) = smoothstep(2.0 * s - 1.0);
        (value, 2.0 * slope)
    }
}

impl RadialProfile for BumpProfile {
    fn value_and_derivative(&self, s: f64) -> Result<(f64, f64), NumericsError> {
        if s < 0.0 {
            return Err(NumericsError::NegativeRadius(s));
        }
        let (value, der) = unscaled_bump(s / self.eps);
        Ok((value, der / self.eps))
    }

    fn slope_bound(&self) -> f64 {
        self.b0
    }

    fn plateau_radius(&self) -> f64 {
        self.eps
    }

    fn radial_samples(&self, count: usize) -> Vec<f64> {
        let count = count.max(1);
        (1..=count)
            .map(|k| 1.25 * self.eps * k as f64 / count as f64)
            .collect()
    }
}

/// A slow logarithmic ramp with s·φ′(s) < κ.
///
/// φ = 0 up to s = 1 and 1 past S = e^{2/κ}; in between it is the cubic
/// smoothstep in log-radius, so s·φ′(s) = h′(τ)/ln S ≤ (3/2)·(κ/2) = 0.75κ.
/// The price of the small slope is the enormous plateau radius.
#[derive(Debug, Clone)]
pub struct KappaProfile {
    kappa: f64,
    grid_slope_sup: f64,
}

impl KappaProfile {
    pub fn new(kappa: f64) -> Result<Self, NumericsError> {
        if !(kappa > 0.0) {
            return Err(NumericsError::NonPositiveKappa(kappa));
        }
        let log_plateau = 2.0 / kappa;
        let mut sup: f64 = 0.0;
        for k in 0..=2048 {
            let tau = k as f64 / 2048.0;
            let (_, slope) = smoothstep(tau);
            sup = sup.max(slope / log_plateau);
        }
        if sup >= kappa {
            return Err(NumericsError::SlopeBoundExceeded { sup, bound: kappa });
        }
        Ok(KappaProfile { kappa, grid_slope_sup: sup })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// The grid estimate of sup s·φ′(s) (exact value 0.75·κ).
    pub fn grid_slope_sup(&self) -> f64 {
        self.grid_slope_sup
    }
}

impl RadialProfile for KappaProfile {
    fn value_and_derivative(&self, s: f64) -> Result<(f64, f64), NumericsError> {
        if s < 0.0 {
            return Err(NumericsError::NegativeRadius(s));
        }
        let log_plateau = 2.0 / self.kappa;
        if s <= 1.0 {
            return Ok((0.0, 0.0));
        }
        let tau = s.ln() / log_plateau;
        if tau >= 1.0 {
            return Ok((1.0, 0.0));
        }
        let (value, slope) = smoothstep(tau);
        Ok((value, slope / (s * log_plateau)))
    }

    fn slope_bound(&self) -> f64 {
        self.kappa
    }

    fn plateau_radius(&self) -> f64 {
        (2.0 / self.kappa).exp()
    }

    fn radial_samples(&self, count: usize) -> Vec<f64> {
        // Log-spaced from inside the flat region through the plateau; the
        // transition band [1, S] is log-wide, so linear spacing would miss
        // it entirely for small κ.
        let count = count.max(2);
        let lo = 0.5f64.ln();
        let hi = 1.25f64.ln() + 2.0 / self.kappa;
        (0..count)
            .map(|k| (lo + (hi - lo) * k as f64 / (count - 1) as f64).exp())
            .collect()
    }
}

/// Grid resolution for the scans: radial × angular (directions) × time
/// (also reused for positions along a matrix path).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    pub time: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { radial: 64, angular: 64, time: 16 }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = NumericsError;

    /// Parses `RADIALxANGULARxTIME`, e.g. `64x64x16`.
    fn from_str(text: &str) -> Result<Self, NumericsError> {
        let parts: Vec<&str> = text.split('x').collect();
        if parts.len() != 3 {
            return Err(NumericsError::BadGrid(format!(
                "expected RADIALxANGULARxTIME, got `{text}`"
            )));
        }
        let mut values = [0usize; 3];
        for (slot, part) in values.iter_mut().zip(parts.iter()) {
            *slot = part.parse().map_err(|_| {
                NumericsError::BadGrid(format!("`{part}` is not a positive integer"))
            })?;
            if *slot == 0 {
                return Err(NumericsError::BadGrid("grid counts must be >= 1".to_string()));
            }
        }
        Ok(GridSpec { radial: values[0], angular: values[1], time: values[2] })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.radial, self.angular, self.time)
    }
}

/// Evenly spaced samples of [0, 1], endpoints included.
fn samples01(count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count).map(|k| k as f64 / (count - 1) as f64).collect()
}

/// Deterministic unit directions in ℝⁿ: exact angles for n = 2, seeded
/// rejection sampling for higher n.
fn directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    if n == 2 {
        return (0..count.max(1))
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / count.max(1) as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect();
    }
    let mut rng = StdRng::seed_from_u64(0xD1CE_5EED);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = vec_norm(&v);
        if norm < 0.3 {
            continue;
        }
        out.push(v.iter().map(|x| x / norm).collect());
    }
    out
}

/// The radial damping map λ_t(y) = ((1−t) + t·φ(|y|))·y.
pub fn lambda_map(
    profile: &(impl RadialProfile + ?Sized),
    t: f64,
    y: &[f64],
) -> Result<Vec<f64>, NumericsError> {
    if y.is_empty() {
        return Err(NumericsError::EmptyVector);
    }
    let radius = vec_norm(y);
    let (value, _) = profile.value_and_derivative(radius)?;
    let g = (1.0 - t) + t * value;
    Ok(y.iter().map(|&v| g * v).collect())
}

/// The analytic Jacobian of λ_t: g_t(y)·I + t·(φ′(|y|)/|y|)·y·yᵀ, and
/// exactly (1−t)·I at y = 0.
///
/// The matrix is symmetric with eigenvalues g_t(y) and
/// g_t(y) + t·φ′(|y|)·|y|, so its operator norm never exceeds
/// 1 + sup s·φ′(s).
pub fn lambda_jacobian(
    profile: &(impl RadialProfile + ?Sized),
    t: f64,
    y: &[f64],
) -> Result<Mat, NumericsError> {
    if y.is_empty() {
        return Err(NumericsError::EmptyVector);
    }
    let n = y.len();
    let radius = vec_norm(y);
    if radius == 0.0 {
        return Ok(Mat::identity(n).scale(1.0 - t));
    }
    let (value, der) = profile.value_and_derivative(radius)?;
    let g = (1.0 - t) + t * value;
    let coef = t * der / radius;
    let mut jac = Mat::identity(n).scale(g);
    for i in 0..n {
        for j in 0..n {
            jac.set(i, j, jac.get(i, j) + coef * y[i] * y[j]);
        }
    }
    Ok(jac)
}

/// Centered-difference Jacobian of `f` at `y` with step `h`.
pub fn finite_difference_jacobian<F>(f: F, y: &[f64], h: f64) -> Mat
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = y.len();
    assert!(n > 0 && h > 0.0);
    let mut jac = Mat::zeros(n);
    for j in 0..n {
        let mut forward = y.to_vec();
        forward[j] += h;
        let mut backward = y.to_vec();
        backward[j] -= h;
        let fp = f(&forward);
        let fm = f(&backward);
        for i in 0..n {
            jac.set(i, j, (fp[i] - fm[i]) / (2.0 * h));
        }
    }
    jac
}

/// What the shear scan saw: the minimum of the directional-derivative
/// coefficient 1 + r·φ′(|y|)·|y|·(y₁y₂/|y|²) over the polar grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WorrisomeReport {
    pub r: f64,
    /// Smallest coefficient found.
    pub min_value: f64,
    pub argmin_radius: f64,
    pub argmin_angle: f64,
    /// True when a nonpositive coefficient (a singularity) was found.
    pub witness: bool,
    /// Largest s·φ′(s) seen on the radial grid.
    pub sup_slope: f64,
}

/// Scans the plane for directions in which the shear [[1,r],[0,1]],
/// radially damped through `profile`, stops being injective.
///
/// The damped map is singular somewhere as soon as
/// r·φ′(|y|)·|y| reaches 2, because y₁y₂/|y|² attains −1/2.
pub fn worrisome(r: f64, profile: &(impl RadialProfile + ?Sized), grid: &GridSpec) -> WorrisomeReport {
    let mut min_value = f64::INFINITY;
    let mut argmin_radius = 0.0;
    let mut argmin_angle = 0.0;
    let mut sup_slope: f64 = 0.0;
    for s in profile.radial_samples(grid.radial) {
        let (_, der) = profile
            .value_and_derivative(s)
            .expect("radial samples are nonnegative");
        let slope = s * der;
        sup_slope = sup_slope.max(slope);
        for k in 0..grid.angular.max(1) {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / grid.angular.max(1) as f64;
            let value = 1.0 + r * slope * theta.cos() * theta.sin();
            if value < min_value {
                min_value = value;
                argmin_radius = s;
                argmin_angle = theta;
            }
        }
    }
    WorrisomeReport {
        r,
        min_value,
        argmin_radius,
        argmin_angle,
        witness: min_value <= 0.0,
        sup_slope,
    }
}

/// Factors an invertible matrix as Q·T with Q orthogonal and T upper
/// triangular with positive diagonal, by modified Gram–Schmidt on columns.
///
/// Such a factorization is unique, which the test suite checks against an
/// independent classical Gram–Schmidt route.
pub fn qt(a: &Mat) -> Result<(Mat, Mat), NumericsError> {
    let n = a.n();
    let scale = a.frobenius();
    if scale == 0.0 {
        return Err(NumericsError::NearSingular { pivot: 0.0 });
    }
    // Columns of `a`, orthogonalized in place.
    let mut columns: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| a.get(i, j)).collect()).collect();
    let mut t = Mat::zeros(n);
    for j in 0..n {
        for i in 0..j {
            let proj = dot(&columns[i], &columns[j]);
            t.set(i, j, proj);
            let (left, right) = columns.split_at_mut(j);
            for (x, &q) in right[0].iter_mut().zip(left[i].iter()) {
                *x -= proj * q;
            }
        }
        let norm = vec_norm(&columns[j]);
        if norm <= 1e-12 * scale {
            return Err(NumericsError::NearSingular { pivot: norm });
        }
        t.set(j, j, norm);
        for x in columns[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = Mat::zeros(n);
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            q.set(i, j, v);
        }
    }
    Ok((q, t))
}

/// Outcome of the fiberwise-determinant scan along a matrix path.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage5Report {
    /// The profile's committed slope bound.
    pub kappa: f64,
    /// 1 / sup over the path and τ ∈ [0,1] of |(I + τ(T_x − I))⁻¹|.
    pub kappa1: f64,
    /// 1 / sup over the path of |T_x − I| (infinite for the identity path).
    pub kappa2: f64,
    /// Whether kappa < kappa1·kappa2, the hypothesis under which the scan
    /// is guaranteed to stay positive. The scan runs either way.
    pub precondition_ok: bool,
    pub min_det: f64,
    pub argmin_x: f64,
    pub argmin_t: f64,
    pub argmin_y: Vec<f64>,
    /// True when every sampled determinant was positive.
    pub nonsingular: bool,
}

/// Scans det D(f_t | fiber) for f_t(y) = (I + g_t(y)(T_x − I))·y over a
/// grid in (x, t, y), where g_t(y) = (1−t) + t·φ(|y|) and T_x comes from
/// `path`.
///
/// The Jacobian is M + u·vᵀ with M = I + g(T_x − I) upper triangular, so
/// each determinant is det(M)·(1 + vᵀM⁻¹u) by the rank-one determinant
/// identity. When the profile's slope bound κ is below κ₁κ₂ the minimum is
/// guaranteed positive; if the hypothesis fails the report says so and the
/// scan still reports what it found.
pub fn stage5<F>(
    path: F,
    profile: &(impl RadialProfile + ?Sized),
    grid: &GridSpec,
) -> Result<Stage5Report, NumericsError>
where
    F: Fn(f64) -> Mat,
{
    let xs = samples01(grid.time);
    let ts = samples01(grid.time);
    let first = path(xs[0]);
    let n = first.n();
    let mut sup_inverse_norm: f64 = 0.0;
    let mut sup_deviation: f64 = 0.0;
    for &x in &xs {
        let t_x = path(x);
        if t_x.n() != n {
            return Err(NumericsError::DimensionMismatch { expected: n, found: t_x.n() });
        }
        for i in 0..n {
            for j in 0..i {
                let value = t_x.get(i, j);
                if value != 0.0 {
                    return Err(NumericsError::NotUpperTriangular { x, row: i, col: j, value });
                }
            }
            let diag = t_x.get(i, i);
            if !(diag > 0.0) {
                return Err(NumericsError::NonPositiveDiagonal { x, index: i, value: diag });
            }
        }
        let deviation = t_x.sub(&Mat::identity(n));
        sup_deviation = sup_deviation.max(deviation.op_norm());
        for &tau in &ts {
            let interpolated = Mat::identity(n).add(&deviation.scale(tau));
            sup_inverse_norm = sup_inverse_norm.max(interpolated.inverse_upper().op_norm());
        }
    }
    let kappa1 = 1.0 / sup_inverse_norm;
    let kappa2 = if sup_deviation == 0.0 { f64::INFINITY } else { 1.0 / sup_deviation };
    let kappa = profile.slope_bound();
    let precondition_ok = kappa < kappa1 * kappa2;

    let dirs = directions(n, grid.angular);
    let radii = profile.radial_samples(grid.radial);
    let mut min_det = f64::INFINITY;
    let mut argmin = (0.0, 0.0, vec![0.0; n]);
    for &x in &xs {
        let t_x = path(x);
        let deviation = t_x.sub(&Mat::identity(n));
        for &t in &ts {
            for &s in &radii {
                let (value, der) = profile.value_and_derivative(s)?;
                let g = (1.0 - t) + t * value;
                let m = Mat::identity(n).add(&deviation.scale(g));
                let det_m: f64 = (0..n).map(|i| m.get(i, i)).product();
                let v_scale = t * der;
                for dir in &dirs {
                    let y: Vec<f64> = dir.iter().map(|&d| s * d).collect();
                    let u = deviation.mul_vec(&y);
                    // v = t·φ′(|y|)·y/|y| = t·φ′(s)·dir.
                    let m_inv_u = m.solve_upper(&u);
                    let correction: f64 =
                        dir.iter().zip(m_inv_u.iter()).map(|(&d, &w)| v_scale * d * w).sum();
                    let det = det_m * (1.0 + correction);
                    if det < min_det {
                        min_det = det;
                        argmin = (x, t, y);
                    }
                }
            }
        }
    }
    Ok(Stage5Report {
        kappa,
        kappa1,
        kappa2,
        precondition_ok,
        min_det,
        argmin_x: argmin.0,
        argmin_t: argmin.1,
        argmin_y: argmin.2,
        nonsingular: min_det > 0.0,
    })
}
