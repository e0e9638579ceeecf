//! Rest points of the planar system: exhaustive location by resultant
//! elimination, Newton polishing, linear classification, and the closed-form
//! quantities of the `b = beta1 = gamma = 0` special case.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{planar_residual, planar_rhs, ModelParams, PlanarState};
use crate::poly::Poly;

/// Residual a polished rest point must reach.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Candidates closer than this are the same rest point.
pub const DEDUPE_TOL: f64 = 1e-8;
/// Real parts within this of zero are not hyperbolic.
pub const TOL_HYP: f64 = 1e-9;
/// `|det L|` at or below this is degenerate.
pub const TOL_DEG: f64 = 1e-12;
/// Two distinct rest points closer than this are reported as ill-conditioned.
pub const ILL_CONDITIONED_SEP: f64 = 1e-6;

/// Residual required before a location is accepted for classification.
const CLASSIFY_RESIDUAL: f64 = 1e-8;
const IMAG_TOL: f64 = 1e-6;

pub type Mat2 = [[f64; 2]; 2];

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn trace(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

/// Analytic Jacobian of the planar field, rows `(s', i')`, columns `(s, i)`.
pub fn jacobian(p: &ModelParams, x: &PlanarState) -> Mat2 {
    let (s, i) = (x.s, x.i);
    let c = p.eps1 - p.eps2 - p.lambda;
    [
        [
            (p.eps2 - p.b - p.beta() - p.gamma) - 2.0 * p.eps2 * s + c * i,
            -p.gamma + c * s,
        ],
        [
            p.beta1 + (p.lambda - p.eps2) * i,
            (p.eps2 - p.eps1 - p.alpha - p.b)
                + (p.lambda - p.eps2) * s
                + 2.0 * (p.eps1 - p.eps2) * i,
        ],
    ]
}

/// Eigenvalues of a 2x2 matrix from its trace and determinant. Real pairs
/// come back ascending.
pub fn eigenvalues(m: &Mat2) -> [Complex64; 2] {
    let tr = trace(m);
    let half = 0.5 * tr;
    // discriminant written to avoid cancellation in tr^2 - 4 det
    let disc = 0.25 * (m[0][0] - m[1][1]).powi(2) + m[0][1] * m[1][0];
    if disc >= 0.0 {
        let root = disc.sqrt();
        // larger-magnitude root first, the other from det / larger
        let big = if half >= 0.0 { half + root } else { half - root };
        let small = if big != 0.0 { det(m) / big } else { 0.0 };
        let (lo, hi) = if big < small { (big, small) } else { (small, big) };
        [Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [Complex64::new(half, -im), Complex64::new(half, im)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    Sink,
    Saddle,
    Source,
    Degenerate,
}

impl Stability {
    /// Poincare index of a nondegenerate rest point of this kind.
    pub fn index(self) -> Option<i32> {
        match self {
            Stability::Sink | Stability::Source => Some(1),
            Stability::Saddle => Some(-1),
            Stability::Degenerate => None,
        }
    }
}

/// Classification rule shared by every caller.
pub fn stability_of(m: &Mat2) -> Stability {
    let d = det(m);
    if d.abs() <= TOL_DEG {
        return Stability::Degenerate;
    }
    if d < 0.0 {
        return Stability::Saddle;
    }
    let ev = eigenvalues(m);
    if ev.iter().all(|z| z.re < -TOL_HYP) {
        Stability::Sink
    } else if ev.iter().all(|z| z.re > TOL_HYP) {
        Stability::Source
    } else {
        Stability::Degenerate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestPoint {
    pub location: PlanarState,
    pub jacobian: Mat2,
    pub eigenvalues: [Complex64; 2],
    pub classification: Stability,
    pub local_index: Option<i32>,
    pub residual: f64,
}

impl RestPoint {
    pub fn det(&self) -> f64 {
        det(&self.jacobian)
    }

    pub fn trace(&self) -> f64 {
        trace(&self.jacobian)
    }

    pub fn is_interior(&self) -> bool {
        self.location.in_open_triangle()
    }

    pub fn in_triangle(&self) -> bool {
        self.location.in_triangle()
    }

    pub fn is_degenerate(&self) -> bool {
        self.classification == Stability::Degenerate
    }

    /// Eigenvalue/eigenvector pair with negative real eigenvalue, for saddles.
    pub fn stable_direction(&self) -> Option<(f64, [f64; 2])> {
        if self.classification != Stability::Saddle {
            return None;
        }
        let lam = self.eigenvalues[0].re;
        Some((lam, eigenvector(&self.jacobian, lam)))
    }

    pub fn unstable_direction(&self) -> Option<(f64, [f64; 2])> {
        if self.classification != Stability::Saddle {
            return None;
        }
        let lam = self.eigenvalues[1].re;
        Some((lam, eigenvector(&self.jacobian, lam)))
    }
}

/// Unit eigenvector for a real eigenvalue of a 2x2 matrix.
pub fn eigenvector(m: &Mat2, lam: f64) -> [f64; 2] {
    // rows of (m - lam I) are orthogonal to the eigenvector; use the larger one
    let r0 = [m[0][0] - lam, m[0][1]];
    let r1 = [m[1][0], m[1][1] - lam];
    let row = if r0[0].hypot(r0[1]) >= r1[0].hypot(r1[1]) { r0 } else { r1 };
    let v = [-row[1], row[0]];
    let n = v[0].hypot(v[1]);
    if n == 0.0 {
        return [1.0, 0.0];
    }
    [v[0] / n, v[1] / n]
}

/// Linearizes at `location` and classifies. The location must already be a
/// rest point to within `1e-8`.
pub fn classify(p: &ModelParams, location: PlanarState) -> Result<RestPoint> {
    let residual = planar_residual(p, &location);
    if !(residual < CLASSIFY_RESIDUAL) {
        return Err(Error::Precondition(format!(
            "({}, {}) is not a rest point (residual {residual:e})",
            location.s, location.i
        )));
    }
    Ok(classify_unchecked(p, location, residual))
}

fn classify_unchecked(p: &ModelParams, location: PlanarState, residual: f64) -> RestPoint {
    let jac = jacobian(p, &location);
    let classification = stability_of(&jac);
    RestPoint {
        location,
        jacobian: jac,
        eigenvalues: eigenvalues(&jac),
        classification,
        local_index: classification.index(),
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// The closed triangle `s, i >= 0, s + i <= 1`.
    Triangle,
    /// The open triangle.
    Interior,
    /// All real rest points.
    Plane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestPointSet {
    pub points: Vec<RestPoint>,
    /// Index pairs of distinct rest points closer than [`ILL_CONDITIONED_SEP`].
    pub near_coincident: Vec<(usize, usize)>,
}

impl RestPointSet {
    pub fn is_ill_conditioned(&self) -> bool {
        !self.near_coincident.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count(&self, kind: Stability) -> usize {
        self.points.iter().filter(|rp| rp.classification == kind).count()
    }

    pub fn nearest(&self, x: &PlanarState) -> Option<(usize, f64)> {
        self.points
            .iter()
            .enumerate()
            .map(|(k, rp)| (k, rp.location.dist(x)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// `s' = f0(s) + f1(s) i` and `i' = g0(s) + g1(s) i + g2 i^2`.
struct Conics {
    f0: Poly,
    f1: Poly,
    g0: Poly,
    g1: Poly,
    g2: f64,
}

impl Conics {
    fn new(p: &ModelParams) -> Self {
        Conics {
            f0: Poly::new([p.b + p.gamma, p.eps2 - p.b - p.beta() - p.gamma, -p.eps2]),
            f1: Poly::new([-p.gamma, p.eps1 - p.eps2 - p.lambda]),
            g0: Poly::new([0.0, p.beta1]),
            g1: Poly::new([p.eps2 - p.eps1 - p.alpha - p.b, p.lambda - p.eps2]),
            g2: p.eps1 - p.eps2,
        }
    }

    /// Resultant with respect to `i`: `g2 f0^2 - g1 f0 f1 + g0 f1^2`.
    fn resultant(&self) -> Poly {
        let a = self.f0.mul(&self.f0).scale(self.g2);
        let b = self.g1.mul(&self.f0).mul(&self.f1).scale(-1.0);
        let c = self.g0.mul(&self.f1).mul(&self.f1);
        a.add(&b).add(&c)
    }

    fn resultant_scale(&self) -> f64 {
        let f = self.f0.max_abs_coeff().max(self.f1.max_abs_coeff());
        let g = self.g0.max_abs_coeff().max(self.g1.max_abs_coeff()).max(self.g2.abs());
        f * f * g
    }
}

/// Real roots of `a x^2 + b x + c`.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-14 * scale * scale {
        return Vec::new();
    }
    let root = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * root);
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Damped Newton on the planar field. Returns the best point seen and its
/// residual.
fn polish(p: &ModelParams, start: PlanarState) -> (PlanarState, f64) {
    let mut x = start;
    let mut res = planar_residual(p, &x);
    for _ in 0..60 {
        if res < 1e-15 {
            break;
        }
        let f = planar_rhs(p, &x);
        let j = jacobian(p, &x);
        let dt = det(&j);
        if dt == 0.0 || !dt.is_finite() {
            break;
        }
        let ds = (j[1][1] * f[0] - j[0][1] * f[1]) / dt;
        let di = (-j[1][0] * f[0] + j[0][0] * f[1]) / dt;
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = PlanarState::new(x.s - step * ds, x.i - step * di);
            let r = planar_residual(p, &trial);
            if r < res {
                x = trial;
                res = r;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (x, res)
}

fn in_region(x: &PlanarState, region: Region) -> bool {
    match region {
        Region::Triangle => x.in_triangle(),
        Region::Interior => x.in_open_triangle(),
        Region::Plane => true,
    }
}

/// Every real rest point of the planar system (at most four), optionally
/// restricted to the triangle. Roots of the `s`-resultant are back-substituted
/// and polished to residual below [`RESIDUAL_TOL`].
pub fn find_rest_points(p: &ModelParams, region: Region) -> Result<RestPointSet> {
    let conics = Conics::new(p);
    let f1_zero = conics.f1.is_zero();
    let s_roots = if f1_zero {
        let f0 = conics.f0.trimmed(1e-14);
        if f0.is_zero() {
            return Err(Error::NonIsolatedRestPoints);
        }
        f0.real_roots(IMAG_TOL)
    } else {
        let res = conics.resultant();
        if res.max_abs_coeff() <= 1e-13 * conics.resultant_scale() {
            return Err(Error::NonIsolatedRestPoints);
        }
        res.trimmed(1e-14).real_roots(IMAG_TOL)
    };

    let f1_scale = conics.f1.max_abs_coeff();
    let mut candidates = Vec::new();
    for &s in &s_roots {
        let f1 = conics.f1.eval(s);
        if f1 != 0.0 {
            candidates.push((PlanarState::new(s, -conics.f0.eval(s) / f1), true));
        }
        if f1.abs() <= 1e-6 * f1_scale.max(1.0) {
            for i in quadratic_roots(conics.g2, conics.g1.eval(s), conics.g0.eval(s)) {
                candidates.push((PlanarState::new(s, i), false));
            }
        }
    }

    let mut found: Vec<PlanarState> = Vec::new();
    for (cand, primary) in candidates {
        if !cand.s.is_finite() || !cand.i.is_finite() {
            continue;
        }
        let start_res = planar_residual(p, &cand);
        let (x, res) = polish(p, cand);
        if res >= RESIDUAL_TOL {
            if primary && start_res < 1e-8 && x.dist(&cand) > 1e-3 {
                return Err(Error::PolishDiverged { s: cand.s, i: cand.i });
            }
            continue;
        }
        if found.iter().all(|y| y.dist(&x) > DEDUPE_TOL) {
            found.push(x);
        }
    }
    if found.len() > 4 {
        return Err(Error::NonIsolatedRestPoints);
    }
    found.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.i.total_cmp(&b.i)));

    let points: Vec<RestPoint> = found
        .into_iter()
        .filter(|x| in_region(x, region))
        .map(|x| classify_unchecked(p, x, planar_residual(p, &x)))
        .collect();
    let mut near_coincident = Vec::new();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if points[a].location.dist(&points[b].location) < ILL_CONDITIONED_SEP {
                near_coincident.push((a, b));
            }
        }
    }
    Ok(RestPointSet { points, near_coincident })
}

/// `|trace L - trace_formula|` at an interior rest point, where the formula
/// rewrites the trace using `s' = i' = 0`.
pub fn trace_identity_check(p: &ModelParams, rp: &RestPoint) -> Result<f64> {
    let (s, i) = (rp.location.s, rp.location.i);
    if !(s > 0.0 && i > 0.0) {
        return Err(Error::Precondition(format!(
            "trace identity needs an interior rest point, got ({s}, {i})"
        )));
    }
    let residual = planar_residual(p, &rp.location);
    if !(residual < CLASSIFY_RESIDUAL) {
        return Err(Error::Precondition(format!("({s}, {i}) is not a rest point")));
    }
    let formula =
        -(p.b + p.gamma * (1.0 - i)) / s - p.eps2 * s - p.beta1 * s / i + (p.eps1 - p.eps2) * i;
    Ok((trace(&jacobian(p, &rp.location)) - formula).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialCaseRegime {
    /// `T0 < 0, T1 < 0`: the origin is the only rest point.
    OriginOnly,
    /// `T0 > 0, T1 > 0, T2 < 0, T3 < 0`: source at the origin, two boundary
    /// sinks, and an interior saddle.
    TwoBoundarySinksPlusSaddle,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCaseReport {
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub origin: PlanarState,
    /// Boundary rest point on `s = 0`.
    pub p_i: PlanarState,
    pub p_i_in_triangle: bool,
    /// Boundary rest point on `i = 0`.
    pub p_s: PlanarState,
    pub p_s_in_triangle: bool,
    pub regime_label: SpecialCaseRegime,
}

fn in_closed_triangle_exact(x: &PlanarState) -> bool {
    x.s >= 0.0 && x.i >= 0.0 && x.s + x.i <= 1.0
}

/// Thresholds and boundary rest points when `b = beta1 = gamma = 0`.
pub fn special_case_report(p: &ModelParams) -> Result<SpecialCaseReport> {
    if !p.is_special_case() {
        return Err(Error::Precondition("special case requires b = beta1 = gamma = 0".into()));
    }
    if p.eps2 == p.eps1 || p.eps2 == 0.0 {
        return Err(Error::Precondition("special case requires eps2 != eps1 and eps2 != 0".into()));
    }
    let beta = p.beta();
    let gap = p.eps2 - p.eps1;
    let t0 = p.eps2 - beta;
    let t1 = gap - p.alpha;
    let t2 = p.eps2 - beta + (p.eps1 - p.eps2 - p.lambda) * (gap - p.alpha) / gap;
    let t3 = gap - p.alpha - (p.eps2 - p.lambda) * (p.eps2 - beta) / p.eps2;
    let p_i = PlanarState::new(0.0, 1.0 - p.alpha / gap);
    let p_s = PlanarState::new(1.0 - beta / p.eps2, 0.0);
    let regime_label = if t0 < 0.0 && t1 < 0.0 {
        SpecialCaseRegime::OriginOnly
    } else if t0 > 0.0 && t1 > 0.0 && t2 < 0.0 && t3 < 0.0 {
        SpecialCaseRegime::TwoBoundarySinksPlusSaddle
    } else {
        SpecialCaseRegime::Other
    };
    Ok(SpecialCaseReport {
        t0,
        t1,
        t2,
        t3,
        origin: PlanarState::new(0.0, 0.0),
        p_i,
        p_i_in_triangle: in_closed_triangle_exact(&p_i),
        p_s,
        p_s_in_triangle: in_closed_triangle_exact(&p_s),
        regime_label,
    })
}

/// Rest points in the triangle that are numerically degenerate: `|det L|`
/// at most [`TOL_DEG`], no hyperbolic classification, or a member of a
/// near-coincident pair (two rest points about to merge).
pub fn degeneracy_scan(p: &ModelParams) -> Result<Vec<RestPoint>> {
    let set = find_rest_points(p, Region::Triangle)?;
    let paired: Vec<usize> = set.near_coincident.iter().flat_map(|&(a, b)| [a, b]).collect();
    Ok(set
        .points
        .iter()
        .enumerate()
        .filter(|(k, rp)| rp.det().abs() <= TOL_DEG || rp.is_degenerate() || paired.contains(k))
        .map(|(_, rp)| rp.clone())
        .collect())
}
