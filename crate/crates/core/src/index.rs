//! Poincare indices as numerical winding numbers of a planar vector field
//! along piecewise-smooth Jordan curves, and the specific curves used to
//! count rest points in the triangle.
//!
//! A curve is a closed chain of [`Segment`]s (straight lines and elliptic
//! arcs). Positive orientation is counterclockwise; the inward normal is the
//! left normal of the tangent. Winding numbers are accumulated from signed
//! angle increments of the field between consecutive samples, bisecting any
//! interval whose increment exceeds `pi/4`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::equilibria::{find_rest_points, jacobian, Region, RestPoint, Stability};
use crate::error::{Error, Result};
use crate::model::{planar_rhs, ModelParams, PlanarState};

pub type Point = [f64; 2];

/// Field magnitude below which the field is considered to vanish.
pub const MIN_FIELD_NORM: f64 = 1e-8;
/// Default sample budget for one winding computation.
pub const SAMPLE_BUDGET: usize = 1 << 20;
/// Accepted distance of the raw winding sum from an integer.
pub const MAX_ANGLE_RESIDUAL: f64 = 0.01;
/// Tolerance on `N . X` below zero still counted as tangent.
pub const INWARD_TOL: f64 = 1e-10;
/// Default bulge radius for the special-case curves.
pub const DEFAULT_RADIUS: f64 = 0.05;
const MAX_SHRINKS: usize = 6;
const POLYLINE_POINTS: usize = 4096;
const CLOSURE_TOL: f64 = 1e-12;

pub fn planar_field(p: &ModelParams) -> impl Fn(Point) -> Point + '_ {
    move |x| planar_rhs(p, &PlanarState::new(x[0], x[1]))
}

/// One smooth piece of a curve, parametrized over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Segment {
    Line { from: Point, to: Point },
    /// `center + shape * (cos phi, sin phi)` for `phi` from `start` to
    /// `start + sweep`. `shape` has positive determinant, so increasing `phi`
    /// runs counterclockwise. A circle has `shape = radius * I`.
    Arc { center: Point, shape: [[f64; 2]; 2], start: f64, sweep: f64 },
}

impl Segment {
    pub fn circle_arc(center: Point, radius: f64, start: f64, sweep: f64) -> Self {
        Segment::Arc { center, shape: [[radius, 0.0], [0.0, radius]], start, sweep }
    }

    pub fn point(&self, t: f64) -> Point {
        match *self {
            Segment::Line { from, to } => {
                [from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])]
            }
            Segment::Arc { center, shape, start, sweep } => {
                let phi = start + t * sweep;
                let (sn, cs) = phi.sin_cos();
                [
                    center[0] + shape[0][0] * cs + shape[0][1] * sn,
                    center[1] + shape[1][0] * cs + shape[1][1] * sn,
                ]
            }
        }
    }

    /// Derivative with respect to the segment parameter.
    pub fn tangent(&self, t: f64) -> Point {
        match *self {
            Segment::Line { from, to } => [to[0] - from[0], to[1] - from[1]],
            Segment::Arc { shape, start, sweep, .. } => {
                let phi = start + t * sweep;
                let (sn, cs) = phi.sin_cos();
                [
                    sweep * (-shape[0][0] * sn + shape[0][1] * cs),
                    sweep * (-shape[1][0] * sn + shape[1][1] * cs),
                ]
            }
        }
    }

    /// Total rotation of the tangent along the segment.
    pub fn turning(&self) -> f64 {
        match *self {
            Segment::Line { .. } => 0.0,
            Segment::Arc { .. } => {
                let n = 256;
                (0..n)
                    .map(|k| {
                        signed_angle(
                            self.tangent(k as f64 / n as f64),
                            self.tangent((k + 1) as f64 / n as f64),
                        )
                    })
                    .sum()
            }
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, shape, start, sweep } => {
                Segment::Arc { center, shape, start: start + sweep, sweep: -sweep }
            }
        }
    }

    fn approx_length(&self) -> f64 {
        let n = 64;
        (0..n)
            .map(|k| {
                let a = self.point(k as f64 / n as f64);
                let b = self.point((k + 1) as f64 / n as f64);
                (b[0] - a[0]).hypot(b[1] - a[1])
            })
            .sum()
    }
}

/// Signed angle from `a` to `b`, in `(-pi, pi]`.
fn signed_angle(a: Point, b: Point) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot)
}

fn norm(v: Point) -> f64 {
    v[0].hypot(v[1])
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// A closed, simple, piecewise-smooth curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanCurve {
    segments: Vec<Segment>,
    /// `external_angles[k]` is the turn from the end of segment `k` into the
    /// start of segment `k + 1` (cyclically).
    external_angles: Vec<f64>,
}

impl JordanCurve {
    /// Validates closure, external angles in `(-pi, pi)`, simplicity and
    /// positive orientation.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let curve = Self::assemble(segments)?;
        if !curve.is_simple() {
            return Err(Error::InvalidCurve("curve intersects itself".into()));
        }
        if curve.signed_area() <= 0.0 {
            return Err(Error::InvalidCurve("curve is not positively oriented".into()));
        }
        Ok(curve)
    }

    fn assemble(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidCurve("no segments".into()));
        }
        let n = segments.len();
        let mut external_angles = Vec::with_capacity(n);
        for k in 0..n {
            let a = &segments[k];
            let b = &segments[(k + 1) % n];
            if dist(a.point(1.0), b.point(0.0)) > CLOSURE_TOL {
                return Err(Error::InvalidCurve(format!(
                    "segment {k} ends at {:?} but segment {} starts at {:?}",
                    a.point(1.0),
                    (k + 1) % n,
                    b.point(0.0)
                )));
            }
            let (ta, tb) = (a.tangent(1.0), b.tangent(0.0));
            if norm(ta) == 0.0 || norm(tb) == 0.0 {
                return Err(Error::InvalidCurve(format!("zero tangent at junction {k}")));
            }
            let theta = signed_angle(ta, tb);
            if theta.abs() >= PI - 1e-12 {
                return Err(Error::InvalidCurve(format!("cusp at junction {k}")));
            }
            external_angles.push(theta);
        }
        Ok(JordanCurve { segments, external_angles })
    }

    /// Same geometry traversed backwards. Orientation is not checked, so the
    /// left normal of the result points outward.
    pub fn reversed(&self) -> JordanCurve {
        let segments = self.segments.iter().rev().map(Segment::reversed).collect();
        Self::assemble(segments).expect("reversal of a valid curve is closed")
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn external_angles(&self) -> &[f64] {
        &self.external_angles
    }

    /// Sum of tangent rotation along smooth pieces plus the external angles;
    /// `2 pi` for a positively oriented simple curve.
    pub fn total_turning(&self) -> f64 {
        self.segments.iter().map(Segment::turning).sum::<f64>()
            + self.external_angles.iter().sum::<f64>()
    }

    /// Recomputes each external angle from the one-sided tangents and returns
    /// the largest discrepancy.
    pub fn external_angle_error(&self) -> f64 {
        let n = self.segments.len();
        (0..n)
            .map(|k| {
                let theta = signed_angle(
                    self.segments[k].tangent(1.0),
                    self.segments[(k + 1) % n].tangent(0.0),
                );
                (theta - self.external_angles[k]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Closed polyline: line segments contribute their start point, arcs
    /// share about `total` vertices by arc length (the first vertex is not
    /// repeated at the end).
    pub fn polyline(&self, total: usize) -> Vec<Point> {
        let lengths: Vec<f64> = self
            .segments
            .iter()
            .map(|s| match s {
                Segment::Line { .. } => 0.0,
                Segment::Arc { .. } => s.approx_length(),
            })
            .collect();
        let sum: f64 = lengths.iter().sum();
        let mut pts = Vec::with_capacity(total + self.segments.len());
        for (seg, len) in self.segments.iter().zip(&lengths) {
            if let Segment::Line { from, .. } = seg {
                pts.push(*from);
                continue;
            }
            let n = ((total as f64 * len / sum).ceil() as usize).max(4);
            for k in 0..n {
                pts.push(seg.point(k as f64 / n as f64));
            }
        }
        pts
    }

    pub fn signed_area(&self) -> f64 {
        let pts = self.polyline(POLYLINE_POINTS);
        let n = pts.len();
        0.5 * (0..n)
            .map(|k| {
                let (a, b) = (pts[k], pts[(k + 1) % n]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
    }

    fn is_simple(&self) -> bool {
        let pts = self.polyline(512);
        let n = pts.len();
        for a in 0..n {
            for b in a + 2..n {
                if a == 0 && b == n - 1 {
                    continue;
                }
                if segments_intersect(pts[a], pts[(a + 1) % n], pts[b], pts[(b + 1) % n]) {
                    return false;
                }
            }
        }
        true
    }

    /// Ray-casting point-in-curve test on a dense polyline.
    pub fn contains(&self, x: Point) -> bool {
        let pts = self.polyline(POLYLINE_POINTS);
        let n = pts.len();
        let mut inside = false;
        for k in 0..n {
            let (a, b) = (pts[k], pts[(k + 1) % n]);
            if (a[1] > x[1]) != (b[1] > x[1]) {
                let cross_s = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if x[0] < cross_s {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from `x` to the dense polyline.
    pub fn distance_to(&self, x: Point) -> f64 {
        let pts = self.polyline(POLYLINE_POINTS);
        let n = pts.len();
        (0..n).map(|k| point_segment_distance(x, pts[k], pts[(k + 1) % n])).fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn point_segment_distance(x: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    dist(x, [a[0] + t * d[0], a[1] + t * d[1]])
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Proper crossing, or one segment touching the other.
pub(crate) fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    const TOUCH: f64 = 1e-13;
    point_segment_distance(p1, q1, q2) < TOUCH
        || point_segment_distance(p2, q1, q2) < TOUCH
        || point_segment_distance(q1, p1, p2) < TOUCH
        || point_segment_distance(q2, p1, p2) < TOUCH
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub index: i32,
    /// Distance of the raw angle sum over `2 pi` from `index`.
    pub angle_residual: f64,
    pub samples: usize,
    pub min_field_norm: f64,
}

struct Sampler<'a, F> {
    field: &'a F,
    budget: usize,
    used: usize,
    min_norm: f64,
}

impl<F: Fn(Point) -> Point> Sampler<'_, F> {
    fn eval(&mut self, x: Point) -> Result<Point> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::NoConvergence { budget: self.budget });
        }
        let v = (self.field)(x);
        let n = norm(v);
        if !(n >= MIN_FIELD_NORM) {
            return Err(Error::FieldVanishesOnCurve { x: x[0], y: x[1], norm: n });
        }
        self.min_norm = self.min_norm.min(n);
        Ok(v)
    }

    fn refine(&mut self, seg: &Segment, ta: f64, va: Point, tb: f64, vb: Point) -> Result<f64> {
        let step = signed_angle(va, vb);
        if step.abs() <= FRAC_PI_4 {
            return Ok(step);
        }
        if tb - ta < 1e-14 {
            let x = seg.point(ta);
            return Err(Error::FieldVanishesOnCurve { x: x[0], y: x[1], norm: norm(va) });
        }
        let tm = 0.5 * (ta + tb);
        let vm = self.eval(seg.point(tm))?;
        Ok(self.refine(seg, ta, va, tm, vm)? + self.refine(seg, tm, vm, tb, vb)?)
    }

    fn total_angle(&mut self, curve: &JordanCurve, per_segment: usize) -> Result<f64> {
        let mut total = 0.0;
        for seg in &curve.segments {
            let mut ta = 0.0;
            let mut va = self.eval(seg.point(0.0))?;
            for k in 1..=per_segment {
                let tb = k as f64 / per_segment as f64;
                let vb = self.eval(seg.point(tb))?;
                total += self.refine(seg, ta, va, tb, vb)?;
                ta = tb;
                va = vb;
            }
        }
        Ok(total)
    }
}

/// Winding number of `field` along `curve`, with the default sample budget.
pub fn winding_number<F: Fn(Point) -> Point>(field: &F, curve: &JordanCurve) -> Result<Winding> {
    winding_number_with_budget(field, curve, SAMPLE_BUDGET)
}

/// Adaptive winding number: doubles the base sampling until two successive
/// passes agree on the integer.
pub fn winding_number_with_budget<F: Fn(Point) -> Point>(
    field: &F,
    curve: &JordanCurve,
    budget: usize,
) -> Result<Winding> {
    let mut sampler = Sampler { field, budget, used: 0, min_norm: f64::INFINITY };
    let mut per_segment = 32;
    let mut prev = sampler.total_angle(curve, per_segment)? / TAU;
    loop {
        per_segment *= 2;
        let raw = sampler.total_angle(curve, per_segment)? / TAU;
        if raw.round() == prev.round() {
            let index = raw.round();
            return Ok(Winding {
                index: index as i32,
                angle_residual: (raw - index).abs(),
                samples: sampler.used,
                min_field_norm: sampler.min_norm,
            });
        }
        prev = raw;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub curve_index: i32,
    pub angle_residual: f64,
    /// Enclosed rest points of index +1.
    pub mu_plus: usize,
    /// Enclosed rest points of index -1.
    pub mu_minus: usize,
    /// Some enclosed rest point is degenerate, so the balance is undefined.
    pub degenerate_enclosed: bool,
    /// `mu_plus - mu_minus == curve_index` with every enclosed point nondegenerate.
    pub balance_ok: bool,
    pub enclosed: Vec<RestPoint>,
}

/// Winding number of the planar field along `curve`, together with the
/// bookkeeping of enclosed rest points by local index.
pub fn index_report(p: &ModelParams, curve: &JordanCurve) -> Result<IndexReport> {
    let winding = winding_number(&planar_field(p), curve)?;
    let all = find_rest_points(p, Region::Plane)?;
    let enclosed: Vec<RestPoint> = all
        .points
        .into_iter()
        .filter(|rp| curve.contains([rp.location.s, rp.location.i]))
        .collect();
    let mu_plus = enclosed.iter().filter(|rp| rp.local_index == Some(1)).count();
    let mu_minus = enclosed.iter().filter(|rp| rp.local_index == Some(-1)).count();
    let degenerate_enclosed = enclosed.iter().any(RestPoint::is_degenerate);
    let balance_ok =
        !degenerate_enclosed && mu_plus as i64 - mu_minus as i64 == winding.index as i64;
    Ok(IndexReport {
        curve_index: winding.index,
        angle_residual: winding.angle_residual,
        mu_plus,
        mu_minus,
        degenerate_enclosed,
        balance_ok,
        enclosed,
    })
}

/// Boundary of the triangle shrunk inward by `inset`.
pub fn curve_triangle(inset: f64) -> Result<JordanCurve> {
    if !(0.0..0.1).contains(&inset) {
        return Err(Error::Precondition(format!("inset {inset} outside [0, 0.1)")));
    }
    let far = 1.0 - std::f64::consts::SQRT_2 * inset - inset;
    let a = [inset, inset];
    let b = [far, inset];
    let c = [inset, far];
    JordanCurve::new(vec![
        Segment::Line { from: a, to: b },
        Segment::Line { from: b, to: c },
        Segment::Line { from: c, to: a },
    ])
}

/// Full circle, counterclockwise.
pub fn curve_circle(center: Point, radius: f64) -> Result<JordanCurve> {
    if !(radius > 0.0) {
        return Err(Error::Precondition(format!("radius {radius} must be positive")));
    }
    JordanCurve::new(vec![Segment::circle_arc(center, radius, 0.0, TAU)])
}

/// Quadratic Lyapunov form `Q` with `J^T Q + Q J = sign * I`.
fn lyapunov(j: &[[f64; 2]; 2], sign: f64) -> Option<[[f64; 2]; 2]> {
    let (a, b, c, d) = (j[0][0], j[0][1], j[1][0], j[1][1]);
    // unknowns (q1, q2, q3) of Q = [[q1, q2], [q2, q3]]
    let m = Matrix3::new(2.0 * a, 2.0 * c, 0.0, b, a + d, c, 0.0, 2.0 * b, 2.0 * d);
    let q = m.lu().solve(&Vector3::new(sign, 0.0, sign))?;
    let qm = [[q[0], q[1]], [q[1], q[2]]];
    let positive = qm[0][0] > 0.0 && qm[0][0] * qm[1][1] - qm[0][1] * qm[1][0] > 0.0;
    positive.then_some(qm)
}

/// Shape matrix of an ellipse around a hyperbolic sink or source whose
/// boundary the linearized flow crosses transversally (into the ellipse for a
/// sink, out of it for a source), scaled so the longest semi-axis is `radius`.
pub fn lyapunov_shape(p: &ModelParams, rp: &RestPoint, radius: f64) -> Result<[[f64; 2]; 2]> {
    let sign = match rp.classification {
        Stability::Sink => -1.0,
        Stability::Source => 1.0,
        other => {
            return Err(Error::Precondition(format!(
                "Lyapunov disk needs a sink or source, got {other:?}"
            )))
        }
    };
    let j = jacobian(p, &rp.location);
    let q = lyapunov(&j, sign)
        .ok_or_else(|| Error::Precondition("Lyapunov equation has no definite solution".into()))?;
    // Q^{-1} = L L^T with L lower triangular, positive diagonal
    let det_q = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    let inv = [[q[1][1] / det_q, -q[0][1] / det_q], [-q[1][0] / det_q, q[0][0] / det_q]];
    let l00 = inv[0][0].sqrt();
    let l10 = inv[1][0] / l00;
    let l11 = (inv[1][1] - l10 * l10).sqrt();
    let tr = inv[0][0] + inv[1][1];
    let det_inv = inv[0][0] * inv[1][1] - inv[0][1] * inv[1][0];
    let lam_max = 0.5 * tr + (0.25 * tr * tr - det_inv).max(0.0).sqrt();
    let k = radius / lam_max.sqrt();
    Ok([[k * l00, 0.0], [k * l10, k * l11]])
}

/// Parameter angle at which the ellipse `center + shape (cos, sin)` meets
/// the line through its center along `axis` (0: the line `s = center.s`,
/// 1: the line `i = center.i`), on the side where the other coordinate
/// offset has sign `side`.
fn axis_crossing(shape: &[[f64; 2]; 2], axis: usize, side: f64) -> f64 {
    let row = shape[axis];
    let phi = (-row[0]).atan2(row[1]);
    let other = shape[1 - axis];
    let v = other[0] * phi.cos() + other[1] * phi.sin();
    if v * side > 0.0 {
        phi
    } else {
        phi + PI
    }
}

fn other_rest_points_near(
    p: &ModelParams,
    centers: &[Point],
    radius: f64,
) -> Result<bool> {
    let all = find_rest_points(p, Region::Plane)?;
    Ok(all.points.iter().any(|rp| {
        let x = [rp.location.s, rp.location.i];
        let dists: Vec<f64> = centers.iter().map(|c| dist(*c, x)).collect();
        let own = dists.iter().any(|&d| d < 1e-9);
        !own && dists.iter().any(|&d| d < 2.0 * radius)
    }))
}

/// Inward-or-tangent check of `field` along `curve`; when it passes the
/// winding number must be exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InwardnessCheck {
    pub samples: usize,
    pub min_dot: f64,
    pub worst_point: Point,
}

impl InwardnessCheck {
    pub fn pass(&self) -> bool {
        self.min_dot >= -INWARD_TOL
    }
}

/// Evaluates `N(t) . X(c(t))` with the unit inward (left) normal at
/// `samples` points strictly inside every segment.
pub fn inwardness_on_curve<F: Fn(Point) -> Point>(
    field: &F,
    curve: &JordanCurve,
    samples: usize,
) -> InwardnessCheck {
    let mut min_dot = f64::INFINITY;
    let mut worst_point = [f64::NAN; 2];
    let mut count = 0;
    for seg in &curve.segments {
        for k in 0..samples {
            let t = (k as f64 + 0.5) / samples as f64;
            let x = seg.point(t);
            let tan = seg.tangent(t);
            let n = norm(tan);
            let normal = [-tan[1] / n, tan[0] / n];
            let v = field(x);
            let dot = normal[0] * v[0] + normal[1] * v[1];
            count += 1;
            if dot < min_dot {
                min_dot = dot;
                worst_point = x;
            }
        }
    }
    InwardnessCheck { samples: count, min_dot, worst_point }
}

fn require_special(p: &ModelParams) -> Result<()> {
    if !p.is_special_case() {
        return Err(Error::Precondition("bulged curves need b = beta1 = gamma = 0".into()));
    }
    Ok(())
}

/// Boundary of the triangle united with a small disk around the origin.
/// The disk is the Lyapunov ellipse of the origin, so the field is tangent
/// along the invariant axes and inward across the bulge. The radius is
/// halved (up to six times) until no other rest point lies within twice it
/// and the field is inward on the bulge.
pub fn curve_fig31(p: &ModelParams, radius: f64) -> Result<JordanCurve> {
    require_special(p)?;
    if !(radius > 0.0 && radius < 0.1) {
        return Err(Error::Precondition(format!("radius {radius} outside (0, 0.1)")));
    }
    let origin = crate::equilibria::classify(p, PlanarState::new(0.0, 0.0))?;
    let mut rho = radius;
    let mut last_err = None;
    for _ in 0..=MAX_SHRINKS {
        match build_fig31(p, &origin, rho) {
            Ok(c) => return Ok(c),
            Err(e) => last_err = Some(e),
        }
        rho *= 0.5;
    }
    Err(last_err.expect("at least one attempt"))
}

fn build_fig31(p: &ModelParams, origin: &RestPoint, rho: f64) -> Result<JordanCurve> {
    if other_rest_points_near(p, &[[0.0, 0.0]], rho)? {
        return Err(Error::Precondition(format!(
            "another rest point lies within {} of the origin",
            2.0 * rho
        )));
    }
    let shape = lyapunov_shape(p, origin, rho)?;
    let up = axis_crossing(&shape, 0, 1.0);
    let right = axis_crossing(&shape, 1, 1.0);
    let sweep = (right - up).rem_euclid(TAU);
    let bulge = Segment::Arc { center: [0.0, 0.0], shape, start: up, sweep };
    let top = bulge.point(0.0);
    let east = bulge.point(1.0);
    let curve = JordanCurve::new(vec![
        Segment::Line { from: east, to: [1.0, 0.0] },
        Segment::Line { from: [1.0, 0.0], to: [0.0, 1.0] },
        Segment::Line { from: [0.0, 1.0], to: top },
        bulge,
    ])?;
    check_inward(p, &curve)?;
    Ok(curve)
}

fn check_inward(p: &ModelParams, curve: &JordanCurve) -> Result<()> {
    let check = inwardness_on_curve(&planar_field(p), curve, 512);
    if !check.pass() {
        return Err(Error::Precondition(format!(
            "field points outward (N.X = {:e}) at {:?}",
            check.min_dot, check.worst_point
        )));
    }
    Ok(())
}

/// Boundary of `(D1 u B2 u B3) - B1`: the triangle with the origin excised
/// by a small disk and small disks added around the two boundary sinks
/// `(0, 1 - alpha/(eps2 - eps1))` and `(1 - beta/eps2, 0)`. Disks are
/// Lyapunov ellipses whose longest semi-axes are the given radii; all three
/// radii are halved together (up to six times) when a rest point crowds a
/// disk or the field fails to point inward.
pub fn curve_fig32(p: &ModelParams, radii: [f64; 3]) -> Result<JordanCurve> {
    require_special(p)?;
    let rep = crate::equilibria::special_case_report(p)?;
    if !(rep.t0 > 0.0 && rep.t1 > 0.0) {
        return Err(Error::Precondition("three-bulge curve needs T0 > 0 and T1 > 0".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r < 0.1)) {
        return Err(Error::Precondition(format!("radii {radii:?} outside (0, 0.1)")));
    }
    let origin = crate::equilibria::classify(p, rep.origin)?;
    let sink_i = crate::equilibria::classify(p, rep.p_i)?;
    let sink_s = crate::equilibria::classify(p, rep.p_s)?;
    let mut scale = 1.0;
    let mut last_err = None;
    for _ in 0..=MAX_SHRINKS {
        let r = radii.map(|x| x * scale);
        match build_fig32(p, [&origin, &sink_i, &sink_s], r) {
            Ok(c) => return Ok(c),
            Err(e) => last_err = Some(e),
        }
        scale *= 0.5;
    }
    Err(last_err.expect("at least one attempt"))
}

fn build_fig32(p: &ModelParams, pts: [&RestPoint; 3], radii: [f64; 3]) -> Result<JordanCurve> {
    let [origin, sink_i, sink_s] = pts;
    let ci = [0.0, sink_i.location.i];
    let cs = [sink_s.location.s, 0.0];
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    if other_rest_points_near(p, &[[0.0, 0.0], ci, cs], max_r)? {
        return Err(Error::Precondition("a rest point crowds one of the disks".into()));
    }
    if radii[0] + radii[1] >= ci[1] || radii[0] + radii[2] >= cs[0] {
        return Err(Error::Precondition("disks overlap the origin disk".into()));
    }
    if ci[1] + radii[1] >= 1.0 || cs[0] + radii[2] >= 1.0 {
        return Err(Error::Precondition("disk reaches a triangle vertex".into()));
    }

    let b1 = lyapunov_shape(p, origin, radii[0])?;
    let b2 = lyapunov_shape(p, sink_i, radii[1])?;
    let b3 = lyapunov_shape(p, sink_s, radii[2])?;

    // excised corner at the origin, traversed clockwise from the i-axis to the s-axis
    let up1 = axis_crossing(&b1, 0, 1.0);
    let right1 = axis_crossing(&b1, 1, 1.0);
    let notch = Segment::Arc {
        center: [0.0, 0.0],
        shape: b1,
        start: up1,
        sweep: -(up1 - right1).rem_euclid(TAU),
    };
    // bulge below the s-axis around the sink on it
    let west3 = axis_crossing(&b3, 1, -1.0);
    let bulge_s = Segment::Arc { center: cs, shape: b3, start: west3, sweep: PI };
    // bulge left of the i-axis around the sink on it
    let north2 = axis_crossing(&b2, 0, 1.0);
    let bulge_i = Segment::Arc { center: ci, shape: b2, start: north2, sweep: PI };

    let curve = JordanCurve::new(vec![
        Segment::Line { from: notch.point(1.0), to: bulge_s.point(0.0) },
        bulge_s,
        Segment::Line { from: bulge_s.point(1.0), to: [1.0, 0.0] },
        Segment::Line { from: [1.0, 0.0], to: [0.0, 1.0] },
        Segment::Line { from: [0.0, 1.0], to: bulge_i.point(0.0) },
        bulge_i,
        Segment::Line { from: bulge_i.point(1.0), to: notch.point(0.0) },
        notch,
    ])?;
    check_inward(p, &curve)?;
    Ok(curve)
}

/// Winding number on a circle of `radius` about a nondegenerate rest point.
pub fn local_index(p: &ModelParams, rp: &RestPoint, radius: f64) -> Result<i32> {
    if rp.is_degenerate() {
        return Err(Error::Precondition("local index of a degenerate rest point".into()));
    }
    let here = [rp.location.s, rp.location.i];
    if other_rest_points_near(p, &[here], radius)? {
        return Err(Error::Precondition(format!(
            "another rest point lies within {} of ({}, {})",
            2.0 * radius,
            here[0],
            here[1]
        )));
    }
    let circle = curve_circle(here, radius)?;
    Ok(winding_number(&planar_field(p), &circle)?.index)
}
