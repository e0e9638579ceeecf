//! Regime classification, construction of bistable instances, basins of
//! attraction in the bistable regime, and two-parameter sweeps.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate_backward, omega_limit_among, Tolerances, DEFAULT_MAX_TIME};
use crate::equilibria::{
    find_rest_points, special_case_report, Region, RestPoint, RestPointSet, SpecialCaseRegime,
    Stability,
};
use crate::error::{Error, Result};
use crate::index::{curve_triangle, index_report, point_segment_distance, IndexReport};
use crate::model::{planar_residual, ModelParams, PlanarState, PARAM_NAMES};

/// Inset of the triangle used for the boundary index.
pub const BOUNDARY_INSET: f64 = 1e-4;
pub const DEFAULT_DELTA: f64 = 1e-3;
const MAX_HALVINGS: usize = 10;
/// Offset from the saddle along its stable eigenvector.
pub const MANIFOLD_SEED: f64 = 1e-6;
const BACKWARD_T_MAX: f64 = 1e4;
const BACKWARD_MAX_LEN: f64 = 10.0;
const SWITCH_TOL: f64 = 1e-6;
const SWITCH_ITERATIONS: usize = 40;
const BOUNDARY_SAMPLES: usize = 96;
/// Probes this close to the manifold are left out of the side test.
pub const MANIFOLD_TUBE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeLabel {
    /// One interior rest point, a sink attracting the open triangle.
    #[serde(rename = "A_UniqueGAS")]
    UniqueGas,
    /// Two interior sinks and one interior saddle.
    #[serde(rename = "B_TwoSinksOneSaddle")]
    TwoSinksOneSaddle,
    DegenerateDetected,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::UniqueGas => "A_UniqueGAS",
            RegimeLabel::TwoSinksOneSaddle => "B_TwoSinksOneSaddle",
            RegimeLabel::DegenerateDetected => "DegenerateDetected",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub label: RegimeLabel,
    /// Interior rest points, sorted by `s`.
    pub rest_points: Vec<RestPoint>,
    /// Index along the boundary of the triangle inset by [`BOUNDARY_INSET`].
    pub index_report: IndexReport,
    /// Interior sinks.
    pub mu0: usize,
    /// Interior saddles.
    pub mu1: usize,
    /// Interior sources.
    pub mu2: usize,
}

impl RegimeVerdict {
    pub fn sinks(&self) -> Vec<&RestPoint> {
        self.of_kind(Stability::Sink)
    }

    pub fn saddle(&self) -> Option<&RestPoint> {
        self.of_kind(Stability::Saddle).into_iter().next()
    }

    fn of_kind(&self, kind: Stability) -> Vec<&RestPoint> {
        self.rest_points.iter().filter(|rp| rp.classification == kind).collect()
    }
}

fn degenerate_points(set: &RestPointSet) -> bool {
    set.points.iter().any(|rp| rp.is_degenerate()) || set.is_ill_conditioned()
}

/// Counts interior rest points by type and decides between the two
/// configurations allowed for strictly positive parameters.
pub fn classify_regime(p: &ModelParams) -> Result<RegimeVerdict> {
    p.validate()?;
    if !p.is_general_case() {
        return Err(Error::Precondition(
            "regime classification needs b, eps1, eps2, lambda, alpha, gamma, beta1, beta2 > 0"
                .into(),
        ));
    }
    let set = find_rest_points(p, Region::Interior)?;
    let index_report = index_report(p, &curve_triangle(BOUNDARY_INSET)?)?;
    let count = |k| set.count(k);
    let (mu0, mu1, mu2) = (count(Stability::Sink), count(Stability::Saddle), count(Stability::Source));
    let label = if degenerate_points(&set) {
        RegimeLabel::DegenerateDetected
    } else {
        match (mu0, mu1, mu2) {
            (1, 0, 0) => RegimeLabel::UniqueGas,
            (2, 1, 0) => RegimeLabel::TwoSinksOneSaddle,
            _ => {
                return Err(Error::InconsistentWithTheorem(format!(
                    "{mu0} sinks, {mu1} saddles, {mu2} sources in the interior"
                )))
            }
        }
    };
    Ok(RegimeVerdict { label, rest_points: set.points, index_report, mu0, mu1, mu2 })
}

/// Admissible interval for `T0 / T1` that makes the special case bistable.
pub fn bistable_ratio_interval(eps1: f64, eps2: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(eps2 > eps1 && eps1 > lambda && lambda > 0.0) {
        return Err(Error::EmptyInterval(format!(
            "need eps2 > eps1 > lambda > 0, got eps1={eps1}, eps2={eps2}, lambda={lambda}"
        )));
    }
    let lo = 1.0 / (1.0 - lambda / eps2);
    let hi = 1.0 + lambda / (eps2 - eps1);
    if !(lo < hi) {
        return Err(Error::EmptyInterval(format!("({lo}, {hi})")));
    }
    Ok((lo, hi))
}

/// Special-case parameters (`b = beta1 = gamma = 0`, `d = 0`) with two
/// boundary sinks and an interior saddle. `fraction` places `T0 / T1` inside
/// its admissible interval; `alpha` defaults to half of `eps2 - eps1`,
/// enlarged if needed to keep `beta` positive.
pub fn bistable_special_instance(
    eps1: f64,
    eps2: f64,
    lambda: f64,
    fraction: f64,
    alpha: Option<f64>,
) -> Result<ModelParams> {
    let (lo, hi) = bistable_ratio_interval(eps1, eps2, lambda)?;
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Precondition(format!("fraction {fraction} must lie in (0, 1)")));
    }
    let ratio = lo + fraction * (hi - lo);
    let gap = eps2 - eps1;
    let alpha = match alpha {
        Some(a) if a > 0.0 && a < gap && ratio * (gap - a) < eps2 => a,
        Some(a) => {
            return Err(Error::EmptyInterval(format!(
                "alpha {a} must lie in (0, {gap}) and keep beta positive"
            )))
        }
        None if ratio * gap / 2.0 < eps2 => gap / 2.0,
        None => gap - eps2 / (2.0 * ratio),
    };
    let beta = eps2 - ratio * (gap - alpha);
    let p = ModelParams {
        b: 0.0,
        d: 0.0,
        eps1,
        eps2,
        lambda,
        alpha,
        gamma: 0.0,
        beta1: 0.0,
        beta2: beta,
    };
    let report = special_case_report(&p)?;
    if report.regime_label != SpecialCaseRegime::TwoBoundarySinksPlusSaddle {
        return Err(Error::EmptyInterval(format!(
            "constructed instance is {:?}, not bistable",
            report.regime_label
        )));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub params: ModelParams,
    /// The perturbation size that succeeded.
    pub delta: f64,
    pub verdict: RegimeVerdict,
}

/// `b = gamma = beta1 = delta`, `beta2` lowered by `delta`.
pub fn perturbed(p: &ModelParams, delta: f64) -> ModelParams {
    ModelParams { b: delta, gamma: delta, beta1: delta, beta2: p.beta2 - delta, ..*p }
}

/// Moves a bistable special-case instance into the general case, halving
/// `delta` up to ten times until the result classifies as regime B.
pub fn perturb_special_case(p: &ModelParams, delta: f64) -> Result<Perturbation> {
    if !(delta > 0.0) {
        return Err(Error::Precondition(format!("delta {delta} must be positive")));
    }
    let report = special_case_report(p)?;
    if report.regime_label != SpecialCaseRegime::TwoBoundarySinksPlusSaddle {
        return Err(Error::Precondition(format!(
            "special case is {:?}, not bistable",
            report.regime_label
        )));
    }
    let mut delta = delta;
    for _ in 0..=MAX_HALVINGS {
        if p.beta2 - delta > 0.0 {
            let q = perturbed(p, delta);
            if let Ok(verdict) = classify_regime(&q) {
                if verdict.label == RegimeLabel::TwoSinksOneSaddle {
                    return Ok(Perturbation { params: q, delta, verdict });
                }
            }
        }
        delta /= 2.0;
    }
    Err(Error::PersistenceFailure)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeStatus {
    /// Settled on one of the two sinks.
    Sink(usize),
    /// Settled on the saddle (the probe sits on its stable manifold).
    Saddle,
    Unconverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub point: PlanarState,
    pub status: ProbeStatus,
    /// Side of the manifold predicted by geometry, as a sink number.
    pub predicted: usize,
    pub distance_to_manifold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideTestSummary {
    pub compared: usize,
    pub agreed: usize,
    pub near_manifold: usize,
    pub unconverged: usize,
}

impl SideTestSummary {
    pub fn agreement(&self) -> f64 {
        if self.compared == 0 {
            1.0
        } else {
            self.agreed as f64 / self.compared as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinReport {
    pub saddle: RestPoint,
    pub sinks: [RestPoint; 2],
    /// The two branches of the saddle's stable manifold, each running from
    /// the saddle to the boundary of the triangle.
    pub stable_manifold: [Vec<PlanarState>; 2],
    pub manifold_exits: [PlanarState; 2],
    pub probes: Vec<Probe>,
    /// Boundary points where the limiting sink changes.
    pub boundary_crossings: Vec<PlanarState>,
    pub side_test: SideTestSummary,
}

impl BasinReport {
    /// The manifold as one polyline from the first exit to the second.
    pub fn manifold_polyline(&self) -> Vec<PlanarState> {
        let mut out: Vec<PlanarState> = self.stable_manifold[0].iter().rev().copied().collect();
        out.extend(self.stable_manifold[1].iter().skip(1));
        out
    }

    pub fn distance_to_manifold(&self, x: &PlanarState) -> f64 {
        polyline_distance(&self.manifold_polyline(), x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasinOptions {
    /// Probe grid resolution per axis.
    pub grid: usize,
    /// Extra uniformly random probes.
    pub random_probes: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for BasinOptions {
    fn default() -> Self {
        BasinOptions { grid: 20, random_probes: 0, seed: 0, tolerances: Tolerances::default() }
    }
}

const PERIMETER: f64 = 2.0 + std::f64::consts::SQRT_2;

/// Counterclockwise arc-length parametrization of the triangle boundary
/// starting at the origin.
pub fn boundary_point(u: f64) -> PlanarState {
    let u = u.rem_euclid(PERIMETER);
    let h = std::f64::consts::SQRT_2;
    if u <= 1.0 {
        PlanarState::new(u, 0.0)
    } else if u <= 1.0 + h {
        let t = (u - 1.0) / h;
        PlanarState::new(1.0 - t, t)
    } else {
        PlanarState::new(0.0, 1.0 - (u - 1.0 - h))
    }
}

/// Inverse of [`boundary_point`] for a point on (or projected to) the boundary.
pub fn boundary_parameter(x: &PlanarState) -> f64 {
    let h = std::f64::consts::SQRT_2;
    let r = 1.0 - x.s - x.i;
    let m = x.s.min(x.i).min(r);
    if m == x.i {
        x.s.clamp(0.0, 1.0)
    } else if m == r {
        1.0 + h * x.i.clamp(0.0, 1.0)
    } else {
        1.0 + h + (1.0 - x.i).clamp(0.0, 1.0)
    }
}

fn polyline_distance(line: &[PlanarState], x: &PlanarState) -> f64 {
    line.windows(2)
        .map(|w| point_segment_distance([x.s, x.i], [w[0].s, w[0].i], [w[1].s, w[1].i]))
        .fold(f64::INFINITY, f64::min)
}

fn slack(x: &PlanarState) -> f64 {
    x.s.min(x.i).min(1.0 - x.s - x.i)
}

/// Cuts a branch at its first exit from the triangle, ending it on the
/// boundary.
fn clip_to_triangle(path: &[PlanarState]) -> Vec<PlanarState> {
    let mut out = vec![path[0]];
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        if slack(&b) >= 0.0 {
            out.push(b);
            continue;
        }
        // slack is piecewise linear along the segment; bisect its sign change
        let (mut lo, mut hi) = (0.0, 1.0);
        let at = |t: f64| PlanarState::new(a.s + t * (b.s - a.s), a.i + t * (b.i - a.i));
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if slack(&at(mid)) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = at(lo);
        let u = boundary_parameter(&e);
        out.push(boundary_point(u));
        return out;
    }
    out
}

fn point_in_polygon(poly: &[PlanarState], x: &PlanarState) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a.i > x.i) != (b.i > x.i) {
            let s = a.s + (x.i - a.i) / (b.i - a.i) * (b.s - a.s);
            if x.s < s {
                inside = !inside;
            }
        }
    }
    inside
}

/// One side of the manifold: the manifold from exit 0 to exit 1, closed by
/// the boundary running counterclockwise from exit 1 back to exit 0.
fn side_polygon(manifold: &[PlanarState], exits: [PlanarState; 2]) -> Vec<PlanarState> {
    let mut poly = manifold.to_vec();
    let u1 = boundary_parameter(&exits[1]);
    let mut u0 = boundary_parameter(&exits[0]);
    if u0 <= u1 {
        u0 += PERIMETER;
    }
    let h = std::f64::consts::SQRT_2;
    for corner in [0.0, 1.0, 1.0 + h, PERIMETER, PERIMETER + 1.0, PERIMETER + 1.0 + h] {
        if corner > u1 && corner < u0 {
            poly.push(boundary_point(corner));
        }
    }
    poly
}

/// Stable manifold of the saddle, sink assignment of probe points, and
/// the boundary points where the assignment switches.
pub fn basin_analysis(
    p: &ModelParams,
    verdict: &RegimeVerdict,
    opts: &BasinOptions,
) -> Result<BasinReport> {
    if verdict.label != RegimeLabel::TwoSinksOneSaddle {
        return Err(Error::Precondition(format!("basin analysis needs regime B, got {}", verdict.label)));
    }
    let saddle = verdict.saddle().expect("regime B has a saddle").clone();
    let sink_refs = verdict.sinks();
    let sinks = [sink_refs[0].clone(), sink_refs[1].clone()];
    let (_, v) = saddle
        .stable_direction()
        .ok_or_else(|| Error::Precondition("saddle without a real stable direction".into()))?;

    let tol = opts.tolerances;
    let mut branches = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let start = PlanarState::new(
            saddle.location.s + sign * MANIFOLD_SEED * v[0],
            saddle.location.i + sign * MANIFOLD_SEED * v[1],
        );
        let stalled = |x: &PlanarState| planar_residual(p, x) < 1e-10;
        let path = integrate_backward(p, start, BACKWARD_T_MAX, BACKWARD_MAX_LEN, tol, |x| {
            slack(x) < 0.0 || stalled(x)
        })?;
        let mut branch = vec![saddle.location];
        branch.extend(clip_to_triangle(&path));
        branches.push(branch);
    }
    let second = branches.pop().expect("two branches");
    let first = branches.pop().expect("two branches");
    let exits = [*first.last().expect("non-empty"), *second.last().expect("non-empty")];
    let manifold: Vec<PlanarState> =
        first.iter().rev().copied().chain(second.iter().skip(1).copied()).collect();
    let polygon = side_polygon(&manifold, exits);
    let inside_sink = if point_in_polygon(&polygon, &sinks[0].location) { 0 } else { 1 };
    let predict = |x: &PlanarState| {
        if point_in_polygon(&polygon, x) {
            inside_sink
        } else {
            1 - inside_sink
        }
    };

    let all = RestPointSet { points: vec![sinks[0].clone(), sinks[1].clone(), saddle.clone()], near_coincident: vec![] };
    let assign = |x: PlanarState| -> ProbeStatus {
        match omega_limit_among(p, x, DEFAULT_MAX_TIME, &all, tol) {
            Ok(r) => match r.matched_rest_point {
                Some(k @ (0 | 1)) => ProbeStatus::Sink(k),
                Some(_) => ProbeStatus::Saddle,
                None => ProbeStatus::Unconverged,
            },
            Err(_) => ProbeStatus::Unconverged,
        }
    };

    let mut points = Vec::new();
    let n = opts.grid;
    for j in 0..n {
        for k in 0..n {
            let x = PlanarState::new((j as f64 + 0.5) / n as f64, (k as f64 + 0.5) / n as f64);
            if x.s + x.i < 1.0 {
                points.push(x);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while points.len() < n * (n + 1) / 2 + opts.random_probes {
        let x = PlanarState::new(rng.gen::<f64>(), rng.gen::<f64>());
        if x.s + x.i < 1.0 {
            points.push(x);
        }
    }
    points.extend(sinks.iter().map(|rp| rp.location));

    let probes: Vec<Probe> = points
        .par_iter()
        .map(|&x| Probe {
            point: x,
            status: assign(x),
            predicted: predict(&x),
            distance_to_manifold: polyline_distance(&manifold, &x),
        })
        .collect();
    let mut side_test = SideTestSummary { compared: 0, agreed: 0, near_manifold: 0, unconverged: 0 };
    for probe in &probes {
        match probe.status {
            ProbeStatus::Sink(_) | ProbeStatus::Saddle if probe.distance_to_manifold <= MANIFOLD_TUBE => {
                side_test.near_manifold += 1
            }
            ProbeStatus::Sink(k) => {
                side_test.compared += 1;
                if k == probe.predicted {
                    side_test.agreed += 1;
                }
            }
            ProbeStatus::Saddle => side_test.compared += 1,
            ProbeStatus::Unconverged => side_test.unconverged += 1,
        }
    }

    let boundary_crossings = switch_points(&assign)?;
    Ok(BasinReport {
        saddle,
        sinks,
        stable_manifold: [first, second],
        manifold_exits: exits,
        probes,
        boundary_crossings,
        side_test,
    })
}

fn switch_points<A: Fn(PlanarState) -> ProbeStatus + Sync>(assign: &A) -> Result<Vec<PlanarState>> {
    let step = PERIMETER / BOUNDARY_SAMPLES as f64;
    let labels: Vec<ProbeStatus> =
        (0..BOUNDARY_SAMPLES).into_par_iter().map(|k| assign(boundary_point(k as f64 * step))).collect();
    let sink_of = |s: ProbeStatus| match s {
        ProbeStatus::Sink(k) => Some(k),
        _ => None,
    };
    let mut brackets = Vec::new();
    for k in 0..BOUNDARY_SAMPLES {
        let (a, b) = (sink_of(labels[k]), sink_of(labels[(k + 1) % BOUNDARY_SAMPLES]));
        if let (Some(a), Some(b)) = (a, b) {
            if a != b {
                brackets.push((k as f64 * step, (k + 1) as f64 * step, a));
            }
        }
    }
    brackets
        .into_par_iter()
        .map(|(mut lo, mut hi, lo_sink)| {
            for _ in 0..SWITCH_ITERATIONS {
                if boundary_point(lo).dist(&boundary_point(hi)) < SWITCH_TOL {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                match sink_of(assign(boundary_point(mid))) {
                    Some(s) if s == lo_sink => lo = mid,
                    Some(_) => hi = mid,
                    // on the manifold itself
                    None => return Ok(boundary_point(mid)),
                }
            }
            Ok(boundary_point(0.5 * (lo + hi)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    /// A parameter name, or `beta` for `beta1 + beta2` (moved through `beta2`).
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn new(name: &str, lo: f64, hi: f64, steps: usize) -> Self {
        SweepAxis { name: name.to_string(), lo, hi, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.name != "beta" && !PARAM_NAMES.contains(&self.name.as_str()) {
            return Err(Error::Precondition(format!("unknown sweep axis {:?}", self.name)));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo >= 0.0 && self.hi >= self.lo) {
            return Err(Error::Precondition(format!(
                "axis {} range [{}, {}] must be finite, ordered and nonnegative",
                self.name, self.lo, self.hi
            )));
        }
        if self.steps == 0 {
            return Err(Error::Precondition(format!("axis {} needs at least one step", self.name)));
        }
        Ok(())
    }
}

fn set_axis(p: &mut ModelParams, name: &str, v: f64) -> Result<()> {
    if name == "beta" {
        p.beta2 = v - p.beta1;
        p.validate()
    } else {
        p.set(name, v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub x: f64,
    pub y: f64,
    pub label: Option<RegimeLabel>,
    pub mu: [usize; 3],
    pub degenerate: bool,
    /// Contract name and message of a failed cell.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    /// Row-major in `axis1`, then `axis2`.
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn count(&self, label: RegimeLabel) -> usize {
        self.cells.iter().filter(|c| c.label == Some(label)).count()
    }

    pub fn errors(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

/// Classifies every cell of a two-parameter grid around `base`. Failures
/// are recorded in their cell.
pub fn parameter_sweep(base: &ModelParams, axis1: &SweepAxis, axis2: &SweepAxis) -> Result<SweepGrid> {
    axis1.validate()?;
    axis2.validate()?;
    let pairs: Vec<(f64, f64)> = axis1
        .values()
        .into_iter()
        .flat_map(|x| axis2.values().into_iter().map(move |y| (x, y)))
        .collect();
    let cells = pairs
        .into_par_iter()
        .map(|(x, y)| {
            let verdict = (|| {
                let mut p = *base;
                set_axis(&mut p, &axis1.name, x)?;
                set_axis(&mut p, &axis2.name, y)?;
                classify_regime(&p)
            })();
            match verdict {
                Ok(v) => SweepCell {
                    x,
                    y,
                    label: Some(v.label),
                    mu: [v.mu0, v.mu1, v.mu2],
                    degenerate: v.label == RegimeLabel::DegenerateDetected,
                    error: None,
                },
                Err(e) => SweepCell {
                    x,
                    y,
                    label: None,
                    mu: [0; 3],
                    degenerate: matches!(e, Error::NonIsolatedRestPoints),
                    error: Some(format!("{}: {e}", e.contract())),
                },
            }
        })
        .collect();
    Ok(SweepGrid { axis1: axis1.clone(), axis2: axis2.clone(), cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn special() -> ModelParams {
        bistable_special_instance(2.0, 4.0, 1.0, 0.4, Some(1.0)).unwrap()
    }

    #[test]
    fn bistable_instance_reproduces_reference_values() {
        let p = special();
        assert!((p.beta2 - 2.6).abs() < 1e-14);
        let (lo, hi) = bistable_ratio_interval(2.0, 4.0, 1.0).unwrap();
        assert!((lo - 4.0 / 3.0).abs() < 1e-15 && (hi - 1.5).abs() < 1e-15);
        let r = special_case_report(&p).unwrap();
        assert!((r.t0 - 1.4).abs() < 1e-14 && (r.t1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn default_alpha_keeps_beta_positive() {
        let p = bistable_special_instance(2.0, 4.0, 1.0, 0.5, None).unwrap();
        assert_eq!(p.alpha, 1.0);
        let p = bistable_special_instance(1.0, 10.0, 0.5, 0.9, None).unwrap();
        assert!(p.beta2 > 0.0 && p.alpha > 0.0 && p.alpha < 9.0);
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(matches!(
            bistable_special_instance(2.0, 4.0, 2.0, 0.5, None),
            Err(Error::EmptyInterval(_))
        ));
        assert!(matches!(
            bistable_special_instance(4.0, 2.0, 1.0, 0.5, None),
            Err(Error::EmptyInterval(_))
        ));
    }

    #[test]
    fn perturbation_gives_regime_b() {
        let pert = perturb_special_case(&special(), DEFAULT_DELTA).unwrap();
        assert_eq!(pert.verdict.label, RegimeLabel::TwoSinksOneSaddle);
        assert_eq!((pert.verdict.mu0, pert.verdict.mu1, pert.verdict.mu2), (2, 1, 0));
        for rp in pert.verdict.sinks() {
            assert!(rp.location.s.min(rp.location.i) > 0.0);
        }
        assert!((pert.params.beta() - special().beta()).abs() < 1e-15);
        assert!(perturb_special_case(&special(), 0.0).is_err());
    }

    #[test]
    fn boundary_parametrization_round_trip() {
        for k in 0..50 {
            let u = k as f64 * PERIMETER / 50.0;
            let x = boundary_point(u);
            assert!((boundary_parameter(&x) - u).abs() < 1e-12, "{u}");
        }
    }

    #[test]
    fn unknown_axis_rejected() {
        let p = perturbed(&special(), 1e-3);
        assert!(parameter_sweep(&p, &SweepAxis::new("zeta", 0.0, 1.0, 2), &SweepAxis::new("b", 0.0, 1.0, 2))
            .is_err());
    }
}
