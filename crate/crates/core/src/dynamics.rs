//! Time integration of the three systems with an embedded Dormand-Prince
//! 5(4) pair, omega-limit detection, and the total-population growth
//! threshold.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::equilibria::{find_rest_points, Region, RestPoint, RestPointSet};
use crate::error::{Error, Result};
use crate::model::{
    planar_residual, planar_rhs, population_rhs, proportion_rhs, ModelParams, PlanarState,
    PopulationState, ProportionState,
};

pub const DEFAULT_RTOL: f64 = 1e-9;
pub const DEFAULT_ATOL: f64 = 1e-12;
/// Velocity norm certifying arrival at a rest point.
pub const REST_VELOCITY: f64 = 1e-10;
/// Distance within which a settled orbit is matched to a computed rest point.
pub const MATCH_DISTANCE: f64 = 1e-6;
pub const DEFAULT_MAX_TIME: f64 = 1e5;
/// Thresholds near 1 are not decided by simulation.
pub const GROWTH_MARGIN: f64 = 0.05;
/// `h |lambda|` bound for the omega-limit search.
const STABLE_STEP: f64 = 1.5;
const MIN_STORED_POINTS: usize = 200;
const RESCALE_LOW: f64 = 1e-100;
const RESCALE_HIGH: f64 = 1e100;
const LN_UNDERFLOW: f64 = -690.7755278982137; // ln(1e-300)

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: DEFAULT_RTOL, atol: DEFAULT_ATOL }
    }
}

// Dormand-Prince coefficients
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for j in 0..N {
            out[j] += h * c * k[j];
        }
    }
    out
}

/// How an adaptive run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// Reached the requested end time.
    Completed,
    /// The observer asked to stop.
    Stopped,
    /// Total population fell below 1e-300.
    PopulationUnderflow,
}

/// Adaptive Dormand-Prince 5(4) from `t0` to `t_end > t0`. The observer sees
/// every accepted step and may stop the run.
pub fn dopri5<const N: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerances,
    max_step: f64,
    observer: O,
) -> Result<(f64, [f64; N], Termination)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]) -> ControlFlow<()>,
{
    dopri5_scaled(f, t0, y0, t_end, tol, max_step, |_| 1.0, observer)
}

/// [`dopri5`] with the absolute tolerance multiplied by `atol_unit(y)`.
#[allow(clippy::too_many_arguments)]
fn dopri5_scaled<const N: usize, F, U, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerances,
    max_step: f64,
    atol_unit: U,
    mut observer: O,
) -> Result<(f64, [f64; N], Termination)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    U: Fn(&[f64; N]) -> f64,
    O: FnMut(f64, &[f64; N]) -> ControlFlow<()>,
{
    let scale = |y: &[f64; N], z: &[f64; N], j: usize| {
        tol.atol * atol_unit(y) + tol.rtol * y[j].abs().max(z[j].abs())
    };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let span = t_end - t0;
    if span <= 0.0 {
        return Ok((t, y, Termination::Completed));
    }

    let mut h = {
        let d0 = (0..N).map(|j| (y[j] / scale(&y, &y, j)).powi(2)).sum::<f64>().sqrt();
        let d1 = (0..N).map(|j| (k1[j] / scale(&y, &y, j)).powi(2)).sum::<f64>().sqrt();
        let guess = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        guess.min(max_step).min(span)
    };

    loop {
        if t >= t_end {
            return Ok((t, y, Termination::Completed));
        }
        let min_h = 1e-14 * t.abs().max(1.0);
        if h < min_h {
            return Err(Error::StepSizeUnderflow { t });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let k2 = f(t + C2 * h, &combo(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &combo(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(
            t + h,
            &combo(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combo(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new);

        let mut err = 0.0;
        for j in 0..N {
            let e = h
                * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]);
            err += (e / scale(&y, &y_new, j)).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if h <= min_h {
                return Err(Error::NonFiniteState { t });
            }
            h *= 0.25;
            continue;
        }

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            k1 = k7;
            if observer(t, &y).is_break() {
                return Ok((t, y, Termination::Stopped));
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(max_step);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum System {
    /// `(s, i)`.
    Planar,
    /// `(s, i, r)`.
    Proportions,
    /// `(S, I, R)`, stored with `N` as a fourth component.
    Population,
}

impl System {
    pub fn dimension(self) -> usize {
        match self {
            System::Planar => 2,
            System::Proportions => 3,
            System::Population => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub system: System,
    pub times: Vec<f64>,
    /// Planar: `[s, i]`; proportions: `[s, i, r]`; population: `[S, I, R, N]`.
    pub states: Vec<Vec<f64>>,
    /// `ln N` per sample for population runs (empty otherwise); stays
    /// finite when `N` itself leaves the floating-point range.
    pub ln_population: Vec<f64>,
    pub tolerances: Tolerances,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> (f64, &[f64]) {
        let k = self.times.len() - 1;
        (self.times[k], &self.states[k])
    }

    /// Largest `|s + i + r - 1|` over a proportions run.
    pub fn simplex_drift(&self) -> f64 {
        match self.system {
            System::Proportions => self
                .states
                .iter()
                .map(|x| (x[0] + x[1] + x[2] - 1.0).abs())
                .fold(0.0, f64::max),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub tolerances: Tolerances,
    /// Largest step; defaults to `t_end / 200` so plots get enough points.
    pub max_step: Option<f64>,
}


fn validate_initial(system: System, x0: &[f64]) -> Result<()> {
    if x0.len() != system.dimension() {
        return Err(Error::Precondition(format!(
            "{system:?} state needs {} components, got {}",
            system.dimension(),
            x0.len()
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState { t: 0.0 });
    }
    if system == System::Population && !(x0.iter().sum::<f64>() > 0.0) {
        return Err(Error::ZeroPopulation);
    }
    Ok(())
}

/// Integrates `system` from `x0` at `t = 0` to `t_end`.
pub fn integrate(
    system: System,
    p: &ModelParams,
    x0: &[f64],
    t_end: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory> {
    validate_initial(system, x0)?;
    if !(t_end > 0.0) {
        return Err(Error::Precondition(format!("t_end {t_end} must be positive")));
    }
    let max_step = opts.max_step.unwrap_or(t_end / MIN_STORED_POINTS as f64);
    let tol = opts.tolerances;
    let mut traj = Trajectory {
        system,
        times: vec![0.0],
        states: Vec::new(),
        ln_population: Vec::new(),
        tolerances: tol,
        termination: Termination::Completed,
    };
    match system {
        System::Planar => {
            let y0 = [x0[0], x0[1]];
            traj.states.push(y0.to_vec());
            let rhs = |_t: f64, y: &[f64; 2]| planar_rhs(p, &PlanarState::new(y[0], y[1]));
            let (_, _, term) = dopri5(rhs, 0.0, y0, t_end, tol, max_step, |t, y| {
                traj.times.push(t);
                traj.states.push(y.to_vec());
                ControlFlow::Continue(())
            })?;
            traj.termination = term;
        }
        System::Proportions => {
            let y0 = [x0[0], x0[1], x0[2]];
            traj.states.push(y0.to_vec());
            let rhs = |_t: f64, y: &[f64; 3]| proportion_rhs(p, &ProportionState::new(y[0], y[1], y[2]));
            let (_, _, term) = dopri5(rhs, 0.0, y0, t_end, tol, max_step, |t, y| {
                traj.times.push(t);
                traj.states.push(y.to_vec());
                ControlFlow::Continue(())
            })?;
            traj.termination = term;
        }
        System::Population => integrate_population(p, x0, t_end, tol, max_step, &mut traj)?,
    }
    Ok(traj)
}

/// The population field is homogeneous of degree one, so the state is
/// renormalized by `N` whenever `N` leaves `[1e-100, 1e100]` and the
/// logarithm of the factor is carried separately.
fn integrate_population(
    p: &ModelParams,
    x0: &[f64],
    t_end: f64,
    tol: Tolerances,
    max_step: f64,
    traj: &mut Trajectory,
) -> Result<()> {
    let rhs = |_t: f64, y: &[f64; 3]| {
        population_rhs(p, &PopulationState::new(y[0], y[1], y[2])).unwrap_or([f64::NAN; 3])
    };
    let mut y = [x0[0], x0[1], x0[2]];
    let mut ln_scale = 0.0;
    let record = |traj: &mut Trajectory, t: f64, y: &[f64; 3], ln_scale: f64| {
        let n = y[0] + y[1] + y[2];
        let factor = ln_scale.exp();
        traj.times.push(t);
        traj.states.push(vec![y[0] * factor, y[1] * factor, y[2] * factor, n * factor]);
        traj.ln_population.push(n.ln() + ln_scale);
    };
    record(traj, 0.0, &y, ln_scale);
    traj.times.pop();
    let mut t = 0.0;
    loop {
        let mut rescale = false;
        let mut underflow = false;
        // homogeneous field: absolute error is measured relative to N
        let unit = |yy: &[f64; 3]| (yy[0] + yy[1] + yy[2]).abs();
        let (t_stop, y_stop, term) = dopri5_scaled(rhs, t, y, t_end, tol, max_step, unit, |tt, yy| {
            record(traj, tt, yy, ln_scale);
            let n = yy[0] + yy[1] + yy[2];
            if n.ln() + ln_scale < LN_UNDERFLOW {
                underflow = true;
                return ControlFlow::Break(());
            }
            if !(RESCALE_LOW..=RESCALE_HIGH).contains(&n) {
                rescale = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        if underflow {
            traj.termination = Termination::PopulationUnderflow;
            return Ok(());
        }
        if !rescale || term == Termination::Completed {
            traj.termination = Termination::Completed;
            return Ok(());
        }
        let n = y_stop.iter().sum::<f64>();
        if !(n > 0.0) {
            return Err(Error::ZeroPopulation);
        }
        ln_scale += n.ln();
        y = y_stop.map(|v| v / n);
        t = t_stop;
    }
}

/// Backward-time planar integration from `x0`, stopping when `stop` says so,
/// at time `-t_max`, or after `max_len` of arc length. Returns the path.
pub fn integrate_backward<S>(
    p: &ModelParams,
    x0: PlanarState,
    t_max: f64,
    max_len: f64,
    tol: Tolerances,
    mut stop: S,
) -> Result<Vec<PlanarState>>
where
    S: FnMut(&PlanarState) -> bool,
{
    let rhs = |_t: f64, y: &[f64; 2]| {
        let d = planar_rhs(p, &PlanarState::new(y[0], y[1]));
        [-d[0], -d[1]]
    };
    let mut path = vec![x0];
    let mut length = 0.0;
    dopri5(rhs, 0.0, [x0.s, x0.i], t_max, tol, f64::INFINITY, |_t, y| {
        let x = PlanarState::new(y[0], y[1]);
        length += x.dist(path.last().expect("non-empty"));
        path.push(x);
        if stop(&x) || length > max_len {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaLimitResult {
    pub limit_point: PlanarState,
    /// Index into the rest points the orbit was matched against.
    pub matched_rest_point: Option<usize>,
    pub rest_point: Option<RestPoint>,
    pub converged: bool,
    pub final_distance: f64,
    pub final_velocity: f64,
    pub time: f64,
}

/// Integrates the planar system from `x0` until the velocity drops below
/// [`REST_VELOCITY`], then matches the end point to a rest point in the
/// triangle.
pub fn omega_limit(p: &ModelParams, x0: PlanarState, max_time: f64) -> Result<OmegaLimitResult> {
    let rest = find_rest_points(p, Region::Triangle)?;
    omega_limit_among(p, x0, max_time, &rest, Tolerances::default())
}

/// [`omega_limit`] against a precomputed rest-point set.
pub fn omega_limit_among(
    p: &ModelParams,
    x0: PlanarState,
    max_time: f64,
    rest: &RestPointSet,
    tol: Tolerances,
) -> Result<OmegaLimitResult> {
    if !x0.in_triangle() {
        return Err(Error::Precondition(format!(
            "initial point ({}, {}) is outside the triangle",
            x0.s, x0.i
        )));
    }
    let rhs = |_t: f64, y: &[f64; 2]| planar_rhs(p, &PlanarState::new(y[0], y[1]));
    let settled = |y: &[f64; 2]| planar_residual(p, &PlanarState::new(y[0], y[1])) < REST_VELOCITY;
    // keeps the step inside the stability region near every rest point, so
    // the discrete flow contracts onto a sink instead of hovering at the
    // tolerance level
    let stiffness = rest
        .points
        .iter()
        .flat_map(|rp| rp.eigenvalues.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let max_step = if stiffness > 0.0 { STABLE_STEP / stiffness } else { f64::INFINITY };
    let (t, y) = if settled(&[x0.s, x0.i]) {
        (0.0, [x0.s, x0.i])
    } else {
        let (t, y, _) = dopri5(rhs, 0.0, [x0.s, x0.i], max_time, tol, max_step, |_t, y| {
            if settled(y) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        (t, y)
    };
    let limit_point = PlanarState::new(y[0], y[1]);
    let final_velocity = planar_residual(p, &limit_point);
    let nearest = rest.nearest(&limit_point);
    if final_velocity >= REST_VELOCITY {
        return Err(Error::Unconverged {
            max_time,
            distance: nearest.map_or(f64::INFINITY, |(_, d)| d),
        });
    }
    let (matched, final_distance) = match nearest {
        Some((k, d)) if d <= MATCH_DISTANCE => (Some(k), d),
        Some((_, d)) => (None, d),
        None => (None, f64::INFINITY),
    };
    Ok(OmegaLimitResult {
        limit_point,
        matched_rest_point: matched,
        rest_point: matched.map(|k| rest.points[k].clone()),
        converged: matched.is_some(),
        final_distance,
        final_velocity,
        time: t,
    })
}

/// `T = b / (d + eps1 i* + eps2 r*)` at an equilibrium of the proportions
/// system: `N` grows without bound when `T > 1` and dies out when `T < 1`.
pub fn growth_threshold(p: &ModelParams, eq: &ProportionState) -> Result<f64> {
    let res = proportion_rhs(p, eq).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(res < 1e-8) {
        return Err(Error::Precondition(format!(
            "({}, {}, {}) is not an equilibrium (residual {res:e})",
            eq.s, eq.i, eq.r
        )));
    }
    let denom = p.d + p.eps1 * eq.i + p.eps2 * eq.r;
    if denom == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(p.b / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    Growing,
    Decaying,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub equilibrium: ProportionState,
    pub threshold: f64,
    pub predicted: Trend,
    /// `d ln N / dt` over the last tenth of the horizon.
    pub late_rate: f64,
    pub observed: Trend,
    pub final_ln_population: f64,
}

impl GrowthReport {
    pub fn consistent(&self) -> bool {
        self.predicted == self.observed
    }
}

/// Simulates the population from `x0` and compares the late-time trend of
/// `N` against the threshold at the equilibrium its proportions approach.
pub fn verify_growth(
    p: &ModelParams,
    x0: &PopulationState,
    horizon: f64,
    tol: Tolerances,
) -> Result<GrowthReport> {
    let start = x0.proportions()?;
    let limit = omega_limit(p, start.planar(), DEFAULT_MAX_TIME)?;
    if !limit.converged {
        return Err(Error::Unconverged { max_time: DEFAULT_MAX_TIME, distance: limit.final_distance });
    }
    let equilibrium = limit.limit_point.lift();
    let threshold = growth_threshold(p, &equilibrium)?;
    if (threshold - 1.0).abs() < GROWTH_MARGIN {
        return Err(Error::Inconclusive { threshold });
    }
    let traj = integrate(
        System::Population,
        p,
        &[x0.susceptible, x0.infective, x0.removed],
        horizon,
        IntegrateOptions { tolerances: tol, max_step: None },
    )?;
    let t_end = *traj.times.last().expect("non-empty");
    let t_mark = 0.9 * t_end;
    let k = traj.times.partition_point(|&t| t < t_mark).min(traj.times.len() - 1);
    let late_rate = (traj.ln_population.last().expect("non-empty") - traj.ln_population[k])
        / (t_end - traj.times[k]);
    let trend = |growing: bool| if growing { Trend::Growing } else { Trend::Decaying };
    Ok(GrowthReport {
        equilibrium,
        threshold,
        predicted: trend(threshold > 1.0),
        late_rate,
        observed: trend(late_rate > 0.0),
        final_ln_population: *traj.ln_population.last().expect("non-empty"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn special() -> ModelParams {
        ModelParams {
            b: 0.0,
            d: 0.0,
            eps1: 2.0,
            eps2: 4.0,
            lambda: 1.0,
            alpha: 1.0,
            gamma: 0.0,
            beta1: 0.0,
            beta2: 2.6,
        }
    }

    fn general() -> ModelParams {
        ModelParams { b: 0.2, gamma: 0.3, beta1: 0.4, beta2: 0.5, ..special() }
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let (t, y, term) = dopri5(
            |_t, y: &[f64; 1]| [-y[0]],
            0.0,
            [1.0],
            5.0,
            Tolerances::default(),
            f64::INFINITY,
            |_, _| ControlFlow::Continue(()),
        )
        .unwrap();
        assert_eq!(term, Termination::Completed);
        assert_eq!(t, 5.0);
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn rest_point_stays_put() {
        let traj =
            integrate(System::Planar, &special(), &[0.35, 0.0], 50.0, IntegrateOptions::default())
                .unwrap();
        assert!(traj.times.len() > MIN_STORED_POINTS);
        for x in &traj.states {
            assert!((x[0] - 0.35).abs() < 10.0 * DEFAULT_ATOL && x[1] == 0.0);
        }
    }

    #[test]
    fn corner_enters_interior_immediately() {
        let traj = integrate(
            System::Proportions,
            &general(),
            &[1.0, 0.0, 0.0],
            0.01,
            IntegrateOptions::default(),
        )
        .unwrap();
        let (_, x) = traj.last();
        assert!(x[1] > 0.0 && x[2] > 0.0);
    }

    #[test]
    fn times_strictly_increase() {
        let traj = integrate(System::Planar, &general(), &[0.3, 0.3], 10.0, IntegrateOptions::default())
            .unwrap();
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn population_rejects_empty_start() {
        let err = integrate(System::Population, &general(), &[0.0; 3], 1.0, IntegrateOptions::default());
        assert_eq!(err.unwrap_err(), Error::ZeroPopulation);
    }

    #[test]
    fn population_survives_extreme_decay() {
        // d large: N shrinks by ~e^{-10 t}; 1e100 crossings are renormalized
        let p = ModelParams { d: 10.0, ..general() };
        let traj =
            integrate(System::Population, &p, &[1.0, 1.0, 1.0], 200.0, IntegrateOptions::default())
                .unwrap();
        assert_eq!(traj.termination, Termination::PopulationUnderflow);
        assert!(traj.ln_population.last().unwrap() < &LN_UNDERFLOW);

        let p = ModelParams { d: 3.0, ..general() };
        let traj =
            integrate(System::Population, &p, &[1.0, 1.0, 1.0], 100.0, IntegrateOptions::default())
                .unwrap();
        assert_eq!(traj.termination, Termination::Completed);
        assert!(traj.ln_population.iter().all(|v| v.is_finite()));
        assert!(*traj.ln_population.last().unwrap() < -250.0);
    }

    #[test]
    fn omega_limit_at_rest_point_is_immediate() {
        let p = special();
        let r = omega_limit(&p, PlanarState::new(0.0, 0.5), 100.0).unwrap();
        assert!(r.converged);
        assert!(r.final_distance < 1e-14);
        assert_eq!(r.time, 0.0);
    }

    #[test]
    fn growth_threshold_cases() {
        let p = ModelParams { d: 0.1, ..special() };
        let t = growth_threshold(&p, &ProportionState::new(0.0, 0.5, 0.5)).unwrap();
        assert_eq!(t, 0.0);
        assert!(growth_threshold(&p, &ProportionState::new(0.3, 0.3, 0.4)).is_err());
    }

    #[test]
    fn growth_threshold_zero_denominator() {
        // with no emigration the removed corner is an equilibrium with zero rate
        let q = ModelParams { d: 0.0, eps1: 0.0, eps2: 0.0, ..special() };
        let eq = ProportionState::new(0.0, 0.0, 1.0);
        assert_eq!(growth_threshold(&q, &eq).unwrap_err(), Error::ZeroDenominator);
    }
}
