//! Rate constants and the three right-hand sides of the open-environment
//! SIRS model: raw class counts, class proportions on the simplex, and the
//! planar quadratic reduction obtained by eliminating `r = 1 - s - i`.
//!
//! Only the population system depends on the disease-free death rate `d`;
//! both the proportions and the planar fields are independent of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for membership in the simplex / the planar triangle.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Names accepted by [`ModelParams::get`] and [`ModelParams::set`], in
/// config-file order.
pub const PARAM_NAMES: [&str; 9] = [
    "b", "d", "eps1", "eps2", "lambda", "alpha", "gamma", "beta1", "beta2",
];

/// Per-capita rates (1/time). All must be finite and non-negative, and the
/// outside transmission `beta = beta1 + beta2` must be positive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Birth rate; all newborns are susceptible.
    pub b: f64,
    /// Disease-free death rate.
    pub d: f64,
    /// Excess death rate of infectives.
    pub eps1: f64,
    /// Excess death rate of removeds.
    pub eps2: f64,
    /// Effective contact rate of infectives (proportionate mixing).
    pub lambda: f64,
    /// Removal rate of infectives.
    pub alpha: f64,
    /// Recovery rate of removeds back to susceptible.
    pub gamma: f64,
    /// Outside transmission entering the infective class.
    pub beta1: f64,
    /// Outside transmission entering the removed class.
    pub beta2: f64,
}

impl ModelParams {
    pub fn beta(&self) -> f64 {
        self.beta1 + self.beta2
    }

    pub fn validate(&self) -> Result<()> {
        for name in PARAM_NAMES {
            let v = self.get(name).expect("known name");
            if !v.is_finite() {
                return Err(Error::InvalidParams {
                    field: name,
                    reason: format!("{v} is not finite"),
                });
            }
            if v < 0.0 {
                return Err(Error::InvalidParams {
                    field: name,
                    reason: format!("{v} is negative"),
                });
            }
        }
        if self.beta() <= 0.0 {
            return Err(Error::InvalidParams {
                field: "beta2",
                reason: "outside transmission beta1 + beta2 must be positive".into(),
            });
        }
        Ok(())
    }

    /// `b = beta1 = gamma = 0`: both axes become invariant lines.
    pub fn is_special_case(&self) -> bool {
        self.b == 0.0 && self.beta1 == 0.0 && self.gamma == 0.0
    }

    /// Every rate strictly positive (`d` excluded, it does not enter the
    /// proportions dynamics).
    pub fn is_general_case(&self) -> bool {
        PARAM_NAMES
            .iter()
            .filter(|&&n| n != "d")
            .all(|n| self.get(n).is_some_and(|v| v > 0.0))
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "b" => self.b,
            "d" => self.d,
            "eps1" => self.eps1,
            "eps2" => self.eps2,
            "lambda" => self.lambda,
            "alpha" => self.alpha,
            "gamma" => self.gamma,
            "beta1" => self.beta1,
            "beta2" => self.beta2,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "b" => &mut self.b,
            "d" => &mut self.d,
            "eps1" => &mut self.eps1,
            "eps2" => &mut self.eps2,
            "lambda" => &mut self.lambda,
            "alpha" => &mut self.alpha,
            "gamma" => &mut self.gamma,
            "beta1" => &mut self.beta1,
            "beta2" => &mut self.beta2,
            _ => {
                return Err(Error::Precondition(format!("unknown parameter `{name}`")));
            }
        };
        *slot = value;
        Ok(())
    }
}

/// Raw class counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    pub susceptible: f64,
    pub infective: f64,
    pub removed: f64,
}

impl PopulationState {
    pub fn new(susceptible: f64, infective: f64, removed: f64) -> Self {
        Self { susceptible, infective, removed }
    }

    pub fn total(&self) -> f64 {
        self.susceptible + self.infective + self.removed
    }

    pub fn proportions(&self) -> Result<ProportionState> {
        let n = self.total();
        if n == 0.0 {
            return Err(Error::ZeroPopulation);
        }
        Ok(ProportionState::new(self.susceptible / n, self.infective / n, self.removed / n))
    }
}

/// Class fractions. On the feasibility simplex when `s + i + r = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionState {
    pub s: f64,
    pub i: f64,
    pub r: f64,
}

impl ProportionState {
    pub fn new(s: f64, i: f64, r: f64) -> Self {
        Self { s, i, r }
    }

    pub fn sum(&self) -> f64 {
        self.s + self.i + self.r
    }

    pub fn on_simplex(&self) -> bool {
        (self.sum() - 1.0).abs() <= SIMPLEX_TOL
            && self.s >= -SIMPLEX_TOL
            && self.i >= -SIMPLEX_TOL
            && self.r >= -SIMPLEX_TOL
    }

    pub fn planar(&self) -> PlanarState {
        PlanarState::new(self.s, self.i)
    }
}

/// A point `(s, i)` of the planar reduction; `r = 1 - s - i` is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarState {
    pub s: f64,
    pub i: f64,
}

impl PlanarState {
    pub fn new(s: f64, i: f64) -> Self {
        Self { s, i }
    }

    pub fn r(&self) -> f64 {
        1.0 - self.s - self.i
    }

    /// Membership in the closed triangle `s >= 0, i >= 0, s + i <= 1`.
    pub fn in_triangle(&self) -> bool {
        self.s >= -SIMPLEX_TOL && self.i >= -SIMPLEX_TOL && self.s + self.i <= 1.0 + SIMPLEX_TOL
    }

    /// Membership in the open triangle.
    pub fn in_open_triangle(&self) -> bool {
        self.s > SIMPLEX_TOL && self.i > SIMPLEX_TOL && self.s + self.i < 1.0 - SIMPLEX_TOL
    }

    pub fn lift(&self) -> ProportionState {
        ProportionState::new(self.s, self.i, self.r())
    }

    pub fn dist(&self, other: &PlanarState) -> f64 {
        (self.s - other.s).hypot(self.i - other.i)
    }
}

/// Time derivative of the class counts `(S, I, R)`.
pub fn population_rhs(p: &ModelParams, x: &PopulationState) -> Result<[f64; 3]> {
    let n = x.total();
    if n == 0.0 {
        return Err(Error::ZeroPopulation);
    }
    let (s, i, r) = (x.susceptible, x.infective, x.removed);
    let mixing = p.lambda * i * s / n;
    Ok([
        p.b * n - (p.d + p.beta()) * s + p.gamma * r - mixing,
        p.beta1 * s - (p.d + p.eps1 + p.alpha) * i + mixing,
        p.beta2 * s - (p.d + p.eps2 + p.gamma) * r + p.alpha * i,
    ])
}

/// `N' = (b - d) N - eps1 I - eps2 R`.
pub fn population_growth(p: &ModelParams, x: &PopulationState) -> f64 {
    (p.b - p.d) * x.total() - p.eps1 * x.infective - p.eps2 * x.removed
}

/// Time derivative of the proportions `(s, i, r)`. Defined on all of R^3;
/// the plane `s + i + r = 1` is invariant.
pub fn proportion_rhs(p: &ModelParams, x: &ProportionState) -> [f64; 3] {
    let (s, i, r) = (x.s, x.i, x.r);
    [
        p.b - (p.b + p.beta()) * s + p.gamma * r + (p.eps1 - p.lambda) * i * s + p.eps2 * r * s,
        p.beta1 * s - (p.b + p.eps1 + p.alpha) * i
            + p.lambda * i * s
            + p.eps1 * i * i
            + p.eps2 * i * r,
        p.beta2 * s - (p.b + p.eps2 + p.gamma) * r + p.alpha * i + p.eps1 * i * r + p.eps2 * r * r,
    ]
}

/// The planar quadratic field in `(s, i)`.
pub fn planar_rhs(p: &ModelParams, x: &PlanarState) -> [f64; 2] {
    let (s, i) = (x.s, x.i);
    [
        p.b + p.gamma + (p.eps2 - p.b - p.beta() - p.gamma) * s - p.gamma * i - p.eps2 * s * s
            + (p.eps1 - p.eps2 - p.lambda) * i * s,
        p.beta1 * s + (p.eps2 - p.eps1 - p.alpha - p.b) * i + (p.lambda - p.eps2) * i * s
            + (p.eps1 - p.eps2) * i * i,
    ]
}

/// Max-norm of the planar field, the residual used to certify rest points.
pub fn planar_residual(p: &ModelParams, x: &PlanarState) -> f64 {
    let [a, b] = planar_rhs(p, x);
    a.abs().max(b.abs())
}

/// The three edges of the planar triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Edge {
    /// `i = 0`, from (0,0) to (1,0).
    Bottom,
    /// `s + i = 1` (`r = 0`), from (1,0) to (0,1).
    Hypotenuse,
    /// `s = 0`, from (0,1) to (0,0).
    Left,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InwardSample {
    pub edge: Edge,
    pub point: PlanarState,
    pub inward: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InwardnessReport {
    pub samples_per_edge: usize,
    /// Smallest inward normal component seen, per edge (bottom, hypotenuse, left).
    pub min_inward: [f64; 3],
    /// Samples whose inward component is not strictly positive.
    pub violations: Vec<InwardSample>,
}

impl InwardnessReport {
    pub fn all_inward(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.min_inward.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn violated_edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self.violations.iter().map(|v| v.edge).collect();
        edges.dedup();
        edges
    }
}

/// Samples `samples` non-vertex points on each edge of the triangle and
/// records the inward normal component of the planar field there.
pub fn boundary_inwardness(p: &ModelParams, samples: usize) -> InwardnessReport {
    let mut min_inward = [f64::INFINITY; 3];
    let mut violations = Vec::new();
    let edges = [Edge::Bottom, Edge::Hypotenuse, Edge::Left];
    for (slot, edge) in edges.into_iter().enumerate() {
        for k in 1..=samples {
            let t = k as f64 / (samples + 1) as f64;
            let (point, normal) = match edge {
                Edge::Bottom => (PlanarState::new(t, 0.0), [0.0, 1.0]),
                Edge::Hypotenuse => (
                    PlanarState::new(1.0 - t, t),
                    [-std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
                ),
                Edge::Left => (PlanarState::new(0.0, 1.0 - t), [1.0, 0.0]),
            };
            let f = planar_rhs(p, &point);
            let inward = f[0] * normal[0] + f[1] * normal[1];
            min_inward[slot] = min_inward[slot].min(inward);
            if inward <= 0.0 {
                violations.push(InwardSample { edge, point, inward });
            }
        }
    }
    InwardnessReport { samples_per_edge: samples, min_inward, violations }
}

/// Normal component `(1,1,1) . curl g` of the Dulac-type auxiliary field at a
/// strictly interior point. Strictly negative whenever all rates are positive.
pub fn dulac_curl(p: &ModelParams, x: &ProportionState) -> Result<f64> {
    let (s, i, r) = (x.s, x.i, x.r);
    if !(s > 0.0 && i > 0.0 && r > 0.0) {
        return Err(Error::SingularPoint { s, i, r });
    }
    Ok(-((p.b + p.gamma) / (i * s * s)
        + p.b / (r * s * s)
        + p.beta1 / (r * i * i)
        + p.beta2 / (i * r * r)
        + p.alpha / (s * r * r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bistable_special() -> ModelParams {
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
        ModelParams {
            b: 0.01,
            d: 0.01,
            eps1: 2.0,
            eps2: 4.0,
            lambda: 1.0,
            alpha: 1.0,
            gamma: 0.01,
            beta1: 0.005,
            beta2: 2.595,
        }
    }

    #[test]
    fn population_rejects_empty() {
        let x = PopulationState::new(0.0, 0.0, 0.0);
        assert_eq!(population_rhs(&general(), &x), Err(Error::ZeroPopulation));
    }

    #[test]
    fn population_sum_matches_total_equation() {
        let p = general();
        let x = PopulationState::new(100.0, 50.0, 50.0);
        let d = population_rhs(&p, &x).unwrap();
        let sum: f64 = d.iter().sum();
        // (b - d) N - eps1 I - eps2 R = 0 * 200 - 2 * 50 - 4 * 50
        assert!((sum - (-300.0)).abs() < 1e-12, "{sum}");
        assert!((sum - population_growth(&p, &x)).abs() < 1e-12);
    }

    #[test]
    fn population_sum_without_excess_deaths() {
        let p = ModelParams { eps1: 0.0, eps2: 0.0, b: 0.3, d: 0.1, ..general() };
        let x = PopulationState::new(3.0, 7.0, 11.0);
        let sum: f64 = population_rhs(&p, &x).unwrap().iter().sum();
        assert!((sum - 0.2 * 21.0).abs() < 1e-12);
    }

    #[test]
    fn proportion_boundary_relations() {
        let p = general();
        let d = proportion_rhs(&p, &ProportionState::new(0.0, 0.3, 0.7));
        assert!((d[0] - (p.b + p.gamma * 0.7)).abs() < 1e-15);
        let d = proportion_rhs(&p, &ProportionState::new(0.4, 0.0, 0.6));
        assert!((d[1] - p.beta1 * 0.4).abs() < 1e-15);
        // On r = 0 the i-coefficient of r' is alpha.
        let d = proportion_rhs(&p, &ProportionState::new(0.4, 0.6, 0.0));
        assert!((d[2] - (p.beta2 * 0.4 + p.alpha * 0.6)).abs() < 1e-15);
    }

    #[test]
    fn special_case_boundary_rest_points() {
        let p = bistable_special();
        for x in [PlanarState::new(0.35, 0.0), PlanarState::new(0.0, 0.5)] {
            assert!(planar_residual(&p, &x) < 1e-15, "{x:?}");
        }
    }

    #[test]
    fn general_case_is_inward() {
        let rep = boundary_inwardness(&general(), 1000);
        assert!(rep.all_inward());
        assert!(rep.min() > 0.0);
    }

    #[test]
    fn special_case_axes_are_not_inward() {
        let rep = boundary_inwardness(&bistable_special(), 1000);
        let edges = rep.violated_edges();
        assert!(edges.contains(&Edge::Bottom));
        assert!(edges.contains(&Edge::Left));
        assert!(!edges.contains(&Edge::Hypotenuse));
    }

    #[test]
    fn bottom_edge_inward_component_is_beta1_s() {
        let p = general();
        for k in 1..10 {
            let s = k as f64 / 10.0;
            let f = planar_rhs(&p, &PlanarState::new(s, 0.0));
            assert!((f[1] - p.beta1 * s).abs() < 1e-15);
        }
    }

    #[test]
    fn dulac_at_centroid() {
        // eps, lambda arbitrary; value is -27 (2b + gamma + beta + alpha)
        let p = ModelParams { eps1: 0.7, eps2: 3.3, lambda: 9.0, ..general() };
        let third = 1.0 / 3.0;
        let v = dulac_curl(&p, &ProportionState::new(third, third, third)).unwrap();
        assert!((v - (-98.01)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn dulac_rejects_boundary() {
        let err = dulac_curl(&general(), &ProportionState::new(0.0, 0.5, 0.5));
        assert!(matches!(err, Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn validation() {
        assert!(general().validate().is_ok());
        let bad = ModelParams { alpha: -1.0, ..general() };
        assert!(matches!(bad.validate(), Err(Error::InvalidParams { field: "alpha", .. })));
        let closed = ModelParams { beta1: 0.0, beta2: 0.0, ..general() };
        assert!(closed.validate().is_err());
        assert!(bistable_special().validate().is_ok());
        assert!(bistable_special().is_special_case());
        assert!(!bistable_special().is_general_case());
        assert!(general().is_general_case());
    }
}
