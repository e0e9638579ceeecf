//! Flat `key = value` configs, CSV trajectories and sweep grids, JSON
//! reports, SVG phase portraits, and atomic file output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::analysis::{BasinReport, SweepAxis, SweepGrid};
use crate::dynamics::{System, Tolerances, Trajectory};
use crate::equilibria::{RestPoint, Stability};
use crate::error::{Error, Result};
use crate::model::{planar_rhs, ModelParams, PlanarState, PARAM_NAMES};

const OPTION_KEYS: [&str; 20] = [
    "system", "s0", "i0", "r0", "S0", "I0", "R0", "t_end", "curve", "inset", "radius", "axis1",
    "axis2", "grid", "probes", "seed", "rtol", "atol", "horizon", "trajectories",
];

/// A parsed config: the nine rates plus whatever command options were given.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    options: BTreeMap<String, (usize, String)>,
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

impl RunConfig {
    pub fn new(params: ModelParams) -> Self {
        RunConfig { params, options: BTreeMap::new() }
    }

    /// Parses `key = value` lines; `#` starts a comment. All rates except
    /// `d` are required (`d` defaults to 0; it does not enter the
    /// proportions system). Unknown and repeated keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rates: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
        let mut options = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("expected key = value, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(&name) = PARAM_NAMES.iter().find(|n| **n == key) {
                let v: f64 = value
                    .parse()
                    .map_err(|_| config_err(line, format!("{key}: {value:?} is not a number")))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(config_err(line, format!("{key} = {value} must be finite and >= 0")));
                }
                if rates.insert(name, (line, v)).is_some() {
                    return Err(config_err(line, format!("duplicate key {key}")));
                }
            } else if OPTION_KEYS.contains(&key) {
                if options.insert(key.to_string(), (line, value.to_string())).is_some() {
                    return Err(config_err(line, format!("duplicate key {key}")));
                }
            } else {
                return Err(config_err(line, format!("unknown key {key:?}")));
            }
        }
        let end = text.lines().count() + 1;
        let mut params = ModelParams::default();
        for name in PARAM_NAMES {
            match rates.get(name) {
                Some(&(_, v)) => params.set(name, v)?,
                None if name == "d" => {}
                None => return Err(config_err(end, format!("missing key {name}"))),
            }
        }
        if let Err(e) = params.validate() {
            let line = match &e {
                Error::InvalidParams { field, .. } => rates.get(field).map_or(end, |r| r.0),
                _ => end,
            };
            return Err(config_err(line, e.to_string()));
        }
        Ok(RunConfig { params, options })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set_option(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !OPTION_KEYS.contains(&key) {
            return Err(config_err(0, format!("unknown key {key:?}")));
        }
        self.options.insert(key.to_string(), (0, value.into()));
        Ok(())
    }

    pub fn option(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(|(_, v)| v.as_str())
    }

    fn typed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.options.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| config_err(*line, format!("{key}: cannot parse {v:?}"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.typed(key)?.unwrap_or(default))
    }

    pub fn f64_required(&self, key: &str) -> Result<f64> {
        self.typed(key)?.ok_or_else(|| config_err(0, format!("missing key {key}")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.typed(key)?.unwrap_or(default))
    }

    pub fn seed(&self) -> Result<u64> {
        Ok(self.typed("seed")?.unwrap_or(0))
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        let d = Tolerances::default();
        Ok(Tolerances { rtol: self.f64_or("rtol", d.rtol)?, atol: self.f64_or("atol", d.atol)? })
    }

    pub fn system(&self) -> Result<System> {
        match self.options.get("system") {
            None => Ok(System::Planar),
            Some((line, v)) => match v.as_str() {
                "planar" => Ok(System::Planar),
                "proportions" => Ok(System::Proportions),
                "population" => Ok(System::Population),
                other => Err(config_err(*line, format!("unknown system {other:?}"))),
            },
        }
    }

    /// Initial state for `system`: `s0, i0` (planar), `s0, i0, r0`
    /// (proportions, `r0` defaults to `1 - s0 - i0`), or `S0, I0, R0`.
    pub fn initial_state(&self, system: System) -> Result<Vec<f64>> {
        match system {
            System::Planar => Ok(vec![self.f64_required("s0")?, self.f64_required("i0")?]),
            System::Proportions => {
                let (s, i) = (self.f64_required("s0")?, self.f64_required("i0")?);
                Ok(vec![s, i, self.f64_or("r0", 1.0 - s - i)?])
            }
            System::Population => Ok(vec![
                self.f64_required("S0")?,
                self.f64_required("I0")?,
                self.f64_required("R0")?,
            ]),
        }
    }

    /// `axis1` / `axis2` as `name:lo:hi:steps`.
    pub fn axis(&self, key: &str) -> Result<SweepAxis> {
        let (line, v) = self
            .options
            .get(key)
            .ok_or_else(|| config_err(0, format!("missing key {key}")))?;
        let bad = || config_err(*line, format!("{key}: expected name:lo:hi:steps, got {v:?}"));
        let parts: Vec<&str> = v.split(':').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        Ok(SweepAxis {
            name: parts[0].to_string(),
            lo: parts[1].parse().map_err(|_| bad())?,
            hi: parts[2].parse().map_err(|_| bad())?,
            steps: parts[3].parse().map_err(|_| bad())?,
        })
    }

    /// Serializes back to the config format, rates first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in PARAM_NAMES {
            let _ = writeln!(out, "{name} = {}", self.params.get(name).expect("known name"));
        }
        for (k, (_, v)) in &self.options {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// Trajectory as CSV with columns `t,s,i` (planar), `t,s,i,r`
/// (proportions) or `t,s,i,r,S,I,R,N` (population, with proportions
/// derived from the counts), every value with 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let header = match traj.system {
        System::Planar => "t,s,i",
        System::Proportions => "t,s,i,r",
        System::Population => "t,s,i,r,S,I,R,N",
    };
    let mut out = String::from(header);
    out.push('\n');
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let mut row = vec![*t];
        match traj.system {
            System::Population => {
                let n = x[3];
                row.extend([x[0] / n, x[1] / n, x[2] / n]);
                row.extend(x.iter());
            }
            _ => row.extend(x.iter()),
        }
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Numeric CSV with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| config_err(1, "empty CSV"))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (k, line) in lines {
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|_| config_err(k + 1, format!("bad number {c:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != columns.len() {
            return Err(config_err(k + 1, format!("{} fields, expected {}", row.len(), columns.len())));
        }
        rows.push(row);
    }
    Ok(CsvTable { columns, rows })
}

/// Sweep grid as CSV: `<axis1>,<axis2>,label,mu0,mu1,mu2,degenerate_flag,error`.
pub fn sweep_csv(grid: &SweepGrid) -> String {
    let mut out = format!(
        "{},{},label,mu0,mu1,mu2,degenerate_flag,error\n",
        grid.axis1.name, grid.axis2.name
    );
    for c in &grid.cells {
        let label = c.label.map_or("Error", |l| l.as_str());
        let error = c.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{label},{},{},{},{},{error}",
            c.x, c.y, c.mu[0], c.mu[1], c.mu[2], c.degenerate as u8
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, contents).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::Io(format!("{}: {e}", path.display()))
    })
}

/// Which component of the planar field a nullcline zeroes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nullcline {
    S,
    I,
}

/// Marching-squares segments of `s' = 0` or `i' = 0` on an `n x n` grid
/// over the unit square, kept where they touch the triangle.
pub fn nullcline_segments(p: &ModelParams, which: Nullcline, n: usize) -> Vec<[PlanarState; 2]> {
    let h = 1.0 / n as f64;
    let value = |j: usize, k: usize| {
        let f = planar_rhs(p, &PlanarState::new(j as f64 * h, k as f64 * h));
        match which {
            Nullcline::S => f[0],
            Nullcline::I => f[1],
        }
    };
    let grid: Vec<Vec<f64>> = (0..=n).map(|j| (0..=n).map(|k| value(j, k)).collect()).collect();
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            // corners counterclockwise from (j, k)
            let c = [(j, k), (j + 1, k), (j + 1, k + 1), (j, k + 1)];
            let v = c.map(|(a, b)| grid[a][b]);
            let mut crossings = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (v[a] > 0.0) != (v[b] > 0.0) {
                    let t = v[a] / (v[a] - v[b]);
                    let (pa, pb) = (c[a], c[b]);
                    crossings.push(PlanarState::new(
                        (pa.0 as f64 + t * (pb.0 as f64 - pa.0 as f64)) * h,
                        (pa.1 as f64 + t * (pb.1 as f64 - pa.1 as f64)) * h,
                    ));
                }
            }
            let pairs: Vec<[PlanarState; 2]> = match crossings.len() {
                2 => vec![[crossings[0], crossings[1]]],
                4 => {
                    // saddle cell: decide by the center value
                    let center = v.iter().sum::<f64>() / 4.0;
                    if (center > 0.0) == (v[0] > 0.0) {
                        vec![[crossings[0], crossings[3]], [crossings[1], crossings[2]]]
                    } else {
                        vec![[crossings[0], crossings[1]], [crossings[2], crossings[3]]]
                    }
                }
                _ => vec![],
            };
            out.extend(pairs.into_iter().filter(|[a, b]| {
                let tol = 2.0 * h;
                let near = |x: &PlanarState| x.s >= -tol && x.i >= -tol && x.s + x.i <= 1.0 + tol;
                near(a) || near(b)
            }));
        }
    }
    out
}

/// Everything a phase portrait can show.
#[derive(Debug, Clone, Default)]
pub struct Portrait<'a> {
    pub rest_points: &'a [RestPoint],
    pub basins: Option<&'a BasinReport>,
    pub trajectories: &'a [Vec<PlanarState>],
    pub title: Option<&'a str>,
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;
const NULLCLINE_GRID: usize = 200;

fn to_px(x: &PlanarState) -> (f64, f64) {
    let w = SIZE - 2.0 * MARGIN;
    (MARGIN + x.s * w, MARGIN + (1.0 - x.i) * w)
}

fn path_of(points: &[PlanarState]) -> String {
    let mut d = String::new();
    for (k, x) in points.iter().enumerate() {
        let (a, b) = to_px(x);
        let _ = write!(d, "{}{a:.2} {b:.2}", if k == 0 { "M" } else { " L" });
    }
    d
}

/// SVG phase portrait in the `(s, i)` plane: triangle, both nullclines,
/// trajectories, the saddle's stable manifold when basins are given, and
/// rest points (filled disk: sink, open disk: source, cross: saddle,
/// square: degenerate). Output depends only on the inputs.
pub fn render_portrait(p: &ModelParams, portrait: &Portrait<'_>) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = portrait.title {
        let t = t.replace('&', "&amp;").replace('<', "&lt;");
        let _ = writeln!(svg, r#"<text x="{MARGIN}" y="24" font-size="14" font-family="sans-serif">{t}</text>"#);
    }
    let corners = [PlanarState::new(0.0, 0.0), PlanarState::new(1.0, 0.0), PlanarState::new(0.0, 1.0)];
    let _ = writeln!(
        svg,
        r#"<path class="triangle" d="{} Z" fill="none" stroke="black" stroke-width="1.5"/>"#,
        path_of(&corners)
    );
    for (which, class, color) in [(Nullcline::S, "nullcline-s", "#1f77b4"), (Nullcline::I, "nullcline-i", "#d62728")] {
        let mut d = String::new();
        for seg in nullcline_segments(p, which, NULLCLINE_GRID) {
            d.push_str(&path_of(&seg));
            d.push(' ');
        }
        let _ = writeln!(
            svg,
            r#"<path class="{class}" d="{}" fill="none" stroke="{color}" stroke-width="1"/>"#,
            d.trim_end()
        );
    }
    for traj in portrait.trajectories {
        let _ = writeln!(
            svg,
            r##"<path class="trajectory" d="{}" fill="none" stroke="#888888" stroke-width="0.8"/>"##,
            path_of(traj)
        );
    }
    if let Some(b) = portrait.basins {
        let _ = writeln!(
            svg,
            r#"<path class="manifold" d="{}" fill="none" stroke="black" stroke-width="1.2" stroke-dasharray="5 3"/>"#,
            path_of(&b.manifold_polyline())
        );
        for x in &b.boundary_crossings {
            let (a, c) = to_px(x);
            let _ = writeln!(svg, r#"<circle class="switch" cx="{a:.2}" cy="{c:.2}" r="2.5" fill="black"/>"#);
        }
    }
    for rp in portrait.rest_points {
        let (a, c) = to_px(&rp.location);
        let data = format!(r#"data-s="{:.6}" data-i="{:.6}""#, rp.location.s, rp.location.i);
        let _ = match rp.classification {
            Stability::Sink => writeln!(
                svg,
                r#"<circle class="sink" {data} cx="{a:.2}" cy="{c:.2}" r="5" fill="black"/>"#
            ),
            Stability::Source => writeln!(
                svg,
                r#"<circle class="source" {data} cx="{a:.2}" cy="{c:.2}" r="5" fill="white" stroke="black" stroke-width="1.5"/>"#
            ),
            Stability::Saddle => writeln!(
                svg,
                r#"<path class="saddle" {data} d="M{:.2} {:.2} L{:.2} {:.2} M{:.2} {:.2} L{:.2} {:.2}" stroke="black" stroke-width="2"/>"#,
                a - 5.0,
                c - 5.0,
                a + 5.0,
                c + 5.0,
                a - 5.0,
                c + 5.0,
                a + 5.0,
                c - 5.0
            ),
            Stability::Degenerate => writeln!(
                svg,
                r#"<rect class="degenerate" {data} x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="black"/>"#,
                a - 4.0,
                c - 4.0
            ),
        };
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = "\
# bistable
b = 0.001
eps1 = 2
eps2 = 4   # removed-class emigration
lambda = 1
alpha = 1
gamma = 0.001
beta1 = 0.001
beta2 = 2.599
seed = 7
";

    #[test]
    fn parses_config_with_comments() {
        let c = RunConfig::parse(CONFIG).unwrap();
        assert_eq!(c.params.eps2, 4.0);
        assert_eq!(c.params.d, 0.0);
        assert_eq!(c.seed().unwrap(), 7);
    }

    #[test]
    fn negative_rate_reports_its_line() {
        let text = CONFIG.replace("lambda = 1", "lambda = -1");
        match RunConfig::parse(&text) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_duplicate_keys_rejected() {
        assert!(matches!(
            RunConfig::parse(&format!("{CONFIG}zeta = 1\n")),
            Err(Error::Config { line: 11, .. })
        ));
        assert!(matches!(
            RunConfig::parse(&format!("{CONFIG}b = 1\n")),
            Err(Error::Config { line: 11, .. })
        ));
        assert!(RunConfig::parse("b = 1\n").is_err());
    }

    #[test]
    fn config_text_round_trip() {
        let c = RunConfig::parse(CONFIG).unwrap();
        let again = RunConfig::parse(&c.to_text()).unwrap();
        assert_eq!(again.params, c.params);
        assert_eq!(again.option("seed"), Some("7"));
    }

    #[test]
    fn axis_syntax() {
        let mut c = RunConfig::parse(CONFIG).unwrap();
        c.set_option("axis1", "alpha:0.5:1.5:11").unwrap();
        let a = c.axis("axis1").unwrap();
        assert_eq!((a.name.as_str(), a.lo, a.hi, a.steps), ("alpha", 0.5, 1.5, 11));
        c.set_option("axis2", "alpha:0.5").unwrap();
        assert!(c.axis("axis2").is_err());
    }

    #[test]
    fn nullcline_of_linear_field() {
        // with every rate but beta2 zero, s' = -beta2 s: the s-nullcline is s = 0
        let p = ModelParams { beta2: 1.0, ..Default::default() };
        let segs = nullcline_segments(&p, Nullcline::S, 10);
        assert!(segs.iter().all(|[a, b]| a.s.abs() < 0.2 && b.s.abs() < 0.2));
    }
}
