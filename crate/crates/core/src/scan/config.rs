//! Flat `section.key = value` scan configuration.
//!
//! ```text
//! # comment
//! geometry.kind  = eccentric        # concentric | eccentric | cylinder_plane
//! geometry.a     = 1
//! geometry.b     = 2
//! geometry.delta = 0                # or geometry.h / geometry.d for a plane
//! media.eps1     = 2                # a number or {plasma: omega_p}
//! media.eps2     = 5
//! media.eps3     = 50
//! sweep.axis     = delta            # delta | d | b | eps1 | eps2 | eps3
//! sweep.grid     = linspace(0, 0.6, 7)   # or logspace(2, 4, 5) or 0, 0.1, 0.2
//! sweep.reference = first           # none | first | pc
//! quadrature.rel_tol = 1e-6
//! output.format  = csv              # csv | json
//! output.precision = 10
//! workers        = 4
//! curve.alpha2.geometry.b = 2.0     # named curves override any geometry/media key
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::energy::{QuadratureSpec, Scheme};
use crate::geometry::{GeometryConfig, GeometryKind};
use crate::media::{MediaTriple, PermittivityModel};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line of the offending entry, when there is one.
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Every problem found in one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Delta,
    PlaneGap,
    OuterRadius,
    Eps1,
    Eps2,
    Eps3,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Delta => "delta",
            Self::PlaneGap => "d",
            Self::OuterRadius => "b",
            Self::Eps1 => "eps1",
            Self::Eps2 => "eps2",
            Self::Eps3 => "eps3",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "delta" => Self::Delta,
            "d" => Self::PlaneGap,
            "b" => Self::OuterRadius,
            "eps1" => Self::Eps1,
            "eps2" => Self::Eps2,
            "eps3" => Self::Eps3,
            _ => return None,
        })
    }

    pub fn is_geometric(self) -> bool {
        matches!(self, Self::Delta | Self::PlaneGap | Self::OuterRadius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Plain energies.
    None,
    /// `E(x) - E(x_0)` relative to the first grid point.
    First,
    /// `E(x) - E_pc(x)`, the departure from perfectly reflecting bodies.
    Pc,
}

impl Reference {
    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::First => "first",
            Self::Pc => "pc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: OutputFormat,
    /// Significant digits after the leading one in scientific notation.
    pub precision: usize,
}

/// Geometry parameters before a sweep value is substituted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryParams {
    pub kind: GeometryKind,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveConfig {
    pub label: String,
    pub geometry: GeometryParams,
    pub media: MediaTriple,
}

impl CurveConfig {
    /// Geometry and media at one sweep value.
    pub fn at(&self, axis: SweepAxis, value: f64) -> crate::Result<(GeometryConfig, MediaTriple)> {
        let mut g = self.geometry;
        let mut m = self.media;
        match axis {
            SweepAxis::Delta => g.delta = value,
            SweepAxis::PlaneGap => g.h = g.a + value,
            SweepAxis::OuterRadius => g.b = value,
            SweepAxis::Eps1 => m.inner = PermittivityModel::Constant(value),
            SweepAxis::Eps2 => m.gap = PermittivityModel::Constant(value),
            SweepAxis::Eps3 => m.outer = PermittivityModel::Constant(value),
        }
        if axis == SweepAxis::Delta && g.kind == GeometryKind::Concentric {
            g.kind = GeometryKind::Eccentric;
        }
        let geometry = GeometryConfig { kind: g.kind, a: g.a, b: g.b, delta: g.delta, h: g.h };
        geometry.validate()?;
        m.validate()?;
        Ok((geometry, m))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub reference: Reference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub curves: Vec<CurveConfig>,
    pub sweep: Sweep,
    pub quadrature: QuadratureSpec,
    pub output: OutputConfig,
    pub workers: Option<usize>,
}

struct Entry {
    line: usize,
    value: String,
}

fn err(line: Option<usize>, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { line, field: field.to_string(), message: message.into() }
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_media(s: &str) -> Result<PermittivityModel, String> {
    let s = s.trim();
    if let Some(v) = parse_number(s) {
        return Ok(PermittivityModel::Constant(v));
    }
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| format!("expected a number or {{plasma: omega_p}}, got `{s}`"))?;
    let (key, value) = inner.split_once(':').ok_or_else(|| format!("expected `plasma: omega_p` inside braces, got `{inner}`"))?;
    if key.trim() != "plasma" {
        return Err(format!("unknown permittivity model `{}`", key.trim()));
    }
    let omega_p = parse_number(value).ok_or_else(|| format!("plasma frequency must be a number, got `{}`", value.trim()))?;
    Ok(PermittivityModel::Plasma { omega_p })
}

/// `linspace(a, b, n)`, `logspace(p, q, n)` (powers of ten) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    for (name, log) in [("linspace", false), ("logspace", true)] {
        if let Some(args) = s.strip_prefix(name) {
            let args = args
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("expected {name}(start, stop, count)"))?;
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("{name} takes three arguments, got {}", parts.len()));
            }
            let start = parse_number(parts[0]).ok_or("start must be a number")?;
            let stop = parse_number(parts[1]).ok_or("stop must be a number")?;
            let count: usize = parts[2].trim().parse().map_err(|_| "count must be a positive integer")?;
            if count < 2 {
                return Err("count must be at least 2".into());
            }
            let step = (stop - start) / (count - 1) as f64;
            return Ok((0..count)
                .map(|i| {
                    let x = if i == count - 1 { stop } else { start + step * i as f64 };
                    if log { 10f64.powf(x) } else { x }
                })
                .collect());
        }
    }
    s.split(',')
        .map(|p| parse_number(p).ok_or_else(|| format!("`{}` is not a number", p.trim())))
        .collect()
}

const GEOMETRY_KEYS: [&str; 6] = ["kind", "a", "b", "delta", "h", "d"];
const MEDIA_KEYS: [&str; 3] = ["eps1", "eps2", "eps3"];

fn known_key(key: &str) -> bool {
    let base = match key.strip_prefix("curve.") {
        Some(rest) => match rest.split_once('.') {
            Some((label, tail)) if !label.is_empty() => {
                return matches!(tail.split_once('.'), Some(("geometry", k)) if GEOMETRY_KEYS.contains(&k))
                    || matches!(tail.split_once('.'), Some(("media", k)) if MEDIA_KEYS.contains(&k));
            }
            _ => return false,
        },
        None => key,
    };
    match base.split_once('.') {
        Some(("geometry", k)) => GEOMETRY_KEYS.contains(&k),
        Some(("media", k)) => MEDIA_KEYS.contains(&k),
        Some(("sweep", k)) => ["axis", "grid", "reference"].contains(&k),
        Some(("quadrature", k)) => [
            "scheme",
            "rel_tol",
            "abs_floor",
            "radial_nodes",
            "angular_nodes",
            "max_escalations",
            "trunc_tol",
            "n_max",
        ]
        .contains(&k),
        Some(("output", k)) => ["path", "format", "precision"].contains(&k),
        None => base == "workers",
        _ => false,
    }
}

struct Reader {
    entries: BTreeMap<String, Entry>,
    curve_order: Vec<String>,
    errors: Vec<ConfigError>,
}

impl Reader {
    fn new(text: &str) -> Self {
        let mut entries = BTreeMap::new();
        let mut curve_order = Vec::new();
        let mut errors = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find(" #") {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                errors.push(err(Some(line), content, "expected `key = value`"));
                continue;
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !known_key(&key) {
                errors.push(err(Some(line), &key, "unknown key"));
                continue;
            }
            if value.is_empty() {
                errors.push(err(Some(line), &key, "missing value"));
                continue;
            }
            if let Some(previous) = entries.get(&key) {
                let previous: &Entry = previous;
                errors.push(err(Some(line), &key, format!("duplicate key (first set on line {})", previous.line)));
                continue;
            }
            if let Some(label) = key.strip_prefix("curve.").and_then(|r| r.split_once('.')).map(|(l, _)| l.to_string()) {
                if !curve_order.contains(&label) {
                    curve_order.push(label);
                }
            }
            entries.insert(key, Entry { line, value });
        }
        Self { entries, curve_order, errors }
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn fail(&mut self, key: &str, message: impl Into<String>) {
        let line = self.line(key);
        self.errors.push(err(line, key, message));
    }

    fn number(&mut self, key: &str) -> Option<f64> {
        let raw = self.raw(key)?.to_string();
        match parse_number(&raw) {
            Some(v) => Some(v),
            None => {
                self.fail(key, format!("`{raw}` is not a finite number"));
                None
            }
        }
    }

    fn count(&mut self, key: &str) -> Option<usize> {
        let raw = self.raw(key)?.to_string();
        match raw.parse::<usize>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(key, format!("`{raw}` is not a non-negative integer"));
                None
            }
        }
    }

    /// Value of `key` for a curve: the curve override, else the top-level key.
    fn curve_key(&self, label: Option<&str>, key: &str) -> String {
        if let Some(label) = label {
            let scoped = format!("curve.{label}.{key}");
            if self.entries.contains_key(&scoped) {
                return scoped;
            }
        }
        key.to_string()
    }

    fn curve(&mut self, label: Option<&str>) -> Option<CurveConfig> {
        let kind_key = self.curve_key(label, "geometry.kind");
        let kind = match self.raw(&kind_key).map(str::to_string) {
            Some(raw) => match raw.parse::<GeometryKind>() {
                Ok(k) => Some(k),
                Err(e) => {
                    self.fail(&kind_key, e.to_string());
                    None
                }
            },
            None => {
                self.fail(&kind_key, "required");
                None
            }
        };
        let num = |reader: &mut Self, key: &str| {
            let k = reader.curve_key(label, key);
            reader.number(&k)
        };
        let a = num(self, "geometry.a").unwrap_or(1.0);
        let b = num(self, "geometry.b").unwrap_or(f64::NAN);
        let delta = num(self, "geometry.delta").unwrap_or(0.0);
        let h = num(self, "geometry.h");
        let d = num(self, "geometry.d");
        let h = match (h, d) {
            (Some(h), None) => h,
            (None, Some(d)) => a + d,
            (None, None) => f64::NAN,
            (Some(_), Some(_)) => {
                let k = self.curve_key(label, "geometry.d");
                self.fail(&k, "set either geometry.h or geometry.d, not both");
                f64::NAN
            }
        };
        let mut media = Vec::new();
        for key in MEDIA_KEYS {
            let full = self.curve_key(label, &format!("media.{key}"));
            match self.raw(&full).map(str::to_string) {
                Some(raw) => match parse_media(&raw) {
                    Ok(m) => media.push(m),
                    Err(e) => self.fail(&full, e),
                },
                None => self.fail(&full, "required"),
            }
        }
        let kind = kind?;
        if media.len() != 3 {
            return None;
        }
        Some(CurveConfig {
            label: label.unwrap_or("main").to_string(),
            geometry: GeometryParams { kind, a, b, delta, h },
            media: MediaTriple::new(media[0], media[1], media[2]),
        })
    }
}

/// Parses and validates a configuration, collecting every problem.
pub fn parse_config(text: &str) -> Result<ScanConfig, ConfigErrors> {
    let mut r = Reader::new(text);

    let axis = match r.raw("sweep.axis").map(str::to_string) {
        Some(raw) => SweepAxis::parse(&raw).or_else(|| {
            r.fail("sweep.axis", format!("unknown axis `{raw}` (expected delta, d, b, eps1, eps2 or eps3)"));
            None
        }),
        None => {
            r.fail("sweep.axis", "required: exactly one sweep axis");
            None
        }
    };
    let grid = match r.raw("sweep.grid").map(str::to_string) {
        Some(raw) => match parse_grid(&raw) {
            Ok(g) if g.is_empty() => {
                r.fail("sweep.grid", "grid is empty");
                None
            }
            Ok(g) if !(g.windows(2).all(|w| w[1] > w[0]) || g.windows(2).all(|w| w[1] < w[0])) => {
                r.fail("sweep.grid", "grid must be strictly monotone");
                None
            }
            Ok(g) => Some(g),
            Err(e) => {
                r.fail("sweep.grid", e);
                None
            }
        },
        None => {
            r.fail("sweep.grid", "required");
            None
        }
    };
    let reference = match r.raw("sweep.reference") {
        None | Some("none") => Reference::None,
        Some("first") => Reference::First,
        Some("pc") => Reference::Pc,
        Some(other) => {
            let msg = format!("unknown reference `{other}` (expected none, first or pc)");
            r.fail("sweep.reference", msg);
            Reference::None
        }
    };

    let mut quadrature = QuadratureSpec::default();
    if let Some(raw) = r.raw("quadrature.scheme").map(str::to_string) {
        match raw.parse::<Scheme>() {
            Ok(s) => quadrature.scheme = s,
            Err(e) => r.fail("quadrature.scheme", e.to_string()),
        }
    }
    if let Some(v) = r.number("quadrature.rel_tol") {
        quadrature.rel_tol = v;
    }
    if let Some(v) = r.number("quadrature.abs_floor") {
        quadrature.abs_floor = v;
    }
    if let Some(v) = r.number("quadrature.trunc_tol") {
        quadrature.trunc_tol = v;
    }
    if let Some(v) = r.count("quadrature.radial_nodes") {
        quadrature.radial_nodes = v;
    }
    if let Some(v) = r.count("quadrature.angular_nodes") {
        quadrature.angular_nodes = v;
    }
    if let Some(v) = r.count("quadrature.max_escalations") {
        quadrature.max_escalations = v;
    }
    if let Some(v) = r.count("quadrature.n_max") {
        quadrature.n_max = v;
    }
    if let Err(e) = quadrature.validate() {
        r.errors.push(err(None, "quadrature", e.to_string()));
    }

    let format = match r.raw("output.format") {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => {
            let msg = format!("unknown format `{other}` (expected csv or json)");
            r.fail("output.format", msg);
            OutputFormat::Csv
        }
    };
    let precision = r.count("output.precision").unwrap_or(10);
    if !(1..=17).contains(&precision) {
        r.fail("output.precision", "precision must lie in 1..=17");
    }
    let output = OutputConfig { path: r.raw("output.path").map(str::to_string), format, precision };
    let workers = r.count("workers");
    if workers == Some(0) {
        r.fail("workers", "must be at least 1");
    }

    let labels = r.curve_order.clone();
    let curves: Vec<CurveConfig> = if labels.is_empty() {
        r.curve(None).into_iter().collect()
    } else {
        labels.iter().filter_map(|l| r.curve(Some(l))).collect()
    };

    if let (Some(axis), Some(grid)) = (axis, grid.as_ref()) {
        for curve in &curves {
            for &value in grid {
                if let Err(e) = curve.at(axis, value) {
                    r.errors.push(err(None, "sweep.grid", format!("curve `{}` at {} = {value}: {e}", curve.label, axis.name())));
                    continue;
                }
                let (_, media) = curve.at(axis, value).expect("checked above");
                if let Err(e) = quadrature.resolve_scheme(&media) {
                    r.errors.push(err(r.line("quadrature.scheme"), "quadrature.scheme", format!("curve `{}`: {e}", curve.label)));
                }
            }
            let kind = curve.geometry.kind;
            let fits = match axis {
                SweepAxis::Delta => kind != GeometryKind::CylinderPlane,
                SweepAxis::PlaneGap => kind == GeometryKind::CylinderPlane,
                SweepAxis::OuterRadius => kind != GeometryKind::CylinderPlane,
                _ => true,
            };
            if !fits {
                r.errors.push(err(
                    r.line("sweep.axis"),
                    "sweep.axis",
                    format!("axis {} does not apply to the {} geometry of curve `{}`", axis.name(), kind.name(), curve.label),
                ));
            }
        }
    }

    let mut errors = r.errors;
    errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
    errors.dedup();
    match (errors.is_empty(), axis, grid) {
        (true, Some(axis), Some(grid)) => {
            Ok(ScanConfig { curves, sweep: Sweep { axis, grid, reference }, quadrature, output, workers })
        }
        _ => Err(ConfigErrors(errors)),
    }
}
