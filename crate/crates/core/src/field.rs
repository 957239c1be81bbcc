//! Morse functions on the flat torus `R^2 / Z^2`, given as real trigonometric
//! polynomials with integer frequency vectors.
//!
//! Gradients and Hessians are evaluated analytically, so critical points are
//! located by Newton iteration and classified by the sign of the Hessian
//! determinant without any finite-difference error.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::smith_pair;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("field is constant")]
    DegenerateField,
    #[error("function is not Morse: {0}")]
    NotMorse(String),
    #[error("critical point census violates the Euler characteristic of the torus: {minima} minima, {saddles} saddles, {maxima} maxima")]
    EulerMismatch {
        minima: usize,
        saddles: usize,
        maxima: usize,
    },
    #[error("translation {translation} has deviation {deviation:e}, too close to the tolerance")]
    ToleranceAmbiguity { translation: Translation, deviation: f64 },
    #[error("translation {0} does not preserve the field")]
    NotASymmetry(Translation),
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn reduce_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A point of `R^2 / Z^2`, coordinates always reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: reduce_unit(x),
            y: reduce_unit(y),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    /// Flat distance on the torus.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let wrap = |d: f64| {
            let d = d.abs();
            d.min(1.0 - d)
        };
        wrap(self.x - other.x).hypot(wrap(self.y - other.y))
    }
}

/// One term `a * cos(2*pi*(p*x + q*y) + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub a: f64,
    pub p: i64,
    pub q: i64,
    #[serde(default)]
    pub phase: f64,
}

impl TrigTerm {
    pub fn new(a: f64, p: i64, q: i64, phase: f64) -> Self {
        Self { a, p, q, phase }
    }

    fn angle(&self, x: f64, y: f64) -> f64 {
        TAU * (self.p as f64 * x + self.q as f64 * y) + self.phase
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct TrigFieldSpec {
    terms: Vec<TrigTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    terms: Vec<TrigTerm>,
}

impl TryFrom<RawSpec> for TrigFieldSpec {
    type Error = FieldError;

    fn try_from(raw: RawSpec) -> Result<Self, FieldError> {
        TrigFieldSpec::new(raw.terms)
    }
}

impl From<TrigFieldSpec> for RawSpec {
    fn from(spec: TrigFieldSpec) -> Self {
        RawSpec { terms: spec.terms }
    }
}

impl TrigFieldSpec {
    pub fn new(terms: Vec<TrigTerm>) -> Result<Self, FieldError> {
        if let Some(t) = terms.iter().find(|t| !t.a.is_finite() || !t.phase.is_finite()) {
            return Err(FieldError::InvalidSpec(format!("non-finite coefficient in term {t:?}")));
        }
        if !terms.iter().any(|t| t.a != 0.0 && (t.p, t.q) != (0, 0)) {
            return Err(FieldError::DegenerateField);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn from_toml_str(s: &str) -> Result<Self, FieldError> {
        toml::from_str(s).map_err(|e| FieldError::InvalidSpec(e.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<Self, FieldError> {
        serde_json::from_str(s).map_err(|e| FieldError::InvalidSpec(e.to_string()))
    }

    /// Loads a TOML or JSON spec; the format is picked from the extension,
    /// falling back to sniffing the first non-blank character.
    pub fn load(path: &Path) -> Result<Self, FieldError> {
        let text = std::fs::read_to_string(path)?;
        let is_json = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => true,
            Some("toml") => false,
            _ => text.trim_start().starts_with('{'),
        };
        if is_json {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|t| t.a * t.angle(x, y).cos()).sum()
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let mut gx = 0.0;
        let mut gy = 0.0;
        for t in &self.terms {
            let s = -t.a * TAU * t.angle(x, y).sin();
            gx += s * t.p as f64;
            gy += s * t.q as f64;
        }
        (gx, gy)
    }

    /// `(f_xx, f_xy, f_yy)`
    pub fn hessian(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let mut hxx = 0.0;
        let mut hxy = 0.0;
        let mut hyy = 0.0;
        for t in &self.terms {
            let c = -t.a * TAU * TAU * t.angle(x, y).cos();
            let (p, q) = (t.p as f64, t.q as f64);
            hxx += c * p * p;
            hxy += c * p * q;
            hyy += c * q * q;
        }
        (hxx, hxy, hyy)
    }

    /// Sum of absolute amplitudes; bounds `|f|`.
    pub fn amplitude_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.a.abs()).sum()
    }
}

pub fn evaluate(spec: &TrigFieldSpec, p: TorusPoint) -> f64 {
    spec.value(p.x, p.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Minimum,
    Saddle,
    Maximum,
}

impl CriticalKind {
    /// Morse index contribution to the Euler characteristic.
    pub fn euler_sign(self) -> i64 {
        match self {
            CriticalKind::Minimum | CriticalKind::Maximum => 1,
            CriticalKind::Saddle => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub id: usize,
    pub location: TorusPoint,
    pub value: f64,
    pub kind: CriticalKind,
    pub hessian_det: f64,
}

pub const DEFAULT_GRID: usize = 128;
pub const DEFAULT_TOL: f64 = 1e-9;

const MAX_NEWTON_STEPS: usize = 80;
const MERGE_RADIUS: f64 = 1e-7;

fn solve2(a: f64, b: f64, c: f64, d: f64, r0: f64, r1: f64) -> Option<(f64, f64)> {
    let det = a * d - b * c;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some(((d * r0 - b * r1) / det, (a * r1 - c * r0) / det))
}

/// Newton iteration on the gradient, falling back to a damped least-squares
/// step where the Hessian is (nearly) singular.
fn refine(spec: &TrigFieldSpec, x0: f64, y0: f64, tol: f64, max_step: f64) -> Option<(f64, f64)> {
    let (mut x, mut y) = (x0, y0);
    for _ in 0..MAX_NEWTON_STEPS {
        let (gx, gy) = spec.gradient(x, y);
        if gx.hypot(gy) < tol {
            return Some((reduce_unit(x), reduce_unit(y)));
        }
        let (hxx, hxy, hyy) = spec.hessian(x, y);
        let scale = hxx.abs().max(hxy.abs()).max(hyy.abs());
        if scale == 0.0 {
            return None;
        }
        let det = hxx * hyy - hxy * hxy;
        let step = if det.abs() > 1e-10 * scale * scale {
            solve2(hxx, hxy, hxy, hyy, -gx, -gy)
        } else {
            // (H^2 + lambda I) d = -H g
            let lambda = 1e-8 * scale * scale;
            let a = hxx * hxx + hxy * hxy + lambda;
            let b = hxx * hxy + hxy * hyy;
            let d = hxy * hxy + hyy * hyy + lambda;
            solve2(a, b, b, d, -(hxx * gx + hxy * gy), -(hxy * gx + hyy * gy))
        };
        let (mut dx, mut dy) = step?;
        let len = dx.hypot(dy);
        if len > max_step {
            dx *= max_step / len;
            dy *= max_step / len;
        }
        x += dx;
        y += dy;
    }
    None
}

fn classify_hessian(hxx: f64, hyy: f64, det: f64) -> CriticalKind {
    if det < 0.0 {
        CriticalKind::Saddle
    } else if hxx + hyy > 0.0 {
        CriticalKind::Minimum
    } else {
        CriticalKind::Maximum
    }
}

/// Locates every critical point of `spec`.
///
/// Seeds are the cells of a `grid x grid` lattice in which both gradient
/// components change sign; each seed is refined by Newton iteration until the
/// gradient norm drops below `tol`. The result is sorted by value and ids are
/// assigned in that order.
pub fn find_critical_points(spec: &TrigFieldSpec, grid: usize, tol: f64) -> Result<Vec<CriticalPoint>, FieldError> {
    if grid < 16 {
        return Err(FieldError::InvalidArgument(format!(
            "grid must be at least 16, got {grid}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(FieldError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let h = 1.0 / grid as f64;
    let idx = |i: usize, j: usize| (j % grid) * grid + (i % grid);
    let mut grads = Vec::with_capacity(grid * grid);
    for j in 0..grid {
        for i in 0..grid {
            grads.push(spec.gradient(i as f64 * h, j as f64 * h));
        }
    }

    let mut found: Vec<(f64, f64)> = Vec::new();
    for j in 0..grid {
        for i in 0..grid {
            let corners = [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)];
            let straddles = |pick: fn(&(f64, f64)) -> f64| {
                let (lo, hi) = corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
                    let v = pick(&grads[c]);
                    (lo.min(v), hi.max(v))
                });
                lo <= 0.0 && hi >= 0.0
            };
            if !straddles(|g| g.0) || !straddles(|g| g.1) {
                continue;
            }
            let seed = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            let Some((x, y)) = refine(spec, seed.0, seed.1, tol, 2.0 * h) else {
                continue;
            };
            let p = TorusPoint::new(x, y);
            if found
                .iter()
                .any(|&(fx, fy)| TorusPoint::new(fx, fy).distance(&p) < MERGE_RADIUS)
            {
                continue;
            }
            found.push((p.x, p.y));
        }
    }

    let mut points = Vec::with_capacity(found.len());
    for &(x, y) in &found {
        let (hxx, hxy, hyy) = spec.hessian(x, y);
        let det = hxx * hyy - hxy * hxy;
        if det.abs() < tol {
            return Err(FieldError::NotMorse(format!(
                "degenerate critical point at ({x:.6}, {y:.6}) with Hessian determinant {det:e}"
            )));
        }
        points.push(CriticalPoint {
            id: 0,
            location: TorusPoint::new(x, y),
            value: spec.value(x, y),
            kind: classify_hessian(hxx, hyy, det),
            hessian_det: det,
        });
    }

    let value_eps = 1e-9 * (1.0 + spec.amplitude_bound());
    for (a, pa) in points.iter().enumerate() {
        for pb in &points[a + 1..] {
            if pa.location.distance(&pb.location) < h && (pa.value - pb.value).abs() < value_eps {
                return Err(FieldError::NotMorse(format!(
                    "critical points at ({:.6}, {:.6}) and ({:.6}, {:.6}) are not isolated at grid resolution",
                    pa.location.x, pa.location.y, pb.location.x, pb.location.y
                )));
            }
        }
    }

    points.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.location.x.total_cmp(&b.location.x))
            .then(a.location.y.total_cmp(&b.location.y))
    });
    for (id, p) in points.iter_mut().enumerate() {
        p.id = id;
    }

    let count = |k| points.iter().filter(|p| p.kind == k).count();
    let (minima, saddles, maxima) = (
        count(CriticalKind::Minimum),
        count(CriticalKind::Saddle),
        count(CriticalKind::Maximum),
    );
    if minima + maxima != saddles || minima == 0 || maxima == 0 {
        return Err(FieldError::EulerMismatch {
            minima,
            saddles,
            maxima,
        });
    }
    Ok(points)
}

/// A rational translation of the torus, both coordinates reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Translation {
    x: Ratio<i64>,
    y: Ratio<i64>,
}

fn reduce_ratio(r: Ratio<i64>) -> Ratio<i64> {
    let den = *r.denom();
    Ratio::new(r.numer().rem_euclid(den), den)
}

impl Translation {
    pub fn new(x: Ratio<i64>, y: Ratio<i64>) -> Self {
        Self {
            x: reduce_ratio(x),
            y: reduce_ratio(y),
        }
    }

    pub fn from_fractions(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(Ratio::new(xn, xd), Ratio::new(yn, yd))
    }

    pub fn zero() -> Self {
        Self::new(Ratio::from_integer(0), Ratio::from_integer(0))
    }

    pub fn x(&self) -> Ratio<i64> {
        self.x
    }

    pub fn y(&self) -> Ratio<i64> {
        self.y
    }

    pub fn add(&self, other: &Translation) -> Translation {
        Translation::new(self.x + other.x, self.y + other.y)
    }

    pub fn is_zero(&self) -> bool {
        *self.x.numer() == 0 && *self.y.numer() == 0
    }

    /// Least common denominator of the two coordinates.
    pub fn denominator(&self) -> i64 {
        self.x.denom().lcm(self.y.denom())
    }

    pub fn as_f64(&self) -> (f64, f64) {
        (
            *self.x.numer() as f64 / *self.x.denom() as f64,
            *self.y.numer() as f64 / *self.y.denom() as f64,
        )
    }

    pub fn apply(&self, p: TorusPoint) -> TorusPoint {
        let (dx, dy) = self.as_f64();
        p.translate(dx, dy)
    }

    /// Parses `"a/b,c/d"` (integers allowed for either coordinate).
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::InvalidArgument(format!("bad translation {s:?}, expected e.g. 1/2,1/3"));
        let (xs, ys) = s.split_once(',').ok_or_else(bad)?;
        let frac = |t: &str| -> Result<Ratio<i64>, FieldError> {
            let t = t.trim();
            match t.split_once('/') {
                Some((n, d)) => {
                    let n: i64 = n.trim().parse().map_err(|_| bad())?;
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    if d == 0 {
                        return Err(bad());
                    }
                    Ok(Ratio::new(n, d))
                }
                None => Ok(Ratio::from_integer(t.parse().map_err(|_| bad())?)),
            }
        };
        Ok(Self::new(frac(xs)?, frac(ys)?))
    }
}

impl fmt::Display for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl Serialize for Translation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Translation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Translation::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A finite group of translations preserving the field, isomorphic to
/// `Z_n x Z_{n*m}` for its Smith pair `(n, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationSubgroup {
    pub generators: Vec<Translation>,
    pub elements: Vec<Translation>,
    pub order: u64,
    pub smith_pair: (u64, u64),
}

const MAX_SUBGROUP_ORDER: usize = 1 << 16;

impl TranslationSubgroup {
    pub fn trivial() -> Self {
        Self {
            generators: Vec::new(),
            elements: vec![Translation::zero()],
            order: 1,
            smith_pair: (1, 1),
        }
    }

    /// Closes `gens` under addition mod 1.
    pub fn generated_by(gens: &[Translation]) -> Result<Self, FieldError> {
        let mut elements: BTreeSet<Translation> = BTreeSet::from([Translation::zero()]);
        let mut minimal = Vec::new();
        for g in gens {
            if elements.contains(g) {
                continue;
            }
            minimal.push(*g);
            let mut frontier: Vec<Translation> = elements.iter().copied().collect();
            while let Some(e) = frontier.pop() {
                for step in &minimal {
                    let next = e.add(step);
                    if elements.insert(next) {
                        if elements.len() > MAX_SUBGROUP_ORDER {
                            return Err(FieldError::InvalidArgument("translation subgroup is too large".into()));
                        }
                        frontier.push(next);
                    }
                }
            }
        }
        let pairs: Vec<(Ratio<i64>, Ratio<i64>)> = minimal.iter().map(|t| (t.x, t.y)).collect();
        let smith = smith_pair(&pairs).map_err(|e| FieldError::InvalidArgument(e.to_string()))?;
        Ok(Self {
            generators: minimal,
            order: elements.len() as u64,
            elements: elements.into_iter().collect(),
            smith_pair: smith,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Largest sampled `|f(p + t) - f(p)|` over the group.
    pub fn max_deviation(&self, spec: &TrigFieldSpec) -> f64 {
        self.elements
            .iter()
            .map(|t| translation_deviation(spec, t))
            .fold(0.0, f64::max)
    }
}

fn sample_points() -> impl Iterator<Item = (f64, f64)> {
    // Kronecker sequence with the plastic-number rotation; dense, deterministic.
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    (1..=96).map(|k| ((k as f64 * A1).fract(), (k as f64 * A2).fract()))
}

/// Largest sampled `|f(p + t) - f(p)|`.
pub fn translation_deviation(spec: &TrigFieldSpec, t: &Translation) -> f64 {
    let (dx, dy) = t.as_f64();
    sample_points()
        .map(|(x, y)| (spec.value(x + dx, y + dy) - spec.value(x, y)).abs())
        .fold(0.0, f64::max)
}

/// Searches all translations `(a/d, b/d)` with `d <= max_order` and returns
/// the subgroup of those preserving the field to within `tol`.
pub fn detect_translation_symmetries(
    spec: &TrigFieldSpec,
    max_order: u32,
    tol: f64,
) -> Result<TranslationSubgroup, FieldError> {
    if max_order == 0 {
        return Err(FieldError::InvalidArgument("max_order must be at least 1".into()));
    }
    let mut invariant = Vec::new();
    for d in 2..=i64::from(max_order) {
        for a in 0..d {
            for b in 0..d {
                if a.gcd(&b).gcd(&d) != 1 {
                    continue;
                }
                let t = Translation::from_fractions(a, d, b, d);
                let dev = translation_deviation(spec, &t);
                if dev >= tol && dev <= 2.0 * tol {
                    return Err(FieldError::ToleranceAmbiguity {
                        translation: t,
                        deviation: dev,
                    });
                }
                if dev < tol {
                    invariant.push(t);
                }
            }
        }
    }
    TranslationSubgroup::generated_by(&invariant)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tilted() -> TrigFieldSpec {
        TrigFieldSpec::new(vec![TrigTerm::new(1.0, 1, 0, 0.0), TrigTerm::new(0.5, 0, 1, 0.0)]).unwrap()
    }

    #[test]
    fn torus_point_wraps() {
        let p = TorusPoint::new(-0.25, 1.5);
        assert_eq!((p.x(), p.y()), (0.75, 0.5));
        assert!(TorusPoint::new(0.01, 0.0).distance(&TorusPoint::new(0.99, 0.0)) < 0.021);
        let tiny = TorusPoint::new(-1e-300, 0.0);
        assert!(tiny.x() < 1.0);
    }

    #[test]
    fn constant_spec_is_rejected() {
        assert!(matches!(
            TrigFieldSpec::new(vec![TrigTerm::new(2.0, 0, 0, 0.0)]),
            Err(FieldError::DegenerateField)
        ));
        assert!(matches!(TrigFieldSpec::new(vec![]), Err(FieldError::DegenerateField)));
        assert!(TrigFieldSpec::new(vec![TrigTerm::new(f64::NAN, 1, 0, 0.0)]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let one = TrigFieldSpec::new(vec![TrigTerm::new(1.0, 1, 0, 0.0)]).unwrap();
        assert_eq!(evaluate(&one, TorusPoint::new(0.0, 0.0)), 1.0);
        assert!((evaluate(&tilted(), TorusPoint::new(0.5, 0.0)) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn spec_parsing_defaults_phase() {
        let s = TrigFieldSpec::from_toml_str("terms = [{a = 1.0, p = 1, q = 0}]").unwrap();
        assert_eq!(s.terms()[0].phase, 0.0);
        let j = TrigFieldSpec::from_json_str(r#"{"terms":[{"a":0.5,"p":0,"q":1,"phase":0.1}]}"#).unwrap();
        assert_eq!(j.terms()[0].phase, 0.1);
        assert!(TrigFieldSpec::from_json_str(r#"{"terms":[{"a":1.0,"p":0,"q":0}]}"#).is_err());
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let s = TrigFieldSpec::new(vec![TrigTerm::new(0.7, 2, -1, 0.3), TrigTerm::new(-0.4, 1, 3, 1.1)]).unwrap();
        let (x, y, e) = (0.31, 0.77, 1e-6);
        let (gx, gy) = s.gradient(x, y);
        assert!((gx - (s.value(x + e, y) - s.value(x - e, y)) / (2.0 * e)).abs() < 1e-5);
        assert!((gy - (s.value(x, y + e) - s.value(x, y - e)) / (2.0 * e)).abs() < 1e-5);
        let (hxx, hxy, _) = s.hessian(x, y);
        assert!((hxx - (s.gradient(x + e, y).0 - s.gradient(x - e, y).0) / (2.0 * e)).abs() < 1e-4);
        assert!((hxy - (s.gradient(x, y + e).0 - s.gradient(x, y - e).0) / (2.0 * e)).abs() < 1e-4);
    }

    #[test]
    fn small_grid_rejected() {
        assert!(matches!(
            find_critical_points(&tilted(), 8, 1e-9),
            Err(FieldError::InvalidArgument(_))
        ));
    }

    #[test]
    fn circles_of_critical_points_are_not_morse() {
        let s = TrigFieldSpec::new(vec![TrigTerm::new(1.0, 1, 0, 0.0)]).unwrap();
        assert!(matches!(
            find_critical_points(&s, 64, 1e-9),
            Err(FieldError::NotMorse(_))
        ));
    }

    #[test]
    fn translation_parsing_and_reduction() {
        let t = Translation::parse("3/2, -1/3").unwrap();
        assert_eq!(t.to_string(), "1/2,2/3");
        assert_eq!(t.denominator(), 6);
        assert!(Translation::parse("1/0,1").is_err());
        assert!(Translation::parse("nope").is_err());
        assert!(Translation::parse("1,0").unwrap().is_zero());
    }

    #[test]
    fn generated_subgroup_closes() {
        let g = TranslationSubgroup::generated_by(&[
            Translation::from_fractions(1, 2, 0, 1),
            Translation::from_fractions(0, 1, 1, 3),
        ])
        .unwrap();
        assert_eq!(g.order, 6);
        assert_eq!(g.smith_pair, (1, 6));
        let g = TranslationSubgroup::generated_by(&[
            Translation::from_fractions(1, 2, 0, 1),
            Translation::from_fractions(0, 1, 1, 2),
        ])
        .unwrap();
        assert_eq!(g.order, 4);
        assert_eq!(g.smith_pair, (2, 1));
    }
}
