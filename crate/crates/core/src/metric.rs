//! Point universes, distance oracles, axiom verification, triples, perimeters,
//! and betweenness.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::scalar::{NumericMode, Scalar, Tolerance};

/// Identity of a point. Finite spaces use `Index` only; computable spaces may
/// also have the distinguished `Star` point, which sorts after every index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointRef {
    Index(usize),
    Star,
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Index(i) => write!(f, "#{i}"),
            PointRef::Star => f.write_str("*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    FiniteMatrix,
    Computable,
}

/// A set of points with a distance oracle.
///
/// Implementations only need to answer `raw_distance` for members; callers go
/// through [`distance`], which checks membership first.
pub trait MetricSpace {
    fn kind(&self) -> SpaceKind;

    fn mode(&self) -> NumericMode;

    fn tolerance(&self) -> Tolerance {
        Tolerance::DEFAULT
    }

    fn contains(&self, p: PointRef) -> bool;

    fn raw_distance(&self, p: PointRef, q: PointRef) -> Result<Scalar, Error>;

    /// Points available for enumeration, in ascending order. Computable
    /// spaces require a window; finite spaces treat it as an upper index bound.
    fn points(&self, window: Option<usize>) -> Result<Vec<PointRef>, Error>;

    fn label(&self, p: PointRef) -> String;
}

impl<S: MetricSpace + ?Sized> MetricSpace for &S {
    fn kind(&self) -> SpaceKind {
        (**self).kind()
    }
    fn mode(&self) -> NumericMode {
        (**self).mode()
    }
    fn tolerance(&self) -> Tolerance {
        (**self).tolerance()
    }
    fn contains(&self, p: PointRef) -> bool {
        (**self).contains(p)
    }
    fn raw_distance(&self, p: PointRef, q: PointRef) -> Result<Scalar, Error> {
        (**self).raw_distance(p, q)
    }
    fn points(&self, window: Option<usize>) -> Result<Vec<PointRef>, Error> {
        (**self).points(window)
    }
    fn label(&self, p: PointRef) -> String {
        (**self).label(p)
    }
}

impl<S: MetricSpace + ?Sized> MetricSpace for alloc::boxed::Box<S> {
    fn kind(&self) -> SpaceKind {
        (**self).kind()
    }
    fn mode(&self) -> NumericMode {
        (**self).mode()
    }
    fn tolerance(&self) -> Tolerance {
        (**self).tolerance()
    }
    fn contains(&self, p: PointRef) -> bool {
        (**self).contains(p)
    }
    fn raw_distance(&self, p: PointRef, q: PointRef) -> Result<Scalar, Error> {
        (**self).raw_distance(p, q)
    }
    fn points(&self, window: Option<usize>) -> Result<Vec<PointRef>, Error> {
        (**self).points(window)
    }
    fn label(&self, p: PointRef) -> String {
        (**self).label(p)
    }
}

pub fn distance<S: MetricSpace + ?Sized>(space: &S, p: PointRef, q: PointRef) -> Result<Scalar, Error> {
    for x in [p, q] {
        if !space.contains(x) {
            return Err(Error::UnknownPoint(x));
        }
    }
    space.raw_distance(p, q)
}

/// A matrix-backed space over points `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace {
    names: Vec<String>,
    matrix: Vec<Scalar>,
    mode: NumericMode,
    tolerance: Tolerance,
}

impl FiniteSpace {
    /// Builds a space from a row-major matrix. Entries are converted to
    /// `mode`. Axioms are not checked here; see [`FiniteSpace::checked`].
    pub fn new(names: Vec<String>, rows: Vec<Vec<Scalar>>, mode: NumericMode) -> Result<Self, Error> {
        let n = names.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpace(format!("distance matrix must be {n} x {n}")));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidSpace(format!("bad point name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidSpace(format!("duplicate point name `{name}`")));
            }
        }
        let matrix = rows
            .into_iter()
            .flatten()
            .map(|v| v.to_mode(mode))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSpace {
            names,
            matrix,
            mode,
            tolerance: Tolerance::DEFAULT,
        })
    }

    /// Like [`FiniteSpace::new`] but rejects matrices that fail the metric axioms.
    pub fn checked(names: Vec<String>, rows: Vec<Vec<Scalar>>, mode: NumericMode) -> Result<Self, Error> {
        let space = Self::new(names, rows, mode)?;
        let report = verify_metric_axioms(&space, None)?;
        match report.violation {
            None => Ok(space),
            Some(v) => Err(Error::InvalidSpace(v.describe(&space))),
        }
    }

    /// Exact space from an integer matrix; names are `p0, p1, ...`.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, Error> {
        let names = (0..rows.len()).map(|i| format!("p{i}")).collect();
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(v, NumericMode::Exact)).collect())
            .collect();
        Self::new(names, rows, NumericMode::Exact)
    }

    /// All off-diagonal distances equal to 1.
    pub fn equilateral(names: &[&str]) -> Self {
        let n = names.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Scalar::from_int((i != j) as i64, NumericMode::Exact))
                    .collect()
            })
            .collect();
        Self::new(
            names.iter().map(|s| String::from(*s)).collect(),
            rows,
            NumericMode::Exact,
        )
        .expect("equilateral matrix is well formed")
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Overwrites the single entry `(i, j)`; `(j, i)` is left as is.
    pub fn with_entry(mut self, i: usize, j: usize, value: Scalar) -> Result<Self, Error> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::UnknownPoint(PointRef::Index(i.max(j))));
        }
        self.matrix[i * n + j] = value.to_mode(self.mode)?;
        Ok(self)
    }

    /// Every distance multiplied by `factor`.
    pub fn scaled(&self, factor: &Scalar) -> Result<Self, Error> {
        let matrix = self
            .matrix
            .iter()
            .map(|v| v.mul(factor))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSpace { matrix, ..self.clone() })
    }

    /// The same matrix in the other numeric mode.
    pub fn to_mode(&self, mode: NumericMode) -> Result<Self, Error> {
        let matrix = self
            .matrix
            .iter()
            .map(|v| v.to_mode(mode))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSpace {
            matrix,
            mode,
            ..self.clone()
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<PointRef> {
        self.names.iter().position(|n| n == name).map(PointRef::Index)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[i * self.len() + j]
    }
}

impl MetricSpace for FiniteSpace {
    fn kind(&self) -> SpaceKind {
        SpaceKind::FiniteMatrix
    }

    fn mode(&self) -> NumericMode {
        self.mode
    }

    fn tolerance(&self) -> Tolerance {
        self.tolerance
    }

    fn contains(&self, p: PointRef) -> bool {
        matches!(p, PointRef::Index(i) if i < self.len())
    }

    fn raw_distance(&self, p: PointRef, q: PointRef) -> Result<Scalar, Error> {
        match (p, q) {
            (PointRef::Index(i), PointRef::Index(j)) if i < self.len() && j < self.len() => {
                Ok(self.entry(i, j).clone())
            }
            (PointRef::Index(_), PointRef::Index(_)) => Err(Error::UnknownPoint(p.max(q))),
            (PointRef::Star, _) | (_, PointRef::Star) => Err(Error::UnknownPoint(PointRef::Star)),
        }
    }

    fn points(&self, window: Option<usize>) -> Result<Vec<PointRef>, Error> {
        let end = match window {
            Some(w) => (w + 1).min(self.len()),
            None => self.len(),
        };
        Ok((0..end).map(PointRef::Index).collect())
    }

    fn label(&self, p: PointRef) -> String {
        match p {
            PointRef::Index(i) if i < self.len() => self.names[i].clone(),
            other => format!("{other}"),
        }
    }
}

/// Three pairwise distinct points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    a: PointRef,
    b: PointRef,
    c: PointRef,
}

impl Triple {
    pub fn new(a: PointRef, b: PointRef, c: PointRef) -> Result<Triple, Error> {
        if a == b || b == c || a == c {
            return Err(Error::CoincidentPoints);
        }
        Ok(Triple { a, b, c })
    }

    pub fn points(&self) -> [PointRef; 3] {
        [self.a, self.b, self.c]
    }

    pub fn a(&self) -> PointRef {
        self.a
    }

    pub fn b(&self) -> PointRef {
        self.b
    }

    pub fn c(&self) -> PointRef {
        self.c
    }
}

/// Sum of the three pairwise distances of arbitrary (possibly coincident) points.
pub(crate) fn perimeter_of<S: MetricSpace + ?Sized>(space: &S, pts: [PointRef; 3]) -> Result<Scalar, Error> {
    let [a, b, c] = pts;
    let ab = distance(space, a, b)?;
    let bc = distance(space, b, c)?;
    let ac = distance(space, a, c)?;
    Ok(ab.add(&bc)?.add(&ac)?)
}

pub fn perimeter<S: MetricSpace + ?Sized>(space: &S, t: &Triple) -> Result<Scalar, Error> {
    perimeter_of(space, t.points())
}

/// Whether `y` lies between `x` and `z`: `d(x,z) = d(x,y) + d(y,z)`.
pub fn is_between<S: MetricSpace + ?Sized>(space: &S, x: PointRef, y: PointRef, z: PointRef) -> Result<bool, Error> {
    Triple::new(x, y, z)?;
    let lhs = distance(space, x, z)?;
    let rhs = distance(space, x, y)?.add(&distance(space, y, z)?)?;
    Ok(lhs.approx_eq(&rhs, &space.tolerance()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `d(p, q) < 0`.
    Negative(PointRef, PointRef),
    /// `d(p, p) != 0`.
    NonzeroSelfDistance(PointRef),
    /// `d(p, q) = 0` with `p != q`.
    Indiscernible(PointRef, PointRef),
    /// `d(p, q) != d(q, p)`.
    Asymmetric(PointRef, PointRef),
    /// `d(p, r) > d(p, q) + d(q, r)`, stored as `(p, q, r)`.
    Triangle(PointRef, PointRef, PointRef),
}

impl AxiomViolation {
    pub fn points(&self) -> Vec<PointRef> {
        match *self {
            AxiomViolation::NonzeroSelfDistance(p) => alloc::vec![p],
            AxiomViolation::Negative(p, q) | AxiomViolation::Indiscernible(p, q) | AxiomViolation::Asymmetric(p, q) => {
                alloc::vec![p, q]
            }
            AxiomViolation::Triangle(p, q, r) => alloc::vec![p, q, r],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AxiomViolation::Negative(..) => "negative",
            AxiomViolation::NonzeroSelfDistance(..) => "identity",
            AxiomViolation::Indiscernible(..) => "indiscernible",
            AxiomViolation::Asymmetric(..) => "symmetry",
            AxiomViolation::Triangle(..) => "triangle",
        }
    }

    pub fn describe<S: MetricSpace + ?Sized>(&self, space: &S) -> String {
        let names: Vec<String> = self.points().into_iter().map(|p| space.label(p)).collect();
        format!("{} violation at ({})", self.kind_name(), names.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub points_checked: usize,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks every metric axiom over the (windowed) point set.
///
/// Pair defects are looked for first, in lexicographic order of `(p, q)`;
/// then triangle inequalities over ordered triples `(p, q, r)` of distinct
/// points, again lexicographically. The first defect found is reported.
pub fn verify_metric_axioms<S: MetricSpace + ?Sized>(space: &S, window: Option<usize>) -> Result<AxiomReport, Error> {
    let pts = space.points(window)?;
    let n = pts.len();
    if n == 0 {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    let tol = space.tolerance();
    let mut dist = Vec::with_capacity(n * n);
    for &p in &pts {
        for &q in &pts {
            dist.push(distance(space, p, q)?);
        }
    }
    let d = |i: usize, j: usize| &dist[i * n + j];
    let report = |v| {
        Ok(AxiomReport {
            points_checked: n,
            violation: Some(v),
        })
    };

    for i in 0..n {
        if !d(i, i).is_zero() {
            return report(AxiomViolation::NonzeroSelfDistance(pts[i]));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if d(i, j).signum() < 0 {
                return report(AxiomViolation::Negative(pts[i], pts[j]));
            }
            if d(i, j).is_zero() {
                return report(AxiomViolation::Indiscernible(pts[i], pts[j]));
            }
            if !d(i, j).approx_eq(d(j, i), &tol) {
                return report(AxiomViolation::Asymmetric(pts[i], pts[j]));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let via = d(i, j).add(d(j, k))?;
                if !d(i, k).le(&via, &tol) {
                    return report(AxiomViolation::Triangle(pts[i], pts[j], pts[k]));
                }
            }
        }
    }
    Ok(AxiomReport {
        points_checked: n,
        violation: None,
    })
}
