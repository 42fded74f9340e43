//! Self-maps, orbits, fixed points, and the period-two condition.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::metric::{perimeter_of, MetricSpace, PointRef};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Table,
    Rule,
}

/// A total map of a space into itself.
pub trait SelfMap {
    fn kind(&self) -> MapKind;

    fn image(&self, p: PointRef) -> Result<PointRef, Error>;

    /// Fixed points the map knows about without enumeration.
    fn declared_fixed_points(&self) -> Vec<PointRef> {
        Vec::new()
    }
}

impl<M: SelfMap + ?Sized> SelfMap for &M {
    fn kind(&self) -> MapKind {
        (**self).kind()
    }
    fn image(&self, p: PointRef) -> Result<PointRef, Error> {
        (**self).image(p)
    }
    fn declared_fixed_points(&self) -> Vec<PointRef> {
        (**self).declared_fixed_points()
    }
}

impl<M: SelfMap + ?Sized> SelfMap for alloc::boxed::Box<M> {
    fn kind(&self) -> MapKind {
        (**self).kind()
    }
    fn image(&self, p: PointRef) -> Result<PointRef, Error> {
        (**self).image(p)
    }
    fn declared_fixed_points(&self) -> Vec<PointRef> {
        (**self).declared_fixed_points()
    }
}

/// A map on `0..n` given by its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMap {
    images: Vec<usize>,
}

impl TableMap {
    pub fn new(images: Vec<usize>) -> Result<TableMap, Error> {
        let n = images.len();
        if let Some((src, &dst)) = images.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(Error::InvalidMap(format!("image of #{src} is #{dst}, outside 0..{n}")));
        }
        Ok(TableMap { images })
    }

    pub fn identity(n: usize) -> TableMap {
        TableMap {
            images: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, target: usize) -> Result<TableMap, Error> {
        Self::new(alloc::vec![target; n])
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

impl SelfMap for TableMap {
    fn kind(&self) -> MapKind {
        MapKind::Table
    }

    fn image(&self, p: PointRef) -> Result<PointRef, Error> {
        match p {
            PointRef::Index(i) if i < self.images.len() => Ok(PointRef::Index(self.images[i])),
            other => Err(Error::UnknownPoint(other)),
        }
    }
}

pub fn apply<M: SelfMap + ?Sized>(map: &M, p: PointRef) -> Result<PointRef, Error> {
    map.image(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The last point is fixed; its image was not appended.
    FixedPointReached,
    /// Points continued to the budget, but a consecutive triple coincided and
    /// the perimeter sequence ended there.
    PerimeterDegenerate,
    BudgetExhausted,
}

/// `x_0, x_1 = T x_0, ...` together with the perimeters of consecutive
/// triples while they stay pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace {
    pub points: Vec<PointRef>,
    /// `perimeters[k]` is the perimeter of `(x_k, x_{k+1}, x_{k+2})`.
    pub perimeters: Vec<Scalar>,
    pub stop: StopReason,
}

fn distinct3(a: PointRef, b: PointRef, c: PointRef) -> bool {
    a != b && b != c && a != c
}

/// Runs at most `n` steps of the iteration from `x0`.
pub fn orbit<S, M>(space: &S, map: &M, x0: PointRef, n: usize) -> Result<OrbitTrace, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    if !space.contains(x0) {
        return Err(Error::UnknownPoint(x0));
    }
    let mut points = alloc::vec![x0];
    let mut perimeters = Vec::new();
    let mut perimeters_open = true;
    let mut fixed = false;
    for _ in 0..n {
        let cur = *points.last().expect("orbit is never empty");
        let next = apply(map, cur)?;
        if next == cur {
            fixed = true;
            break;
        }
        points.push(next);
        let len = points.len();
        if perimeters_open && len >= 3 {
            let tri = [points[len - 3], points[len - 2], points[len - 1]];
            if distinct3(tri[0], tri[1], tri[2]) {
                perimeters.push(perimeter_of(space, tri)?);
            } else {
                perimeters_open = false;
            }
        }
    }
    let stop = if fixed {
        StopReason::FixedPointReached
    } else if !perimeters_open {
        StopReason::PerimeterDegenerate
    } else {
        StopReason::BudgetExhausted
    };
    Ok(OrbitTrace {
        points,
        perimeters,
        stop,
    })
}

/// All fixed points in the (windowed) domain, ascending.
pub fn fixed_points<S, M>(space: &S, map: &M, window: Option<usize>) -> Result<Vec<PointRef>, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    let mut out = Vec::new();
    for p in space.points(window)? {
        if apply(map, p)? == p {
            out.push(p);
        }
    }
    Ok(out)
}

/// The first `x` with `T x != x` and `T(T x) = x`, if any.
pub fn find_period_two_violation<S, M>(space: &S, map: &M, window: Option<usize>) -> Result<Option<PointRef>, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    for p in space.points(window)? {
        let tp = apply(map, p)?;
        if tp != p && apply(map, tp)? == p {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
