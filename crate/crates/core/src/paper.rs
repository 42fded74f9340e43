//! The worked examples: two maps on the equilateral three-point space, and the
//! countable chain `x_0, x_1, ...` accumulating at `x*` with its shift map.
//!
//! The chain has consecutive gaps `d(x_i, x_{i+1}) = a / 2^floor(i/2)`, so the
//! pattern of gaps is `a, a, a/2, a/2, a/4, a/4, ...` and the total length is
//! `4a`. Every point lies on one line: `d(x_i, x_j)` is the sum of the gaps in
//! between and `d(x_i, x*) = 4a - d(x_0, x_i)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::mapping::{MapKind, SelfMap, TableMap};
use crate::metric::{FiniteSpace, MetricSpace, PointRef, SpaceKind};
use crate::scalar::{NumericMode, Ratio, Scalar};

/// Largest enumeration window in exact mode.
pub const MAX_WINDOW: usize = 200;
/// Largest enumeration window in float mode; beyond it gaps approach the
/// bottom of the normal double range.
pub const MAX_FLOAT_WINDOW: usize = 1000;
/// Largest index at which distances and the map are evaluated.
pub const MAX_INDEX: usize = 1 << 16;
pub const DEFAULT_WINDOW: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreePointVariant {
    /// `Tx = x, Ty = y, Tz = x`.
    A,
    /// `Tx = y, Ty = x, Tz = x`.
    B,
}

/// The equilateral unit space on `{x, y, z}` with the chosen map.
pub fn make_three_point_example(variant: ThreePointVariant) -> (FiniteSpace, TableMap) {
    let space = FiniteSpace::equilateral(&["x", "y", "z"]);
    let images = match variant {
        ThreePointVariant::A => alloc::vec![0, 1, 0],
        ThreePointVariant::B => alloc::vec![1, 0, 0],
    };
    (space, TableMap::new(images).expect("images lie in the space"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaperSpaceParams {
    /// The chain scale `a`.
    pub scale: Scalar,
    pub window: usize,
}

impl Default for PaperSpaceParams {
    fn default() -> Self {
        PaperSpaceParams {
            scale: Scalar::Exact(Ratio::ONE),
            window: DEFAULT_WINDOW,
        }
    }
}

impl PaperSpaceParams {
    pub fn new(scale: Scalar, window: usize) -> Result<Self, Error> {
        let p = PaperSpaceParams { scale, window };
        p.validate()?;
        Ok(p)
    }

    pub fn with_window(window: usize) -> Result<Self, Error> {
        Self::new(Scalar::Exact(Ratio::ONE), window)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.scale.signum() <= 0 {
            return Err(Error::NotPositive {
                name: "scale",
                value: format!("{}", self.scale),
            });
        }
        if self.window < 3 {
            return Err(Error::InvalidSpace(format!(
                "window must be at least 3, got {}",
                self.window
            )));
        }
        check_window(self.window, self.scale.mode())
    }

    fn mode(&self) -> NumericMode {
        self.scale.mode()
    }
}

fn check_window(window: usize, mode: NumericMode) -> Result<(), Error> {
    let max = match mode {
        NumericMode::Exact => MAX_WINDOW,
        NumericMode::Float => MAX_FLOAT_WINDOW,
    };
    if window > max {
        return Err(Error::CapacityExceeded { window, max });
    }
    Ok(())
}

fn check_index(i: usize) -> Result<(), Error> {
    if i > MAX_INDEX {
        return Err(Error::IndexCapacity {
            index: i,
            max: MAX_INDEX,
        });
    }
    Ok(())
}

/// `2^-k` in the scale's mode.
fn half_pow(k: usize, mode: NumericMode) -> Result<Scalar, Error> {
    Ok(match mode {
        NumericMode::Exact => Scalar::Exact(Ratio::dyadic(1, k as u32)),
        NumericMode::Float => Scalar::Float(0.5).pow(k as u32)?,
    })
}

/// `d(x_i, x_{i+1}) = a / 2^floor(i/2)`.
pub fn step_distance(i: usize, params: &PaperSpaceParams) -> Result<Scalar, Error> {
    check_index(i)?;
    Ok(params.scale.mul(&half_pow(i / 2, params.mode())?)?)
}

/// `d(x_0, x_i)` in closed form: `4a(1 - 2^-n)` for `i = 2n`, and that minus
/// `a / 2^(n-1)` for `i = 2n - 1`.
pub fn prefix_distance(i: usize, params: &PaperSpaceParams) -> Result<Scalar, Error> {
    check_index(i)?;
    let mode = params.mode();
    let a = &params.scale;
    if i == 0 {
        return Ok(Scalar::zero(mode));
    }
    let n = i.div_ceil(2);
    let four_a = Scalar::from_int(4, mode).mul(a)?;
    let even = four_a.mul(&Scalar::one(mode).sub(&half_pow(n, mode)?)?)?;
    if i.is_multiple_of(2) {
        Ok(even)
    } else {
        Ok(even.sub(&a.mul(&half_pow(n - 1, mode)?)?)?)
    }
}

/// The countable chain space, evaluated by closed-form rules.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperSpace {
    params: PaperSpaceParams,
}

impl PaperSpace {
    pub fn params(&self) -> &PaperSpaceParams {
        &self.params
    }

    /// `d(x_i, x*)`.
    pub fn star_distance(&self, i: usize) -> Result<Scalar, Error> {
        let four_a = Scalar::from_int(4, self.params.mode()).mul(&self.params.scale)?;
        Ok(four_a.sub(&prefix_distance(i, &self.params)?)?)
    }
}

impl MetricSpace for PaperSpace {
    fn kind(&self) -> SpaceKind {
        SpaceKind::Computable
    }

    fn mode(&self) -> NumericMode {
        self.params.mode()
    }

    fn contains(&self, p: PointRef) -> bool {
        match p {
            PointRef::Index(i) => i <= MAX_INDEX,
            PointRef::Star => true,
        }
    }

    fn raw_distance(&self, p: PointRef, q: PointRef) -> Result<Scalar, Error> {
        match (p, q) {
            _ if p == q => Ok(Scalar::zero(self.mode())),
            (PointRef::Index(i), PointRef::Index(j)) => {
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                Ok(prefix_distance(hi, &self.params)?.sub(&prefix_distance(lo, &self.params)?)?)
            }
            (PointRef::Index(i), PointRef::Star) | (PointRef::Star, PointRef::Index(i)) => self.star_distance(i),
            (PointRef::Star, PointRef::Star) => unreachable!("handled by the equality arm"),
        }
    }

    /// `x_0, ..., x_N, x*` for window `N`.
    fn points(&self, window: Option<usize>) -> Result<Vec<PointRef>, Error> {
        let n = window.ok_or(Error::MissingWindow)?;
        check_window(n, self.mode())?;
        let mut pts: Vec<PointRef> = (0..=n).map(PointRef::Index).collect();
        pts.push(PointRef::Star);
        Ok(pts)
    }

    fn label(&self, p: PointRef) -> String {
        match p {
            PointRef::Index(i) => format!("x_{i}"),
            PointRef::Star => String::from("x*"),
        }
    }
}

/// `T x_i = x_{i+1}`, `T x* = x*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShiftMap;

impl SelfMap for ShiftMap {
    fn kind(&self) -> MapKind {
        MapKind::Rule
    }

    fn image(&self, p: PointRef) -> Result<PointRef, Error> {
        match p {
            PointRef::Index(i) => {
                check_index(i + 1)?;
                Ok(PointRef::Index(i + 1))
            }
            PointRef::Star => Ok(PointRef::Star),
        }
    }

    fn declared_fixed_points(&self) -> Vec<PointRef> {
        alloc::vec![PointRef::Star]
    }
}

pub fn make_paper_space(params: PaperSpaceParams) -> Result<(PaperSpace, ShiftMap), Error> {
    params.validate()?;
    Ok((PaperSpace { params }, ShiftMap))
}

/// Perimeter ratio of `(x_i, x_j, x*)` for any `j > i`, in closed form:
/// `(8a - 2 d(x_0, x_{i+1})) / (8a - 2 d(x_0, x_i))`.
pub fn star_triple_ratio(i: usize, params: &PaperSpaceParams) -> Result<Scalar, Error> {
    let eight_a = Scalar::from_int(8, params.mode()).mul(&params.scale)?;
    let two = Scalar::from_int(2, params.mode());
    let num = eight_a.sub(&two.mul(&prefix_distance(i + 1, params)?)?)?;
    let den = eight_a.sub(&two.mul(&prefix_distance(i, params)?)?)?;
    Ok(num.div(&den)?)
}

/// Perimeter ratio of `(x_i, x_j, x_k)` for `i < j < k`, from the perimeter
/// drop `2 (a / 2^floor(i/2) - a / 2^floor(k/2))` under the shift.
pub fn finite_triple_ratio(i: usize, j: usize, k: usize, params: &PaperSpaceParams) -> Result<Scalar, Error> {
    if !(i < j && j < k) {
        return Err(Error::IndicesNotIncreasing(i, j, k));
    }
    let mode = params.mode();
    let drop = Scalar::from_int(2, mode).mul(&step_distance(i, params)?.sub(&step_distance(k, params)?)?)?;
    let d = |p: usize, q: usize| -> Result<Scalar, Error> {
        Ok(prefix_distance(q, params)?.sub(&prefix_distance(p, params)?)?)
    };
    let perimeter = d(i, j)?.add(&d(j, k)?)?.add(&d(i, k)?)?;
    Ok(Scalar::one(mode).sub(&drop.div(&perimeter)?)?)
}
