//! Successive approximations `x_{k+1} = T x_k` with a-priori error bounds.
//!
//! For a map whose perimeter ratios are bounded by `alpha < 1`, the orbit
//! perimeters `p_k` of `(x_k, x_{k+1}, x_{k+2})` satisfy `p_k <= alpha^k p_0`,
//! and every side of a triangle is at most its perimeter, so
//!
//! ```text
//! d(x_n, x_{n+m}) <= alpha^(n-1) (1 - alpha^m) / (1 - alpha) * p_0
//! ```
//!
//! which also bounds the distance from `x_n` to the limit when `m` is dropped.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::mapping::{apply, orbit, SelfMap};
use crate::metric::{distance, perimeter_of, MetricSpace, PointRef};
use crate::scalar::{Scalar, Tolerance};

fn check_alpha(alpha: &Scalar) -> Result<(), Error> {
    let one = Scalar::one(alpha.mode());
    if alpha.signum() < 0 || alpha.compare(&one, &Tolerance::DEFAULT).is_ge() {
        return Err(Error::AlphaOutOfRange(format!("{alpha}")));
    }
    Ok(())
}

/// `alpha^(n-1) p0 / (1 - alpha)`, times `(1 - alpha^gap)` when a gap is given.
pub fn apriori_error_bound(alpha: &Scalar, p0: &Scalar, n: usize, gap: Option<usize>) -> Result<Scalar, Error> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if p0.signum() < 0 {
        return Err(Error::NotPositive {
            name: "p0",
            value: format!("{p0}"),
        });
    }
    let one = Scalar::one(alpha.mode());
    let exp = u32::try_from(n - 1).map_err(|_| Error::ZeroIndex)?;
    let mut bound = alpha.pow(exp)?.mul(p0)?.div(&one.sub(alpha)?)?;
    if let Some(m) = gap {
        let m = u32::try_from(m).unwrap_or(u32::MAX);
        bound = bound.mul(&one.sub(&alpha.pow(m)?)?)?;
    }
    Ok(bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// `d(x_n, x_{n+1}) <= tol`.
    Converged,
    ReachedExactFixedPoint,
    StalledBudget,
    /// Some iterate satisfies `T x != x` and `T(T x) = x`.
    ConditionIViolation,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::ReachedExactFixedPoint => "reached-exact-fixed-point",
            SolveStatus::StalledBudget => "stalled-budget",
            SolveStatus::ConditionIViolation => "condition-i-violation-detected",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// The last iterate `x_n`.
    pub point: PointRef,
    pub iterations: usize,
    /// `d(x_n, x_{n+1})`.
    pub final_gap: Scalar,
    /// Entry `k - 1` is the a-priori bound for `x_k`, `k = 1..=iterations`.
    /// `None` when `x_0, x_1, x_2` are not pairwise distinct.
    pub bound_trace: Option<Vec<Scalar>>,
    pub alpha_used: Scalar,
    pub p0: Option<Scalar>,
    pub condition_i_witness: Option<PointRef>,
    /// `x_0, ..., x_n`.
    pub iterates: Vec<PointRef>,
}

impl SolveResult {
    /// Bound on `d(x_n, x*)` for the final iterate, if available.
    pub fn final_bound(&self) -> Option<&Scalar> {
        self.bound_trace.as_ref().and_then(|b| b.last())
    }
}

/// Iterates the map from `x0` until an exact fixed point, a gap at most
/// `tol`, a period-two return, or `max_iter` steps.
///
/// `alpha` is taken as certified by the caller; it only feeds the bounds.
pub fn picard_solve<S, M>(
    space: &S,
    map: &M,
    x0: PointRef,
    alpha: &Scalar,
    tol: &Scalar,
    max_iter: usize,
) -> Result<SolveResult, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    check_alpha(alpha)?;
    if tol.signum() <= 0 {
        return Err(Error::NotPositive {
            name: "tol",
            value: format!("{tol}"),
        });
    }
    if max_iter == 0 {
        return Err(Error::NotPositive {
            name: "max_iter",
            value: format!("{max_iter}"),
        });
    }
    if !space.contains(x0) {
        return Err(Error::UnknownPoint(x0));
    }
    let cmp_tol = space.tolerance();

    let x1 = apply(map, x0)?;
    let x2 = apply(map, x1)?;
    let p0 = if x0 != x1 && x1 != x2 && x0 != x2 {
        Some(perimeter_of(space, [x0, x1, x2])?)
    } else {
        None
    };
    let mut bound_trace = p0.as_ref().map(|_| Vec::new());

    let mut iterates = alloc::vec![x0];
    let mut x = x0;
    let mut k = 0usize;
    let (status, final_gap, witness) = loop {
        let tx = apply(map, x)?;
        if tx == x {
            break (SolveStatus::ReachedExactFixedPoint, Scalar::zero(space.mode()), None);
        }
        let gap = distance(space, x, tx)?;
        if apply(map, tx)? == x {
            break (SolveStatus::ConditionIViolation, gap, Some(x));
        }
        if gap.le(tol, &cmp_tol) {
            break (SolveStatus::Converged, gap, None);
        }
        if k == max_iter {
            break (SolveStatus::StalledBudget, gap, None);
        }
        x = tx;
        k += 1;
        iterates.push(x);
        if let (Some(trace), Some(p0)) = (bound_trace.as_mut(), p0.as_ref()) {
            trace.push(apriori_error_bound(alpha, p0, k, None)?);
        }
    };

    Ok(SolveResult {
        status,
        point: x,
        iterations: k,
        final_gap,
        bound_trace,
        alpha_used: alpha.clone(),
        p0,
        condition_i_witness: witness,
        iterates,
    })
}

/// `p_0, ..., p_n` along the orbit of `x0`, truncated at the first
/// consecutive triple that is not pairwise distinct.
pub fn perimeter_sequence<S, M>(space: &S, map: &M, x0: PointRef, n: usize) -> Result<Vec<Scalar>, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    let mut p = orbit(space, map, x0, n + 2)?.perimeters;
    p.truncate(n + 1);
    Ok(p)
}
