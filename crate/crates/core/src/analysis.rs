//! Coefficients and classification.
//!
//! `alpha*` is the largest perimeter ratio
//! `(d(Ta,Tb) + d(Tb,Tc) + d(Ta,Tc)) / (d(a,b) + d(b,c) + d(a,c))` over
//! triples of pairwise distinct points; `L` is the largest `d(Tp,Tq) / d(p,q)`
//! over distinct pairs. On a computable space both are maxima over the
//! enumeration window only.

use alloc::vec::Vec;

use crate::error::Error;
use crate::mapping::{apply, find_period_two_violation, fixed_points, SelfMap};
use crate::metric::{distance, perimeter, perimeter_of, MetricSpace, PointRef, Triple};
use crate::scalar::{Scalar, Tolerance};

/// Perimeter ratio of `t` under `map`. Image points may coincide.
pub fn perimeter_ratio<S, M>(space: &S, map: &M, t: &Triple) -> Result<Scalar, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    let [a, b, c] = t.points();
    let images = [apply(map, a)?, apply(map, b)?, apply(map, c)?];
    let num = perimeter_of(space, images)?;
    let den = perimeter(space, t)?;
    Ok(num.div(&den)?)
}

/// A running maximum: value plus the index triple into the scan's points.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub value: Scalar,
    pub indices: [usize; 3],
}

/// Precomputed distances for enumerating every triple of a window.
///
/// Triples `i < j < k` are visited in lexicographic order. The scan can be
/// split by first index and recombined with [`TripleScan::merge`]; merging in
/// ascending first-index order yields the same maximum and witness as a single
/// serial pass.
#[derive(Clone, Debug)]
pub struct TripleScan {
    points: Vec<PointRef>,
    base: Vec<Scalar>,
    image: Vec<Scalar>,
    tolerance: Tolerance,
}

impl TripleScan {
    pub fn new<S, M>(space: &S, map: &M, window: Option<usize>) -> Result<TripleScan, Error>
    where
        S: MetricSpace + ?Sized,
        M: SelfMap + ?Sized,
    {
        let points = space.points(window)?;
        let n = points.len();
        if n < 3 {
            return Err(Error::TooFewPoints { needed: 3, found: n });
        }
        let images = points.iter().map(|&p| apply(map, p)).collect::<Result<Vec<_>, _>>()?;
        let zero = Scalar::zero(space.mode());
        let mut base = alloc::vec![zero.clone(); n * n];
        let mut image = alloc::vec![zero; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = distance(space, points[i], points[j])?;
                let e = distance(space, images[i], images[j])?;
                base[i * n + j] = d.clone();
                base[j * n + i] = d;
                image[i * n + j] = e.clone();
                image[j * n + i] = e;
            }
        }
        Ok(TripleScan {
            points,
            base,
            image,
            tolerance: space.tolerance(),
        })
    }

    pub fn points(&self) -> &[PointRef] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn triple_count(&self) -> u64 {
        let n = self.len() as u64;
        n * n.saturating_sub(1) * n.saturating_sub(2) / 6
    }

    fn ratio(&self, i: usize, j: usize, k: usize) -> Result<Scalar, Error> {
        let n = self.len();
        let sum = |m: &[Scalar]| -> Result<Scalar, Error> { Ok(m[i * n + j].add(&m[j * n + k])?.add(&m[i * n + k])?) };
        Ok(sum(&self.image)?.div(&sum(&self.base)?)?)
    }

    /// Best triple among those whose smallest index is `i`.
    pub fn scan_first(&self, i: usize) -> Result<Option<Candidate>, Error> {
        let n = self.len();
        let mut best: Option<Candidate> = None;
        for j in i + 1..n {
            for k in j + 1..n {
                let value = self.ratio(i, j, k)?;
                if best
                    .as_ref()
                    .is_none_or(|b| value.exceeds_for_max(&b.value, &self.tolerance))
                {
                    best = Some(Candidate {
                        value,
                        indices: [i, j, k],
                    });
                }
            }
        }
        Ok(best)
    }

    /// Folds partial results given in ascending first-index order.
    pub fn merge<I>(&self, parts: I) -> Option<Candidate>
    where
        I: IntoIterator<Item = Option<Candidate>>,
    {
        parts
            .into_iter()
            .flatten()
            .fold(None, |best: Option<Candidate>, c| match best {
                Some(b) if !c.value.exceeds_for_max(&b.value, &self.tolerance) => Some(b),
                _ => Some(c),
            })
    }

    pub fn run(&self) -> Result<(Scalar, Triple), Error> {
        let parts = (0..self.len())
            .map(|i| self.scan_first(i))
            .collect::<Result<Vec<_>, _>>()?;
        self.finish(self.merge(parts))
    }

    /// Converts a merged candidate into the reported value and triple.
    pub fn finish(&self, best: Option<Candidate>) -> Result<(Scalar, Triple), Error> {
        let c = best.ok_or(Error::TooFewPoints {
            needed: 3,
            found: self.len(),
        })?;
        let [i, j, k] = c.indices;
        Ok((c.value, Triple::new(self.points[i], self.points[j], self.points[k])?))
    }
}

/// Largest perimeter ratio over all triples of the window, with the
/// lexicographically smallest triple attaining it.
pub fn perimeter_contraction_coefficient<S, M>(
    space: &S,
    map: &M,
    window: Option<usize>,
) -> Result<(Scalar, Triple), Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    TripleScan::new(space, map, window)?.run()
}

/// Largest `d(Tp,Tq) / d(p,q)` over distinct pairs, with the
/// lexicographically smallest pair attaining it.
pub fn lipschitz_coefficient<S, M>(
    space: &S,
    map: &M,
    window: Option<usize>,
) -> Result<(Scalar, (PointRef, PointRef)), Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    let points = space.points(window)?;
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: points.len(),
        });
    }
    let tol = space.tolerance();
    let images = points.iter().map(|&p| apply(map, p)).collect::<Result<Vec<_>, _>>()?;
    let mut best: Option<(Scalar, (PointRef, PointRef))> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let value = distance(space, images[i], images[j])?.div(&distance(space, points[i], points[j])?)?;
            if best.as_ref().is_none_or(|(b, _)| value.exceeds_for_max(b, &tol)) {
                best = Some((value, (points[i], points[j])));
            }
        }
    }
    Ok(best.expect("at least one pair"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub alpha_star: Scalar,
    pub alpha_witness: Triple,
    pub lipschitz: Scalar,
    pub lipschitz_witness: (PointRef, PointRef),
    /// `alpha* < 1` on the window.
    pub is_perimeter_contracting: bool,
    /// `L < 1` on the window.
    pub is_contraction: bool,
    pub condition_i_witness: Option<PointRef>,
    /// Window fixed points together with any the map declares, ascending.
    pub fixed_points: Vec<PointRef>,
    pub window: Option<usize>,
    pub points_examined: usize,
}

impl AnalysisReport {
    pub fn fixed_point_count(&self) -> usize {
        self.fixed_points.len()
    }

    /// Perimeter-contracting with no period-two return on the window.
    pub fn meets_fixed_point_conditions(&self) -> bool {
        self.is_perimeter_contracting && self.condition_i_witness.is_none()
    }
}

pub fn classify<S, M>(space: &S, map: &M, window: Option<usize>) -> Result<AnalysisReport, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    classify_with(space, map, window, |scan| scan.run())
}

/// [`classify`] with a caller-supplied driver for the triple scan, so the
/// enumeration can be partitioned (e.g. across threads).
pub fn classify_with<S, M, F>(space: &S, map: &M, window: Option<usize>, scan_alpha: F) -> Result<AnalysisReport, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
    F: FnOnce(&TripleScan) -> Result<(Scalar, Triple), Error>,
{
    let scan = TripleScan::new(space, map, window)?;
    let (alpha_star, alpha_witness) = scan_alpha(&scan)?;
    let (lipschitz, lipschitz_witness) = lipschitz_coefficient(space, map, window)?;
    let condition_i_witness = find_period_two_violation(space, map, window)?;
    let mut fixed = fixed_points(space, map, window)?;
    for p in map.declared_fixed_points() {
        if space.contains(p) && !fixed.contains(&p) {
            fixed.push(p);
        }
    }
    fixed.sort();
    let tol = space.tolerance();
    let one = Scalar::one(space.mode());
    Ok(AnalysisReport {
        is_perimeter_contracting: alpha_star.lt(&one, &tol),
        is_contraction: lipschitz.lt(&one, &tol),
        alpha_star,
        alpha_witness,
        lipschitz,
        lipschitz_witness,
        condition_i_witness,
        fixed_points: fixed,
        window,
        points_examined: scan.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContinuityOutcome {
    /// Every qualifying point maps within `eps` of `T x0`.
    Pass {
        delta: Scalar,
        checked: usize,
    },
    /// `alpha = 0` and the map sends the whole window to one point.
    Collapsed,
    Violation {
        point: PointRef,
        image_distance: Scalar,
    },
}

impl ContinuityOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self, ContinuityOutcome::Violation { .. })
    }
}

/// Checks `d(T x0, T x) < eps` for every window point `x != x0` with
/// `d(x0, x) < delta`, where `delta = eps / (4 alpha)`.
pub fn continuity_modulus_check<S, M>(
    space: &S,
    map: &M,
    x0: PointRef,
    eps: &Scalar,
    alpha: &Scalar,
    window: Option<usize>,
) -> Result<ContinuityOutcome, Error>
where
    S: MetricSpace + ?Sized,
    M: SelfMap + ?Sized,
{
    let mode = space.mode();
    let tol = space.tolerance();
    let one = Scalar::one(mode);
    if alpha.signum() < 0 || !alpha.lt(&one, &tol) {
        return Err(Error::AlphaOutOfRange(alloc::format!("{alpha}")));
    }
    if eps.signum() <= 0 {
        return Err(Error::NotPositive {
            name: "eps",
            value: alloc::format!("{eps}"),
        });
    }
    if !space.contains(x0) {
        return Err(Error::UnknownPoint(x0));
    }
    let points = space.points(window)?;
    let tx0 = apply(map, x0)?;
    if alpha.is_zero() {
        let images = points.iter().map(|&p| apply(map, p)).collect::<Result<Vec<_>, _>>()?;
        return if images.iter().all(|&q| q == tx0) {
            Ok(ContinuityOutcome::Collapsed)
        } else {
            Err(Error::ZeroAlpha)
        };
    }
    let delta = eps.div(&Scalar::from_int(4, mode).mul(alpha)?)?;
    let mut checked = 0;
    // A third point distinct from x0 and x must exist for the perimeter
    // inequality to apply.
    let has_third = points.iter().filter(|&&p| p != x0).count() >= 2;
    if has_third {
        for &x in points.iter().filter(|&&p| p != x0) {
            if !distance(space, x0, x)?.lt(&delta, &tol) {
                continue;
            }
            checked += 1;
            let image_distance = distance(space, tx0, apply(map, x)?)?;
            if !image_distance.lt(eps, &tol) {
                return Ok(ContinuityOutcome::Violation {
                    point: x,
                    image_distance,
                });
            }
        }
    }
    Ok(ContinuityOutcome::Pass { delta, checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::TableMap;
    use crate::metric::FiniteSpace;
    use crate::paper::{make_paper_space, make_three_point_example, PaperSpaceParams, ThreePointVariant};
    use crate::scalar::NumericMode;

    fn q(n: i128, d: i128) -> Scalar {
        Scalar::ratio(n, d).unwrap()
    }

    fn ix(i: usize) -> PointRef {
        PointRef::Index(i)
    }

    #[test]
    fn star_triple_ratios_on_the_chain() {
        let (s, m) = make_paper_space(PaperSpaceParams::default()).unwrap();
        for j in 1..12 {
            let t = Triple::new(ix(0), ix(j), PointRef::Star).unwrap();
            assert_eq!(perimeter_ratio(&s, &m, &t).unwrap(), q(3, 4));
        }
        for j in 2..12 {
            let t = Triple::new(ix(1), ix(j), PointRef::Star).unwrap();
            assert_eq!(perimeter_ratio(&s, &m, &t).unwrap(), q(2, 3));
        }
    }

    #[test]
    fn identity_has_unit_ratio() {
        let s = FiniteSpace::equilateral(&["x", "y", "z"]);
        let id = TableMap::identity(3);
        let t = Triple::new(ix(0), ix(1), ix(2)).unwrap();
        assert_eq!(perimeter_ratio(&s, &id, &t).unwrap(), q(1, 1));
        let (alpha, _) = perimeter_contraction_coefficient(&s, &id, None).unwrap();
        assert_eq!(alpha, q(1, 1));
    }

    #[test]
    fn variant_a_coefficients() {
        let (s, m) = make_three_point_example(ThreePointVariant::A);
        let (alpha, w) = perimeter_contraction_coefficient(&s, &m, None).unwrap();
        assert_eq!(alpha, q(2, 3));
        assert_eq!(w, Triple::new(ix(0), ix(1), ix(2)).unwrap());
        let (l, pair) = lipschitz_coefficient(&s, &m, None).unwrap();
        assert_eq!(l, q(1, 1));
        assert_eq!(pair, (ix(0), ix(1)));
    }

    #[test]
    fn chain_window_coefficients() {
        // Frozen from an independent Fraction-based enumeration of all
        // 45,760 triples of the window.
        let (s, m) = make_paper_space(PaperSpaceParams::default()).unwrap();
        let (alpha, w) = perimeter_contraction_coefficient(&s, &m, Some(64)).unwrap();
        assert_eq!(alpha, q(4, 5));
        assert_eq!(w, Triple::new(ix(0), ix(1), ix(3)).unwrap());
        let (l, pair) = lipschitz_coefficient(&s, &m, Some(64)).unwrap();
        assert_eq!(l, q(1, 1));
        assert_eq!(pair, (ix(0), ix(1)));
        let (l2, pair2) = lipschitz_coefficient(&s, &m, Some(2)).unwrap();
        assert_eq!((l2, pair2), (q(1, 1), (ix(0), ix(1))));
    }

    #[test]
    fn constant_map_has_zero_lipschitz() {
        let s = FiniteSpace::equilateral(&["a", "b", "c", "d"]);
        let c = TableMap::constant(4, 2).unwrap();
        assert!(lipschitz_coefficient(&s, &c, None).unwrap().0.is_zero());
        assert!(perimeter_contraction_coefficient(&s, &c, None).unwrap().0.is_zero());
    }

    #[test]
    fn too_few_points() {
        let s = FiniteSpace::equilateral(&["a", "b"]);
        let id = TableMap::identity(2);
        assert_eq!(
            perimeter_contraction_coefficient(&s, &id, None),
            Err(Error::TooFewPoints { needed: 3, found: 2 })
        );
        let one = FiniteSpace::equilateral(&["a"]);
        assert_eq!(
            lipschitz_coefficient(&one, &TableMap::identity(1), None),
            Err(Error::TooFewPoints { needed: 2, found: 1 })
        );
    }

    #[test]
    fn classify_examples() {
        let (s, a) = make_three_point_example(ThreePointVariant::A);
        let r = classify(&s, &a, None).unwrap();
        assert!(r.is_perimeter_contracting && !r.is_contraction && r.meets_fixed_point_conditions());
        assert_eq!(r.fixed_points, alloc::vec![ix(0), ix(1)]);

        let (s, b) = make_three_point_example(ThreePointVariant::B);
        let r = classify(&s, &b, None).unwrap();
        assert_eq!(r.alpha_star, q(2, 3));
        assert!(r.is_perimeter_contracting);
        assert_eq!(r.condition_i_witness, Some(ix(0)));
        assert_eq!(r.fixed_point_count(), 0);

        let id = TableMap::identity(3);
        let r = classify(&s, &id, None).unwrap();
        assert!(!r.is_perimeter_contracting && !r.is_contraction);
        assert_eq!(r.fixed_point_count(), 3);

        let (s, m) = make_paper_space(PaperSpaceParams::default()).unwrap();
        let r = classify(&s, &m, Some(64)).unwrap();
        assert!(r.is_perimeter_contracting && !r.is_contraction);
        assert_eq!(r.condition_i_witness, None);
        assert_eq!(r.fixed_points, alloc::vec![PointRef::Star]);
        assert_eq!(r.window, Some(64));
        assert_eq!(r.points_examined, 66);
    }

    #[test]
    fn partitioned_scan_matches_serial() {
        let (s, m) = make_paper_space(PaperSpaceParams::default()).unwrap();
        let scan = TripleScan::new(&s, &m, Some(20)).unwrap();
        assert_eq!(scan.triple_count(), 22 * 21 * 20 / 6);
        let serial = scan.run().unwrap();
        let parts: Vec<_> = (0..scan.len()).rev().map(|i| scan.scan_first(i).unwrap()).collect();
        let merged = scan.finish(scan.merge(parts.into_iter().rev())).unwrap();
        assert_eq!(serial, merged);
    }

    #[test]
    fn continuity_on_the_chain() {
        let (s, m) = make_paper_space(PaperSpaceParams::default()).unwrap();
        let out = continuity_modulus_check(&s, &m, PointRef::Star, &q(1, 10), &q(7, 8), Some(64)).unwrap();
        match out {
            ContinuityOutcome::Pass { delta, checked } => {
                assert_eq!(delta, q(1, 35));
                // d(x_i, x*) is 4/2^n at i = 2n and 6/2^n at i = 2n - 1, so
                // it first drops below 1/35 at i = 15.
                assert_eq!(checked, 64 - 15 + 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        // delta larger than the diameter: every point qualifies.
        let out = continuity_modulus_check(&s, &m, ix(0), &q(100, 1), &q(7, 8), Some(10)).unwrap();
        assert_eq!(
            out,
            ContinuityOutcome::Pass {
                delta: q(200, 7),
                checked: 11
            }
        );
    }

    #[test]
    fn continuity_rejects_bad_alpha() {
        let s = FiniteSpace::equilateral(&["x", "y", "z"]);
        let id = TableMap::identity(3);
        assert!(matches!(
            continuity_modulus_check(&s, &id, ix(0), &q(1, 10), &q(1, 1), None),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            continuity_modulus_check(&s, &id, ix(0), &q(1, 10), &q(-1, 2), None),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert_eq!(
            continuity_modulus_check(&s, &id, ix(0), &q(1, 10), &q(0, 1), None),
            Err(Error::ZeroAlpha)
        );
        assert!(matches!(
            continuity_modulus_check(&s, &id, ix(0), &q(0, 1), &q(1, 2), None),
            Err(Error::NotPositive { .. })
        ));
        let c = TableMap::constant(3, 1).unwrap();
        assert_eq!(
            continuity_modulus_check(&s, &c, ix(0), &q(1, 10), &q(0, 1), None).unwrap(),
            ContinuityOutcome::Collapsed
        );
    }

    #[test]
    fn continuity_reports_violation() {
        // Points 0 and 1 are close but their images are far apart.
        let s = FiniteSpace::from_integers(&[
            alloc::vec![0, 1, 10, 10],
            alloc::vec![1, 0, 10, 10],
            alloc::vec![10, 10, 0, 10],
            alloc::vec![10, 10, 10, 0],
        ])
        .unwrap();
        let m = TableMap::new(alloc::vec![2, 3, 2, 3]).unwrap();
        let out = continuity_modulus_check(&s, &m, ix(0), &q(4, 1), &q(1, 2), None).unwrap();
        assert_eq!(
            out,
            ContinuityOutcome::Violation {
                point: ix(1),
                image_distance: q(10, 1)
            }
        );
        assert!(!out.passed());
    }

    #[test]
    fn float_ties_keep_the_first_witness() {
        let s = FiniteSpace::equilateral(&["a", "b", "c", "d"])
            .to_mode(NumericMode::Float)
            .unwrap();
        let id = TableMap::identity(4);
        let (alpha, w) = perimeter_contraction_coefficient(&s, &id, None).unwrap();
        assert_eq!(alpha, Scalar::Float(1.0));
        assert_eq!(w, Triple::new(ix(0), ix(1), ix(2)).unwrap());
    }
}
