//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use triperi_core::{perimeter_ratio, FiniteSpace, MetricSpace, NumericMode, PointRef, Scalar, TableMap, Triple};

/// Random integer weights on the complete graph, completed to shortest-path
/// distances. The result always satisfies the metric axioms.
#[allow(clippy::needless_range_loop)]
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, max_weight: i64) -> FiniteSpace {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=max_weight);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteSpace::from_integers(&d).expect("square matrix")
}

/// Random self-map with a mix of shapes: unrestricted, images confined to a
/// small target set, or two forced fixed points.
pub fn random_map<R: Rng>(rng: &mut R, n: usize) -> TableMap {
    let images = match rng.gen_range(0..4) {
        // Two forced fixed points need two points.
        3 if n < 2 => vec![0; n],
        0 => (0..n).map(|_| rng.gen_range(0..n)).collect(),
        1 | 2 => {
            let k = rng.gen_range(1..=3.min(n));
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(rng);
            let targets = &all[..k];
            (0..n).map(|_| *targets.choose(rng).unwrap()).collect()
        }
        _ => {
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(rng);
            let (a, b) = (all[0], all[1]);
            (0..n)
                .map(|i| {
                    if i == a || i == b {
                        i
                    } else {
                        *[a, b].choose(rng).unwrap()
                    }
                })
                .collect()
        }
    };
    TableMap::new(images).expect("images in range")
}

/// Independent maximum of the perimeter ratio: triples visited in reverse
/// order, each ratio computed from scratch, ties resolved toward the
/// lexicographically smaller triple.
pub fn oracle_alpha(space: &FiniteSpace, map: &TableMap) -> (Scalar, Triple) {
    let n = space.len();
    let pts: Vec<PointRef> = (0..n).map(PointRef::Index).collect();
    let mut best: Option<(Scalar, Triple)> = None;
    for k in (0..n).rev() {
        for j in (0..k).rev() {
            for i in (0..j).rev() {
                let t = Triple::new(pts[i], pts[j], pts[k]).unwrap();
                let r = perimeter_ratio(space, map, &t).unwrap();
                let replace = match &best {
                    None => true,
                    Some((b, bt)) => {
                        let (rv, bv) = (r.as_ratio().unwrap(), b.as_ratio().unwrap());
                        rv > bv || (rv == bv && t < *bt)
                    }
                };
                if replace {
                    best = Some((r, t));
                }
            }
        }
    }
    best.unwrap()
}

pub fn exact(n: i128, d: i128) -> Scalar {
    Scalar::ratio(n, d).unwrap()
}

pub fn is_exact<S: MetricSpace>(s: &S) -> bool {
    s.mode() == NumericMode::Exact
}
