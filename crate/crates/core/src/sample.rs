//! Seeded random inputs for audits and tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::IncidenceFunction;
use crate::operators::LinearOperator;
use crate::preorder::{enumerate_preorders, Preorder};
use crate::ring::RingSpec;

/// Each comparable pair is populated with probability 2/3, values in `[-3, 3]`.
pub fn random_function<R: Rng>(
    preorder: &Arc<Preorder>,
    ring: RingSpec,
    rng: &mut R,
) -> IncidenceFunction {
    let mut entries = Vec::new();
    for p in preorder.pairs() {
        if rng.gen_range(0..3) > 0 {
            entries.push((p, ring.from_i64(rng.gen_range(-3..=3))));
        }
    }
    IncidenceFunction::from_entries(preorder, ring, entries).expect("pairs are comparable")
}

/// Arbitrary operator (almost never a Lie derivation).
pub fn random_operator<R: Rng>(
    preorder: &Arc<Preorder>,
    ring: RingSpec,
    rng: &mut R,
) -> LinearOperator {
    let columns: Vec<_> = preorder
        .pairs()
        .map(|p| (p, random_function(preorder, ring, rng)))
        .collect();
    LinearOperator::from_columns(preorder, ring, columns).expect("same algebra")
}

/// Random integer combination of `basis`, coefficients in `[-3, 3]`.
pub fn random_combination<R: Rng>(
    preorder: &Arc<Preorder>,
    ring: RingSpec,
    basis: &[LinearOperator],
    rng: &mut R,
) -> LinearOperator {
    basis
        .iter()
        .fold(LinearOperator::zero(preorder, ring), |acc, b| {
            &acc + &b.scale(&ring.from_i64(rng.gen_range(-3..=3)))
        })
}

/// Random poset on `n` points: a random DAG on a shuffled labelling, closed.
pub fn random_poset<R: Rng>(n: usize, rng: &mut R) -> Preorder {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((labels[order[a]].clone(), labels[order[b]].clone()));
            }
        }
    }
    Preorder::build(&labels, &pairs).expect("labels are known")
}

/// Connected preorders on `n <= 5` points: all of them when `limit` is
/// `None`, otherwise a seeded sample of `limit` distinct ones in
/// enumeration order.
pub fn connected_preorders(n: usize, limit: Option<usize>, seed: u64) -> Vec<Preorder> {
    let all: Vec<Preorder> = enumerate_preorders(n)
        .expect("n in range")
        .filter(Preorder::is_connected)
        .collect();
    match limit {
        Some(k) if k < all.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = rand::seq::index::sample(&mut rng, all.len(), k).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| all[i].clone()).collect()
        }
        _ => all,
    }
}
