//! Synthetic rollout sets: items scattered around a few prototype
//! fingerprints, with exact duplicates and invalid answers mixed in.

#![allow(dead_code)]

use molbench_core::chem::CanonicalKey;
use molbench_core::metrics::{RolloutItem, RolloutSet};
use molbench_core::scoring::InvalidCategory;
use molbench_core::simfp::Fingerprint;
use rand::seq::SliceRandom;
use rand::Rng;

pub const BITS: usize = 256;

fn key_of(fp: &Fingerprint) -> CanonicalKey {
    CanonicalKey(fp.to_hex())
}

pub fn molecule_item(fp: Fingerprint, reward: f64) -> RolloutItem {
    RolloutItem::molecule(key_of(&fp), fp, reward)
}

pub fn random_set<R: Rng>(id: usize, rng: &mut R) -> RolloutSet {
    let n_r = rng.gen_range(1..=32);
    let n_proto = rng.gen_range(1..=5);
    let protos: Vec<Vec<usize>> = (0..n_proto)
        .map(|_| {
            let n = rng.gen_range(10..40);
            (0..n).map(|_| rng.gen_range(0..BITS)).collect()
        })
        .collect();
    let mut items: Vec<RolloutItem> = Vec::with_capacity(n_r);
    for _ in 0..n_r {
        let roll: f64 = rng.gen();
        if roll < 0.1 {
            items.push(RolloutItem::invalid(*InvalidCategory::ALL.choose(rng).unwrap()));
        } else if roll < 0.3 && items.iter().any(|i| i.key.is_some()) {
            let pick = items.iter().filter(|i| i.key.is_some()).collect::<Vec<_>>().choose(rng).unwrap().to_owned().clone();
            items.push(pick);
        } else {
            let mut bits = protos.choose(rng).unwrap().clone();
            for _ in 0..rng.gen_range(0..10) {
                if rng.gen_bool(0.5) && !bits.is_empty() {
                    let i = rng.gen_range(0..bits.len());
                    bits.swap_remove(i);
                } else {
                    bits.push(rng.gen_range(0..BITS));
                }
            }
            let fp = Fingerprint::from_bits(BITS, &bits).unwrap();
            // coarse reward grid produces ties
            let reward = if rng.gen_bool(0.3) { rng.gen_range(0..5) as f64 / 4.0 } else { rng.gen() };
            items.push(molecule_item(fp, reward));
        }
    }
    RolloutSet { prompt_id: format!("p{id}"), items }
}

/// Every rollout the same molecule at `reward`.
pub fn collapsed_set(id: usize, n_r: usize, reward: f64) -> RolloutSet {
    let fp = Fingerprint::from_bits(BITS, &[3, 17, 99]).unwrap();
    RolloutSet { prompt_id: format!("c{id}"), items: (0..n_r).map(|_| molecule_item(fp.clone(), reward)).collect() }
}
