//! Library results against independent reference computations.

mod common;

use common::{all_perms, class_algebra_blocks, cycle_lengths, oracle_entropy, q, thoma_value};
use num::{BigRational, Zero};
use thoma_core::groupalg::{algebra_entropy, block_weights};
use thoma_core::perm::enumerate_group;
use thoma_core::young::{enumerate_partitions, YoungDiagram};
use thoma_core::{Limits, Permutation, ThomaParameter};

const BATTERY: [&str; 6] = ["a=1/2,1/2", "a=2/3,1/3", "a=1/2;b=1/4", "g=1", "a=1/3;b=1/3,1/6;g=1/6", "b=1"];

fn k(s: &str) -> ThomaParameter {
    s.parse().unwrap()
}

#[test]
fn weights_match_class_algebra_idempotents() {
    let limits = Limits::default();
    for s in BATTERY {
        let kappa = k(s);
        for n in 1..=5 {
            let mut ours: Vec<(u64, BigRational)> = block_weights(&kappa, n, &limits)
                .unwrap()
                .entries
                .into_iter()
                .map(|e| (e.dimension.try_into().unwrap(), e.weight))
                .collect();
            let mut oracle: Vec<(u64, BigRational)> = class_algebra_blocks(kappa.alpha(), kappa.beta(), n)
                .into_iter()
                .map(|b| (b.dimension, b.weight))
                .collect();
            ours.sort();
            oracle.sort();
            assert_eq!(ours, oracle, "{s} n={n}");
        }
    }
}

#[test]
fn entropy_matches_oracle() {
    let limits = Limits::default();
    for s in BATTERY {
        let kappa = k(s);
        for n in 1..=5 {
            let h = algebra_entropy(&kappa, n, &limits).unwrap();
            let (total, center) = oracle_entropy(&class_algebra_blocks(kappa.alpha(), kappa.beta(), n));
            assert!((h.total - total).abs() < 1e-9, "{s} n={n}");
            assert!((h.center - center).abs() < 1e-9, "{s} n={n}");
        }
    }
}

#[test]
fn oracle_sanity_for_regular_trace() {
    // regular trace: weight of each block is d²/n!
    let blocks = class_algebra_blocks(&[], &[], 4);
    assert_eq!(blocks.len(), 5);
    let total: BigRational = blocks.iter().map(|b| b.weight.clone()).sum();
    assert_eq!(total, q(1, 1));
    for b in &blocks {
        assert_eq!(b.weight, q((b.dimension * b.dimension) as i64, 24));
    }
}

#[test]
fn group_enumeration_matches_insertion_oracle() {
    let limits = Limits::default();
    for n in 0..=6 {
        let mut ours: Vec<Vec<usize>> = enumerate_group(n, 0, &limits).unwrap().map(|p| p.images().to_vec()).collect();
        let mut oracle = all_perms(n);
        ours.sort();
        oracle.sort();
        assert_eq!(ours, oracle);
    }
}

#[test]
fn characters_match_power_sum_formula() {
    for s in BATTERY {
        let kappa = k(s);
        for p in all_perms(6) {
            let perm = Permutation::from_images(p.clone()).unwrap();
            let lengths = cycle_lengths(&p);
            assert_eq!(perm.cycle_type().lengths(), lengths.as_slice());
            assert_eq!(kappa.character(&perm.cycle_type()), thoma_value(kappa.alpha(), kappa.beta(), &lengths));
        }
    }
}

#[test]
fn irreducible_characters_by_column_orthogonality() {
    // Σ_λ χ_λ(μ) χ_λ(ν) = z_μ δ_{μν}, with z from the class size
    let limits = Limits::default();
    for n in 1..=6 {
        let shapes = enumerate_partitions(n, &limits).unwrap();
        let classes: Vec<_> = shapes.iter().map(|d| thoma_core::CycleType::from_lengths(d.rows().to_vec())).collect();
        let factorial: u64 = (1..=n as u64).product();
        for a in &classes {
            for b in &classes {
                let sum: num::BigInt = shapes
                    .iter()
                    .map(|d: &YoungDiagram| d.character_value(a).unwrap() * d.character_value(b).unwrap())
                    .sum();
                let expected = if a == b {
                    num::BigInt::from(factorial) / num::BigInt::from(a.class_size())
                } else {
                    num::BigInt::zero()
                };
                assert_eq!(sum, expected);
            }
        }
    }
}
