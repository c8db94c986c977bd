//! Independent reference computations shared by the integration tests. Nothing
//! here calls into the library beyond parsing inputs.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// Every permutation of `0..n` as an image vector, by recursive insertion.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for slot in 0..n {
            // place n-1 at position `slot`, shifting nothing else
            let mut images = p.clone();
            images.insert(slot, n - 1);
            out.push(images);
        }
    }
    out
}

pub fn cycle_lengths(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut lengths = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

fn mul(p: &[usize], r: &[usize]) -> Vec<usize> {
    r.iter().map(|&i| p[i]).collect()
}

fn inv(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        out[v] = i;
    }
    out
}

/// Thoma character on a class, written straight from the power sums.
pub fn thoma_value(alpha: &[BigRational], beta: &[BigRational], lengths: &[usize]) -> BigRational {
    let mut value = BigRational::one();
    for &l in lengths.iter().filter(|&&l| l > 1) {
        let mut p = BigRational::zero();
        for a in alpha {
            p += num::pow(a.clone(), l);
        }
        for b in beta {
            let term = num::pow(b.clone(), l);
            if l % 2 == 0 {
                p -= term;
            } else {
                p += term;
            }
        }
        value *= p;
    }
    value
}

/// One isotypic block found by the oracle: `d` and the trace of its central
/// projection.
#[derive(Clone, Debug)]
pub struct OracleBlock {
    pub dimension: u64,
    pub weight: BigRational,
}

/// Central idempotents of `C S_n` from the class algebra: the eigenvalues of
/// multiplication by a generic integer combination of class sums separate
/// the blocks, and Lagrange interpolation in that operator gives each
/// idempotent exactly. Suitable for `n ≤ 6`.
pub fn class_algebra_blocks(alpha: &[BigRational], beta: &[BigRational], n: usize) -> Vec<OracleBlock> {
    let group = all_perms(n);
    let mut class_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    let mut element_class = Vec::with_capacity(group.len());
    for p in &group {
        let key = cycle_lengths(p);
        let c = *class_of.entry(key.clone()).or_insert_with(|| {
            classes.push(key);
            reps.push(p.clone());
            sizes.push(0);
            classes.len() - 1
        });
        sizes[c] += 1;
        element_class.push(c);
    }
    let r = classes.len();
    let lookup: BTreeMap<Vec<usize>, usize> = group.iter().cloned().zip(element_class.iter().copied()).collect();

    // a[i][j][k] = #{x ∈ C_i : x⁻¹ z_k ∈ C_j}
    let mut a = vec![vec![vec![0i64; r]; r]; r];
    for (k, z) in reps.iter().enumerate() {
        for (x, &i) in group.iter().zip(&element_class) {
            let j = lookup[&mul(&inv(x), z)];
            a[i][j][k] += 1;
        }
    }
    let identity_class = class_of[&vec![1; n]];

    let mut seed = 1u64;
    loop {
        // deterministic pseudo-random small coefficients
        let coeffs: Vec<i64> = (0..r)
            .map(|_| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((seed >> 33) % 7) as i64 - 3
            })
            .collect();
        let m: Vec<Vec<i64>> = (0..r)
            .map(|k| (0..r).map(|j| (0..r).map(|i| coeffs[i] * a[i][j][k]).sum()).collect())
            .collect();
        let dense = DMatrix::from_fn(r, r, |i, j| m[i][j] as f64);
        let mut eig: Vec<i64> = dense.complex_eigenvalues().iter().map(|c| c.re.round() as i64).collect();
        eig.sort_unstable();
        eig.dedup();
        if eig.len() != r {
            continue;
        }
        let exact: Vec<Vec<BigRational>> = m
            .iter()
            .map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        let apply = |v: &[BigRational], mu: i64| -> Vec<BigRational> {
            (0..r)
                .map(|i| {
                    let mut s = -BigRational::from_integer(mu.into()) * &v[i];
                    for j in 0..r {
                        s += &exact[i][j] * &v[j];
                    }
                    s
                })
                .collect()
        };
        // Π (M - μ) must annihilate every basis vector for the rounding to be right
        let annihilates = (0..r).all(|b| {
            let mut v: Vec<BigRational> = (0..r).map(|i| if i == b { BigRational::one() } else { BigRational::zero() }).collect();
            for &mu in &eig {
                v = apply(&v, mu);
            }
            v.iter().all(Zero::is_zero)
        });
        assert!(annihilates, "rounded eigenvalues failed the exact check");

        let factorial: u64 = (1..=n as u64).product();
        let mut blocks = Vec::new();
        for &mu_i in &eig {
            let mut v: Vec<BigRational> =
                (0..r).map(|i| if i == identity_class { BigRational::one() } else { BigRational::zero() }).collect();
            for &mu_j in eig.iter().filter(|&&m| m != mu_i) {
                let denom = BigRational::from_integer(BigInt::from(mu_i - mu_j));
                v = apply(&v, mu_j).into_iter().map(|x| x / &denom).collect();
            }
            let d_sq = &v[identity_class] * BigRational::from_integer(BigInt::from(factorial));
            assert!(d_sq.is_integer());
            let d_sq = d_sq.to_integer().to_u64().expect("small");
            let dimension = (d_sq as f64).sqrt().round() as u64;
            assert_eq!(dimension * dimension, d_sq);
            let mut weight = BigRational::zero();
            for k in 0..r {
                weight += &v[k] * BigRational::from_integer(sizes[k].into()) * thoma_value(alpha, beta, &classes[k]);
            }
            blocks.push(OracleBlock { dimension, weight });
        }
        return blocks;
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

/// `(Σ η(w) + w ln d, Σ η(w))` for the oracle blocks.
pub fn oracle_entropy(blocks: &[OracleBlock]) -> (f64, f64) {
    let eta = |t: f64| if t == 0.0 { 0.0 } else { -t * t.ln() };
    let mut total = 0.0;
    let mut center = 0.0;
    for b in blocks {
        let w = to_f64(&b.weight);
        center += eta(w);
        total += eta(w) + w * (b.dimension as f64).ln();
    }
    (total, center)
}
