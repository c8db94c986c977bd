//! Young diagrams: hook-length dimensions, Murnaghan–Nakayama characters,
//! partition enumeration and the staircase diagrams `(k, k-1, …, 1)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, BigUint, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{factorial, CycleType};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::InvalidDiagram(format!("{rows:?} has an empty row")));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(format!("{rows:?} is not nonincreasing")));
        }
        Ok(Self { rows })
    }

    /// The staircase `(k, k-1, …, 1)` of size `k(k+1)/2`.
    pub fn staircase(k: usize) -> Self {
        Self {
            rows: (1..=k).rev().collect(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Self {
        let width = self.rows.first().copied().unwrap_or(0);
        Self {
            rows: (0..width)
                .map(|c| self.rows.iter().take_while(|&&r| r > c).count())
                .collect(),
        }
    }

    /// Hook lengths row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let columns = self.transpose();
        let mut hooks = Vec::with_capacity(self.size());
        for (i, &row) in self.rows.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = columns.rows[j] - i - 1;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// Number of standard tableaux: `n! / Π hooks`.
    pub fn dimension(&self) -> BigUint {
        let hooks = self
            .hooks()
            .into_iter()
            .fold(BigUint::one(), |acc, h| acc * h);
        factorial(self.size() as u64) / hooks
    }

    /// Irreducible character value on the class of the given cycle type.
    pub fn character_value(&self, class: &CycleType) -> Result<BigInt> {
        let mut memo = CharacterMemo::default();
        memo.value(self, class)
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for YoungDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut offset = 0;
        for piece in s.split(',') {
            let value = piece.trim().parse::<usize>().map_err(|e| Error::Parse {
                position: offset,
                message: e.to_string(),
            })?;
            rows.push(value);
            offset += piece.len() + 1;
        }
        YoungDiagram::new(rows)
    }
}

/// Murnaghan–Nakayama recursion with a table keyed by (diagram, remaining
/// cycle lengths). The largest remaining cycle is stripped first.
#[derive(Default)]
pub struct CharacterMemo {
    table: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl CharacterMemo {
    pub fn value(&mut self, shape: &YoungDiagram, class: &CycleType) -> Result<BigInt> {
        if shape.size() != class.degree() {
            return Err(Error::SizeMismatch {
                expected: shape.size(),
                found: class.degree(),
            });
        }
        Ok(self.recurse(&shape.rows, class.lengths()))
    }

    fn recurse(&mut self, rows: &[usize], cycles: &[usize]) -> BigInt {
        let Some((&len, rest)) = cycles.split_first() else {
            return BigInt::one();
        };
        if len == 1 {
            // only fixed points left: the dimension
            let diagram = YoungDiagram { rows: rows.to_vec() };
            return BigInt::from(diagram.dimension());
        }
        let key = (rows.to_vec(), cycles.to_vec());
        if let Some(v) = self.table.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for (smaller, sign) in remove_rim_hooks(rows, len) {
            let v = self.recurse(&smaller, rest);
            if sign > 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.table.insert(key, total.clone());
        total
    }
}

/// All diagrams obtained by removing a rim hook of the given length, with the
/// sign `(-1)^(height)`, computed through beta-numbers.
fn remove_rim_hooks(rows: &[usize], len: usize) -> Vec<(Vec<usize>, i32)> {
    let l = rows.len();
    let beta: Vec<usize> = rows.iter().enumerate().map(|(i, &r)| r + l - 1 - i).collect();
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < len {
            continue;
        }
        let target = b - len;
        if beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &c)| c - (l - 1 - i))
            .filter(|&r| r > 0)
            .collect();
        out.push((shape, if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// Partitions of `n`, lexicographically descending.
pub fn enumerate_partitions(n: usize, limits: &Limits) -> Result<Vec<YoungDiagram>> {
    if n > limits.partition_degree {
        return Err(Error::CapExceeded {
            what: "partition enumeration degree",
            requested: n as u128,
            limit: limits.partition_degree as u128,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_partitions(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill_partitions(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
    if remaining == 0 {
        out.push(YoungDiagram {
            rows: current.clone(),
        });
        return;
    }
    for part in (1..=max.min(remaining)).rev() {
        current.push(part);
        fill_partitions(remaining - part, part, current, out);
        current.pop();
    }
}

/// Cycle types of `S_n`, in the same order as [`enumerate_partitions`].
pub fn enumerate_cycle_types(n: usize, limits: &Limits) -> Result<Vec<CycleType>> {
    Ok(enumerate_partitions(n, limits)?
        .into_iter()
        .map(|d| CycleType::from_lengths(d.rows))
        .collect())
}

/// `R^{N} · (k! (k-1)! ⋯ 1!) / N!` with `N = k(k+1)/2`, exact.
pub fn triangle_bound_exact(ratio: &BigRational, k: usize) -> BigRational {
    let n = k * (k + 1) / 2;
    let superfactorial = (1..=k as u64).fold(BigUint::one(), |acc, j| acc * factorial(j));
    let power = num::pow(ratio.clone(), n);
    power * BigRational::new(BigInt::from(superfactorial), BigInt::from(factorial(n as u64)))
}

/// The same quantity as [`triangle_bound_exact`], converted to `f64` at the end.
pub fn triangle_bound_sequence(ratio: &BigRational, k: usize) -> f64 {
    rational_to_f64(&triangle_bound_exact(ratio, k))
}

/// Conversion that survives numerators and denominators beyond `f64` range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64().filter(|v| v.is_finite() && *v != 0.0) {
        return v;
    }
    if q.is_zero() {
        return 0.0;
    }
    let num_bits = q.numer().bits() as i64;
    let den_bits = q.denom().bits() as i64;
    let shift = num_bits - den_bits;
    let scaled = if shift > 0 {
        q / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        q * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}
