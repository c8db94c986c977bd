//! Permutations of `{0, …, n-1}`, cycle types, the stabilizer subgroup of `0`,
//! and enumeration of the finite groups involved.
//!
//! A permutation of smaller degree is identified with its extension by fixed
//! points, so every binary operation silently embeds into the larger degree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "image list {images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from disjoint cycles; `(m1 m2 … mk)` sends `m_j` to
    /// `m_{j+1}` and `m_k` back to `m1`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let needed = cycles
            .iter()
            .flatten()
            .max()
            .map_or(0, |&m| m + 1);
        let mut images: Vec<usize> = (0..degree.max(needed)).collect();
        let mut used = vec![false; images.len()];
        for cycle in cycles {
            for (j, &m) in cycle.iter().enumerate() {
                if used[m] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {m} appears twice in the cycle list"
                    )));
                }
                used[m] = true;
                images[m] = cycle[(j + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(degree.max(a + 1).max(b + 1));
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images.get(i).copied().unwrap_or(i)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Appends fixed points up to `degree`; never shrinks.
    pub fn embed(&self, degree: usize) -> Self {
        let mut images = self.images.clone();
        images.extend(images.len()..degree);
        Self { images }
    }

    /// Drops trailing fixed points.
    pub fn trimmed(&self) -> Self {
        let mut images = self.images.clone();
        while let Some(&last) = images.last() {
            if last + 1 == images.len() {
                images.pop();
            } else {
                break;
            }
        }
        Self { images }
    }

    /// `compose(q)` is the map `i ↦ self(q(i))`.
    pub fn compose(&self, q: &Permutation) -> Permutation {
        let n = self.degree().max(q.degree());
        Permutation {
            images: (0..n).map(|i| self.apply(q.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `t · self · t⁻¹`.
    pub fn conjugate_by(&self, t: &Permutation) -> Permutation {
        t.compose(self).compose(&t.inverse())
    }

    /// Orbits of the action on `{0, …, n-1}`, each listed starting from its
    /// smallest point and following the permutation. Orbits are sorted by
    /// their smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                orbit.push(j);
                j = self.images[j];
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.orbits().iter().map(Vec::len).collect())
    }

    /// `(-1)^(n - #cycles)`.
    pub fn sign(&self) -> i32 {
        self.cycle_type().sign()
    }

    /// Decides which of the two double cosets of `T_n` in `S_n` contains
    /// `self`, where `T_n` is the stabilizer of `0`.
    pub fn double_coset_class(&self) -> DoubleCoset {
        let n = self.degree().max(2);
        let p = self.embed(n);
        let a = p.apply(0);
        if a == 0 {
            return DoubleCoset::InsideStabilizer;
        }
        let left = if a == 1 {
            Permutation::identity(n)
        } else {
            Permutation::transposition(n, 1, a)
        };
        let swap = Permutation::transposition(n, 0, 1);
        let right = swap.compose(&left.inverse()).compose(&p);
        debug_assert_eq!(right.apply(0), 0);
        debug_assert_eq!(left.compose(&swap).compose(&right), p);
        DoubleCoset::TranspositionCoset { left, right }
    }
}

/// Tag returned by [`Permutation::double_coset_class`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DoubleCoset {
    InsideStabilizer,
    /// `p = left · (0 1) · right` with both witnesses fixing `0`.
    TranspositionCoset {
        left: Permutation,
        right: Permutation,
    },
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for orbit in self.orbits().into_iter().filter(|o| o.len() > 1) {
            write!(f, "(")?;
            for (j, m) in orbit.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{m}")?;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "e")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses cycle notation such as `"(0 1)(2 3 4)"`; `"e"` is the identity.
    /// Commas are accepted as separators inside a cycle.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed == "e" || trimmed.is_empty() {
            return Ok(Permutation::identity(1));
        }
        let mut cycles = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();
        let mut number_start = 0;
        let flush = |number: &mut String, start: usize, cycle: &mut Vec<usize>| -> Result<()> {
            if !number.is_empty() {
                let value = number.parse::<usize>().map_err(|e| Error::Parse {
                    position: start,
                    message: e.to_string(),
                })?;
                cycle.push(value);
                number.clear();
            }
            Ok(())
        };
        for (pos, ch) in s.char_indices() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(Error::Parse {
                            position: pos,
                            message: "nested '('".into(),
                        });
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    let mut cycle = current.take().ok_or(Error::Parse {
                        position: pos,
                        message: "unmatched ')'".into(),
                    })?;
                    flush(&mut number, number_start, &mut cycle)?;
                    if cycle.is_empty() {
                        return Err(Error::Parse {
                            position: pos,
                            message: "empty cycle".into(),
                        });
                    }
                    cycles.push(cycle);
                }
                c if c.is_ascii_digit() => {
                    if current.is_none() {
                        return Err(Error::Parse {
                            position: pos,
                            message: "digit outside of a cycle".into(),
                        });
                    }
                    if number.is_empty() {
                        number_start = pos;
                    }
                    number.push(c);
                }
                c if c.is_whitespace() || c == ',' => if let Some(cycle) = current.as_mut() { flush(&mut number, number_start, cycle)? },
                other => {
                    return Err(Error::Parse {
                        position: pos,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        if current.is_some() {
            return Err(Error::Parse {
                position: s.len(),
                message: "unterminated cycle".into(),
            });
        }
        Permutation::from_cycles(1, &cycles)
    }
}

/// Cycle lengths of a permutation, fixed points included, nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    /// Sorts the given lengths; zero lengths are dropped.
    pub fn from_lengths(mut lengths: Vec<usize>) -> Self {
        lengths.retain(|&l| l > 0);
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Self(lengths)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.0.len()
    }

    pub fn sign(&self) -> i32 {
        if (self.degree() - self.num_cycles()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Pads with fixed points to the given degree.
    pub fn padded(&self, degree: usize) -> Self {
        let mut lengths = self.0.clone();
        lengths.extend(std::iter::repeat_n(1, degree.saturating_sub(self.degree())));
        Self(lengths)
    }

    /// Cycle type of a permutation made of disjoint pieces of the two types.
    pub fn disjoint_union(&self, other: &CycleType) -> CycleType {
        CycleType::from_lengths(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Number of permutations with this cycle type: `n! / z`, where
    /// `z = Π_j j^{m_j} m_j!`.
    pub fn class_size(&self) -> num::BigUint {
        let n = self.degree();
        let mut z = num::BigUint::from(1u32);
        let mut j = 0;
        while j < self.0.len() {
            let len = self.0[j];
            let mut mult = 0u32;
            while j < self.0.len() && self.0[j] == len {
                mult += 1;
                j += 1;
                z *= num::BigUint::from(len) * num::BigUint::from(mult);
            }
        }
        factorial(n as u64) / z
    }

    /// A permutation of this cycle type, with cycles on consecutive points.
    pub fn representative(&self) -> Permutation {
        let mut cycles = Vec::new();
        let mut start = 0;
        for &len in &self.0 {
            cycles.push((start..start + len).collect::<Vec<_>>());
            start += len;
        }
        Permutation::from_cycles(self.degree(), &cycles).expect("consecutive cycles are disjoint")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, l) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

pub fn factorial(n: u64) -> num::BigUint {
    (1..=n).fold(num::BigUint::from(1u32), |acc, k| acc * k)
}

/// `n!` as `u128`, saturating for `n > 34`.
pub(crate) fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

/// All permutations of degree `n` fixing `0, …, fixing-1`, in lexicographic
/// order of their image lists.
pub fn enumerate_group(n: usize, fixing: usize, limits: &Limits) -> Result<GroupIter> {
    let free = n.saturating_sub(fixing);
    let count = factorial_u128(free);
    if count > limits.enumeration {
        return Err(Error::CapExceeded {
            what: "group enumeration",
            requested: count,
            limit: limits.enumeration,
        });
    }
    Ok(GroupIter {
        next: Some(Permutation::identity(n)),
        fixing: fixing.min(n),
    })
}

/// Lexicographic successor iteration over a coset of moving points.
pub struct GroupIter {
    next: Option<Permutation>,
    fixing: usize,
}

impl Iterator for GroupIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut images = current.images.clone();
        let tail = &mut images[self.fixing..];
        if next_permutation(tail) {
            self.next = Some(Permutation { images });
        }
        Some(current)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The subgroup of permutations moving only points in `lo..hi`; `S_n` is
/// `0..n` and the stabilizer `T_n` is `1..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub lo: usize,
    pub hi: usize,
}

impl Subgroup {
    pub fn symmetric(n: usize) -> Self {
        Self { lo: 0, hi: n }
    }

    pub fn stabilizer(n: usize) -> Self {
        Self { lo: 1.min(n), hi: n }
    }

    pub fn order(&self) -> u128 {
        factorial_u128(self.hi.saturating_sub(self.lo))
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.images
            .iter()
            .enumerate()
            .all(|(i, &j)| i == j || (self.lo..self.hi).contains(&i))
    }

    /// Elements in degree `hi`.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Permutation>> {
        Ok(enumerate_group(self.hi, self.lo, limits)?.collect())
    }
}
