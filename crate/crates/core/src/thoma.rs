//! Thoma parameters `(α; β; γ)` and the extremal characters they define.
//!
//! Only finitely supported rational parameters are representable. All
//! comparisons here are exact.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::CycleType;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThomaParameter {
    alpha: Vec<BigRational>,
    beta: Vec<BigRational>,
    gamma: BigRational,
}

/// Unvalidated input to [`ThomaParameter::validate`]. A missing `gamma` is
/// filled in as `1 - Σα - Σβ`.
#[derive(Clone, Debug, Default)]
pub struct RawParameter {
    pub alpha: Vec<BigRational>,
    pub beta: Vec<BigRational>,
    pub gamma: Option<BigRational>,
}

impl ThomaParameter {
    pub fn validate(raw: RawParameter) -> Result<Self> {
        let RawParameter { alpha, beta, gamma } = raw;
        for v in alpha.iter().chain(&beta).chain(gamma.iter()) {
            if v.is_negative() {
                return Err(Error::NegativeEntry { value: v.to_string() });
            }
        }
        let normalize = |mut v: Vec<BigRational>| {
            v.retain(|x| !x.is_zero());
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let alpha = normalize(alpha);
        let beta = normalize(beta);
        let partial: BigRational = alpha.iter().chain(&beta).sum();
        if partial > BigRational::one() {
            return Err(Error::SumExceedsOne { sum: partial.to_string() });
        }
        let gamma = match gamma {
            None => BigRational::one() - &partial,
            Some(g) => {
                let total = &partial + &g;
                if total > BigRational::one() {
                    return Err(Error::SumExceedsOne { sum: total.to_string() });
                }
                if !total.is_one() {
                    return Err(Error::SumNotOne { sum: total.to_string() });
                }
                g
            }
        };
        Ok(Self { alpha, beta, gamma })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs; `gamma`
    /// is inferred.
    pub fn from_fractions(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> Result<Self> {
        let conv = |v: &[(i64, i64)]| {
            v.iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect::<Vec<_>>()
        };
        Self::validate(RawParameter {
            alpha: conv(alpha),
            beta: conv(beta),
            gamma: None,
        })
    }

    /// The standard (regular) trace, `γ = 1`.
    pub fn regular() -> Self {
        Self {
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma: BigRational::one(),
        }
    }

    pub fn alpha(&self) -> &[BigRational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[BigRational] {
        &self.beta
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    pub fn m_alpha(&self) -> usize {
        self.alpha.len()
    }

    pub fn m_beta(&self) -> usize {
        self.beta.len()
    }

    /// `(γ_i)` indexed by `-m_β, …, -1, 1, …, m_α`: `β_{-i}` on negative
    /// indices, `α_i` on positive ones.
    pub fn merged(&self) -> Vec<(i64, BigRational)> {
        let negative = (1..=self.beta.len())
            .rev()
            .map(|j| (-(j as i64), self.beta[j - 1].clone()));
        let positive = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, a)| (i as i64 + 1, a.clone()));
        negative.chain(positive).collect()
    }

    /// `Σ α_i^L - Σ (-β_i)^L`, the value on an `L`-cycle.
    pub fn cycle_value(&self, len: usize) -> BigRational {
        if len == 1 {
            return BigRational::one();
        }
        let a: BigRational = self.alpha.iter().map(|x| num::pow(x.clone(), len)).sum();
        let b: BigRational = self
            .beta
            .iter()
            .map(|x| num::pow(-x.clone(), len))
            .sum();
        a - b
    }

    /// The character evaluated on a class; multiplicative over cycles.
    pub fn character(&self, class: &CycleType) -> BigRational {
        class
            .lengths()
            .iter()
            .filter(|&&l| l >= 2)
            .map(|&l| self.cycle_value(l))
            .fold(BigRational::one(), |acc, v| acc * v)
    }

    /// `Σα³ + Σβ³`, the value on a 3-cycle.
    pub fn third_moment(&self) -> BigRational {
        self.cycle_value(3)
    }

    /// `Σα² - Σβ²`, the value on a transposition.
    pub fn second_moment(&self) -> BigRational {
        self.cycle_value(2)
    }

    pub fn moment_identity_holds(&self) -> bool {
        let s = self.second_moment();
        self.third_moment() == &s * &s
    }

    /// `α_1 = 1` or `β_1 = 1`: the representation does not generate a factor.
    pub fn is_degenerate(&self) -> bool {
        self.alpha.first().is_some_and(One::is_one) || self.beta.first().is_some_and(One::is_one)
    }

    pub fn classify_irreducible(&self) -> Classification {
        let uniform = |v: &[BigRational]| -> Option<usize> {
            let n = v.len();
            if n == 0 {
                return None;
            }
            let share = BigRational::new(BigInt::one(), BigInt::from(n));
            v.iter().all(|x| *x == share).then_some(n)
        };
        let tag = if self.gamma.is_one() {
            IrreducibleForm::Regular
        } else if let (Some(n), true) = (uniform(&self.alpha), self.beta.is_empty()) {
            IrreducibleForm::UniformAlpha(n)
        } else if let (Some(n), true) = (uniform(&self.beta), self.alpha.is_empty()) {
            IrreducibleForm::UniformBeta(n)
        } else {
            IrreducibleForm::NotIrreducible
        };
        Classification {
            tag,
            moment_identity: self.moment_identity_holds(),
            degenerate: self.is_degenerate(),
            transposition_value: self.second_moment(),
            three_cycle_value: self.third_moment(),
        }
    }

    /// Faithfulness of the trace, for finitely supported parameters: `γ > 0`.
    pub fn is_faithful(&self) -> bool {
        self.gamma.is_positive()
    }

    /// Infinite index of the inclusion; coincides with faithfulness.
    pub fn has_infinite_index(&self) -> bool {
        self.is_faithful()
    }

    /// Swaps `α` and `β`; the character picks up the sign of the class.
    pub fn theta_dual(&self) -> Self {
        Self {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            gamma: self.gamma.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrreducibleForm {
    UniformAlpha(usize),
    UniformBeta(usize),
    Regular,
    NotIrreducible,
}

impl IrreducibleForm {
    pub fn is_irreducible(&self) -> bool {
        !matches!(self, IrreducibleForm::NotIrreducible)
    }
}

impl fmt::Display for IrreducibleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleForm::UniformAlpha(n) => write!(f, "UniformAlpha({n})"),
            IrreducibleForm::UniformBeta(n) => write!(f, "UniformBeta({n})"),
            IrreducibleForm::Regular => write!(f, "Regular"),
            IrreducibleForm::NotIrreducible => write!(f, "NotIrreducible"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tag: IrreducibleForm,
    /// Whether `Σα³ + Σβ³ = (Σα² - Σβ²)²`.
    pub moment_identity: bool,
    /// Set for `α_1 = 1` or `β_1 = 1`; no subfactor statement is made then.
    pub degenerate: bool,
    pub transposition_value: BigRational,
    pub three_cycle_value: BigRational,
}

fn fmt_list(f: &mut fmt::Formatter<'_>, values: &[BigRational]) -> fmt::Result {
    for (j, v) in values.iter().enumerate() {
        if j > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for ThomaParameter {
    /// Canonical form `a=…;b=…;g=…`, accepted back by `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a=")?;
        fmt_list(f, &self.alpha)?;
        write!(f, ";b=")?;
        fmt_list(f, &self.beta)?;
        write!(f, ";g={}", self.gamma)
    }
}

/// Parses `p/q`, `-p/q` or an integer.
pub fn parse_rational(text: &str, offset: usize) -> Result<BigRational> {
    let err = |message: String| Error::Parse { position: offset, message };
    let t = text.trim();
    let int = |s: &str| {
        let s = s.trim();
        if s.is_empty() || !s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
            return Err(err(format!("{text:?} is not a rational number of the form p/q")));
        }
        s.parse::<BigInt>().map_err(|e| err(e.to_string()))
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(err("zero denominator".into()));
            }
            Ok(BigRational::new(int(p)?, q))
        }
        None => Ok(BigRational::from_integer(int(t)?)),
    }
}

impl FromStr for ThomaParameter {
    type Err = Error;

    /// Grammar: `a=<list>;b=<list>;g=<rational>`, any field omissible, lists
    /// comma separated.
    fn from_str(s: &str) -> Result<Self> {
        let mut raw = RawParameter::default();
        let mut seen = [false; 3];
        let mut offset = 0;
        for field in s.split(';') {
            let here = offset;
            offset += field.len() + 1;
            if field.trim().is_empty() {
                continue;
            }
            let (key, value) = field.split_once('=').ok_or(Error::Parse {
                position: here,
                message: format!("expected key=value, found {:?}", field.trim()),
            })?;
            let value_offset = here + key.len() + 1;
            let list = |value: &str| -> Result<Vec<BigRational>> {
                let mut out = Vec::new();
                let mut pos = value_offset;
                for item in value.split(',') {
                    if !item.trim().is_empty() {
                        out.push(parse_rational(item, pos)?);
                    }
                    pos += item.len() + 1;
                }
                Ok(out)
            };
            let slot = match key.trim() {
                "a" | "alpha" => 0,
                "b" | "beta" => 1,
                "g" | "gamma" => 2,
                other => {
                    return Err(Error::Parse {
                        position: here,
                        message: format!("unknown field {other:?}"),
                    })
                }
            };
            if seen[slot] {
                return Err(Error::Parse {
                    position: here,
                    message: format!("field {:?} given twice", key.trim()),
                });
            }
            seen[slot] = true;
            match slot {
                0 => raw.alpha = list(value)?,
                1 => raw.beta = list(value)?,
                _ => raw.gamma = Some(parse_rational(value, value_offset)?),
            }
        }
        ThomaParameter::validate(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::CycleType;
    use crate::young::enumerate_cycle_types;
    use crate::Limits;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn k(s: &str) -> ThomaParameter {
        s.parse().unwrap()
    }

    fn ct(v: &[usize]) -> CycleType {
        CycleType::from_lengths(v.to_vec())
    }

    #[test]
    fn validate_examples() {
        let p = ThomaParameter::validate(RawParameter {
            alpha: vec![q(1, 2), q(1, 2)],
            ..Default::default()
        })
        .unwrap();
        assert!(p.gamma().is_zero());
        let err = ThomaParameter::validate(RawParameter {
            alpha: vec![q(2, 3), q(2, 3)],
            ..Default::default()
        });
        assert!(matches!(err, Err(Error::SumExceedsOne { .. })));
        let p = ThomaParameter::from_fractions(&[(1, 2)], &[(1, 4)]).unwrap();
        assert_eq!(p.gamma(), &q(1, 4));
        let err = ThomaParameter::validate(RawParameter {
            alpha: vec![q(-1, 2)],
            ..Default::default()
        });
        assert!(matches!(err, Err(Error::NegativeEntry { .. })));
    }

    #[test]
    fn normalization_sorts_and_drops_zeros() {
        let p = ThomaParameter::validate(RawParameter {
            alpha: vec![q(1, 6), q(0, 1), q(1, 2)],
            beta: vec![q(1, 12), q(1, 4)],
            gamma: None,
        })
        .unwrap();
        assert_eq!(p.alpha(), &[q(1, 2), q(1, 6)]);
        assert_eq!(p.beta(), &[q(1, 4), q(1, 12)]);
        assert_eq!(p.gamma(), &BigRational::zero());
    }

    #[test]
    fn character_examples() {
        let half = k("a=1/2,1/2");
        assert_eq!(half.character(&ct(&[1, 1, 1])), BigRational::one());
        assert_eq!(half.character(&ct(&[2, 1])), q(1, 2));
        assert_eq!(half.character(&ct(&[3])), q(1, 4));
        assert_eq!(k("b=1/2,1/2").character(&ct(&[2])), q(-1, 2));
        let regular = ThomaParameter::regular();
        assert_eq!(regular.character(&ct(&[2, 1])), BigRational::zero());
        assert_eq!(regular.character(&ct(&[1, 1])), BigRational::one());
    }

    #[test]
    fn classification_examples() {
        let c = k("a=1/3,1/3,1/3").classify_irreducible();
        assert_eq!(c.tag, IrreducibleForm::UniformAlpha(3));
        assert!(c.moment_identity);
        assert_eq!(k("g=1").classify_irreducible().tag, IrreducibleForm::Regular);
        assert_eq!(k("b=1/2,1/2").classify_irreducible().tag, IrreducibleForm::UniformBeta(2));
        let c = k("a=1/2,1/4,1/4").classify_irreducible();
        assert_eq!(c.tag, IrreducibleForm::NotIrreducible);
        assert!(!c.moment_identity);
        assert_eq!(c.three_cycle_value, q(5, 32));
        assert_eq!(&c.transposition_value * &c.transposition_value, q(9, 64));
        assert!(k("a=1").classify_irreducible().degenerate);
    }

    #[test]
    fn faithfulness() {
        assert!(k("g=1").is_faithful());
        assert!(k("g=1").has_infinite_index());
        assert!(!k("a=1/2,1/2").is_faithful());
        assert!(!k("a=1/2,1/2").has_infinite_index());
        assert!(!k("a=1/4,1/4;b=1/4,1/4").is_faithful());
        assert!(k("a=1/2;b=1/4").is_faithful());
    }

    #[test]
    fn theta_dual_sign_relation() {
        let p = k("a=1/2,1/2");
        let dual = p.theta_dual();
        assert_eq!(dual, k("b=1/2,1/2"));
        assert_eq!(dual.character(&ct(&[2])), q(-1, 2));
        assert_eq!(dual.character(&ct(&[3])), q(1, 4));
        let limits = Limits::default();
        for p in [k("a=1/2;b=1/3"), k("a=2/3,1/6;b=1/12"), k("a=1/5;b=1/5,1/5")] {
            assert_eq!(p.theta_dual().theta_dual(), p);
            for n in 1..=6 {
                for c in enumerate_cycle_types(n, &limits).unwrap() {
                    let signed = BigRational::from_integer(c.sign().into()) * p.character(&c);
                    assert_eq!(p.theta_dual().character(&c), signed);
                }
            }
        }
    }

    #[test]
    fn multiplicativity_over_disjoint_unions() {
        let limits = Limits::default();
        let p = k("a=1/2,1/6;b=1/4");
        for n1 in 1..=5 {
            for n2 in 1..=(6 - n1) {
                for c1 in enumerate_cycle_types(n1, &limits).unwrap() {
                    for c2 in enumerate_cycle_types(n2, &limits).unwrap() {
                        let joined = c1.disjoint_union(&c2);
                        assert_eq!(p.character(&joined), p.character(&c1) * p.character(&c2));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_print() {
        let p = k("a=1/2,1/2;b=;g=0");
        assert_eq!(p.alpha(), &[q(1, 2), q(1, 2)]);
        assert!(p.beta().is_empty());
        assert_eq!(k("g=1"), ThomaParameter::regular());
        assert_eq!(k("a=1/2;b=1/4").gamma(), &q(1, 4));
        assert_eq!(k("a=1/2;b=1/4").to_string(), "a=1/2;b=1/4;g=1/4");
        assert_eq!(k(&p.to_string()), p);
        match "a=1/2,0.5".parse::<ThomaParameter>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!("a=1/2;g=1/4".parse::<ThomaParameter>().is_err());
        assert!("x=1".parse::<ThomaParameter>().is_err());
    }
}
