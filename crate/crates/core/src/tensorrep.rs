//! The signed tensor representation of `S_n` on `ℓ²(X)^{⊗n}` for parameters
//! with `γ = 0`, where `X = {-m_β, …, -1} ∪ {1, …, m_α}` carries the product
//! state with density `α_i` at `i > 0` and `β_{-j}` at `j < 0`.
//!
//! A basis tuple `x = (x_0, …, x_{n-1})` is stored as a mixed-radix integer
//! with position `0` most significant. Local positions `0..m` enumerate the
//! points of `X` in increasing order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupalg::{cond_exp_relcomm_tk, AlgebraElement};
use crate::linalg::{self, RowReduction};
use crate::perm::{enumerate_group, Permutation};
use crate::thoma::{parse_rational, ThomaParameter};
use crate::young::rational_to_f64;
use crate::Limits;

/// Entry type of a [`TensorOperator`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &BigRational) -> Self;
    fn magnitude(&self) -> f64;
    fn parse_value(text: &str) -> Option<Self>;
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn parse_value(text: &str) -> Option<Self> {
        parse_rational(text, 0).ok()
    }
}

impl Scalar for f64 {
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn parse_value(text: &str) -> Option<Self> {
        text.trim().parse().ok()
    }
}

/// The finite index set `X`, with the product-state density on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    pub m_alpha: usize,
    pub m_beta: usize,
    points: Vec<i64>,
    density: Vec<BigRational>,
}

impl IndexSet {
    pub fn from_parameter(kappa: &ThomaParameter) -> Result<Self> {
        if !kappa.gamma().is_zero() {
            return Err(Error::NonZeroGamma {
                gamma: kappa.gamma().to_string(),
            });
        }
        let merged = kappa.merged();
        Ok(Self {
            m_alpha: kappa.m_alpha(),
            m_beta: kappa.m_beta(),
            points: merged.iter().map(|(i, _)| *i).collect(),
            density: merged.into_iter().map(|(_, v)| v).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[i64] {
        &self.points
    }

    /// Diagonal of the density operator, by local position.
    pub fn density(&self) -> &[BigRational] {
        &self.density
    }

    pub fn position(&self, point: i64) -> Option<usize> {
        self.points.iter().position(|&p| p == point)
    }

    /// `m^n`, refusing anything over the dimension cap.
    pub fn dimension(&self, n: usize, limits: &Limits) -> Result<usize> {
        let dim = (self.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if dim > limits.dimension {
            return Err(Error::CapExceeded {
                what: "tensor power dimension",
                requested: dim,
                limit: limits.dimension,
            });
        }
        Ok(dim as usize)
    }

    /// Local positions of an encoded basis tuple.
    pub fn decode(&self, mut index: usize, n: usize) -> Vec<usize> {
        let m = self.len();
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = index % m;
            index /= m;
        }
        out
    }

    pub fn encode(&self, positions: &[usize]) -> usize {
        positions.iter().fold(0, |acc, &p| acc * self.len() + p)
    }

    /// Points of `X` for an encoded basis tuple.
    pub fn tuple(&self, index: usize, n: usize) -> Vec<i64> {
        self.decode(index, n).into_iter().map(|p| self.points[p]).collect()
    }
}

/// Sparse operator on `ℓ²(X)^{⊗n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator<S> {
    degree: usize,
    base: usize,
    entries: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> TensorOperator<S> {
    pub fn zero(degree: usize, base: usize) -> Self {
        Self {
            degree,
            base,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(degree: usize, base: usize) -> Self {
        let mut op = Self::zero(degree, base);
        for i in 0..op.dim() {
            op.entries.insert((i, i), S::one());
        }
        op
    }

    /// Operator on one factor from a dense `base × base` matrix.
    pub fn from_local(matrix: &[Vec<S>]) -> Self {
        let base = matrix.len();
        let mut op = Self::zero(1, base);
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                op.set(i, j, v.clone());
            }
        }
        op
    }

    /// The matrix unit `|b⟩⟨a|` on one factor; `e_{a,b}` sends `δ_a` to `δ_b`.
    pub fn unit(base: usize, a: usize, b: usize) -> Self {
        let mut op = Self::zero(1, base);
        op.set(b, a, S::one());
        op
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.base.pow(self.degree as u32)
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    fn accumulate(&mut self, row: usize, col: usize, value: S) {
        let current = self.get(row, col);
        self.set(row, col, current + value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &S)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.degree, self.base);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, v.clone() * c.clone());
        }
        out
    }

    /// Transpose; the adjoint for real entries.
    pub fn adjoint(&self) -> Self {
        Self {
            degree: self.degree,
            base: self.base,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    /// `self ⊗ other`, `self` on the leading factors.
    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.base, other.base);
        let inner = other.dim();
        let mut out = Self::zero(self.degree + other.degree, self.base);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &other.entries {
                out.set(i * inner + k, j * inner + l, a.clone() * b.clone());
            }
        }
        out
    }

    /// `self ⊗ 1` on `degree` factors.
    pub fn extend(&self, degree: usize) -> Self {
        assert!(degree >= self.degree);
        let rest = self.base.pow((degree - self.degree) as u32);
        let mut out = Self::zero(degree, self.base);
        for (&(i, j), v) in &self.entries {
            for r in 0..rest {
                out.set(i * rest + r, j * rest + r, v.clone());
            }
        }
        out
    }

    /// `1 ⊗ self` with one extra leading factor.
    pub fn shift_right(&self) -> Self {
        Self::identity(1, self.base).kron(self)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Hilbert–Schmidt pairing `Tr(selfᵀ other)`.
    pub fn hs_inner(&self, other: &Self) -> S {
        let mut total = S::zero();
        for (key, v) in &self.entries {
            if let Some(w) = other.entries.get(key) {
                total = total + v.clone() * w.clone();
            }
        }
        total
    }

    pub fn to_dense(&self) -> DMatrix<f64>
    where
        S: Into<f64>,
    {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (&(i, j), v) in &self.entries {
            m[(i, j)] = v.clone().into();
        }
        m
    }

    /// Coordinate-list text: a header line with the degree and the points of
    /// `X`, then one line `row-tuple column-tuple value` per nonzero entry,
    /// tuples written as comma-separated points.
    pub fn to_coordinate_list(&self, index: &IndexSet) -> String {
        let points: Vec<String> = index.points().iter().map(i64::to_string).collect();
        let mut out = format!("degree {} points {}\n", self.degree, points.join(","));
        for (&(i, j), v) in &self.entries {
            let join = |t: Vec<i64>| t.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            out.push_str(&format!(
                "{} {} {}\n",
                join(index.tuple(i, self.degree)),
                join(index.tuple(j, self.degree)),
                v
            ));
        }
        out
    }

    pub fn from_coordinate_list(text: &str, index: &IndexSet) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { position: line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(0, "empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let degree = match fields.as_slice() {
            ["degree", d, "points", _] | ["degree", d] => {
                d.parse::<usize>().map_err(|e| err(0, e.to_string()))?
            }
            _ => return Err(err(0, format!("bad header {header:?}"))),
        };
        let mut op = Self::zero(degree, index.len());
        let tuple = |line: usize, s: &str| -> Result<usize> {
            let mut positions = Vec::new();
            for p in s.split(',') {
                let point = p.parse::<i64>().map_err(|e| err(line, e.to_string()))?;
                positions.push(
                    index
                        .position(point)
                        .ok_or_else(|| err(line, format!("{point} is not in the index set")))?,
                );
            }
            if positions.len() != degree {
                return Err(err(line, format!("tuple of length {} in degree {degree}", positions.len())));
            }
            Ok(index.encode(&positions))
        };
        for (line, content) in lines {
            if content.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = content.split_whitespace().collect();
            let [row, col, value] = parts.as_slice() else {
                return Err(err(line, format!("expected three fields, found {content:?}")));
            };
            let value = S::parse_value(value).ok_or_else(|| err(line, format!("bad value {value:?}")))?;
            op.set(tuple(line, row)?, tuple(line, col)?, value);
        }
        Ok(op)
    }
}

impl<S: Scalar> Add for &TensorOperator<S> {
    type Output = TensorOperator<S>;

    fn add(self, rhs: &TensorOperator<S>) -> TensorOperator<S> {
        assert_eq!((self.degree, self.base), (rhs.degree, rhs.base));
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            out.accumulate(i, j, v.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &TensorOperator<S> {
    type Output = TensorOperator<S>;

    fn sub(self, rhs: &TensorOperator<S>) -> TensorOperator<S> {
        assert_eq!((self.degree, self.base), (rhs.degree, rhs.base));
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            out.accumulate(i, j, -v.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &TensorOperator<S> {
    type Output = TensorOperator<S>;

    fn mul(self, rhs: &TensorOperator<S>) -> TensorOperator<S> {
        assert_eq!((self.degree, self.base), (rhs.degree, rhs.base));
        let mut by_col: HashMap<usize, Vec<(usize, &S)>> = HashMap::new();
        for (&(i, k), v) in &self.entries {
            by_col.entry(k).or_default().push((i, v));
        }
        let mut out = TensorOperator::zero(self.degree, self.base);
        for (&(k, j), b) in &rhs.entries {
            if let Some(column) = by_col.get(&k) {
                for &(i, a) in column {
                    out.accumulate(i, j, a.clone() * b.clone());
                }
            }
        }
        out
    }
}

/// `(-1)` to the number of position pairs `k < l` with `x_k, x_l < 0` and
/// `s(k) > s(l)`.
pub fn sign_factor(s: &Permutation, x: &[i64]) -> Result<i32> {
    if s.degree() > x.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            found: s.degree(),
        });
    }
    let negative: Vec<usize> = (0..x.len()).filter(|&k| x[k] < 0).collect();
    let mut inversions = 0usize;
    for (a, &k) in negative.iter().enumerate() {
        for &l in &negative[a + 1..] {
            if s.apply(k) > s.apply(l) {
                inversions += 1;
            }
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// `δ_x ↦ sign_factor(s, x) δ_{s.x}` with `(s.x)_i = x_{s⁻¹(i)}`.
pub fn represent<S: Scalar>(
    index: &IndexSet,
    s: &Permutation,
    n: usize,
    limits: &Limits,
) -> Result<TensorOperator<S>> {
    if s.degree() > n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: s.degree(),
        });
    }
    let dim = index.dimension(n, limits)?;
    let s = s.embed(n);
    let inverse = s.inverse();
    let mut op = TensorOperator::zero(n, index.len());
    let mut moved = vec![0usize; n];
    for col in 0..dim {
        let positions = index.decode(col, n);
        let x: Vec<i64> = positions.iter().map(|&p| index.points[p]).collect();
        for (i, slot) in moved.iter_mut().enumerate() {
            *slot = positions[inverse.apply(i)];
        }
        let sign = sign_factor(&s, &x)?;
        let value = if sign > 0 { S::one() } else { -S::one() };
        op.set(index.encode(&moved), col, value);
    }
    Ok(op)
}

/// Image of a group-algebra element under the representation.
pub fn represent_element<S: Scalar>(
    index: &IndexSet,
    x: &AlgebraElement,
    n: usize,
    limits: &Limits,
) -> Result<TensorOperator<S>> {
    let mut out = TensorOperator::zero(n, index.len());
    for (s, c) in x.terms() {
        let image = represent::<S>(index, &s.trimmed(), n, limits)?;
        out = &out + &image.scale(&S::from_rational(c));
    }
    Ok(out)
}

/// `Σ_x T[x, x] Π_k ρ(x_k)`, the product state.
pub fn state_value<S: Scalar>(index: &IndexSet, op: &TensorOperator<S>) -> S {
    let density: Vec<S> = index.density().iter().map(S::from_rational).collect();
    let mut total = S::zero();
    for (&(i, j), v) in &op.entries {
        if i != j {
            continue;
        }
        let weight = index
            .decode(i, op.degree)
            .into_iter()
            .fold(S::one(), |acc, p| acc * density[p].clone());
        total = total + v.clone() * weight;
    }
    total
}

/// `φ(X* X)`.
pub fn two_norm_sq<S: Scalar>(index: &IndexSet, op: &TensorOperator<S>) -> S {
    let density: Vec<S> = index.density().iter().map(S::from_rational).collect();
    let mut total = S::zero();
    for (&(_, j), v) in &op.entries {
        let weight = index
            .decode(j, op.degree)
            .into_iter()
            .fold(S::one(), |acc, p| acc * density[p].clone());
        total = total + v.clone() * v.clone() * weight;
    }
    total
}

/// `F = Σ α_i e_i ⊗ 1 - Σ β_{-j} e_j ⊗ 1` on `n` factors.
pub fn limit_operator<S: Scalar>(index: &IndexSet, n: usize) -> TensorOperator<S> {
    let mut local = TensorOperator::zero(1, index.len());
    for (p, (&point, rho)) in index.points().iter().zip(index.density()).enumerate() {
        let v = S::from_rational(rho);
        local.set(p, p, if point < 0 { -v } else { v });
    }
    local.extend(n)
}

#[derive(Clone, Debug)]
pub struct RelcommExpectation {
    pub k: usize,
    pub n: usize,
    /// Average over `T_k` of the conjugates of the image of `(0 1)`.
    pub operator: TensorOperator<BigRational>,
    pub limit: TensorOperator<BigRational>,
    /// `φ((F - E)*(F - E))`.
    pub deviation_sq: BigRational,
    /// `(1 - Σα³ - Σβ³) / (k - 1)`.
    pub predicted_sq: BigRational,
}

pub fn relcomm_expectation_matrix(
    kappa: &ThomaParameter,
    k: usize,
    n: usize,
    limits: &Limits,
) -> Result<RelcommExpectation> {
    if k < 2 || k > n {
        return Err(Error::Domain {
            value: format!("k = {k}, n = {n}"),
            domain: "2 <= k <= n",
        });
    }
    let index = IndexSet::from_parameter(kappa)?;
    let averaged = cond_exp_relcomm_tk(&AlgebraElement::basis(&Permutation::transposition(2, 0, 1)), k, limits)?;
    let operator = represent_element::<BigRational>(&index, &averaged, n, limits)?;
    let limit = limit_operator::<BigRational>(&index, n);
    let deviation_sq = two_norm_sq(&index, &(&limit - &operator));
    let predicted_sq = (BigRational::one() - kappa.third_moment()) / BigRational::from_integer(BigInt::from(k - 1));
    Ok(RelcommExpectation {
        k,
        n,
        operator,
        limit,
        deviation_sq,
        predicted_sq,
    })
}

/// `φ ⊗ Id`: contracts the first factor against the density and returns
/// `1 ⊗ (·)` on the same number of factors.
pub fn slice_expectation<S: Scalar>(index: &IndexSet, op: &TensorOperator<S>) -> TensorOperator<S> {
    let rest = index.len().pow(op.degree.saturating_sub(1) as u32);
    let mut reduced = TensorOperator::zero(op.degree.saturating_sub(1), index.len());
    for (&(i, j), v) in &op.entries {
        let (a, r) = (i / rest, i % rest);
        let (b, c) = (j / rest, j % rest);
        if a == b {
            reduced.accumulate(r, c, v.clone() * S::from_rational(&index.density()[a]));
        }
    }
    reduced.shift_right()
}

/// `Id ⊗ φ^{⊗(n-1)}`: the operator on the first factor.
pub fn first_factor_expectation<S: Scalar>(index: &IndexSet, op: &TensorOperator<S>) -> TensorOperator<S> {
    let n = op.degree;
    let rest = index.len().pow(n.saturating_sub(1) as u32);
    let density: Vec<S> = index.density().iter().map(S::from_rational).collect();
    let mut out = TensorOperator::zero(1, index.len());
    for (&(i, j), v) in &op.entries {
        let (a, r) = (i / rest, i % rest);
        let (b, c) = (j / rest, j % rest);
        if r != c {
            continue;
        }
        let weight = index.decode(r, n - 1).into_iter().fold(S::one(), |acc, p| acc * density[p].clone());
        out.accumulate(a, b, v.clone() * weight);
    }
    out
}

/// A fixed family of operators with its Hilbert–Schmidt Gram matrix reduced
/// once, for repeated distance queries.
pub struct OperatorSpan<'a> {
    basis: &'a [TensorOperator<BigRational>],
    reduction: RowReduction,
}

impl<'a> OperatorSpan<'a> {
    pub fn new(basis: &'a [TensorOperator<BigRational>]) -> Self {
        let gram: linalg::Matrix = basis
            .iter()
            .map(|a| basis.iter().map(|b| a.hs_inner(b)).collect())
            .collect();
        Self {
            basis,
            reduction: RowReduction::new(&gram),
        }
    }

    /// Dimension of the span.
    pub fn rank(&self) -> usize {
        self.reduction.rank()
    }

    /// Hilbert–Schmidt distance from `target` to the span, computed exactly
    /// and converted at the end.
    pub fn residual(&self, target: &TensorOperator<BigRational>) -> f64 {
        let rhs: Vec<BigRational> = self.basis.iter().map(|a| a.hs_inner(target)).collect();
        let coords = self.reduction.solve(&rhs).expect("Gram systems are consistent");
        let residual_sq = target.hs_inner(target) - linalg::dot(&rhs, &coords);
        rational_to_f64(&residual_sq).max(0.0).sqrt()
    }
}

/// Distance, in the Hilbert–Schmidt norm, from `target` to the linear span
/// of `basis`.
pub fn span_residual(target: &TensorOperator<BigRational>, basis: &[TensorOperator<BigRational>]) -> f64 {
    OperatorSpan::new(basis).residual(target)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub n: usize,
    pub elements_checked: usize,
    /// Residual against the algebra generated by `π(T_n)` and the limit
    /// operators placed on factors `1..n`.
    pub max_residual: f64,
    /// Residual against the bare linear span of `π(T_n)`.
    pub subgroup_span_residual: f64,
    pub algebra_dimension: usize,
}

/// `1^{⊗j} ⊗ local ⊗ 1^{⊗(n-j-1)}` for a one-factor operator.
fn place_local<S: Scalar>(local: &TensorOperator<S>, j: usize, n: usize) -> TensorOperator<S> {
    let base = local.base();
    let right = local.extend(n - j);
    if j == 0 {
        right
    } else {
        TensorOperator::identity(j, base).kron(&right)
    }
}

/// Operators spanning the algebra generated by
/// `π(T_n)` and the limit operator moved onto each factor `1..n`. The
/// diagonal parts commute among themselves and are permuted by conjugation,
/// so products `D · π(t)` with `D` a monomial in the diagonal generators
/// already span the algebra.
fn stabilizer_algebra_basis(index: &IndexSet, n: usize, limits: &Limits) -> Result<Vec<TensorOperator<BigRational>>> {
    let local = limit_operator::<BigRational>(index, 1);
    let mut distinct: Vec<BigRational> = (0..index.len()).map(|p| local.get(p, p)).collect();
    distinct.sort();
    distinct.dedup();
    let mut powers = vec![TensorOperator::identity(1, index.len())];
    for _ in 1..distinct.len() {
        let next = powers.last().expect("nonempty") * &local;
        powers.push(next);
    }
    let mut monomials = vec![TensorOperator::identity(n, index.len())];
    for j in 1..n {
        let placed: Vec<_> = powers.iter().map(|p| place_local(p, j, n)).collect();
        monomials = monomials
            .iter()
            .flat_map(|m| placed.iter().map(move |p| m * p))
            .collect();
    }
    let mut spanning = Vec::new();
    for t in enumerate_group(n, 1, limits)? {
        let rep = represent::<BigRational>(index, &t, n, limits)?;
        spanning.extend(monomials.iter().map(|m| m * &rep));
    }
    Ok(spanning)
}

/// For every `s ∈ S_n`, the residual of `slice_expectation(π(s))` against
/// the finite-level image of `π(T_∞)''`: the algebra generated by
/// `{π(t) : t ∈ T_n}` and the limit operators on factors `1..n`. The
/// residual against the bare span of `{π(t)}` is reported alongside.
pub fn commuting_square_membership(kappa: &ThomaParameter, n: usize, limits: &Limits) -> Result<MembershipReport> {
    let index = IndexSet::from_parameter(kappa)?;
    index.dimension(n, limits)?;
    let subgroup = enumerate_group(n, 1, limits)?
        .map(|t| represent::<BigRational>(&index, &t, n, limits))
        .collect::<Result<Vec<_>>>()?;
    let algebra = stabilizer_algebra_basis(&index, n, limits)?;
    let algebra_span = OperatorSpan::new(&algebra);
    let subgroup_span = OperatorSpan::new(&subgroup);
    let mut max_residual = 0.0f64;
    let mut subgroup_span_residual = 0.0f64;
    let mut elements_checked = 0;
    for s in enumerate_group(n, 0, limits)? {
        let sliced = slice_expectation(&index, &represent::<BigRational>(&index, &s, n, limits)?);
        max_residual = max_residual.max(algebra_span.residual(&sliced));
        subgroup_span_residual = subgroup_span_residual.max(subgroup_span.residual(&sliced));
        elements_checked += 1;
    }
    Ok(MembershipReport {
        n,
        elements_checked,
        max_residual,
        subgroup_span_residual,
        algebra_dimension: algebra_span.rank(),
    })
}

/// A spectral projection `f_k`: the points of `X` sharing one density value
/// on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralBlock {
    /// `1, 2, …` for the groups of `α`, `-1, -2, …` for those of `β`.
    pub label: i64,
    pub value: BigRational,
    pub points: Vec<i64>,
}

impl SpectralBlock {
    /// `sign(k) γ_k`.
    pub fn signed_value(&self) -> BigRational {
        if self.label < 0 {
            -self.value.clone()
        } else {
            self.value.clone()
        }
    }

    pub fn projection(&self, index: &IndexSet) -> TensorOperator<BigRational> {
        let mut op = TensorOperator::zero(1, index.len());
        for &p in &self.points {
            let pos = index.position(p).expect("block points belong to the index set");
            op.set(pos, pos, BigRational::one());
        }
        op
    }
}

pub fn spectral_blocks(index: &IndexSet) -> Vec<SpectralBlock> {
    let mut blocks: Vec<SpectralBlock> = Vec::new();
    let mut alpha_label = 0;
    let mut beta_label = 0;
    // positives in increasing index order, then negatives from -1 downwards
    let positives = index.points().iter().zip(index.density()).filter(|(p, _)| **p > 0);
    let negatives = index.points().iter().zip(index.density()).rev().filter(|(p, _)| **p < 0);
    for (&point, value) in positives.chain(negatives) {
        match blocks.last_mut() {
            Some(b) if b.value == *value && (b.label > 0) == (point > 0) => b.points.push(point),
            _ => {
                let label = if point > 0 {
                    alpha_label += 1;
                    alpha_label
                } else {
                    beta_label -= 1;
                    beta_label
                };
                blocks.push(SpectralBlock {
                    label,
                    value: value.clone(),
                    points: vec![point],
                });
            }
        }
    }
    blocks
}

/// The scalar of `ψ_n(π(s))` on block `k`, evaluated as the orbit sum
/// `(sign(k)γ_k)^{#ω_0-1} Σ_{x_1..x_r} Π_q γ_{x_q}^{#ω_q} Π_{x_q<0} (-1)^{#ω_q-1}`.
pub fn psi_scalar(index: &IndexSet, block: &SpectralBlock, s: &Permutation) -> BigRational {
    let orbits = s.orbits();
    let head = orbits.iter().find(|o| o.contains(&0)).map_or(1, Vec::len);
    let others: Vec<usize> = orbits
        .iter()
        .filter(|o| !o.contains(&0) && o.len() > 1)
        .map(Vec::len)
        .collect();
    let prefix = num::pow(block.signed_value(), head - 1);
    let m = index.len();
    let mut sum = BigRational::zero();
    let combos = m.pow(others.len() as u32);
    for code in 0..combos {
        let choice = index.decode(code, others.len());
        let mut term = BigRational::one();
        for (&pos, &len) in choice.iter().zip(&others) {
            term *= num::pow(index.density()[pos].clone(), len);
            if index.points()[pos] < 0 && (len - 1) % 2 == 1 {
                term = -term;
            }
        }
        sum += term;
    }
    prefix * sum
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalProjectionReport {
    pub n: usize,
    pub blocks: Vec<SpectralBlock>,
    /// Largest entry of `[f_k ⊗ 1, π(t)]` over blocks and `t ∈ T_n`.
    pub max_commutator: f64,
    /// Largest entry of `ψ_n(π(s)) - c_k(s) f_k` over blocks and `s ∈ S_n`.
    pub max_psi_error: f64,
    pub elements_checked: usize,
}

pub fn minimal_projection_suite(kappa: &ThomaParameter, n: usize, limits: &Limits) -> Result<MinimalProjectionReport> {
    let index = IndexSet::from_parameter(kappa)?;
    index.dimension(n, limits)?;
    let blocks = spectral_blocks(&index);
    let projections: Vec<TensorOperator<BigRational>> = blocks.iter().map(|b| b.projection(&index)).collect();
    let lifted: Vec<TensorOperator<BigRational>> = projections.iter().map(|f| f.extend(n)).collect();

    let mut max_commutator = 0.0f64;
    for t in enumerate_group(n, 1, limits)? {
        let image = represent::<BigRational>(&index, &t, n, limits)?;
        for f in &lifted {
            max_commutator = max_commutator.max(f.commutator(&image).max_abs());
        }
    }

    let mut max_psi_error = 0.0f64;
    let mut elements_checked = 0;
    for s in enumerate_group(n, 0, limits)? {
        let reduced = first_factor_expectation(&index, &represent::<BigRational>(&index, &s, n, limits)?);
        for (block, f) in blocks.iter().zip(&projections) {
            let psi = &(f * &reduced) * f;
            let predicted = f.scale(&psi_scalar(&index, block, &s));
            max_psi_error = max_psi_error.max((&psi - &predicted).max_abs());
        }
        elements_checked += 1;
    }
    Ok(MinimalProjectionReport {
        n,
        blocks,
        max_commutator,
        max_psi_error,
        elements_checked,
    })
}

#[derive(Clone, Debug)]
pub struct JonesReport {
    pub alpha1: f64,
    pub alpha2: f64,
    /// `α₁ α₂`.
    pub delta: f64,
    pub projections: Vec<TensorOperator<f64>>,
    pub max_idempotent_error: f64,
    pub max_self_adjoint_error: f64,
    /// Largest entry of `p_i p_{i±1} p_i - δ p_i`.
    pub max_tl_error: f64,
    /// Largest entry of `[p_i, p_j]` for `|i - j| > 1`.
    pub max_far_commutator: f64,
}

impl JonesReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_idempotent_error <= tolerance
            && self.max_self_adjoint_error <= tolerance
            && self.max_tl_error <= tolerance
            && self.max_far_commutator <= tolerance
    }
}

/// `p_n = α₂ e¹¹⊗e²² + α₁ e²²⊗e¹¹ + √(α₁α₂)(e¹²⊗e²¹ + e²¹⊗e¹²)` on sites
/// `n-1, n` of a chain of `L + 1` two-dimensional sites, `n = 1, …, L`.
pub fn jones_projections(alpha1: &BigRational, chain: usize, limits: &Limits) -> Result<JonesReport> {
    let half = BigRational::new(1.into(), 2.into());
    if *alpha1 <= half || *alpha1 >= BigRational::one() {
        return Err(Error::Domain {
            value: alpha1.to_string(),
            domain: "1/2 < alpha1 < 1",
        });
    }
    let sites = chain + 1;
    let dim = 1u128.checked_shl(sites as u32).unwrap_or(u128::MAX);
    if dim > limits.dimension {
        return Err(Error::CapExceeded {
            what: "Jones chain dimension",
            requested: dim,
            limit: limits.dimension,
        });
    }
    let a1 = rational_to_f64(alpha1);
    let a2 = rational_to_f64(&(BigRational::one() - alpha1));
    let delta = a1 * a2;
    let root = delta.sqrt();
    let e = |a: usize, b: usize| TensorOperator::<f64>::unit(2, a, b);
    let local = &(&(&e(0, 0).kron(&e(1, 1)).scale(&a2) + &e(1, 1).kron(&e(0, 0)).scale(&a1))
        + &e(0, 1).kron(&e(1, 0)).scale(&root))
        + &e(1, 0).kron(&e(0, 1)).scale(&root);
    let projections: Vec<TensorOperator<f64>> = (1..=chain)
        .map(|n| {
            let before = TensorOperator::<f64>::identity(n - 1, 2);
            before.kron(&local).extend(sites)
        })
        .collect();

    let mut max_idempotent_error = 0.0f64;
    let mut max_self_adjoint_error = 0.0f64;
    let mut max_tl_error = 0.0f64;
    let mut max_far_commutator = 0.0f64;
    for (i, p) in projections.iter().enumerate() {
        max_idempotent_error = max_idempotent_error.max((&(p * p) - p).max_abs());
        max_self_adjoint_error = max_self_adjoint_error.max((&p.adjoint() - p).max_abs());
        for (j, q) in projections.iter().enumerate() {
            if i.abs_diff(j) == 1 {
                let pqp = &(p * q) * p;
                max_tl_error = max_tl_error.max((&pqp - &p.scale(&delta)).max_abs());
            } else if i.abs_diff(j) > 1 {
                max_far_commutator = max_far_commutator.max(p.commutator(q).max_abs());
            }
        }
    }
    Ok(JonesReport {
        alpha1: a1,
        alpha2: a2,
        delta,
        projections,
        max_idempotent_error,
        max_self_adjoint_error,
        max_tl_error,
        max_far_commutator,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PimsnerPopa {
    /// `E(y) ≥ C y` with `C = δ (m_α + m_β)^{-2}`; the index is at most `1/C`.
    Finite {
        delta: BigRational,
        constant: BigRational,
        index_bound: BigRational,
    },
    InfiniteIndex,
}

pub fn pimsner_popa_bound(kappa: &ThomaParameter) -> PimsnerPopa {
    if kappa.is_faithful() {
        return PimsnerPopa::InfiniteIndex;
    }
    let delta = kappa
        .alpha()
        .last()
        .into_iter()
        .chain(kappa.beta().last())
        .min()
        .cloned()
        .expect("gamma = 0 forces a nonempty side");
    let size = BigRational::from_integer(BigInt::from(kappa.m_alpha() + kappa.m_beta()));
    let constant = &delta / (&size * &size);
    PimsnerPopa::Finite {
        index_bound: BigRational::one() / &constant,
        delta,
        constant,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub constant: f64,
    pub samples: usize,
    /// Smallest eigenvalue of `slice_expectation(y) - C y` seen.
    pub min_eigenvalue: f64,
}

/// Tests `slice_expectation(y) ≥ C y` on seeded random positive operators
/// `y = A Aᵀ` supported on the first two factors.
pub fn pimsner_popa_inequality(kappa: &ThomaParameter, samples: usize, seed: u64) -> Result<InequalityReport> {
    let index = IndexSet::from_parameter(kappa)?;
    let PimsnerPopa::Finite { constant, .. } = pimsner_popa_bound(kappa) else {
        unreachable!("gamma = 0 was checked");
    };
    let c = rational_to_f64(&constant);
    let m = index.len();
    let dim = m * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_eigenvalue = f64::INFINITY;
    for _ in 0..samples {
        let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        let y = &a * a.transpose();
        let mut op = TensorOperator::<f64>::zero(2, m);
        for i in 0..dim {
            for j in 0..dim {
                op.set(i, j, y[(i, j)]);
            }
        }
        let gap = slice_expectation(&index, &op).to_dense() - y.scale(c);
        let sym = (&gap + gap.transpose()).scale(0.5);
        let smallest = sym.symmetric_eigenvalues().min();
        min_eigenvalue = min_eigenvalue.min(smallest);
    }
    Ok(InequalityReport {
        constant: c,
        samples,
        min_eigenvalue,
    })
}

/// One named verification with its measured value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// The invariant battery for the representation at tensor degree `n`:
/// homomorphism and unitarity, trace pullback, the `T_k` expectation rate,
/// span membership of slice expectations, minimal projections and the
/// Pimsner–Popa inequality. Checks that need exhaustive enumeration are
/// restricted to the sizes where they are cheap.
pub fn verification_suite(
    kappa: &ThomaParameter,
    n: usize,
    tolerance: f64,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<Check>> {
    let index = IndexSet::from_parameter(kappa)?;
    index.dimension(n, limits)?;
    let mut checks = Vec::new();
    let group: Vec<Permutation> = enumerate_group(n, 0, limits)?.collect();
    let images: HashMap<Permutation, TensorOperator<BigRational>> = group
        .iter()
        .map(|s| Ok((s.clone(), represent::<BigRational>(&index, s, n, limits)?)))
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = if n <= 4 {
        (0..group.len()).flat_map(|a| (0..group.len()).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..200).map(|_| (rng.gen_range(0..group.len()), rng.gen_range(0..group.len()))).collect()
    };
    let identity = TensorOperator::<BigRational>::identity(n, index.len());
    let mut homomorphism = true;
    for &(a, b) in &pairs {
        let (s, t) = (&group[a], &group[b]);
        if &images[s] * &images[t] != images[&s.compose(t)] {
            homomorphism = false;
        }
    }
    let unitary = images.values().all(|u| &u.adjoint() * u == identity);
    checks.push(Check::new(
        "homomorphism",
        homomorphism,
        format!("{} products compared", pairs.len()),
    ));
    checks.push(Check::new("unitarity", unitary, format!("{} images", images.len())));

    let pullback = group
        .iter()
        .all(|s| state_value(&index, &images[s]) == kappa.character(&s.cycle_type()));
    checks.push(Check::new("trace-pullback", pullback, format!("all of S_{n}")));

    let mut rate = true;
    let mut details = Vec::new();
    for k in 3..=n {
        let r = relcomm_expectation_matrix(kappa, k, k, limits)?;
        rate &= r.deviation_sq == r.predicted_sq;
        details.push(format!("k={k}: {}", r.deviation_sq));
    }
    checks.push(Check::new("relcomm-rate", rate, details.join(", ")));

    if n <= 4 {
        let m = commuting_square_membership(kappa, n, limits)?;
        checks.push(Check::new(
            "commuting-square-membership",
            m.max_residual <= tolerance,
            format!("max residual {:e}", m.max_residual),
        ));
    }
    if n <= 5 {
        let mp = minimal_projection_suite(kappa, n, limits)?;
        checks.push(Check::new(
            "minimal-projections-commute",
            mp.max_commutator <= tolerance,
            format!("{} blocks, max commutator {:e}", mp.blocks.len(), mp.max_commutator),
        ));
        checks.push(Check::new(
            "psi-scalar",
            mp.max_psi_error <= tolerance,
            format!("max error {:e}", mp.max_psi_error),
        ));
    }
    let ineq = pimsner_popa_inequality(kappa, 100, seed)?;
    checks.push(Check::new(
        "pimsner-popa-inequality",
        ineq.min_eigenvalue >= -tolerance,
        format!("C = {}, min eigenvalue {:e}", ineq.constant, ineq.min_eigenvalue),
    ));
    Ok(checks)
}

/// Converts exact entries to floating point.
pub fn to_float(op: &TensorOperator<BigRational>) -> TensorOperator<f64> {
    TensorOperator {
        degree: op.degree,
        base: op.base,
        entries: op
            .entries
            .iter()
            .map(|(&k, v)| (k, v.to_f64().unwrap_or_else(|| rational_to_f64(v))))
            .collect(),
    }
}
