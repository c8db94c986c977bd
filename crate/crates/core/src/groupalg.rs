//! The group algebra of `S_n` with rational coefficients, equipped with the
//! trace `τ_κ`: norms, conditional expectations, the commuting-square test,
//! block weights of the trace, small projections and finite entropies.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::entropy::eta;
use crate::error::{Error, Result};
use crate::linalg::{self, RowReduction};
use crate::perm::{enumerate_group, factorial, CycleType, Permutation, Subgroup};
use crate::thoma::ThomaParameter;
use crate::young::{enumerate_cycle_types, enumerate_partitions, rational_to_f64, CharacterMemo, YoungDiagram};
use crate::Limits;

/// A finitely supported rational combination of permutations. Every stored
/// permutation has degree exactly `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    degree: usize,
    coeffs: BTreeMap<Permutation, BigRational>,
}

impl AlgebraElement {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::basis(&Permutation::identity(degree))
    }

    /// The point mass `δ_s`.
    pub fn basis(s: &Permutation) -> Self {
        let mut x = Self::zero(s.degree());
        x.coeffs.insert(s.clone(), BigRational::one());
        x
    }

    pub fn from_terms<I>(degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Permutation, BigRational)>,
    {
        let mut x = Self::zero(degree);
        for (s, c) in terms {
            x.add_term(&s, c);
        }
        x
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, s: &Permutation) -> BigRational {
        self.coeffs
            .get(&s.embed(self.degree))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Extends every term by fixed points.
    pub fn embed(&self, degree: usize) -> Self {
        if degree <= self.degree {
            return self.clone();
        }
        Self {
            degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, c)| (s.embed(degree), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, s: &Permutation, c: BigRational) {
        if c.is_zero() {
            return;
        }
        if s.degree() > self.degree {
            *self = self.embed(s.degree());
        }
        let key = s.embed(self.degree);
        let entry = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            let key = s.embed(self.degree);
            self.coeffs.remove(&key);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    /// `Σ c_s s⁻¹`; coefficients are real.
    pub fn adjoint(&self) -> Self {
        Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, c)| (s.inverse(), c.clone()))
                .collect(),
        }
    }

    /// `Σ c_s τ(s)`.
    pub fn trace(&self, kappa: &ThomaParameter) -> BigRational {
        let mut cache = TraceCache::new(kappa);
        self.coeffs
            .iter()
            .map(|(s, c)| c * cache.value(s))
            .sum()
    }

    /// `τ(x* x)`.
    pub fn two_norm_sq(&self, kappa: &ThomaParameter) -> BigRational {
        inner_product(kappa, self, self)
    }

    pub fn commutes_with(&self, other: &AlgebraElement) -> bool {
        self * other == other * self
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (j, (s, c)) in self.coeffs.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{s}")?;
        }
        Ok(())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.embed(rhs.degree);
        for (s, c) in &rhs.coeffs {
            out.add_term(s, c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.embed(rhs.degree);
        for (s, c) in &rhs.coeffs {
            out.add_term(s, -c.clone());
        }
        out
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    /// Convolution: `δ_s · δ_t = δ_{st}`.
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let degree = self.degree.max(rhs.degree);
        let mut out = AlgebraElement::zero(degree);
        for (s, a) in &self.coeffs {
            for (t, b) in &rhs.coeffs {
                out.add_term(&s.compose(t), a * b);
            }
        }
        out
    }
}

/// `τ` with values memoized per cycle type.
pub struct TraceCache<'a> {
    kappa: &'a ThomaParameter,
    values: HashMap<CycleType, BigRational>,
}

impl<'a> TraceCache<'a> {
    pub fn new(kappa: &'a ThomaParameter) -> Self {
        Self {
            kappa,
            values: HashMap::new(),
        }
    }

    pub fn value(&mut self, s: &Permutation) -> BigRational {
        self.class_value(&s.cycle_type())
    }

    pub fn class_value(&mut self, class: &CycleType) -> BigRational {
        // padding by fixed points does not change the value
        let key = CycleType::from_lengths(class.lengths().iter().copied().filter(|&l| l > 1).collect());
        let kappa = self.kappa;
        self.values
            .entry(key)
            .or_insert_with_key(|k| kappa.character(k))
            .clone()
    }
}

/// GNS inner product `⟨x, y⟩ = τ(y* x)`.
pub fn inner_product(kappa: &ThomaParameter, x: &AlgebraElement, y: &AlgebraElement) -> BigRational {
    let mut cache = TraceCache::new(kappa);
    let mut total = BigRational::zero();
    for (s, a) in &x.coeffs {
        for (t, b) in &y.coeffs {
            total += a * b * cache.value(&t.inverse().compose(s));
        }
    }
    total
}

/// Average of `t x t⁻¹` over `t ∈ T_k`: the conditional expectation onto the
/// relative commutant of `T_k`.
pub fn cond_exp_relcomm_tk(x: &AlgebraElement, k: usize, limits: &Limits) -> Result<AlgebraElement> {
    let degree = x.degree.max(k);
    let x = x.embed(degree);
    let group: Vec<Permutation> = enumerate_group(k, 1, limits)?.map(|t| t.embed(degree)).collect();
    let weight = BigRational::new(BigInt::one(), BigInt::from(group.len()));
    let mut out = AlgebraElement::zero(degree);
    for t in &group {
        for (s, c) in &x.coeffs {
            out.add_term(&s.conjugate_by(t), c * &weight);
        }
    }
    Ok(out)
}

/// Orthogonal projection, in the GNS inner product of `τ_κ`, onto the span
/// of a subgroup. For a degenerate form the projection is only defined
/// modulo the null space; the returned representative is the basic solution
/// of the normal equations under a fixed pivot order.
pub struct SubalgebraProjector<'a> {
    kappa: &'a ThomaParameter,
    subgroup: Subgroup,
    elements: Vec<Permutation>,
    inverses: Vec<Permutation>,
    reduction: RowReduction,
}

impl<'a> SubalgebraProjector<'a> {
    pub fn new(kappa: &'a ThomaParameter, subgroup: Subgroup, limits: &Limits) -> Result<Self> {
        let elements = subgroup.elements(limits)?;
        let inverses: Vec<Permutation> = elements.iter().map(Permutation::inverse).collect();
        let mut cache = TraceCache::new(kappa);
        let gram: linalg::Matrix = inverses
            .iter()
            .map(|hi| elements.iter().map(|h| cache.value(&hi.compose(h))).collect())
            .collect();
        Ok(Self {
            kappa,
            subgroup,
            elements,
            inverses,
            reduction: RowReduction::new(&gram),
        })
    }

    pub fn subgroup(&self) -> Subgroup {
        self.subgroup
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Coordinates of the projection of `x` in the subgroup basis.
    pub fn coordinates(&self, x: &AlgebraElement) -> Vec<BigRational> {
        let mut cache = TraceCache::new(self.kappa);
        let rhs: Vec<BigRational> = self
            .inverses
            .iter()
            .map(|hi| {
                x.coeffs
                    .iter()
                    .map(|(s, c)| c * cache.value(&hi.compose(s)))
                    .sum()
            })
            .collect();
        self.reduction
            .solve(&rhs)
            .expect("normal equations of a positive semidefinite form are consistent")
    }

    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        let coords = self.coordinates(x);
        let degree = x.degree.max(self.subgroup.hi);
        AlgebraElement::from_terms(degree, self.elements.iter().cloned().zip(coords))
    }
}

/// Trace-preserving conditional expectation onto the span of a subgroup.
pub fn cond_exp_subalgebra(
    kappa: &ThomaParameter,
    x: &AlgebraElement,
    subgroup: Subgroup,
    limits: &Limits,
) -> Result<AlgebraElement> {
    Ok(SubalgebraProjector::new(kappa, subgroup, limits)?.project(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingSquareReport {
    pub n: usize,
    /// `τ((0 1)(1 2))`.
    pub three_cycle: BigRational,
    /// `τ((0 1)) τ((1 2))`.
    pub product: BigRational,
    /// Whether `E_{S_n} ∘ E_{T_{n+1}} = E_{T_n}` on all of `C S_{n+1}`.
    pub commuting: bool,
}

impl CommutingSquareReport {
    pub fn quick_test_passes(&self) -> bool {
        self.three_cycle == self.product
    }
}

/// The necessary condition `τ((0 1)(1 2)) = τ((0 1)) τ((1 2))`.
pub fn commuting_square_quick(kappa: &ThomaParameter) -> (BigRational, BigRational) {
    let t = kappa.second_moment();
    (kappa.third_moment(), &t * &t)
}

/// Checks that the square `C T_n ⊂ C T_{n+1}`, `C S_n ⊂ C S_{n+1}` commutes,
/// comparing the two sides modulo the null space of the trace.
pub fn commuting_square_check(kappa: &ThomaParameter, n: usize, limits: &Limits) -> Result<CommutingSquareReport> {
    if n + 1 > limits.square_degree {
        return Err(Error::CapExceeded {
            what: "commuting-square degree",
            requested: (n + 1) as u128,
            limit: limits.square_degree as u128,
        });
    }
    let (three_cycle, product) = commuting_square_quick(kappa);
    let onto_s = SubalgebraProjector::new(kappa, Subgroup::symmetric(n), limits)?;
    let onto_t_big = SubalgebraProjector::new(kappa, Subgroup::stabilizer(n + 1), limits)?;
    let onto_t = SubalgebraProjector::new(kappa, Subgroup::stabilizer(n), limits)?;

    let s_elems = onto_s.elements();
    let s_index: HashMap<Permutation, usize> = s_elems
        .iter()
        .enumerate()
        .map(|(i, s)| (s.embed(n + 1), i))
        .collect();
    // E_{S_n} of each basis element of T_{n+1}, as S_n coordinates
    let through: Vec<Vec<BigRational>> = onto_t_big
        .elements()
        .iter()
        .map(|h| onto_s.coordinates(&AlgebraElement::basis(h)))
        .collect();
    let mut cache = TraceCache::new(kappa);
    let gram: linalg::Matrix = s_elems
        .iter()
        .map(|a| {
            let ai = a.inverse();
            s_elems.iter().map(|b| cache.value(&ai.compose(b))).collect()
        })
        .collect();

    let mut commuting = true;
    for g in enumerate_group(n + 1, 0, limits)? {
        let delta = AlgebraElement::basis(&g);
        let mut diff = vec![BigRational::zero(); s_elems.len()];
        for (c, row) in onto_t_big.coordinates(&delta).iter().zip(&through) {
            if c.is_zero() {
                continue;
            }
            for (d, r) in diff.iter_mut().zip(row) {
                if !r.is_zero() {
                    *d += c * r;
                }
            }
        }
        for (t, c) in onto_t.elements().iter().zip(onto_t.coordinates(&delta)) {
            let i = s_index[&t.embed(n + 1)];
            diff[i] -= c;
        }
        // null in the GNS form iff the Gram matrix kills it
        if linalg::mat_vec(&gram, &diff).iter().any(|v| !v.is_zero()) {
            commuting = false;
            break;
        }
    }
    Ok(CommutingSquareReport {
        n,
        three_cycle,
        product,
        commuting,
    })
}

/// Weights of `τ_κ` restricted to `C S_n` on the simple blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub degree: usize,
    pub entries: Vec<BlockWeight>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockWeight {
    pub diagram: YoungDiagram,
    pub dimension: BigInt,
    pub weight: BigRational,
}

impl BlockWeight {
    /// Trace of a minimal projection in this block.
    pub fn minimal_projection_trace(&self) -> BigRational {
        &self.weight / BigRational::from_integer(self.dimension.clone())
    }
}

impl WeightVector {
    pub fn total(&self) -> BigRational {
        self.entries.iter().map(|e| e.weight.clone()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one() && self.entries.iter().all(|e| !e.weight.is_negative())
    }

    pub fn weight(&self, diagram: &YoungDiagram) -> Option<&BigRational> {
        self.entries.iter().find(|e| &e.diagram == diagram).map(|e| &e.weight)
    }
}

/// Class data of `S_n` needed to expand a trace in irreducible characters.
struct ClassSums {
    classes: Vec<CycleType>,
    /// `|class| / n!`
    densities: Vec<BigRational>,
    values: Vec<BigRational>,
}

impl ClassSums {
    fn new(kappa: &ThomaParameter, n: usize, limits: &Limits) -> Result<Self> {
        let classes = enumerate_cycle_types(n, limits)?;
        let order = BigInt::from(factorial(n as u64));
        let densities = classes
            .iter()
            .map(|c| BigRational::new(BigInt::from(c.class_size()), order.clone()))
            .collect();
        let values = classes.iter().map(|c| kappa.character(c)).collect();
        Ok(Self {
            classes,
            densities,
            values,
        })
    }

    /// `w_λ = d_λ Σ_c (|c|/n!) τ(c) χ_λ(c)`.
    fn weight(&self, shape: &YoungDiagram, memo: &mut CharacterMemo) -> Result<BlockWeight> {
        let dimension = BigInt::from(shape.dimension());
        let mut sum = BigRational::zero();
        for ((c, dens), val) in self.classes.iter().zip(&self.densities).zip(&self.values) {
            if val.is_zero() {
                continue;
            }
            let chi = memo.value(shape, c)?;
            sum += dens * val * BigRational::from_integer(chi);
        }
        Ok(BlockWeight {
            diagram: shape.clone(),
            weight: sum * BigRational::from_integer(dimension.clone()),
            dimension,
        })
    }
}

fn check_weight_cap(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.weight_degree {
        return Err(Error::CapExceeded {
            what: "block-weight degree",
            requested: n as u128,
            limit: limits.weight_degree as u128,
        });
    }
    Ok(())
}

pub fn block_weights(kappa: &ThomaParameter, n: usize, limits: &Limits) -> Result<WeightVector> {
    check_weight_cap(n, limits)?;
    let sums = ClassSums::new(kappa, n, limits)?;
    let mut memo = CharacterMemo::default();
    let entries = enumerate_partitions(n, limits)?
        .iter()
        .map(|shape| sums.weight(shape, &mut memo))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightVector { degree: n, entries })
}

#[derive(Clone, Debug)]
pub struct SmallProjectionSearch {
    /// Largest staircase size tried; the weight cap also bounds the search.
    pub max_k: usize,
    /// Scan every diagram of each size instead of the staircase only.
    pub exhaustive: bool,
}

impl Default for SmallProjectionSearch {
    fn default() -> Self {
        Self {
            max_k: usize::MAX,
            exhaustive: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallProjection {
    pub n: usize,
    pub diagram: YoungDiagram,
    pub dimension: BigInt,
    pub weight: BigRational,
    /// `w_λ / d_λ`, the trace of a minimal projection of the block.
    pub trace: BigRational,
}

/// First block `λ ⊢ n = k(k+1)/2`, walking `k = 1, 2, …`, with a minimal
/// projection of trace in `(0, ε^n)`. `None` when nothing qualifies within
/// the limits.
pub fn find_small_projection(
    kappa: &ThomaParameter,
    epsilon: &BigRational,
    search: &SmallProjectionSearch,
    limits: &Limits,
) -> Result<Option<SmallProjection>> {
    if !epsilon.is_positive() {
        return Err(Error::Domain {
            value: epsilon.to_string(),
            domain: "epsilon > 0",
        });
    }
    let mut memo = CharacterMemo::default();
    for k in 1..=search.max_k {
        let n = k * (k + 1) / 2;
        if n > limits.weight_degree || n > limits.partition_degree {
            break;
        }
        let sums = ClassSums::new(kappa, n, limits)?;
        let bound = num::pow(epsilon.clone(), n);
        let candidates = if search.exhaustive {
            enumerate_partitions(n, limits)?
        } else {
            vec![YoungDiagram::staircase(k)]
        };
        for shape in candidates {
            let block = sums.weight(&shape, &mut memo)?;
            let trace = block.minimal_projection_trace();
            if trace.is_positive() && trace < bound {
                return Ok(Some(SmallProjection {
                    n,
                    diagram: shape,
                    dimension: block.dimension,
                    weight: block.weight,
                    trace,
                }));
            }
        }
    }
    Ok(None)
}

/// Entropy of the trace on the multi-matrix algebra `C S_n` and of its
/// restriction to the center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraEntropy {
    pub total: f64,
    pub center: f64,
}

pub fn entropy_of_weights(weights: &WeightVector) -> AlgebraEntropy {
    let mut total = 0.0;
    let mut center = 0.0;
    for e in &weights.entries {
        let w = rational_to_f64(&e.weight);
        let h = eta(w).expect("weights lie in [0, 1]");
        center += h;
        total += h + w * rational_to_f64(&BigRational::from_integer(e.dimension.clone())).ln();
    }
    AlgebraEntropy { total, center }
}

pub fn algebra_entropy(kappa: &ThomaParameter, n: usize, limits: &Limits) -> Result<AlgebraEntropy> {
    Ok(entropy_of_weights(&block_weights(kappa, n, limits)?))
}
