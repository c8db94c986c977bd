//! Entropy quantities attached to a Thoma parameter. Natural logarithms
//! throughout.

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupalg::algebra_entropy;
use crate::thoma::ThomaParameter;
use crate::young::rational_to_f64;
use crate::Limits;

/// `η(t) = -t ln t`, with `η(0) = 0`.
pub fn eta(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain {
            value: t.to_string(),
            domain: "[0, 1]",
        });
    }
    Ok(if t == 0.0 { 0.0 } else { -t * t.ln() })
}

fn eta_q(q: &BigRational) -> f64 {
    eta(rational_to_f64(q)).expect("parameter entries lie in [0, 1]")
}

/// `Σ η(α_i) + Σ η(β_j)`, the entropy of the shift.
pub fn shift_entropy(kappa: &ThomaParameter) -> f64 {
    kappa.alpha().iter().chain(kappa.beta()).map(eta_q).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub total: f64,
    pub center: f64,
    pub total_per_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub shift_entropy: f64,
    /// `2 h(σ)`.
    pub upper_bound: f64,
    /// `γ = 0` and no value repeats within `α` or within `β`.
    pub equality_applicable: bool,
    pub equality_value: Option<f64>,
    pub growth_table: Vec<GrowthRow>,
}

fn has_repeat(values: &[BigRational]) -> bool {
    // entries are sorted nonincreasing
    values.windows(2).any(|w| w[0] == w[1])
}

pub fn relative_entropy_bounds(kappa: &ThomaParameter) -> EntropyReport {
    let shift = shift_entropy(kappa);
    let upper_bound = 2.0 * shift;
    let equality_applicable = kappa.gamma().is_zero() && !has_repeat(kappa.alpha()) && !has_repeat(kappa.beta());
    EntropyReport {
        shift_entropy: shift,
        upper_bound,
        equality_applicable,
        equality_value: equality_applicable.then(|| block_formula_default(kappa)),
        growth_table: Vec::new(),
    }
}

/// Traces `τ(f_k)` of the spectral projections obtained by grouping equal
/// values of `α` and of `β`: each is the common value times its multiplicity.
pub fn block_traces(kappa: &ThomaParameter) -> Vec<BigRational> {
    let mut out = Vec::new();
    for side in [kappa.alpha(), kappa.beta()] {
        let mut i = 0;
        while i < side.len() {
            let mut j = i;
            while j < side.len() && side[j] == side[i] {
                j += 1;
            }
            out.push(&side[i] * BigRational::from_integer((j - i).into()));
            i = j;
        }
    }
    out
}

/// `2 Σ η(τ(f_k)) + Σ τ(f_k) ln(index_k)` for caller-supplied reduced
/// indices, one per entry of [`block_traces`].
pub fn block_formula(kappa: &ThomaParameter, reduced_indices: &[f64]) -> Result<f64> {
    let traces = block_traces(kappa);
    if traces.len() != reduced_indices.len() {
        return Err(Error::SizeMismatch {
            expected: traces.len(),
            found: reduced_indices.len(),
        });
    }
    let mut h = 0.0;
    for (t, &idx) in traces.iter().zip(reduced_indices) {
        if idx <= 0.0 {
            return Err(Error::Domain {
                value: idx.to_string(),
                domain: "reduced index > 0",
            });
        }
        h += 2.0 * eta_q(t) + rational_to_f64(t) * idx.ln();
    }
    Ok(h)
}

/// The block formula with every reduced index equal to one.
pub fn block_formula_default(kappa: &ThomaParameter) -> f64 {
    let ones = vec![1.0; block_traces(kappa).len()];
    block_formula(kappa, &ones).expect("one index per block")
}

/// Finite-level entropies of `C S_n` for `n = 1, …, n_max`, reported next to
/// the shift entropy. Observational only.
pub fn entropy_growth_experiment(kappa: &ThomaParameter, n_max: usize, limits: &Limits) -> Result<EntropyReport> {
    let mut report = relative_entropy_bounds(kappa);
    for n in 1..=n_max {
        let h = algebra_entropy(kappa, n, limits)?;
        report.growth_table.push(GrowthRow {
            n,
            total: h.total,
            center: h.center,
            total_per_n: h.total / n as f64,
        });
    }
    Ok(report)
}
