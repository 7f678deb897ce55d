//! Partitions `Γ(i, r)`, Schur polynomials `S_λ = det(c_{λⱼ−j+k})`, their
//! evaluation on Chern forms, and the sampled checks of Schur-form
//! nonnegativity and of the chain `0 ≤ cᵢ ≤ c_λ ≤ c₁ⁱ`.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chern::{chern_forms, top_coefficient, ChernFormSet, PrefactorMode};
use crate::curvature::{bott_chern_curvature, factor_from_tensor, CurvatureTensor};
use crate::error::{Error, Result};
use crate::forms::{nonnegative_sampled, Form, VerdictReport};
use crate::matrix::expand_determinant;
use crate::polynomial::ChernPolynomial;
use crate::random::mix_seed;
use crate::scalar::Coeff;

/// `r ≥ λ₁ ≥ … ≥ λᵢ ≥ 0` with `Σ λⱼ = i`; trailing zeros are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
    bound: u32,
}

impl Partition {
    /// Pads `parts` with zeros to length equal to the weight.
    pub fn new(parts: &[u32], bound: u32) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidPartition {
            parts: parts.to_vec(),
            reason: reason.to_string(),
        };
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid("parts must be weakly decreasing"));
        }
        let weight: u32 = parts.iter().sum();
        if weight == 0 {
            return Err(invalid("weight must be positive"));
        }
        if parts.first().copied().unwrap_or(0) > bound {
            return Err(invalid("largest part exceeds the bound"));
        }
        let mut padded: Vec<u32> = parts.to_vec();
        while padded.last() == Some(&0) && padded.len() > weight as usize {
            padded.pop();
        }
        if padded.len() > weight as usize {
            return Err(invalid("more nonzero parts than the weight"));
        }
        padded.resize(weight as usize, 0);
        Ok(Partition {
            parts: padded,
            bound,
        })
    }

    /// Parts, zero-padded to length equal to the weight.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn nonzero_parts(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts.iter().copied().filter(|&p| p > 0)
    }

    pub fn weight(&self) -> usize {
        self.parts.len()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }
}

/// Trailing zeros trimmed: `(2,1)`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.nonzero_parts().map(|p| p.to_string()).collect();
        write!(f, "({})", shown.join(","))
    }
}

/// `Γ(i, r)` in lexicographically descending order.
pub fn partitions(i: usize, r: usize) -> Vec<Partition> {
    fn extend(remaining: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=cap.min(remaining)).rev() {
            prefix.push(part);
            extend(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    if i == 0 || r == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    extend(i as u32, r as u32, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|parts| Partition::new(&parts, r as u32).expect("generated partitions are valid"))
        .collect()
}

/// `det(c_{λⱼ−j+k})` with `c₀ = 1` and `c_j = 0` for `j < 0` or `j > r`;
/// `parts` need not respect the bound.
pub fn schur_determinant(parts: &[u32], r: usize) -> ChernPolynomial<BigInt> {
    let size = parts.len();
    let entry = |row: usize, col: usize| -> ChernPolynomial<BigInt> {
        let index = parts[row] as i64 - row as i64 + col as i64;
        if index < 0 || index as usize > r {
            ChernPolynomial::zero()
        } else {
            ChernPolynomial::var(index as usize)
        }
    };
    expand_determinant(size, entry, ChernPolynomial::zero(), ChernPolynomial::one())
}

/// Schur polynomial `S_λ(c₁, …, c_r)` for `λ ∈ Γ(i, r)`.
pub fn schur_polynomial(lambda: &Partition) -> ChernPolynomial<BigInt> {
    schur_determinant(&lambda.parts, lambda.bound as usize)
}

/// Substitutes `cⱼ ↦ cⱼ(E, h)` and expands with the wedge product.
///
/// In [`PrefactorMode::Exact`] the forms carry `(2π)^{deg}`, so the polynomial
/// must be homogeneous; the result then carries `(2π)^{deg}` as well.
pub fn evaluate_on_forms<C: Coeff>(
    poly: &ChernPolynomial<BigInt>,
    cs: &ChernFormSet<C>,
) -> Result<Form<C>> {
    let n = cs.base_dim();
    if cs.prefactor() == PrefactorMode::Exact
        && !poly.is_zero()
        && poly.homogeneous_degree().is_none()
    {
        return Err(Error::Inconsistent(
            "mixed-degree polynomial on Chern forms with deferred 2π factors".into(),
        ));
    }
    let mut powers: HashMap<(usize, u32), Form<C>> = HashMap::new();
    let mut result = Form::zero(n)?;
    for (monomial, coeff) in poly.terms() {
        if monomial.degree() > n {
            continue;
        }
        let mut term = Form::constant(n, C::from_bigint(coeff))?;
        for (j, &e) in monomial.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let power = powers
                .entry((j + 1, e))
                .or_insert_with(|| {
                    let base = cs.get(j + 1);
                    (0..e).fold(Form::one(n).expect("valid n"), |acc, _| acc.wedge_unchecked(&base))
                })
                .clone();
            term = term.wedge_unchecked(&power);
            if term.is_zero() {
                break;
            }
        }
        result = result.add_unchecked(&term);
    }
    Ok(result)
}

/// Per-partition entry of a Schur nonnegativity run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurEntry {
    pub degree: usize,
    pub partition: Vec<u32>,
    pub polynomial: String,
    pub verdict: VerdictReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub entries: Vec<SchurEntry>,
    pub pass: bool,
}

impl SchurReport {
    /// Smallest sampled value over all partitions.
    pub fn min_value(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.verdict.min_value)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Samples every Schur form `S_λ(c(E,h))`, `λ ∈ Γ(i, r)`, `i ∈ degrees`, of the
/// factored curvature `A ∧ Āᵗ` built from `tensor`. Degrees outside `1..=n`
/// are skipped. PASS iff every form passes [`nonnegative_sampled`].
pub fn verify_schur_nonnegativity<C: Coeff>(
    tensor: &CurvatureTensor<C>,
    degrees: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<SchurReport> {
    let n = tensor.base_dim();
    let r = tensor.rank();
    let omega = bott_chern_curvature(&factor_from_tensor(tensor));
    let cs = chern_forms(&omega).to_numeric();
    let mut entries = Vec::new();
    let lo = (*degrees.start()).max(1);
    let hi = (*degrees.end()).min(n);
    for i in lo..=hi {
        for lambda in partitions(i, r) {
            let poly = schur_polynomial(&lambda);
            let form = evaluate_on_forms(&poly, &cs)?;
            let verdict = nonnegative_sampled(&form, trials, mix_seed(seed, entries.len() as u64), tol)?;
            entries.push(SchurEntry {
                degree: i,
                partition: lambda.parts().to_vec(),
                polynomial: poly.to_string(),
                verdict,
            });
        }
    }
    let pass = entries.iter().all(|e| e.verdict.pass);
    Ok(SchurReport {
        n,
        r,
        m: tensor.columns(),
        trials,
        seed,
        tol,
        entries,
        pass,
    })
}

/// Which half of the chain a step belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainSide {
    Lower,
    Upper,
}

/// One inequality `lhs ≤ rhs` between products of Chern forms; the verdict
/// is for the difference `rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub side: ChainSide,
    pub lhs: String,
    pub rhs: String,
    pub verdict: VerdictReport,
}

/// Top-degree scalars `top(cₙ) ≤ top(c_λ) ≤ top(c₁ⁿ)`, with `(2π)^{-n}` folded in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopChain {
    pub c_top: f64,
    pub c_lambda: f64,
    pub c1_power: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub partition: Vec<u32>,
    pub degree: usize,
    pub steps: Vec<ChainStep>,
    pub top: Option<TopChain>,
    pub pass: bool,
}

/// Product of Chern indices, e.g. `[2, 1, 1]` for `c₂c₁²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ChernProduct(Vec<u32>);

impl ChernProduct {
    fn new(mut indices: Vec<u32>) -> Self {
        indices.retain(|&j| j > 0);
        indices.sort_unstable_by(|a, b| b.cmp(a));
        ChernProduct(indices)
    }

    fn label(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|j| format!("c{j}")).collect::<Vec<_>>().join("*")
    }
}

struct ProductCache<'a> {
    cs: &'a ChernFormSet<Complex64>,
    cache: HashMap<ChernProduct, Form<Complex64>>,
}

impl ProductCache<'_> {
    fn form(&mut self, product: &ChernProduct) -> Form<Complex64> {
        if let Some(f) = self.cache.get(product) {
            return f.clone();
        }
        let n = self.cs.base_dim();
        let form = product
            .0
            .iter()
            .fold(Form::one(n).expect("valid n"), |acc, &j| acc.wedge_unchecked(&self.cs.get(j as usize)));
        self.cache.insert(product.clone(), form.clone());
        form
    }
}

/// The elementary inequalities whose transitive closure gives
/// `0 ≤ cᵢ ≤ c_λ ≤ c₁ⁱ`, each as `(side, lhs, rhs)`.
///
/// Lower half: `c_w ≤ c_a·c_{w−a}` by the steps
/// `c_{w−j+1}c_{j−1} ≤ c_{w−j}c_j` (`j = 1..=min(a, w−a)`, each an `S_{(w−j,j)}`),
/// applied to the parts of λ in turn and multiplied by the parts already split off.
/// Upper half: `c_a·c₁^{b} ≤ c_{a−1}·c₁^{b+1}` (an `S_{(a−1,1)}`) for each part.
fn chain_steps(lambda: &Partition) -> Vec<(ChainSide, ChernProduct, ChernProduct)> {
    let i = lambda.weight() as u32;
    let parts: Vec<u32> = lambda.nonzero_parts().collect();
    let mut steps = vec![(ChainSide::Lower, ChernProduct::new(vec![]), ChernProduct::new(vec![i]))];
    // The empty product stands for 0 in the first step; see `bounds_chain_check`.
    let mut prefix: Vec<u32> = Vec::new();
    let mut remaining = i;
    for &a in &parts {
        let w = remaining;
        for j in 1..=a.min(w - a) {
            let with = |x: u32, y: u32| {
                let mut v = prefix.clone();
                v.extend([x, y]);
                ChernProduct::new(v)
            };
            steps.push((ChainSide::Lower, with(w - j + 1, j - 1), with(w - j, j)));
        }
        prefix.push(a);
        remaining = w - a;
    }
    let mut current: Vec<u32> = parts.clone();
    for &part in &parts {
        for a in (2..=part).rev() {
            let lhs = ChernProduct::new(current.clone());
            let pos = current.iter().position(|&x| x == a).expect("part present");
            current[pos] = a - 1;
            current.push(1);
            steps.push((ChainSide::Upper, lhs, ChernProduct::new(current.clone())));
        }
    }
    steps
}

/// Checks every elementary step of the chain `0 ≤ cᵢ ≤ c_λ ≤ c₁ⁱ` by sampling
/// the difference forms, and at top degree `i = n` the scalar ordering
/// `0 ≤ top(cₙ) ≤ top(c_λ) ≤ top(c₁ⁿ)` within `tol` times the largest
/// coefficient scale of the three forms.
pub fn bounds_chain_check<C: Coeff>(
    cs: &ChernFormSet<C>,
    lambda: &Partition,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ChainReport> {
    if !cs.is_witnessed() {
        return Err(Error::HypothesisUnmet(
            "curvature carries no factorization A ∧ Āᵗ".into(),
        ));
    }
    let i = lambda.weight();
    if i > cs.base_dim() {
        return Err(Error::InvalidPartition {
            parts: lambda.parts().to_vec(),
            reason: format!("weight exceeds base dimension {}", cs.base_dim()),
        });
    }
    if lambda.bound() as usize > cs.rank() && lambda.parts()[0] as usize > cs.rank() {
        return Err(Error::InvalidPartition {
            parts: lambda.parts().to_vec(),
            reason: format!("largest part exceeds rank {}", cs.rank()),
        });
    }
    let numeric = cs.to_numeric();
    let mut cache = ProductCache {
        cs: &numeric,
        cache: HashMap::new(),
    };
    let zero = Form::zero(cs.base_dim())?;
    let mut steps = Vec::new();
    for (index, (side, lhs, rhs)) in chain_steps(lambda).into_iter().enumerate() {
        let (lhs_form, lhs_label) = if index == 0 {
            (zero.clone(), "0".to_string())
        } else {
            (cache.form(&lhs), lhs.label())
        };
        let diff = cache.form(&rhs).try_sub(&lhs_form)?;
        let verdict = nonnegative_sampled(&diff, trials, mix_seed(seed, index as u64), tol)?;
        steps.push(ChainStep {
            side,
            lhs: lhs_label,
            rhs: rhs.label(),
            verdict,
        });
    }
    let top = if i == cs.base_dim() {
        // Same reference scale as the sampled checks: max(1, largest coefficient).
        let mut scale = 1.0f64;
        let mut value = |p: &ChernProduct, cache: &mut ProductCache| -> Result<f64> {
            let form = cache.form(p);
            scale = scale.max(form.scale());
            Ok(top_coefficient(&form)?.re)
        };
        let c_top = value(&ChernProduct::new(vec![i as u32]), &mut cache)?;
        let c_lambda = value(&ChernProduct::new(lambda.parts().to_vec()), &mut cache)?;
        let c1_power = value(&ChernProduct::new(vec![1; i]), &mut cache)?;
        let slack = tol * scale;
        let pass = c_top >= -slack && c_lambda >= c_top - slack && c1_power >= c_lambda - slack;
        Some(TopChain {
            c_top,
            c_lambda,
            c1_power,
            pass,
        })
    } else {
        None
    };
    let pass = steps.iter().all(|s| s.verdict.pass) && top.as_ref().is_none_or(|t| t.pass);
    Ok(ChainReport {
        partition: lambda.parts().to_vec(),
        degree: i,
        steps,
        top,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{CurvatureMatrix, FactorMatrix};
    use crate::scalar::GaussianRational;

    type Q = GaussianRational;
    type P = ChernPolynomial<BigInt>;

    fn c(j: usize) -> P {
        P::var(j)
    }

    fn parts(ps: &[Partition]) -> Vec<Vec<u32>> {
        ps.iter().map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(parts(&partitions(1, 3)), vec![vec![1]]);
        assert_eq!(parts(&partitions(2, 2)), vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(parts(&partitions(3, 2)), vec![vec![2, 1, 0], vec![1, 1, 1]]);
        assert_eq!(partitions(4, 4).len(), 5);
        assert!(partitions(0, 3).is_empty());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(&[1, 2], 3).is_err());
        assert!(Partition::new(&[3], 2).is_err());
        assert!(Partition::new(&[0], 2).is_err());
        let p = Partition::new(&[2, 1], 2).unwrap();
        assert_eq!(p.parts(), &[2, 1, 0]);
        assert_eq!(p.to_string(), "(2,1)");
        assert_eq!(Partition::new(&[2, 1, 0], 2).unwrap(), p);
    }

    #[test]
    fn schur_special_cases() {
        let single = Partition::new(&[3], 3).unwrap();
        assert_eq!(schur_polynomial(&single), c(3));
        let two_row = Partition::new(&[2, 2], 4).unwrap();
        assert_eq!(schur_polynomial(&two_row), &(&c(2) * &c(2)) - &(&c(3) * &c(1)));
        let column = Partition::new(&[1, 1, 1], 3).unwrap();
        let expected = &(&c(1).pow(3) - &(&c(1) * &c(2)).scale(&BigInt::from(2))) + &c(3);
        assert_eq!(schur_polynomial(&column), expected);
        assert_eq!(schur_polynomial(&column).to_string(), "c1^3 - 2*c1*c2 + c3");
    }

    #[test]
    fn bound_truncation_of_column_partition() {
        // r = 2: c3 = 0 in the column determinant.
        let column = Partition::new(&[1, 1, 1], 2).unwrap();
        let expected = &c(1).pow(3) - &(&c(1) * &c(2)).scale(&BigInt::from(2));
        assert_eq!(schur_polynomial(&column), expected);
    }

    fn diagonal_set() -> ChernFormSet<Q> {
        let zero = Form::zero(2).unwrap();
        let a = FactorMatrix::new(
            2,
            2,
            2,
            vec![Form::dz(2, 1).unwrap(), zero.clone(), zero, Form::dz(2, 2).unwrap()],
        )
        .unwrap();
        chern_forms(&bott_chern_curvature(&a))
    }

    #[test]
    fn evaluate_on_forms_examples() {
        let cs = diagonal_set();
        assert_eq!(evaluate_on_forms(&c(1), &cs).unwrap(), cs.get(1));
        assert!(evaluate_on_forms(&P::zero(), &cs).unwrap().is_zero());
        let s11 = schur_polynomial(&Partition::new(&[1, 1], 2).unwrap());
        let form = evaluate_on_forms(&s11, &cs).unwrap();
        let top = top_coefficient(&form).unwrap();
        assert_eq!(top, Q::one());
        let numeric = cs.to_numeric();
        let folded = top_coefficient(&evaluate_on_forms(&s11, &numeric).unwrap()).unwrap().re;
        assert!((folded - (2.0 * std::f64::consts::PI).powi(-2)).abs() < 1e-15);
    }

    #[test]
    fn mixed_degree_needs_numeric_prefactor() {
        let cs = diagonal_set();
        let mixed = &c(1) + &c(2);
        assert!(evaluate_on_forms(&mixed, &cs).is_err());
        assert!(evaluate_on_forms(&mixed, &cs.to_numeric()).is_ok());
    }

    #[test]
    fn chain_steps_shape() {
        let lambda = Partition::new(&[2, 1, 1], 4).unwrap();
        let steps = chain_steps(&lambda);
        let labels: Vec<(ChainSide, String, String)> = steps
            .iter()
            .map(|(s, l, r)| (*s, l.label(), r.label()))
            .collect();
        let expected = vec![
            (ChainSide::Lower, "1", "c4"),
            (ChainSide::Lower, "c4", "c3*c1"),
            (ChainSide::Lower, "c3*c1", "c2*c2"),
            (ChainSide::Lower, "c2*c2", "c2*c1*c1"),
            (ChainSide::Upper, "c2*c1*c1", "c1*c1*c1*c1"),
        ];
        let expected: Vec<(ChainSide, String, String)> = expected
            .into_iter()
            .map(|(s, l, r)| (s, l.to_string(), r.to_string()))
            .collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn chain_for_single_part_is_degenerate() {
        let lambda = Partition::new(&[3], 3).unwrap();
        let steps = chain_steps(&lambda);
        // 0 ≤ c3, then c3 ≤ c2 c1 ≤ c1³ on the upper side only.
        assert_eq!(steps.iter().filter(|s| s.0 == ChainSide::Lower).count(), 1);
        assert_eq!(steps.iter().filter(|s| s.0 == ChainSide::Upper).count(), 2);
    }

    #[test]
    fn diagonal_chain_top_values() {
        let cs = diagonal_set();
        let lambda = Partition::new(&[1, 1], 2).unwrap();
        let report = bounds_chain_check(&cs, &lambda, 30, 3, 1e-9).unwrap();
        assert!(report.pass);
        let top = report.top.unwrap();
        let unit = (2.0 * std::f64::consts::PI).powi(-2);
        assert!((top.c_top - unit).abs() < 1e-15);
        assert!((top.c_lambda - 2.0 * unit).abs() < 1e-15);
        assert!((top.c1_power - 2.0 * unit).abs() < 1e-15);
    }

    #[test]
    fn zero_curvature_chain_holds_with_equalities() {
        let t = CurvatureTensor::<Q>::zeros(2, 2, 1).unwrap();
        let cs = chern_forms(&bott_chern_curvature(&factor_from_tensor(&t)));
        for lambda in partitions(2, 2) {
            let report = bounds_chain_check(&cs, &lambda, 10, 0, 1e-9).unwrap();
            assert!(report.pass);
            let top = report.top.unwrap();
            assert_eq!((top.c_top, top.c_lambda, top.c1_power), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn unwitnessed_chain_rejected() {
        let omega = CurvatureMatrix::from_entries(
            1,
            1,
            vec![Form::<Q>::monomial(1, &[1], &[1], Q::from_i64(-1, 0)).unwrap()],
        )
        .unwrap();
        let cs = chern_forms(&omega);
        let lambda = Partition::new(&[1], 1).unwrap();
        assert!(matches!(
            bounds_chain_check(&cs, &lambda, 5, 0, 1e-9),
            Err(Error::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn verify_zero_and_rank_one() {
        let zero = CurvatureTensor::<Q>::zeros(2, 2, 2).unwrap();
        let report = verify_schur_nonnegativity(&zero, 1..=2, 10, 0, 1e-9).unwrap();
        assert!(report.pass);
        assert!(report.entries.iter().all(|e| e.verdict.min_value == 0.0));

        let t = CurvatureTensor::new(1, 1, 1, vec![Q::from_i64(2, 0)]).unwrap();
        let report = verify_schur_nonnegativity(&t, 1..=1, 20, 4, 1e-9).unwrap();
        assert!(report.pass);
        assert!(report.min_value() >= 0.0);
    }
}
