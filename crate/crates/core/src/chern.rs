//! Chern forms from the characteristic polynomial `det(t·I + (√−1/2π)·Ω)`.
//!
//! `cᵢ = (√−1/2π)ⁱ · Σ_{|S| = i} det(Ω_S)`, the sum running over principal
//! minors. Entries of `Ω` have even degree, so they commute and each minor is
//! expanded exactly with no division. Degrees above `(n,n)` vanish.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureMatrix;
use crate::error::{Error, Result};
use crate::forms::{Form, Monomial};
use crate::matrix::expand_determinant;
use crate::scalar::{Coeff, ScalarMode};

/// How the transcendental factor `(2π)^{-i}` is carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrefactorMode {
    /// Degree-`i` forms hold `(2π)ⁱ·cᵢ`: the factor `(√−1)ⁱ` is applied, the
    /// factor `(2π)^{-i}` is recorded per degree in [`ChernFormSet::degree_scale`].
    Exact,
    /// Degree-`i` forms hold `cᵢ` with `(2π)^{-i}` folded into the coefficients.
    Numeric,
}

/// `c₀ … c_k` with `k = min(r, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernFormSet<C> {
    n: usize,
    r: usize,
    forms: Vec<Form<C>>,
    prefactor: PrefactorMode,
    witnessed: bool,
}

impl<C: Coeff> ChernFormSet<C> {
    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Highest stored degree, `min(r, n)`.
    pub fn top_degree(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn prefactor(&self) -> PrefactorMode {
        self.prefactor
    }

    /// Whether the source curvature carried a factorization `Ω = A ∧ Āᵗ`.
    pub fn is_witnessed(&self) -> bool {
        self.witnessed
    }

    /// `cᵢ` in this set's prefactor convention; zero above `min(r, n)`.
    pub fn get(&self, i: usize) -> Form<C> {
        self.forms
            .get(i)
            .cloned()
            .unwrap_or_else(|| Form::zero(self.n).expect("valid base dimension"))
    }

    pub fn forms(&self) -> &[Form<C>] {
        &self.forms
    }

    /// Factor turning a stored degree-`i` quantity into the true one:
    /// `(2π)^{-i}` in exact mode, `1` in numeric mode.
    pub fn degree_scale(&self, i: usize) -> f64 {
        match self.prefactor {
            PrefactorMode::Exact => (2.0 * PI).powi(-(i as i32)),
            PrefactorMode::Numeric => 1.0,
        }
    }

    /// Folds `(2π)^{-i}` into double-precision coefficients.
    pub fn to_numeric(&self) -> ChernFormSet<Complex64> {
        ChernFormSet {
            n: self.n,
            r: self.r,
            forms: self
                .forms
                .iter()
                .enumerate()
                .map(|(i, f)| f.to_float().scaled(&Complex64::new(self.degree_scale(i), 0.0)))
                .collect(),
            prefactor: PrefactorMode::Numeric,
            witnessed: self.witnessed,
        }
    }

    /// `Σ cᵢ` (meaningful per degree in exact mode).
    pub fn total(&self) -> Form<C> {
        self.forms
            .iter()
            .fold(Form::zero(self.n).expect("valid base dimension"), |acc, f| acc.add_unchecked(f))
    }
}

/// Chern forms of a curvature matrix, with `(2π)^{-i}` kept symbolic
/// ([`PrefactorMode::Exact`]).
pub fn chern_forms<C: Coeff>(omega: &CurvatureMatrix<C>) -> ChernFormSet<C> {
    let n = omega.base_dim();
    let r = omega.rank();
    let top = r.min(n);
    let zero = Form::zero(n).expect("valid base dimension");
    let one = Form::one(n).expect("valid base dimension");
    let mut sums: Vec<Form<C>> = vec![zero.clone(); top + 1];
    sums[0] = one.clone();
    for subset in 1u32..(1 << r) {
        let size = subset.count_ones() as usize;
        if size > top {
            continue;
        }
        let rows: Vec<usize> = (0..r).filter(|b| subset & (1 << b) != 0).collect();
        let minor = expand_determinant(
            size,
            |a, b| omega.get(rows[a], rows[b]).clone(),
            zero.clone(),
            one.clone(),
        );
        sums[size] = sums[size].add_unchecked(&minor);
    }
    let forms = sums
        .into_iter()
        .enumerate()
        .map(|(i, f)| f.scaled(&C::i_pow(i as i64)))
        .collect();
    ChernFormSet {
        n,
        r,
        forms,
        prefactor: PrefactorMode::Exact,
        witnessed: omega.is_witnessed(),
    }
}

/// Chern forms with `(2π)^{-i}` folded into double-precision coefficients.
pub fn chern_forms_numeric<C: Coeff>(omega: &CurvatureMatrix<C>) -> ChernFormSet<Complex64> {
    chern_forms(omega).to_numeric()
}

/// `c_λ = c_{λ₁} ∧ c_{λ₂} ∧ …` (with `c₀ = 1`).
pub fn chern_product<C: Coeff>(cs: &ChernFormSet<C>, parts: &[u32]) -> Result<Form<C>> {
    let weight: u32 = parts.iter().sum();
    if weight as usize > cs.n {
        return Err(Error::InvalidPartition {
            parts: parts.to_vec(),
            reason: format!("weight {weight} exceeds base dimension {}", cs.n),
        });
    }
    if let Some(&big) = parts.iter().find(|&&p| p as usize > cs.r) {
        return Err(Error::InvalidPartition {
            parts: parts.to_vec(),
            reason: format!("part {big} exceeds rank {}", cs.r),
        });
    }
    let mut acc = Form::one(cs.n)?;
    for &part in parts {
        if part > 0 {
            acc = acc.wedge_unchecked(&cs.get(part as usize));
        }
    }
    Ok(acc)
}

/// The normalized volume element `(√−1)^{n²}·dz¹∧…∧dzⁿ∧dz̄¹∧…∧dz̄ⁿ`, which
/// equals `∧ⱼ (√−1·dzʲ∧dz̄ʲ)`.
pub fn volume_element<C: Coeff>(n: usize) -> Result<Form<C>> {
    let full = full_mask(n)?;
    Form::from_terms(n, [(Monomial::new(full, full), C::i_pow((n * n) as i64))])
}

fn full_mask(n: usize) -> Result<u16> {
    if n == 0 || n > crate::forms::MAX_BASE_DIM {
        return Err(Error::BaseDimension(n));
    }
    Ok(((1u32 << n) - 1) as u16)
}

/// Coefficient of a real top-degree form against [`volume_element`].
///
/// Forms of the shape `(√−1)^{n²} ψ∧ψ̄` give nonnegative values.
pub fn top_coefficient<C: Coeff>(phi: &Form<C>) -> Result<C> {
    let n = phi.base_dim();
    if !phi.is_homogeneous(n, n) {
        return Err(Error::NotHomogeneous { p: n, q: n });
    }
    let full = full_mask(n)?;
    let value = phi.coefficient(&Monomial::new(full, full)) * C::i_pow(-((n * n) as i64));
    let imag = value.im_part().abs_f64();
    let limit = match C::MODE {
        ScalarMode::Exact => 0.0,
        ScalarMode::Float => crate::forms::REALITY_RTOL * value.abs_f64().max(1.0),
    };
    if imag > limit {
        return Err(Error::NotReal {
            imag_norm: imag,
            limit,
        });
    }
    Ok(value.re_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{bott_chern_curvature, factor_from_tensor, CurvatureTensor, FactorMatrix};
    use crate::scalar::GaussianRational;

    type Q = GaussianRational;

    fn q(re: i64, im: i64) -> Q {
        Q::from_i64(re, im)
    }

    /// `diag(dz¹∧dz̄¹, dz²∧dz̄²)` from `A = diag(dz¹, dz²)`.
    fn diagonal_instance() -> CurvatureMatrix<Q> {
        let zero = Form::zero(2).unwrap();
        let a = FactorMatrix::new(
            2,
            2,
            2,
            vec![Form::dz(2, 1).unwrap(), zero.clone(), zero, Form::dz(2, 2).unwrap()],
        )
        .unwrap();
        bott_chern_curvature(&a)
    }

    #[test]
    fn rank_one_first_chern_form_is_trace_term() {
        let t = CurvatureTensor::new(1, 1, 1, vec![q(2, 1)]).unwrap();
        let omega = bott_chern_curvature(&factor_from_tensor(&t));
        let cs = chern_forms(&omega);
        assert_eq!(cs.top_degree(), 1);
        assert_eq!(cs.get(1), omega.get(0, 0).scaled(&Q::imag_unit()));
        // √−1·|a|²·dz∧dz̄ evaluates to |a|² = 5 on e₁.
        let value = cs.get(1).evaluate(&[crate::TangentVector::basis(1, 1)]).unwrap();
        assert_eq!(value, q(5, 0));
    }

    #[test]
    fn zero_curvature_has_trivial_chern_forms() {
        let t = CurvatureTensor::<Q>::zeros(3, 2, 2).unwrap();
        let cs = chern_forms(&bott_chern_curvature(&factor_from_tensor(&t)));
        assert_eq!(cs.get(0), Form::one(3).unwrap());
        assert!((1..=3).all(|i| cs.get(i).is_zero()));
    }

    #[test]
    fn diagonal_instance_expansion() {
        let cs = chern_forms(&diagonal_instance());
        let w1 = Form::monomial(2, &[1], &[1], q(1, 0)).unwrap();
        let w2 = Form::monomial(2, &[2], &[2], q(1, 0)).unwrap();
        assert_eq!(cs.get(1), (&w1 + &w2).scaled(&Q::imag_unit()));
        assert_eq!(cs.get(2), w1.wedge(&w2).unwrap().scaled(&q(-1, 0)));

        let c11 = chern_product(&cs, &[1, 1]).unwrap();
        assert_eq!(c11, cs.get(2).scaled(&q(2, 0)));

        // Exact mode carries (2π)^2; fold it to compare with the stated values.
        let unit = (2.0 * PI).powi(-2);
        let top_c2 = top_coefficient(&cs.get(2)).unwrap().to_c64().re * cs.degree_scale(2);
        let top_c11 = top_coefficient(&c11).unwrap().to_c64().re * cs.degree_scale(2);
        assert!((top_c2 - unit).abs() < 1e-15);
        assert!((top_c11 - 2.0 * unit).abs() < 1e-15);

        let numeric = cs.to_numeric();
        let folded = top_coefficient(&numeric.get(2)).unwrap().re;
        assert!((folded - unit).abs() < 1e-15);
    }

    #[test]
    fn chern_product_rejects_out_of_range_partitions() {
        let cs = chern_forms(&diagonal_instance());
        assert!(chern_product(&cs, &[2, 1]).is_err());
        assert!(chern_product(&cs, &[3]).is_err());
        assert_eq!(chern_product(&cs, &[2, 0]).unwrap(), cs.get(2));
        assert_eq!(chern_product(&cs, &[0, 0]).unwrap(), Form::one(2).unwrap());
    }

    #[test]
    fn volume_element_has_unit_coefficient() {
        for n in 1..=5 {
            let vol = volume_element::<Q>(n).unwrap();
            assert_eq!(top_coefficient(&vol).unwrap(), q(1, 0));
            let product = (1..=n).fold(Form::one(n).unwrap(), |acc, j| {
                acc.wedge(&Form::monomial(n, &[j], &[j], Q::imag_unit()).unwrap())
                    .unwrap()
            });
            assert_eq!(product, vol);
        }
        assert_eq!(top_coefficient(&Form::<Q>::zero(3).unwrap()).unwrap(), q(0, 0));
        assert!(top_coefficient(&Form::<Q>::dz(2, 1).unwrap()).is_err());
    }

    #[test]
    fn degree_truncates_at_base_dimension() {
        let t = CurvatureTensor::from_fn(2, 4, 3, |p, i, k| q((p + i + k) as i64 % 3 - 1, 1)).unwrap();
        let cs = chern_forms(&bott_chern_curvature(&factor_from_tensor(&t)));
        assert_eq!(cs.top_degree(), 2);
        assert!(cs.get(3).is_zero());
    }

    #[test]
    fn unwitnessed_curvature_is_flagged() {
        let omega = CurvatureMatrix::from_entries(
            1,
            1,
            vec![Form::<Q>::monomial(1, &[1], &[1], q(-1, 0)).unwrap()],
        )
        .unwrap();
        assert!(!chern_forms(&omega).is_witnessed());
        assert!(chern_forms(&diagonal_instance()).is_witnessed());
    }
}
