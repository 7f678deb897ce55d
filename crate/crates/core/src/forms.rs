//! Constant-coefficient complex differential forms at a single point.
//!
//! A monomial is `dz^H ∧ dz̄^A` with `H` and `A` strictly increasing index sets
//! stored as bitmasks over the `n ≤ 14` coordinates; all `dz` factors come
//! before all `dz̄` factors. A [`Form`] is a sparse map from monomials to
//! nonzero coefficients, so structural equality is equality of forms.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::literal::{CoeffLiteral, ComplexLiteral};
use crate::matrix::{DetEntry, Matrix};
use crate::scalar::Coeff;

/// Largest supported number of holomorphic coordinates.
pub const MAX_BASE_DIM: usize = 14;

/// Default relative tolerance for sampled nonnegativity.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative floor for the reality precondition on floating-point forms.
pub const REALITY_RTOL: f64 = 1e-12;

/// Key of a form monomial: `dz^{dz} ∧ dz̄^{dzbar}`; bit `j` stands for index `j + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub dz: u16,
    pub dzbar: u16,
}

impl Monomial {
    pub fn new(dz: u16, dzbar: u16) -> Self {
        Monomial { dz, dzbar }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.dz.count_ones() as usize, self.dzbar.count_ones() as usize)
    }

    /// 1-based indices of the `dz` factors.
    pub fn dz_indices(&self) -> Vec<usize> {
        mask_indices(self.dz)
    }

    /// 1-based indices of the `dz̄` factors.
    pub fn dzbar_indices(&self) -> Vec<usize> {
        mask_indices(self.dzbar)
    }
}

fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Pairs `(s, t)` with `s ∈ left`, `t ∈ right`, `s > t`.
fn inversions(left: u16, right: u16) -> u32 {
    let mut count = 0;
    let mut rest = right;
    while rest != 0 {
        let t = rest.trailing_zeros();
        count += (u32::from(left) >> (t + 1)).count_ones();
        rest &= rest - 1;
    }
    count
}

/// Sign and product key of two monomials, `None` when the product vanishes.
fn monomial_product(a: Monomial, b: Monomial) -> Option<(bool, Monomial)> {
    if a.dz & b.dz != 0 || a.dzbar & b.dzbar != 0 {
        return None;
    }
    let swaps = a.dzbar.count_ones() * b.dz.count_ones()
        + inversions(a.dz, b.dz)
        + inversions(a.dzbar, b.dzbar);
    Some((swaps % 2 == 1, Monomial::new(a.dz | b.dz, a.dzbar | b.dzbar)))
}

fn indices_to_mask(indices: &[usize], n: usize) -> Result<u16> {
    let mut mask = 0u16;
    for (pos, &index) in indices.iter().enumerate() {
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        if pos > 0 && indices[pos - 1] >= index {
            return Err(Error::UnsortedIndices(indices.to_vec()));
        }
        mask |= 1 << (index - 1);
    }
    Ok(mask)
}

fn check_base_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_BASE_DIM {
        Err(Error::BaseDimension(n))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<C> {
    n: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(n: usize) -> Result<Self> {
        check_base_dim(n)?;
        Ok(Form {
            n,
            terms: BTreeMap::new(),
        })
    }

    /// The constant function `c` as a (0,0)-form.
    pub fn constant(n: usize, c: C) -> Result<Self> {
        let mut form = Self::zero(n)?;
        form.insert(Monomial::new(0, 0), c);
        Ok(form)
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::constant(n, C::one())
    }

    /// `c · dz^{dz} ∧ dz̄^{dzbar}` from 1-based strictly increasing indices.
    pub fn monomial(n: usize, dz: &[usize], dzbar: &[usize], c: C) -> Result<Self> {
        let mut form = Self::zero(n)?;
        let key = Monomial::new(indices_to_mask(dz, n)?, indices_to_mask(dzbar, n)?);
        form.insert(key, c);
        Ok(form)
    }

    /// The 1-form `dz^j`.
    pub fn dz(n: usize, j: usize) -> Result<Self> {
        Self::monomial(n, &[j], &[], C::one())
    }

    /// The 1-form `dz̄^j`.
    pub fn dzbar(n: usize, j: usize) -> Result<Self> {
        Self::monomial(n, &[], &[j], C::one())
    }

    /// Builds a form from `(key, coefficient)` pairs, summing repeated keys.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut form = Self::zero(n)?;
        let limit = (1u16 << n) - 1;
        for (key, c) in terms {
            if key.dz & !limit != 0 || key.dzbar & !limit != 0 {
                let index = 16 - (key.dz | key.dzbar).leading_zeros() as usize;
                return Err(Error::IndexOutOfRange { index, n });
            }
            form.accumulate(key, c);
        }
        Ok(form)
    }

    fn insert(&mut self, key: Monomial, c: C) {
        if !c.is_zero() {
            self.terms.insert(key, c);
        }
    }

    fn accumulate(&mut self, key: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            Some(existing) => self.insert(key, existing + c),
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &Monomial) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    /// The common bidegree of all terms; `None` for mixed forms and the zero form.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut keys = self.terms.keys().map(Monomial::bidegree);
        let first = keys.next()?;
        keys.all(|d| d == first).then_some(first)
    }

    /// Whether every term has bidegree `(p, q)`; the zero form qualifies.
    pub fn is_homogeneous(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|k| k.bidegree() == (p, q))
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(Coeff::abs_f64).fold(0.0, f64::max)
    }

    /// `max(1, largest |coefficient|)`, the reference scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.max_abs_coeff().max(1.0)
    }

    pub fn scaled(&self, c: &C) -> Self {
        let mut out = Form {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (key, v) in &self.terms {
            out.insert(*key, v.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (key, v) in &self.terms {
            out.insert(*key, f(v));
        }
        out
    }

    pub fn to_float(&self) -> Form<Complex64> {
        self.map_coeffs(Coeff::to_c64)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, v) in &other.terms {
            out.accumulate(*key, v.clone());
        }
        out
    }

    /// Exterior product `a ∧ b`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Self) -> Self {
        let mut out = Form {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if let Some((negate, key)) = monomial_product(*ka, *kb) {
                    let v = va.clone() * vb.clone();
                    out.accumulate(key, if negate { -v } else { v });
                }
            }
        }
        out
    }

    /// Complex conjugation, exchanging `dz` and `dz̄`.
    ///
    /// `conj(c·dz^H∧dz̄^A) = conj(c)·(−1)^{|H||A|}·dz^A∧dz̄^H`.
    pub fn conjugate(&self) -> Self {
        let mut out = Form {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (key, v) in &self.terms {
            let (p, q) = key.bidegree();
            let c = v.conj();
            out.insert(
                Monomial::new(key.dzbar, key.dz),
                if (p * q) % 2 == 1 { -c } else { c },
            );
        }
        out
    }

    /// Largest coefficient modulus of `φ − conj(φ)`.
    pub fn imag_norm(&self) -> f64 {
        self.try_sub(&self.conjugate())
            .map(|d| d.max_abs_coeff())
            .unwrap_or(f64::INFINITY)
    }

    /// `conj(φ) = φ`, exactly for exact scalars and within `rtol·scale` for floats.
    pub fn is_real(&self, rtol: f64) -> bool {
        match C::MODE {
            crate::scalar::ScalarMode::Exact => *self == self.conjugate(),
            crate::scalar::ScalarMode::Float => self.imag_norm() <= rtol * self.scale(),
        }
    }

    /// Signed evaluation `(−√−1)^{p²} φ(X₁,…,X_p, X̄₁,…,X̄_p)` of a `(p,p)`-form.
    ///
    /// The monomial `dz^H ∧ dz̄^A` contributes `det(X^H)·conj(det(X^A))`, where
    /// `X^H` is the `p×p` matrix of rows `H` of the tangent vectors; no `1/p!`.
    pub fn evaluate(&self, vectors: &[TangentVector<C>]) -> Result<C> {
        let p = vectors.len();
        if !self.is_homogeneous(p, p) {
            return match self.bidegree() {
                Some((a, b)) if a == b => Err(Error::ArityMismatch {
                    expected: a,
                    got: p,
                }),
                _ => Err(Error::NotHomogeneous { p, q: p }),
            };
        }
        for v in vectors {
            if v.components.len() != self.n {
                return Err(Error::DimensionMismatch {
                    left: self.n,
                    right: v.components.len(),
                });
            }
        }
        let mut minors: HashMap<u16, C> = HashMap::new();
        let mut minor = |mask: u16| -> C {
            minors
                .entry(mask)
                .or_insert_with(|| tuple_minor(vectors, mask))
                .clone()
        };
        let mut total = C::zero();
        for (key, c) in &self.terms {
            let term = minor(key.dz) * minor(key.dzbar).conj();
            total = total + c.clone() * term;
        }
        let p2 = (p * p) as i64;
        Ok(total * C::i_pow(-p2))
    }

    /// `Σ_H ψ_H · det(X^H)` for a `(p,0)`-form `ψ`.
    pub fn pairing(&self, vectors: &[TangentVector<C>]) -> Result<C> {
        let p = vectors.len();
        if !self.is_homogeneous(p, 0) {
            return Err(Error::NotHomogeneous { p, q: 0 });
        }
        Ok(self
            .terms
            .iter()
            .fold(C::zero(), |acc, (key, c)| acc + c.clone() * tuple_minor(vectors, key.dz)))
    }

    pub fn to_literal(&self) -> FormLiteral
    where
        C: CoeffLiteral,
    {
        FormLiteral {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(key, c)| {
                    let lit = c.to_literal();
                    TermLiteral {
                        dz: key.dz_indices(),
                        dzbar: key.dzbar_indices(),
                        re: lit.re,
                        im: lit.im,
                    }
                })
                .collect(),
        }
    }

    pub fn from_literal(lit: &FormLiteral) -> Result<Self>
    where
        C: CoeffLiteral,
    {
        let mut form = Self::zero(lit.n)?;
        for (pos, term) in lit.terms.iter().enumerate() {
            let field = format!("terms[{pos}]");
            let key = Monomial::new(
                indices_to_mask(&term.dz, lit.n)
                    .map_err(|e| Error::parse(format!("{field}.dz"), e.to_string()))?,
                indices_to_mask(&term.dzbar, lit.n)
                    .map_err(|e| Error::parse(format!("{field}.dzbar"), e.to_string()))?,
            );
            let c = C::from_literal(
                &ComplexLiteral {
                    re: term.re.clone(),
                    im: term.im.clone(),
                },
                &field,
            )?;
            form.accumulate(key, c);
        }
        Ok(form)
    }
}

/// Determinant of the rows `mask` of the `n×p` matrix whose columns are the vectors.
fn tuple_minor<C: Coeff>(vectors: &[TangentVector<C>], mask: u16) -> C {
    let rows: Vec<usize> = (0..16).filter(|b| mask & (1 << b) != 0).collect();
    let p = vectors.len();
    debug_assert_eq!(rows.len(), p);
    if p == 0 {
        return C::one();
    }
    Matrix::from_fn(p, p, |a, b| vectors[b].components[rows[a]].clone())
        .determinant()
        .expect("square minor")
}

impl<C: Coeff> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        self.scaled(&-C::one())
    }
}

impl<C: Coeff> Add for &Form<C> {
    type Output = Form<C>;
    /// Panics on a base-dimension mismatch; use [`Form::try_add`] otherwise.
    fn add(self, rhs: &Form<C>) -> Form<C> {
        self.try_add(rhs).expect("base dimension mismatch")
    }
}

impl<C: Coeff> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: &Form<C>) -> Form<C> {
        self.try_sub(rhs).expect("base dimension mismatch")
    }
}

/// Forms of even total degree commute, which is all the determinant expansion needs.
impl<C: Coeff> DetEntry for Form<C> {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_unchecked(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.wedge_unchecked(rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Free-function form of [`Form::wedge`].
pub fn wedge<C: Coeff>(a: &Form<C>, b: &Form<C>) -> Result<Form<C>> {
    a.wedge(b)
}

/// Free-function form of [`Form::conjugate`].
pub fn conjugate<C: Coeff>(a: &Form<C>) -> Form<C> {
    a.conjugate()
}

/// Free-function form of [`Form::evaluate`].
pub fn evaluate<C: Coeff>(form: &Form<C>, vectors: &[TangentVector<C>]) -> Result<C> {
    form.evaluate(vectors)
}

/// A (1,0) tangent vector, in coordinates dual to `dz¹,…,dzⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<C> {
    pub components: Vec<C>,
}

impl<C: Coeff> TangentVector<C> {
    pub fn new(components: Vec<C>) -> Self {
        TangentVector { components }
    }

    /// The coordinate vector `e_j` (1-based).
    pub fn basis(n: usize, j: usize) -> Self {
        TangentVector {
            components: (1..=n)
                .map(|k| if k == j { C::one() } else { C::zero() })
                .collect(),
        }
    }
}

impl TangentVector<Complex64> {
    /// Components i.i.d. standard complex normal (`E|z|² = 1`).
    pub fn sample(n: usize, rng: &mut impl rand::Rng) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        TangentVector {
            components: (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re * s, im * s)
                })
                .collect(),
        }
    }
}

/// Random stream for trial `index` of a seeded run. Streams are independent
/// per index, so the outcome does not depend on evaluation order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outcome of a sampled nonnegativity test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub scale: f64,
    pub min_value: f64,
    /// Tuple attaining `min_value`; empty for the zero form.
    pub witness: Vec<Vec<ComplexLiteral>>,
    pub pass: bool,
}

/// Monte-Carlo test of pointwise nonnegativity of a real `(p,p)`-form.
///
/// Draws `trials` tuples of `p` standard complex normal vectors and reports
/// the minimum signed evaluation; PASS iff it is `≥ −tol·scale`, with
/// `scale = max(1, largest |coefficient|)`. Evaluation runs in double
/// precision whatever the form's scalar mode.
pub fn nonnegative_sampled<C: Coeff>(
    form: &Form<C>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<VerdictReport> {
    let phi = form.to_float();
    let scale = phi.scale();
    let p = match phi.bidegree() {
        None if phi.is_zero() => 0,
        Some((p, q)) if p == q => p,
        Some((p, q)) => return Err(Error::NotHomogeneous { p, q }),
        None => {
            let (p, _) = phi.terms.keys().next().map(Monomial::bidegree).unwrap_or((0, 0));
            return Err(Error::NotHomogeneous { p, q: p });
        }
    };
    let real_limit = tol.max(REALITY_RTOL) * scale;
    let imag_norm = match C::MODE {
        crate::scalar::ScalarMode::Exact if form.is_real(0.0) => 0.0,
        _ => phi.imag_norm(),
    };
    if imag_norm > real_limit {
        return Err(Error::NotReal {
            imag_norm,
            limit: real_limit,
        });
    }
    let mut min_value = if phi.is_zero() { 0.0 } else { f64::INFINITY };
    let mut witness: Vec<TangentVector<Complex64>> = Vec::new();
    if !phi.is_zero() {
        for trial in 0..trials {
            let mut rng = trial_rng(seed, trial as u64);
            let tuple: Vec<_> = (0..p)
                .map(|_| TangentVector::sample(phi.n, &mut rng))
                .collect();
            let value = phi.evaluate(&tuple)?.re;
            if value < min_value {
                min_value = value;
                witness = tuple;
            }
        }
        if trials == 0 {
            min_value = 0.0;
        }
    }
    Ok(VerdictReport {
        degree: p,
        trials,
        seed,
        tol,
        scale,
        min_value,
        witness: witness
            .iter()
            .map(|v| v.components.iter().map(|c| c.to_literal()).collect())
            .collect(),
        pass: min_value >= -tol * scale,
    })
}

/// JSON literal for a form: 1-based strictly increasing indices per term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormLiteral {
    pub n: usize,
    pub terms: Vec<TermLiteral>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermLiteral {
    #[serde(default)]
    pub dz: Vec<usize>,
    #[serde(default)]
    pub dzbar: Vec<usize>,
    pub re: serde_json::Value,
    #[serde(default = "zero_json")]
    pub im: serde_json::Value,
}

fn zero_json() -> serde_json::Value {
    serde_json::Value::from(0)
}
