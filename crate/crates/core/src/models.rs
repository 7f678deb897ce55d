//! Cohomology-ring models of projective spaces, complex tori and their
//! products: Chern numbers, the Chern-number bound checks, Todd classes and
//! Riemann–Roch characteristic polynomials. All arithmetic is exact.
//!
//! Only the even subring generated by Chern classes is modelled. A torus
//! factor contributes no generators, so any class integrates to zero on a
//! model with a torus factor.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polynomial::{ChernMonomial, ChernPolynomial};
use crate::schur::{partitions, Partition};

/// Largest dimension for which Todd classes are expanded.
pub const MAX_TODD_DIM: usize = 8;

/// Atomic factor of a product model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `CPᵏ`, one generator `x` with `x^{k+1} = 0`.
    Projective(u32),
    /// Complex torus of dimension `k`; no even generators.
    Torus(u32),
}

impl Factor {
    pub fn dim(&self) -> u32 {
        match *self {
            Factor::Projective(k) | Factor::Torus(k) => k,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Projective(k) => write!(f, "CP{k}"),
            Factor::Torus(k) => write!(f, "T{k}"),
        }
    }
}

/// Element of `Q[x₁, …, x_p] / (x_j^{k_j+1})`, one generator per projective factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    caps: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RingElement {
    /// `caps[j]` is the top power of generator `j` that survives.
    pub fn zero(caps: &[u32]) -> Self {
        RingElement {
            caps: caps.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(caps: &[u32], c: BigRational) -> Self {
        let mut e = Self::zero(caps);
        e.accumulate(vec![0; caps.len()], c);
        e
    }

    pub fn one(caps: &[u32]) -> Self {
        Self::constant(caps, BigRational::one())
    }

    /// Generator `x_j`, 0-based.
    pub fn generator(caps: &[u32], j: usize) -> Self {
        let mut exps = vec![0; caps.len()];
        exps[j] = 1;
        let mut e = Self::zero(caps);
        e.accumulate(exps, BigRational::one());
        e
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() || exps.iter().zip(&self.caps).any(|(e, cap)| e > cap) {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Common total degree of all terms; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn degree_part(&self, degree: u32) -> Self {
        RingElement {
            caps: self.caps.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(&self.caps);
        for (e, v) in &self.terms {
            out.accumulate(e.clone(), v * c);
        }
        out
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.caps, other.caps, "ring elements from different models");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.accumulate(e.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = Self::zero(&self.caps);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.accumulate(exps, va * vb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(&self.caps), |acc, _| acc.mul(self))
    }

    /// `exp(self)` for nilpotent `self` (no constant term).
    pub fn exp(&self) -> Self {
        let top: u32 = self.caps.iter().sum();
        let mut out = Self::one(&self.caps);
        let mut power = Self::one(&self.caps);
        let mut factorial = BigInt::one();
        for k in 1..=top {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            factorial *= k;
            out = out.add(&power.scale(&BigRational::new(BigInt::one(), factorial.clone())));
        }
        out
    }

    /// Pulls back along the projection onto the generators `offset..offset + len`
    /// of a ring with `caps`.
    fn embed(&self, caps: &[u32], offset: usize) -> Self {
        let mut out = Self::zero(caps);
        for (e, v) in &self.terms {
            let mut exps = vec![0; caps.len()];
            exps[offset..offset + e.len()].copy_from_slice(e);
            out.accumulate(exps, v.clone());
        }
        out
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let single = self.caps.len() == 1;
        for (pos, (e, v)) in self.terms.iter().enumerate() {
            let magnitude = v.abs();
            match (pos, v.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(j, &p)| {
                    let name = if single { "x".to_string() } else { format!("x{}", j + 1) };
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A product of projective spaces and tori with its tangent Chern classes.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelManifold {
    label: String,
    factors: Vec<Factor>,
    caps: Vec<u32>,
    tangent_chern: Vec<RingElement>,
    gg_tangent: bool,
    gg_cotangent: bool,
}

/// The one-point space, unit for [`product`].
pub fn point() -> ModelManifold {
    ModelManifold {
        label: "pt".to_string(),
        factors: Vec::new(),
        caps: Vec::new(),
        tangent_chern: Vec::new(),
        gg_tangent: true,
        gg_cotangent: true,
    }
}

/// `CPᵏ` with total Chern class `(1 + x)^{k+1}`.
pub fn projective_space(k: u32) -> Result<ModelManifold> {
    if k == 0 {
        return Err(Error::parse("model", "projective space needs k >= 1"));
    }
    let caps = [k];
    let x = RingElement::generator(&caps, 0);
    let tangent_chern = (1..=k)
        .map(|i| x.pow(i).scale(&BigRational::from_integer(binomial(k + 1, i))))
        .collect();
    Ok(ModelManifold {
        label: format!("CP{k}"),
        factors: vec![Factor::Projective(k)],
        caps: caps.to_vec(),
        tangent_chern,
        gg_tangent: true,
        gg_cotangent: false,
    })
}

/// Complex torus of dimension `k`: trivial tangent bundle.
pub fn complex_torus(k: u32) -> Result<ModelManifold> {
    if k == 0 {
        return Err(Error::parse("model", "torus needs k >= 1"));
    }
    Ok(ModelManifold {
        label: format!("T{k}"),
        factors: vec![Factor::Torus(k)],
        caps: Vec::new(),
        tangent_chern: vec![RingElement::zero(&[]); k as usize],
        gg_tangent: true,
        gg_cotangent: true,
    })
}

/// `a × b`: total Chern class multiplies (Whitney), flags combine by AND.
pub fn product(a: &ModelManifold, b: &ModelManifold) -> ModelManifold {
    if a.factors.is_empty() {
        return b.clone();
    }
    if b.factors.is_empty() {
        return a.clone();
    }
    let caps: Vec<u32> = a.caps.iter().chain(&b.caps).copied().collect();
    let total_a = a.total_chern().embed(&caps, 0);
    let total_b = b.total_chern().embed(&caps, a.caps.len());
    let total = total_a.mul(&total_b);
    let n = a.dim() + b.dim();
    ModelManifold {
        label: format!("{}x{}", a.label, b.label),
        factors: a.factors.iter().chain(&b.factors).copied().collect(),
        tangent_chern: (1..=n as u32).map(|i| total.degree_part(i)).collect(),
        caps,
        gg_tangent: a.gg_tangent && b.gg_tangent,
        gg_cotangent: a.gg_cotangent && b.gg_cotangent,
    }
}

/// Parses `CPk`, `Tk` and `pt` joined by `x`, e.g. `CP1xCP2` or `T2 x CP1`.
pub fn parse_model(text: &str) -> Result<ModelManifold> {
    let atoms: Vec<&str> = text.split(['x', 'X', '×']).map(str::trim).collect();
    let mut model = point();
    for atom in atoms {
        let upper = atom.to_ascii_uppercase();
        let factor = if upper == "PT" {
            point()
        } else if let Some(k) = upper.strip_prefix("CP") {
            projective_space(parse_dim(atom, k)?)?
        } else if let Some(k) = upper.strip_prefix('T') {
            complex_torus(parse_dim(atom, k)?)?
        } else {
            return Err(Error::parse(
                "model",
                format!("unknown factor {atom:?}; expected CPk, Tk or pt"),
            ));
        };
        model = product(&model, &factor);
    }
    Ok(model)
}

fn parse_dim(atom: &str, digits: &str) -> Result<u32> {
    digits
        .parse::<u32>()
        .map_err(|_| Error::parse("model", format!("bad dimension in factor {atom:?}")))
}

/// Models used by the catalog-wide checks.
pub fn catalog() -> Vec<ModelManifold> {
    ["CP1", "CP2", "CP3", "CP4", "T1", "T2", "T3", "CP1xCP1", "CP1xCP2", "CP1xCP1xCP1", "T1xCP1", "T1xCP2", "T2xCP1"]
        .iter()
        .map(|s| parse_model(s).expect("catalog entries parse"))
        .collect()
}

impl ModelManifold {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim() as usize).sum()
    }

    /// Top powers of the generators, one per projective factor.
    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Globally generated tangent bundle (catalog metadata).
    pub fn gg_tangent(&self) -> bool {
        self.gg_tangent
    }

    /// Globally generated cotangent bundle (catalog metadata).
    pub fn gg_cotangent(&self) -> bool {
        self.gg_cotangent
    }

    pub fn has_torus_factor(&self) -> bool {
        self.factors.iter().any(|f| matches!(f, Factor::Torus(_)))
    }

    /// `cᵢ(M)` with `c₀ = 1` and `cᵢ = 0` above the dimension.
    pub fn tangent_chern(&self, i: usize) -> RingElement {
        match i {
            0 => RingElement::one(&self.caps),
            _ => self
                .tangent_chern
                .get(i - 1)
                .cloned()
                .unwrap_or_else(|| RingElement::zero(&self.caps)),
        }
    }

    pub fn tangent_classes(&self) -> &[RingElement] {
        &self.tangent_chern
    }

    pub fn total_chern(&self) -> RingElement {
        self.tangent_chern
            .iter()
            .fold(RingElement::one(&self.caps), |acc, c| acc.add(c))
    }

    /// Fundamental-class functional: coefficient of `Π x_j^{k_j}`, and zero
    /// whenever a torus factor is present.
    pub fn integrate(&self, class: &RingElement) -> BigRational {
        assert_eq!(class.caps, self.caps, "class from a different model");
        if self.has_torus_factor() {
            return BigRational::zero();
        }
        class.coefficient(&self.caps)
    }

    /// `H¹·¹` class of `O(d₁, …, d_p)`, one degree per projective factor.
    pub fn line_class(&self, degrees: &[i64]) -> Result<RingElement> {
        if degrees.len() != self.caps.len() {
            return Err(Error::ArityMismatch {
                expected: self.caps.len(),
                got: degrees.len(),
            });
        }
        Ok(degrees
            .iter()
            .enumerate()
            .fold(RingElement::zero(&self.caps), |acc, (j, &d)| {
                acc.add(&RingElement::generator(&self.caps, j).scale(&BigRational::from_integer(d.into())))
            }))
    }

    /// `c₁(K_M) = −c₁(M)`.
    pub fn canonical_class(&self) -> RingElement {
        self.tangent_chern(1).neg()
    }
}

impl fmt::Display for ModelManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Parses a line bundle: `K`, `O`, `O(d)` (same degree on every projective
/// factor) or `O(d1,…,dp)`.
pub fn parse_line(model: &ModelManifold, text: &str) -> Result<RingElement> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("K") {
        return Ok(model.canonical_class());
    }
    if t == "O" {
        return Ok(RingElement::zero(&model.caps));
    }
    let inner = t
        .strip_prefix("O(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::parse("line", format!("expected K, O or O(d,...), got {t:?}")))?;
    let degrees: Vec<i64> = inner
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse("line", format!("bad degree list {inner:?}")))?;
    if degrees.len() == 1 {
        model.line_class(&vec![degrees[0]; model.caps.len()])
    } else {
        model.line_class(&degrees).map_err(|_| {
            Error::parse(
                "line",
                format!(
                    "{} degrees given, model has {} projective factors",
                    degrees.len(),
                    model.caps.len()
                ),
            )
        })
    }
}

/// `cᵢ(T*M) = (−1)ⁱ cᵢ(M)`.
pub fn dual_tangent_chern(model: &ModelManifold) -> Vec<RingElement> {
    model
        .tangent_chern
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c.neg() } else { c.clone() })
        .collect()
}

/// `c_λ[M] = ∫ Π c_{λⱼ}`; `classes` overrides the tangent classes (`classes[i-1] = cᵢ`).
pub fn chern_number(
    model: &ModelManifold,
    lambda: &Partition,
    classes: Option<&[RingElement]>,
) -> Result<BigInt> {
    let n = model.dim();
    if lambda.weight() != n {
        return Err(Error::InvalidPartition {
            parts: lambda.parts().to_vec(),
            reason: format!("weight must equal the dimension {n}"),
        });
    }
    let classes = classes.unwrap_or(&model.tangent_chern);
    let class = |i: u32| -> RingElement {
        classes
            .get(i as usize - 1)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&model.caps))
    };
    let product = lambda
        .nonzero_parts()
        .fold(RingElement::one(&model.caps), |acc, j| acc.mul(&class(j)));
    let value = model.integrate(&product);
    if !value.is_integer() {
        return Err(Error::Inconsistent(format!(
            "Chern number {lambda} of {model} is {value}"
        )));
    }
    Ok(value.to_integer())
}

/// All `c_λ[M]`, `λ ∈ Γ(n, n)`, in lexicographically descending order.
pub fn chern_numbers(model: &ModelManifold) -> Result<Vec<(Partition, BigInt)>> {
    let n = model.dim();
    partitions(n, n)
        .into_iter()
        .map(|lambda| {
            let value = chern_number(model, &lambda, None)?;
            Ok((lambda, value))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumberBoundsReport {
    pub model: String,
    pub signed: bool,
    /// `cₙ[M]`, times `(−1)ⁿ` when signed.
    pub lower: BigInt,
    /// `c₁ⁿ[M]`, times `(−1)ⁿ` when signed.
    pub upper: BigInt,
    /// `(λ, c_λ[M])` over `Γ(n, n)`, signed when requested.
    pub numbers: Vec<(Partition, BigInt)>,
    pub ordering_pass: bool,
    /// If the upper number vanishes then every number does.
    pub vanishing_pass: bool,
    pub pass: bool,
}

/// Checks `0 ≤ cₙ[M] ≤ c_λ[M] ≤ c₁ⁿ[M]` over `Γ(n, n)`, or with every number
/// multiplied by `(−1)ⁿ` when `signed`.
pub fn verify_number_bounds(model: &ModelManifold, signed: bool) -> Result<NumberBoundsReport> {
    if !signed && !model.gg_tangent {
        return Err(Error::HypothesisUnmet(format!(
            "{model} is not catalogued with a globally generated tangent bundle"
        )));
    }
    if signed && !model.gg_cotangent {
        return Err(Error::HypothesisUnmet(format!(
            "{model} is not catalogued with a globally generated cotangent bundle"
        )));
    }
    let n = model.dim();
    let dual = dual_tangent_chern(model);
    let classes = signed.then_some(dual.as_slice());
    let mut numbers = Vec::new();
    for lambda in partitions(n, n) {
        let value = chern_number(model, &lambda, classes)?;
        numbers.push((lambda, value));
    }
    let (lower, upper) = if n == 0 {
        (BigInt::zero(), BigInt::zero())
    } else {
        let value = |parts: &[u32]| -> Result<BigInt> {
            chern_number(model, &Partition::new(parts, n as u32)?, classes)
        };
        (value(&[n as u32])?, value(&vec![1; n])?)
    };
    let ordering_pass = lower >= BigInt::zero()
        && numbers.iter().all(|(_, v)| lower <= *v && *v <= upper);
    let vanishing_pass = !upper.is_zero() || numbers.iter().all(|(_, v)| v.is_zero());
    Ok(NumberBoundsReport {
        model: model.label.clone(),
        signed,
        lower,
        upper,
        numbers,
        ordering_pass,
        vanishing_pass,
        pass: ordering_pass && vanishing_pass,
    })
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

/// Power series truncated after `x^{len-1}`.
fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients `a₁, …, a_N` of `log(x / (1 − e^{−x})) = Σ a_k x^k`.
fn todd_log_coefficients(max_degree: usize) -> Vec<BigRational> {
    let len = max_degree + 1;
    // (1 − e^{−x}) / x = Σ (−1)^k x^k / (k+1)!
    let denom: Vec<BigRational> = (0..len)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), factorial(k as u32 + 1))
        })
        .collect();
    // Q = 1 / denom by recursion on coefficients.
    let mut q = vec![BigRational::zero(); len];
    q[0] = BigRational::one();
    for k in 1..len {
        let s: BigRational = (1..=k).map(|j| &denom[j] * &q[k - j]).sum();
        q[k] = -s;
    }
    // log Q = Σ_{j≥1} (−1)^{j+1} u^j / j with u = Q − 1.
    let mut u = q;
    u[0] = BigRational::zero();
    let mut log = vec![BigRational::zero(); len];
    let mut power = u.clone();
    for j in 1..len {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        let c = BigRational::new(BigInt::from(sign), BigInt::from(j));
        for (l, p) in log.iter_mut().zip(&power) {
            *l += &c * p;
        }
        power = series_mul(&power, &u, len);
    }
    log
}

type RationalPoly = ChernPolynomial<BigRational>;

/// Power sums `p_k = Σ x_i^k` of the Chern roots as polynomials in `c₁, c₂, …`
/// via Newton's identities; index 0 is unused.
fn power_sums(max_degree: usize) -> Vec<RationalPoly> {
    let mut p: Vec<RationalPoly> = vec![RationalPoly::zero(); max_degree + 1];
    for k in 1..=max_degree {
        let mut acc = RationalPoly::var(k).scale(&BigRational::from_integer(
            BigInt::from(k) * if k % 2 == 1 { 1 } else { -1 },
        ));
        for i in 1..k {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let term = &RationalPoly::var(i) * &p[k - i];
            acc = &acc + &term.scale(&BigRational::from_integer(sign.into()));
        }
        p[k] = acc;
    }
    p
}

/// Universal Todd polynomial `Td = Σ tdᵢ(c₁, c₂, …)` through degree `max_degree`.
pub fn todd_polynomial(max_degree: usize) -> RationalPoly {
    let a = todd_log_coefficients(max_degree);
    let p = power_sums(max_degree);
    let mut log_td = RationalPoly::zero();
    for k in 1..=max_degree {
        log_td = &log_td + &p[k].scale(&a[k]);
    }
    let mut td = RationalPoly::one();
    let mut power = RationalPoly::one();
    for j in 1..=max_degree {
        power = power.mul_truncated(&log_td, max_degree);
        let inv = BigRational::new(BigInt::one(), factorial(j as u32));
        td = &td + &power.scale(&inv);
    }
    td
}

/// `tdᵢ` as a polynomial in the Chern classes.
pub fn todd_component(degree: usize) -> RationalPoly {
    todd_polynomial(degree).degree_part(degree)
}

/// Substitutes `cⱼ ↦ classes[j - 1]` (zero beyond the list).
pub fn substitute(
    poly: &ChernPolynomial<BigRational>,
    classes: &[RingElement],
    caps: &[u32],
) -> RingElement {
    let mut out = RingElement::zero(caps);
    for (monomial, coeff) in poly.terms() {
        let value = substitute_monomial(monomial, classes, caps);
        out = out.add(&value.scale(coeff));
    }
    out
}

fn substitute_monomial(m: &ChernMonomial, classes: &[RingElement], caps: &[u32]) -> RingElement {
    let mut value = RingElement::one(caps);
    for (j, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let class = classes.get(j).cloned().unwrap_or_else(|| RingElement::zero(caps));
        value = value.mul(&class.pow(e));
    }
    value
}

/// `Td(M)` in the model's ring.
pub fn todd_class(model: &ModelManifold) -> Result<RingElement> {
    let n = model.dim();
    if n > MAX_TODD_DIM {
        return Err(Error::Shape(format!(
            "Todd class expanded only up to dimension {MAX_TODD_DIM}, model has {n}"
        )));
    }
    Ok(substitute(&todd_polynomial(n), &model.tangent_chern, &model.caps))
}

fn check_line(model: &ModelManifold, line_c1: &RingElement) -> Result<()> {
    if line_c1.caps != model.caps {
        return Err(Error::DimensionMismatch {
            left: model.caps.len(),
            right: line_c1.caps.len(),
        });
    }
    if !line_c1.is_zero() && line_c1.homogeneous_degree() != Some(1) {
        return Err(Error::NotHomogeneous { p: 1, q: 1 });
    }
    Ok(())
}

/// `χ(M, L^{mm}) = ∫ Td(M) · exp(mm · c₁(L))`, rejected unless integral.
pub fn euler_characteristic(
    model: &ModelManifold,
    line_c1: &RingElement,
    mm: i64,
) -> Result<BigInt> {
    check_line(model, line_c1)?;
    let td = todd_class(model)?;
    let ch = line_c1.scale(&BigRational::from_integer(mm.into())).exp();
    let value = model.integrate(&td.mul(&ch));
    if !value.is_integer() {
        return Err(Error::Inconsistent(format!(
            "χ({model}, L^{mm}) = {value} is not an integer"
        )));
    }
    Ok(value.to_integer())
}

/// Coefficients `a₀, …, a_n` of `χ(M, L^{mm}) = Σ a_k mm^k`,
/// `a_k = ∫ td_{n−k}(M) · c₁(L)^k / k!`.
pub fn rr_polynomial(model: &ModelManifold, line_c1: &RingElement) -> Result<Vec<BigRational>> {
    check_line(model, line_c1)?;
    let n = model.dim();
    let td = todd_class(model)?;
    Ok((0..=n as u32)
        .map(|k| {
            let term = td
                .degree_part(n as u32 - k)
                .mul(&line_c1.pow(k))
                .scale(&BigRational::new(BigInt::one(), factorial(k)));
            model.integrate(&term)
        })
        .collect())
}

/// Evaluates a polynomial given by coefficients in increasing degree.
pub fn evaluate_polynomial(coeffs: &[BigRational], x: i64) -> BigRational {
    let x = BigRational::from_integer(x.into());
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Leading coefficient `(−1)ⁿ c₁ⁿ[M] / n!` of `χ(M, K^m)`.
pub fn kodaira_leading(model: &ModelManifold) -> Result<BigRational> {
    let n = model.dim();
    if n == 0 {
        return Ok(BigRational::one());
    }
    let c1n = chern_number(model, &Partition::new(&vec![1; n], n as u32)?, None)?;
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    Ok(BigRational::new(c1n * sign, factorial(n as u32)))
}

/// Renders an exact rational as an integer when possible, else `p/q`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Best-effort conversion for summaries.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
