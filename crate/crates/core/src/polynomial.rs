//! Polynomials in graded commuting variables `c₁, c₂, …` (`deg cⱼ = j`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Num;

use crate::matrix::DetEntry;

/// Exponent vector: entry `j` is the power of `c_{j+1}`; no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChernMonomial(Vec<u32>);

impl ChernMonomial {
    pub fn one() -> Self {
        ChernMonomial(Vec::new())
    }

    /// `c_j` for `j ≥ 1`.
    pub fn var(j: usize) -> Self {
        assert!(j >= 1, "Chern variables are c1, c2, ...");
        let mut exps = vec![0; j];
        exps[j - 1] = 1;
        ChernMonomial(exps)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        ChernMonomial(exps)
    }

    /// Power of `c_j` for each `j ≥ 1`, as `exponents()[j - 1]`.
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Weighted degree `Σ j·eⱼ`.
    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &e)| (j + 1) * e as usize)
            .sum()
    }

    /// Largest variable index present, 0 for the unit.
    pub fn max_var(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        ChernMonomial(
            (0..len)
                .map(|j| self.0.get(j).copied().unwrap_or(0) + other.0.get(j).copied().unwrap_or(0))
                .collect(),
        )
    }
}

impl fmt::Display for ChernMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                if e == 1 {
                    format!("c{}", j + 1)
                } else {
                    format!("c{}^{}", j + 1, e)
                }
            })
            .collect();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// Sparse polynomial in `c₁, c₂, …` with coefficients in `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernPolynomial<T> {
    terms: BTreeMap<ChernMonomial, T>,
}

impl<T> ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    pub fn zero() -> Self {
        ChernPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.accumulate(ChernMonomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// `c_j`, with `c₀ = 1`.
    pub fn var(j: usize) -> Self {
        if j == 0 {
            return Self::one();
        }
        Self::term(ChernMonomial::var(j), T::one())
    }

    pub fn term(monomial: ChernMonomial, c: T) -> Self {
        let mut p = Self::zero();
        p.accumulate(monomial, c);
        p
    }

    fn accumulate(&mut self, monomial: ChernMonomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&monomial) {
            Some(existing) => {
                let sum = existing + c;
                if !sum.is_zero() {
                    self.terms.insert(monomial, sum);
                }
            }
            None => {
                self.terms.insert(monomial, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChernMonomial, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &ChernMonomial) -> T {
        self.terms.get(monomial).cloned().unwrap_or_else(T::zero)
    }

    /// The common weighted degree of all terms, `None` when mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(ChernMonomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Largest variable index occurring.
    pub fn max_var(&self) -> usize {
        self.terms.keys().map(ChernMonomial::max_var).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.accumulate(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Drops all terms of weighted degree above `max_degree`.
    pub fn truncate_degree(&self, max_degree: usize) -> Self {
        ChernPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Part of weighted degree exactly `degree`.
    pub fn degree_part(&self, degree: usize) -> Self {
        ChernPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Sets `c_j = 0` for every `j > r`.
    pub fn truncate_variables(&self, r: usize) -> Self {
        ChernPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.max_var() <= r)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Product truncated at weighted degree `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        let mut out = Self::zero();
        for (ma, va) in &self.terms {
            let da = ma.degree();
            if da > max_degree {
                continue;
            }
            for (mb, vb) in &other.terms {
                if da + mb.degree() > max_degree {
                    continue;
                }
                out.accumulate(ma.mul(mb), va.clone() * vb.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn map_coeffs<U>(&self, f: impl Fn(&T) -> U) -> ChernPolynomial<U>
    where
        U: Clone + Num + Neg<Output = U>,
    {
        let mut out = ChernPolynomial::zero();
        for (m, v) in &self.terms {
            out.accumulate(m.clone(), f(v));
        }
        out
    }
}

impl<T> Default for ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    fn default() -> Self {
        Self::zero()
    }
}

impl<T> Add for &ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    type Output = ChernPolynomial<T>;
    fn add(self, rhs: Self) -> ChernPolynomial<T> {
        let mut out = self.clone();
        for (m, v) in &rhs.terms {
            out.accumulate(m.clone(), v.clone());
        }
        out
    }
}

impl<T> Neg for &ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    type Output = ChernPolynomial<T>;
    fn neg(self) -> ChernPolynomial<T> {
        self.map_coeffs(|v| -v.clone())
    }
}

impl<T> Sub for &ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    type Output = ChernPolynomial<T>;
    fn sub(self, rhs: Self) -> ChernPolynomial<T> {
        self + &(-rhs)
    }
}

impl<T> Mul for &ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    type Output = ChernPolynomial<T>;
    fn mul(self, rhs: Self) -> ChernPolynomial<T> {
        let mut out = ChernPolynomial::zero();
        for (ma, va) in &self.terms {
            for (mb, vb) in &rhs.terms {
                out.accumulate(ma.mul(mb), va.clone() * vb.clone());
            }
        }
        out
    }
}

impl<T> DetEntry for ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Terms in decreasing monomial order, e.g. `c1^3 - 2*c1*c2 + c3`.
impl<T> fmt::Display for ChernPolynomial<T>
where
    T: Clone + Num + Neg<Output = T> + PartialOrd + fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (pos, (m, v)) in self.terms.iter().rev().enumerate() {
            let negative = *v < T::zero();
            let magnitude = if negative { -v.clone() } else { v.clone() };
            match (pos, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_unit = m.exponents().is_empty();
            if magnitude.is_one() && !is_unit {
                write!(f, "{m}")?;
            } else if is_unit {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}
