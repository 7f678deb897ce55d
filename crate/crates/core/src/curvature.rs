//! Curvature matrices of (1,1)-forms, factored instances `Ω = A ∧ Āᵗ`, frame
//! changes, and the Griffiths quadratic form of a factored curvature tensor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Form, FormLiteral, Monomial};
use crate::literal::{CoeffLiteral, ComplexLiteral};
use crate::matrix::Matrix;
use crate::scalar::{Coeff, ScalarMode};

/// Relative tolerance for witness consistency and unitarity in float mode.
pub const WITNESS_RTOL: f64 = 1e-12;

/// An `r×m` matrix of (1,0)-forms over a common base dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorMatrix<C> {
    n: usize,
    r: usize,
    m: usize,
    entries: Vec<Form<C>>,
}

impl<C: Coeff> FactorMatrix<C> {
    /// Row-major entries; each must be a (1,0)-form over `n` coordinates.
    pub fn new(n: usize, r: usize, m: usize, entries: Vec<Form<C>>) -> Result<Self> {
        if entries.len() != r * m {
            return Err(Error::ArityMismatch {
                expected: r * m,
                got: entries.len(),
            });
        }
        for e in &entries {
            if e.base_dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: e.base_dim(),
                });
            }
            if !e.is_homogeneous(1, 0) {
                return Err(Error::NotHomogeneous { p: 1, q: 0 });
            }
        }
        Ok(FactorMatrix { n, r, m, entries })
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn columns(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, k: usize) -> &Form<C> {
        &self.entries[i * self.m + k]
    }

    /// `P̄ᵗ A`.
    fn left_adjoint_mul(&self, p: &Matrix<C>) -> Self {
        let entries = (0..self.r)
            .flat_map(|i| (0..self.m).map(move |k| (i, k)))
            .map(|(i, k)| {
                (0..self.r).fold(Form::zero(self.n).expect("valid n"), |acc, a| {
                    acc.add_unchecked(&self.get(a, k).scaled(&p.get(a, i).conj()))
                })
            })
            .collect();
        FactorMatrix {
            n: self.n,
            r: self.r,
            m: self.m,
            entries,
        }
    }
}

/// An `r×r` matrix `(Ωⁱⱼ)` (row `i`, column `j`) of (1,1)-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureMatrix<C> {
    n: usize,
    r: usize,
    entries: Vec<Form<C>>,
    witness: Option<FactorMatrix<C>>,
}

impl<C: Coeff> CurvatureMatrix<C> {
    /// A curvature matrix with no factorization attached.
    pub fn from_entries(n: usize, r: usize, entries: Vec<Form<C>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        if entries.len() != r * r {
            return Err(Error::ArityMismatch {
                expected: r * r,
                got: entries.len(),
            });
        }
        for e in &entries {
            if e.base_dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: e.base_dim(),
                });
            }
            if !e.is_homogeneous(1, 1) {
                return Err(Error::NotHomogeneous { p: 1, q: 1 });
            }
        }
        Ok(CurvatureMatrix {
            n,
            r,
            entries,
            witness: None,
        })
    }

    /// Block-diagonal sum `diag(self, other)`; a witness survives when both have one.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let r = self.r + other.r;
        let zero = Form::zero(self.n)?;
        let entries = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| match (i < self.r, j < self.r) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.r, j - self.r).clone(),
                _ => zero.clone(),
            })
            .collect();
        let witness = match (&self.witness, &other.witness) {
            (Some(a), Some(b)) => {
                let m = a.m + b.m;
                let entries = (0..r)
                    .flat_map(|i| (0..m).map(move |k| (i, k)))
                    .map(|(i, k)| match (i < a.r, k < a.m) {
                        (true, true) => a.get(i, k).clone(),
                        (false, false) => b.get(i - a.r, k - a.m).clone(),
                        _ => zero.clone(),
                    })
                    .collect();
                Some(FactorMatrix::new(self.n, r, m, entries)?)
            }
            _ => None,
        };
        Ok(CurvatureMatrix {
            n: self.n,
            r,
            entries,
            witness,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> &Form<C> {
        &self.entries[i * self.r + j]
    }

    pub fn witness(&self) -> Option<&FactorMatrix<C>> {
        self.witness.as_ref()
    }

    pub fn is_witnessed(&self) -> bool {
        self.witness.is_some()
    }

    /// Largest coefficient modulus over all entries, at least 1.
    pub fn scale(&self) -> f64 {
        self.entries.iter().map(Form::scale).fold(1.0, f64::max)
    }

    pub fn to_float(&self) -> CurvatureMatrix<num_complex::Complex64> {
        CurvatureMatrix {
            n: self.n,
            r: self.r,
            entries: self.entries.iter().map(Form::to_float).collect(),
            witness: self.witness.as_ref().map(|w| FactorMatrix {
                n: w.n,
                r: w.r,
                m: w.m,
                entries: w.entries.iter().map(Form::to_float).collect(),
            }),
        }
    }

    /// Whether the attached witness reproduces the entries: exactly for exact
    /// scalars, within [`WITNESS_RTOL`]`·scale` for floats. `None` without a witness.
    pub fn witness_consistent(&self) -> Option<bool> {
        let witness = self.witness.as_ref()?;
        let recomputed = bott_chern_curvature(witness);
        let limit = WITNESS_RTOL * self.scale();
        Some(self.entries.iter().zip(&recomputed.entries).all(|(a, b)| {
            match C::MODE {
                ScalarMode::Exact => a == b,
                ScalarMode::Float => a.try_sub(b).is_ok_and(|d| d.max_abs_coeff() <= limit),
            }
        }))
    }

    pub fn to_literal(&self) -> CurvatureMatrixLiteral
    where
        C: CoeffLiteral,
    {
        CurvatureMatrixLiteral {
            n: self.n,
            r: self.r,
            omega: (0..self.r)
                .map(|i| (0..self.r).map(|j| self.get(i, j).to_literal()).collect())
                .collect(),
        }
    }

    pub fn from_literal(lit: &CurvatureMatrixLiteral) -> Result<Self>
    where
        C: CoeffLiteral,
    {
        if lit.omega.len() != lit.r {
            return Err(Error::parse(
                "omega",
                format!("expected {} rows, got {}", lit.r, lit.omega.len()),
            ));
        }
        let mut entries = Vec::with_capacity(lit.r * lit.r);
        for (i, row) in lit.omega.iter().enumerate() {
            if row.len() != lit.r {
                return Err(Error::parse(
                    format!("omega[{i}]"),
                    format!("expected {} columns, got {}", lit.r, row.len()),
                ));
            }
            for (j, entry) in row.iter().enumerate() {
                let form = Form::from_literal(entry).map_err(|e| {
                    Error::parse(format!("omega[{i}][{j}]"), e.to_string())
                })?;
                if form.base_dim() != lit.n {
                    return Err(Error::parse(
                        format!("omega[{i}][{j}].n"),
                        format!("expected {}, got {}", lit.n, form.base_dim()),
                    ));
                }
                if !form.is_homogeneous(1, 1) {
                    return Err(Error::parse(
                        format!("omega[{i}][{j}]"),
                        "entry is not a (1,1)-form",
                    ));
                }
                entries.push(form);
            }
        }
        Self::from_entries(lit.n, lit.r, entries)
    }
}

/// `Ω = A ∧ Āᵗ`, that is `Ωⁱⱼ = Σ_k Aᵢₖ ∧ conj(Aⱼₖ)`, with `A` kept as witness.
pub fn bott_chern_curvature<C: Coeff>(a: &FactorMatrix<C>) -> CurvatureMatrix<C> {
    let conjugates: Vec<Form<C>> = a.entries.iter().map(Form::conjugate).collect();
    let zero = Form::zero(a.n).expect("valid base dimension");
    let entries = (0..a.r)
        .flat_map(|i| (0..a.r).map(move |j| (i, j)))
        .map(|(i, j)| {
            (0..a.m).fold(zero.clone(), |acc, k| {
                acc.add_unchecked(&a.get(i, k).wedge_unchecked(&conjugates[j * a.m + k]))
            })
        })
        .collect();
    CurvatureMatrix {
        n: a.n,
        r: a.r,
        entries,
        witness: Some(a.clone()),
    }
}

/// `Ω̃ = P⁻¹ Ω P`.
///
/// A witness `A` is carried over as `P̄ᵗA` when `P` is unitary (exactly for
/// exact scalars, within [`WITNESS_RTOL`] for floats); otherwise it is dropped.
pub fn change_frame<C: Coeff>(omega: &CurvatureMatrix<C>, p: &Matrix<C>) -> Result<CurvatureMatrix<C>> {
    let r = omega.r;
    if p.rows() != r || p.cols() != r {
        return Err(Error::Shape(format!(
            "frame change must be {r}x{r}, got {}x{}",
            p.rows(),
            p.cols()
        )));
    }
    let p_inv = p.inverse()?;
    let zero = Form::zero(omega.n)?;
    // (ΩP)ᵃⱼ first, then P⁻¹ on the left.
    let omega_p: Vec<Form<C>> = (0..r)
        .flat_map(|a| (0..r).map(move |j| (a, j)))
        .map(|(a, j)| {
            (0..r).fold(zero.clone(), |acc, b| {
                acc.add_unchecked(&omega.get(a, b).scaled(p.get(b, j)))
            })
        })
        .collect();
    let entries = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .map(|(i, j)| {
            (0..r).fold(zero.clone(), |acc, a| {
                acc.add_unchecked(&omega_p[a * r + j].scaled(p_inv.get(i, a)))
            })
        })
        .collect();
    let witness = match &omega.witness {
        Some(a) if p.is_unitary(WITNESS_RTOL) => Some(a.left_adjoint_mul(p)),
        _ => None,
    };
    Ok(CurvatureMatrix {
        n: omega.n,
        r,
        entries,
        witness,
    })
}

/// Dense coefficients `T⁽ᵖ⁾ᵢₖ`: coordinate `p < n`, frame row `i < r`, column `k < m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<C> {
    n: usize,
    r: usize,
    m: usize,
    t: Vec<C>,
}

impl<C: Coeff> CurvatureTensor<C> {
    /// Values in `[p][i][k]` order.
    pub fn new(n: usize, r: usize, m: usize, values: Vec<C>) -> Result<Self> {
        if n == 0 || n > crate::forms::MAX_BASE_DIM {
            return Err(Error::BaseDimension(n));
        }
        if r == 0 || m == 0 {
            return Err(Error::Shape("rank and column count must be positive".into()));
        }
        if values.len() != n * r * m {
            return Err(Error::ArityMismatch {
                expected: n * r * m,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.to_c64().is_finite()) {
            return Err(Error::Shape("tensor entries must be finite".into()));
        }
        Ok(CurvatureTensor { n, r, m, t: values })
    }

    pub fn from_fn(n: usize, r: usize, m: usize, f: impl Fn(usize, usize, usize) -> C) -> Result<Self> {
        let mut values = Vec::with_capacity(n * r * m);
        for p in 0..n {
            for i in 0..r {
                for k in 0..m {
                    values.push(f(p, i, k));
                }
            }
        }
        Self::new(n, r, m, values)
    }

    pub fn zeros(n: usize, r: usize, m: usize) -> Result<Self> {
        Self::from_fn(n, r, m, |_, _, _| C::zero())
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn columns(&self) -> usize {
        self.m
    }

    pub fn get(&self, p: usize, i: usize, k: usize) -> &C {
        &self.t[(p * self.r + i) * self.m + k]
    }

    /// `Rⁱⱼₚq = Σ_k T⁽ᵖ⁾ᵢₖ · conj(T⁽q⁾ⱼₖ)`.
    pub fn curvature_coefficient(&self, i: usize, j: usize, p: usize, q: usize) -> C {
        (0..self.m).fold(C::zero(), |acc, k| {
            acc + self.get(p, i, k).clone() * self.get(q, j, k).conj()
        })
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> CurvatureTensor<D> {
        CurvatureTensor {
            n: self.n,
            r: self.r,
            m: self.m,
            t: self.t.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> CurvatureTensor<num_complex::Complex64> {
        self.map(Coeff::to_c64)
    }

    pub fn to_literal(&self) -> InstanceLiteral
    where
        C: CoeffLiteral,
    {
        InstanceLiteral {
            schema: Some(1),
            n: self.n,
            r: self.r,
            m: self.m,
            t: (0..self.n)
                .map(|p| {
                    (0..self.r)
                        .map(|i| (0..self.m).map(|k| self.get(p, i, k).to_literal()).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_literal(lit: &InstanceLiteral) -> Result<Self>
    where
        C: CoeffLiteral,
    {
        if let Some(schema) = lit.schema {
            if schema != 1 {
                return Err(Error::parse("schema", format!("unsupported schema {schema}")));
            }
        }
        if lit.t.len() != lit.n {
            return Err(Error::parse(
                "T",
                format!("expected {} coordinate slices, got {}", lit.n, lit.t.len()),
            ));
        }
        let mut values = Vec::with_capacity(lit.n * lit.r * lit.m);
        for (p, slice) in lit.t.iter().enumerate() {
            if slice.len() != lit.r {
                return Err(Error::parse(
                    format!("T[{p}]"),
                    format!("expected {} rows, got {}", lit.r, slice.len()),
                ));
            }
            for (i, row) in slice.iter().enumerate() {
                if row.len() != lit.m {
                    return Err(Error::parse(
                        format!("T[{p}][{i}]"),
                        format!("expected {} columns, got {}", lit.m, row.len()),
                    ));
                }
                for (k, entry) in row.iter().enumerate() {
                    values.push(C::from_literal(entry, &format!("T[{p}][{i}][{k}]"))?);
                }
            }
        }
        Self::new(lit.n, lit.r, lit.m, values)
    }
}

/// `Aᵢₖ = Σ_p T⁽ᵖ⁾ᵢₖ · dzᵖ`.
pub fn factor_from_tensor<C: Coeff>(t: &CurvatureTensor<C>) -> FactorMatrix<C> {
    let entries = (0..t.r)
        .flat_map(|i| (0..t.m).map(move |k| (i, k)))
        .map(|(i, k)| {
            Form::from_terms(
                t.n,
                (0..t.n).map(|p| (Monomial::new(1 << p, 0), t.get(p, i, k).clone())),
            )
            .expect("valid base dimension")
        })
        .collect();
    FactorMatrix {
        n: t.n,
        r: t.r,
        m: t.m,
        entries,
    }
}

/// Both evaluation routes of the Griffiths quadratic form.
#[derive(Clone, Debug, PartialEq)]
pub struct GriffithsValue<C> {
    /// `Σ Rⁱⱼₚq ξʲ ηᵖ conj(ξⁱ) conj(η^q)`.
    pub contraction: C,
    /// `Σ_k |Σ_{i,p} T⁽ᵖ⁾ᵢₖ conj(ξⁱ) ηᵖ|²`.
    pub sum_of_squares: C,
}

/// Griffiths quadratic form of a factored curvature tensor at fibre direction
/// `xi` (length `r`) and base direction `eta` (length `n`).
#[allow(clippy::needless_range_loop)]
pub fn griffiths_value<C: Coeff>(
    t: &CurvatureTensor<C>,
    xi: &[C],
    eta: &[C],
) -> Result<GriffithsValue<C>> {
    if xi.len() != t.r {
        return Err(Error::ArityMismatch {
            expected: t.r,
            got: xi.len(),
        });
    }
    if eta.len() != t.n {
        return Err(Error::ArityMismatch {
            expected: t.n,
            got: eta.len(),
        });
    }
    let mut contraction = C::zero();
    for i in 0..t.r {
        for j in 0..t.r {
            for p in 0..t.n {
                for q in 0..t.n {
                    let weight = xi[j].clone() * eta[p].clone() * xi[i].conj() * eta[q].conj();
                    contraction = contraction + t.curvature_coefficient(i, j, p, q) * weight;
                }
            }
        }
    }
    let mut sum_of_squares = C::zero();
    for k in 0..t.m {
        let mut inner = C::zero();
        for i in 0..t.r {
            for p in 0..t.n {
                inner = inner + t.get(p, i, k).clone() * xi[i].conj() * eta[p].clone();
            }
        }
        sum_of_squares = sum_of_squares + inner.clone() * inner.conj();
    }
    Ok(GriffithsValue {
        contraction,
        sum_of_squares,
    })
}

/// Instance file: `T` indexed `[p][i][k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub n: usize,
    pub r: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub t: Vec<Vec<Vec<ComplexLiteral>>>,
}

/// Explicit curvature matrix: `omega[i][j]` is a (1,1)-form literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureMatrixLiteral {
    pub n: usize,
    pub r: usize,
    pub omega: Vec<Vec<FormLiteral>>,
}
