//! Dynamical Lie algebra closure under the real Hilbert–Schmidt inner product.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{c64, ComplexMatrix, Tolerances};

/// How a basis element entered the closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Orthogonalised input generator with this index.
    Generator(usize),
    /// Orthogonalised commutator of two earlier basis elements.
    Commutator(usize, usize),
    /// Element of a fixed reference basis.
    Fixed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Generator(i) => write!(f, "generator {i}"),
            Provenance::Commutator(i, j) => write!(f, "[E{i}, E{j}]"),
            Provenance::Fixed => write!(f, "fixed"),
        }
    }
}

/// Orthonormal basis of a real Lie algebra of anti-Hermitian matrices.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    dim_space: usize,
    elements: Vec<ComplexMatrix>,
    provenance: Vec<Provenance>,
}

impl AlgebraBasis {
    pub fn dim_space(&self) -> usize {
        self.dim_space
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Real dimension of the algebra.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Orthonormal basis of u(D).
    pub fn full_unitary(dim: usize) -> Self {
        let mut elements = Vec::with_capacity(dim * dim);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..dim {
            let mut e = ComplexMatrix::zeros(dim);
            e.set(i, i, c64(0.0, 1.0));
            elements.push(e);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let mut re = ComplexMatrix::zeros(dim);
                re.set(i, j, c64(s, 0.0));
                re.set(j, i, c64(-s, 0.0));
                elements.push(re);
                let mut im = ComplexMatrix::zeros(dim);
                im.set(i, j, c64(0.0, s));
                im.set(j, i, c64(0.0, s));
                elements.push(im);
            }
        }
        let provenance = vec![Provenance::Fixed; elements.len()];
        Self { dim_space: dim, elements, provenance }
    }

    /// `(X_in, ‖X − X_in‖F)` with `X_in` the orthogonal projection onto the span.
    pub fn project(&self, x: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
        if x.dim() != self.dim_space {
            return Err(Error::DimensionMismatch { expected: self.dim_space, found: x.dim() });
        }
        let mut inside = ComplexMatrix::zeros(self.dim_space);
        for e in &self.elements {
            inside.axpy(e.inner_re(x), e);
        }
        let residual = (x - &inside).frobenius_norm();
        Ok((inside, residual))
    }

    pub fn residual(&self, x: &ComplexMatrix) -> Result<f64> {
        self.project(x).map(|(_, r)| r)
    }

    pub fn contains(&self, x: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
        Ok(self.residual(x)? <= tol.algebra_tol)
    }

    /// Real coordinates `⟨Eᵢ, X⟩`.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<f64> {
        self.elements.iter().map(|e| e.inner_re(x)).collect()
    }

    /// Largest mutual projection residual between the two spans.
    pub fn span_distance(&self, other: &AlgebraBasis) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for e in &self.elements {
            worst = worst.max(other.residual(e)?);
        }
        for e in &other.elements {
            worst = worst.max(self.residual(e)?);
        }
        Ok(worst)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner_re(b) - target).abs());
            }
        }
        worst
    }

    /// Largest projection residual of `[Eᵢ, Eⱼ]` over all pairs.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, b) in self.elements.iter().enumerate() {
            for a in &self.elements[..j] {
                let c = a.commutator_unchecked(b);
                worst = worst.max(self.residual(&c).unwrap_or(f64::INFINITY));
            }
        }
        worst
    }

    fn try_add(&mut self, x: &ComplexMatrix, origin: Provenance, tol: f64) -> bool {
        let norm = x.frobenius_norm();
        if norm == 0.0 || self.elements.len() >= self.dim_space * self.dim_space {
            return false;
        }
        let mut r = x.scale_re(1.0 / norm);
        for _ in 0..2 {
            for e in &self.elements {
                let coef = e.inner_re(&r);
                r.axpy(-coef, e);
            }
        }
        let rn = r.frobenius_norm();
        if rn <= tol {
            return false;
        }
        self.elements.push(r.scale_re(1.0 / rn).anti_hermitian_part());
        self.provenance.push(origin);
        true
    }
}

/// Smallest real Lie algebra containing `generators`, as an orthonormal basis.
///
/// Generators are Gram–Schmidt orthogonalised first; then commutators of
/// basis pairs `(i, j)`, `i < j`, are visited with `j` increasing, and any
/// normalised commutator whose residual exceeds `algebra_tol` is appended.
pub fn closure(generators: &[ComplexMatrix], tol: &Tolerances) -> Result<AlgebraBasis> {
    let first = generators.first().ok_or(Error::EmptyGenerators)?;
    let dim = first.dim();
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
        }
        let residual = g.anti_hermitian_residual();
        if residual > tol.eq_tol {
            return Err(Error::NotAntiHermitian { residual });
        }
    }
    let mut basis = AlgebraBasis { dim_space: dim, elements: Vec::new(), provenance: Vec::new() };
    for (i, g) in generators.iter().enumerate() {
        basis.try_add(g, Provenance::Generator(i), tol.algebra_tol);
    }
    let mut j = 0;
    while j < basis.elements.len() {
        for i in 0..j {
            let c = basis.elements[i].commutator_unchecked(&basis.elements[j]);
            basis.try_add(&c, Provenance::Commutator(i, j), tol.algebra_tol);
        }
        j += 1;
    }
    Ok(basis)
}
