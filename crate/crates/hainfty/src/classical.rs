//! Ungraded hom-associative algebras, hom-bimodules, and their Hochschild
//! complex, computed directly with matrices on Hom(A^{⊗n}, M). This is fully
//! independent of the coderivation machinery and serves as a second path for
//! cross-checking the graded computations in their degree-0 specialization.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{sign_pow, Rat};

/// A hom-associative algebra on ℚ^d: a product μ : A⊗A → A written as a
/// d × d² matrix (column index i·d + j for the pair (eᵢ, eⱼ)) and a twisting
/// endomorphism α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalAlgebra {
    dim: usize,
    mu: Matrix,
    alpha: Matrix,
}

impl ClassicalAlgebra {
    pub fn new(dim: usize, mu: Matrix, alpha: Matrix) -> Result<Self> {
        if mu.rows() != dim || mu.cols() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: mu.cols() });
        }
        if alpha.rows() != dim || alpha.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: alpha.cols() });
        }
        Ok(ClassicalAlgebra { dim, mu, alpha })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> &Matrix {
        &self.mu
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    /// α(μ(a,b)) = μ(α(a), α(b)).
    pub fn is_multiplicative(&self) -> bool {
        let lhs = self.alpha.mat_mul(&self.mu).unwrap();
        let rhs = self.mu.mat_mul(&self.alpha.kron(&self.alpha)).unwrap();
        lhs == rhs
    }

    /// μ(α(a), μ(b,c)) = μ(μ(a,b), α(c)).
    pub fn is_hom_associative(&self) -> bool {
        let d = self.dim;
        let id = Matrix::identity(d);
        let lhs = self.mu.mat_mul(&self.alpha.kron(&self.mu)).unwrap();
        let rhs = self.mu.mat_mul(&self.mu.kron(&self.alpha)).unwrap();
        let _ = id;
        lhs == rhs
    }

    pub fn alpha_power(&self, k: usize) -> Matrix {
        let mut out = Matrix::identity(self.dim);
        for _ in 0..k {
            out = self.alpha.mat_mul(&out).unwrap();
        }
        out
    }
}

/// A hom-bimodule (M, β, ·) over a hom-associative algebra: left action
/// A⊗M → M (m × (d·m) matrix) and right action M⊗A → M (m × (m·d) matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalBimodule {
    dim: usize,
    beta: Matrix,
    left: Matrix,
    right: Matrix,
}

impl ClassicalBimodule {
    pub fn new(dim: usize, beta: Matrix, left: Matrix, right: Matrix, alg_dim: usize) -> Result<Self> {
        if beta.rows() != dim || beta.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: beta.cols() });
        }
        if left.rows() != dim || left.cols() != alg_dim * dim {
            return Err(Error::DimensionMismatch { expected: alg_dim * dim, got: left.cols() });
        }
        if right.rows() != dim || right.cols() != dim * alg_dim {
            return Err(Error::DimensionMismatch { expected: dim * alg_dim, got: right.cols() });
        }
        Ok(ClassicalBimodule { dim, beta, left, right })
    }

    /// The algebra acting on itself by its own product.
    pub fn adjoint(alg: &ClassicalAlgebra) -> Self {
        ClassicalBimodule {
            dim: alg.dim,
            beta: alg.alpha.clone(),
            left: alg.mu.clone(),
            right: alg.mu.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> &Matrix {
        &self.beta
    }

    pub fn left(&self) -> &Matrix {
        &self.left
    }

    pub fn right(&self) -> &Matrix {
        &self.right
    }

    pub fn beta_power(&self, k: usize) -> Matrix {
        let mut out = Matrix::identity(self.dim);
        for _ in 0..k {
            out = self.beta.mat_mul(&out).unwrap();
        }
        out
    }

    /// β-equivariance of both actions plus the three mixed associativity
    /// diagrams: α(a)·(b·m) = μ(a,b)·β(m), β(m)·μ(a,b) = (m·a)·α(b), and
    /// α(a)·(m·b) = (a·m)·α(b).
    pub fn verify_axioms(&self, alg: &ClassicalAlgebra) -> bool {
        let a = &alg.alpha;
        let b = &self.beta;
        let mu = &alg.mu;
        let l = &self.left;
        let r = &self.right;
        // β(a·m) = α(a)·β(m), β(m·a) = β(m)·α(a).
        if b.mat_mul(l).unwrap() != l.mat_mul(&a.kron(b)).unwrap() {
            return false;
        }
        if b.mat_mul(r).unwrap() != r.mat_mul(&b.kron(a)).unwrap() {
            return false;
        }
        // A⊗A⊗M, M⊗A⊗A, A⊗M⊗A diagrams.
        let d1 = l.mat_mul(&a.kron(l)).unwrap() == l.mat_mul(&mu.kron(b)).unwrap();
        let d2 = r.mat_mul(&b.kron(mu)).unwrap() == r.mat_mul(&r.kron(a)).unwrap();
        let d3 = l.mat_mul(&a.kron(r)).unwrap() == r.mat_mul(&l.kron(a)).unwrap();
        d1 && d2 && d3
    }
}

fn kron_list(mats: &[&Matrix]) -> Matrix {
    let mut out = Matrix::identity(1);
    for m in mats {
        out = out.kron(m);
    }
    out
}

fn alpha_tensor(alg: &ClassicalAlgebra, n: usize) -> Matrix {
    let refs: Vec<&Matrix> = (0..n).map(|_| &alg.alpha).collect();
    kron_list(&refs)
}

fn vec_of(m: &Matrix) -> Vec<Rat> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m.get(i, j).clone());
        }
    }
    out
}

/// Basis of equivariant n-cochains {f : A^{⊗n} → M, β∘f = f∘α^{⊗n}}, each
/// returned as an m × dⁿ matrix. Computed as the nullspace of the
/// commutation constraint.
pub fn cochain_basis(alg: &ClassicalAlgebra, bim: &ClassicalBimodule, n: usize) -> Vec<Matrix> {
    let d = alg.dim;
    let m = bim.dim;
    let cols_f = d.pow(n as u32);
    let hom_dim = m * cols_f;
    let an = alpha_tensor(alg, n);
    // Row per Hom coordinate of β·F − F·α^{⊗n}; column per coordinate of F.
    let mut constraint = Matrix::zero(hom_dim, hom_dim);
    for fi in 0..m {
        for fj in 0..cols_f {
            // Contribution of F[fi,fj] to (β·F)[i,fj] is β[i,fi]; to
            // (F·αⁿ)[fi,j] it is αⁿ[fj,j].
            let col = fi * cols_f + fj;
            for i in 0..m {
                let c = bim.beta.get(i, fi).clone();
                if !c.is_zero() {
                    let row = i * cols_f + fj;
                    let cur = constraint.get(row, col).clone();
                    constraint.set(row, col, cur + c);
                }
            }
            for j in 0..cols_f {
                let c = an.get(fj, j).clone();
                if !c.is_zero() {
                    let row = fi * cols_f + j;
                    let cur = constraint.get(row, col).clone();
                    constraint.set(row, col, cur - c);
                }
            }
        }
    }
    constraint
        .nullspace_basis()
        .into_iter()
        .map(|v| {
            let mut out = Matrix::zero(m, cols_f);
            for i in 0..m {
                for j in 0..cols_f {
                    out.set(i, j, v[i * cols_f + j].clone());
                }
            }
            out
        })
        .collect()
}

/// δ_{α,β}(f)(a_1,…,a_{n+1}) = α^{n−1}(a_1)·f(a_2,…)
///   + Σᵢ (−1)ⁱ f(α(a_1),…,μ(aᵢ,a_{i+1}),…,α(a_{n+1}))
///   + (−1)^{n+1} f(a_1,…,a_n)·α^{n−1}(a_{n+1}), as a matrix on A^{⊗(n+1)}.
pub fn delta(alg: &ClassicalAlgebra, bim: &ClassicalBimodule, n: usize, f: &Matrix) -> Matrix {
    let d = alg.dim;
    let m = bim.dim;
    assert_eq!(f.rows(), m);
    assert_eq!(f.cols(), d.pow(n as u32));
    let ap = alg.alpha_power(n.saturating_sub(1));
    let mut out = bim.left.mat_mul(&ap.kron(f)).unwrap();
    for i in 1..=n {
        let mut factors: Vec<&Matrix> = Vec::new();
        for _ in 1..i {
            factors.push(&alg.alpha);
        }
        factors.push(&alg.mu);
        for _ in (i + 2)..=(n + 1) {
            factors.push(&alg.alpha);
        }
        let inner = kron_list(&factors);
        out.add_scaled(&f.mat_mul(&inner).unwrap(), &sign_pow(i as i64));
    }
    out.add_scaled(
        &bim.right.mat_mul(&f.kron(&ap)).unwrap(),
        &sign_pow(n as i64 + 1),
    );
    out
}

/// Matrix of δ_{α,β} : Cⁿ → C^{n+1} in the `cochain_basis` bases.
pub fn delta_matrix(alg: &ClassicalAlgebra, bim: &ClassicalBimodule, n: usize) -> Result<Matrix> {
    let basis_n = cochain_basis(alg, bim, n);
    let basis_n1 = cochain_basis(alg, bim, n + 1);
    let m = bim.dim;
    let cols_f = alg.dim.pow(n as u32 + 1);
    let mut span = Matrix::zero(m * cols_f, basis_n1.len());
    for (j, g) in basis_n1.iter().enumerate() {
        for (i, v) in vec_of(g).into_iter().enumerate() {
            span.set(i, j, v);
        }
    }
    let mut out = Matrix::zero(basis_n1.len(), basis_n.len());
    for (j, f) in basis_n.iter().enumerate() {
        let df = delta(alg, bim, n, f);
        let coords = span.solve_linear(&vec_of(&df))?.ok_or_else(|| {
            Error::Incompatible("coboundary left the equivariant subspace".into())
        })?;
        for (i, v) in coords.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub n: usize,
    pub dim_cochains: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim: usize,
}

/// dim Hⁿ = nullity(δₙ) − rank(δ_{n−1}); δ₀ is taken to be zero.
pub fn cohomology_dim(
    alg: &ClassicalAlgebra,
    bim: &ClassicalBimodule,
    n: usize,
) -> Result<CohomologyReport> {
    let dim_cochains = cochain_basis(alg, bim, n).len();
    let rank_out = delta_matrix(alg, bim, n)?.rank();
    let rank_in = if n >= 2 { delta_matrix(alg, bim, n - 1)?.rank() } else { 0 };
    Ok(CohomologyReport {
        n,
        dim_cochains,
        rank_in,
        rank_out,
        dim: dim_cochains - rank_out - rank_in,
    })
}

/// (f ∘ g)(a_1,…,a_{p+q−1})
///   = Σᵢ (−1)^{(i−1)(q−1)} f(α^{q−1}a_1, …, g(aᵢ,…,a_{i+q−1}), …, α^{q−1}a_{p+q−1})
/// for f a p-cochain and g a q-cochain with coefficients in A itself.
pub fn classical_circle(
    alg: &ClassicalAlgebra,
    f: &Matrix,
    p: usize,
    g: &Matrix,
    q: usize,
) -> Matrix {
    let d = alg.dim;
    let aq = alg.alpha_power(q - 1);
    let mut out = Matrix::zero(d, d.pow((p + q - 1) as u32));
    for i in 1..=p {
        let mut factors: Vec<&Matrix> = Vec::new();
        for _ in 1..i {
            factors.push(&aq);
        }
        factors.push(g);
        for _ in (i + 1)..=p {
            factors.push(&aq);
        }
        out.add_scaled(
            &f.mat_mul(&kron_list(&factors)).unwrap(),
            &sign_pow(((i - 1) * (q - 1)) as i64),
        );
    }
    out
}

/// [f, g] = f∘g − (−1)^{(p−1)(q−1)} g∘f.
pub fn classical_bracket(
    alg: &ClassicalAlgebra,
    f: &Matrix,
    p: usize,
    g: &Matrix,
    q: usize,
) -> Matrix {
    let mut out = classical_circle(alg, f, p, g, q);
    out.add_scaled(
        &classical_circle(alg, g, q, f, p),
        &-sign_pow(((p - 1) * (q - 1)) as i64),
    );
    out
}

/// (f ∪_α g)(a_1,…,a_{p+q}) = μ(α^{q−1} f(a_1,…,a_p), α^{p−1} g(a_{p+1},…)).
pub fn classical_cup(
    alg: &ClassicalAlgebra,
    f: &Matrix,
    p: usize,
    g: &Matrix,
    q: usize,
) -> Matrix {
    let lf = alg.alpha_power(q - 1).mat_mul(f).unwrap();
    let rg = alg.alpha_power(p - 1).mat_mul(g).unwrap();
    alg.mu.mat_mul(&lf.kron(&rg)).unwrap()
}

/// The n-cochain picked out by a single matrix unit, as a convenience for
/// building test inputs.
pub fn unit_cochain(m: usize, cols: usize, i: usize, j: usize) -> Matrix {
    let mut out = Matrix::zero(m, cols);
    out.set(i, j, Rat::one());
    out
}
