//! Two-term structures and their categorified companions: the explicit
//! axiom list on a complex A1 → A0, classification of the d = 0 case by
//! a third-cohomology class, crossed modules for the μ3 = 0 case, and the
//! equivalence with algebra structures on a 2-vector space.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::classical::{cochain_basis, delta, ClassicalAlgebra, ClassicalBimodule};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{rat, Rat};

fn kron3(a: &Matrix, b: &Matrix, c: &Matrix) -> Matrix {
    a.kron(b).kron(c)
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

/// A two-term structure: complex d : A1 → A0, the three nonzero blocks of
/// the binary product (the A1⊗A1 block is forced to vanish), a ternary map
/// μ3 : A0⊗A0⊗A0 → A1, and the pair of twisting maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermHA {
    dim0: usize,
    dim1: usize,
    d: Matrix,
    mu00: Matrix,
    mu01: Matrix,
    mu10: Matrix,
    mu3: Matrix,
    alpha0: Matrix,
    alpha1: Matrix,
}

impl TwoTermHA {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        d: Matrix,
        mu00: Matrix,
        mu01: Matrix,
        mu10: Matrix,
        mu3: Matrix,
        alpha0: Matrix,
        alpha1: Matrix,
    ) -> Result<Self> {
        let n0 = alpha0.rows();
        let n1 = alpha1.rows();
        for (name, m, r, c) in [
            ("alpha0", &alpha0, n0, n0),
            ("alpha1", &alpha1, n1, n1),
            ("d", &d, n0, n1),
            ("mu00", &mu00, n0, n0 * n0),
            ("mu01", &mu01, n1, n0 * n1),
            ("mu10", &mu10, n1, n1 * n0),
            ("mu3", &mu3, n1, n0 * n0 * n0),
        ] {
            if m.rows() != r || m.cols() != c {
                return Err(Error::InvalidInput(format!("{name}: wrong shape")));
            }
        }
        if alpha0.mat_mul(&d)? != d.mat_mul(&alpha1)? {
            return Err(Error::InvalidInput("twists do not commute with d".into()));
        }
        if alpha1.mat_mul(&mu3)? != mu3.mat_mul(&kron3(&alpha0, &alpha0, &alpha0))? {
            return Err(Error::InvalidInput("mu3 is not equivariant".into()));
        }
        Ok(TwoTermHA { dim0: n0, dim1: n1, d, mu00, mu01, mu10, mu3, alpha0, alpha1 })
    }

    pub fn dim0(&self) -> usize {
        self.dim0
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn mu00(&self) -> &Matrix {
        &self.mu00
    }

    pub fn mu01(&self) -> &Matrix {
        &self.mu01
    }

    pub fn mu10(&self) -> &Matrix {
        &self.mu10
    }

    pub fn mu3(&self) -> &Matrix {
        &self.mu3
    }

    pub fn alpha0(&self) -> &Matrix {
        &self.alpha0
    }

    pub fn alpha1(&self) -> &Matrix {
        &self.alpha1
    }

    pub fn is_skeletal(&self) -> bool {
        self.d.is_zero()
    }

    pub fn is_strict(&self) -> bool {
        self.mu3.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the axiom list (a)–(j). (a) — vanishing of the product on A1⊗A1 —
/// holds structurally because that block is not part of the data.
pub fn verify_twoterm(t: &TwoTermHA) -> AxiomReport {
    let i0 = Matrix::identity(t.dim0);
    let i1 = Matrix::identity(t.dim1);
    let a0 = &t.alpha0;
    let a1 = &t.alpha1;
    let a0sq = a0.mat_mul(a0).unwrap();
    let d = &t.d;
    let mut failures = Vec::new();
    let mut check = |label: &str, lhs: Matrix, rhs: Matrix| {
        if lhs != rhs {
            failures.push(String::from(label));
        }
    };
    check(
        "(b)",
        a0.mat_mul(&t.mu00).unwrap(),
        t.mu00.mat_mul(&a0.kron(a0)).unwrap(),
    );
    check(
        "(c)",
        a1.mat_mul(&t.mu01).unwrap(),
        t.mu01.mat_mul(&a0.kron(a1)).unwrap(),
    );
    check(
        "(d)",
        a1.mat_mul(&t.mu10).unwrap(),
        t.mu10.mat_mul(&a1.kron(a0)).unwrap(),
    );
    check(
        "(e)",
        d.mat_mul(&t.mu01).unwrap(),
        t.mu00.mat_mul(&i0.kron(d)).unwrap(),
    );
    check(
        "(f)",
        d.mat_mul(&t.mu10).unwrap(),
        t.mu00.mat_mul(&d.kron(&i0)).unwrap(),
    );
    check(
        "(g)",
        t.mu01.mat_mul(&d.kron(&i1)).unwrap(),
        t.mu10.mat_mul(&i1.kron(d)).unwrap(),
    );
    let mut assoc = t.mu00.mat_mul(&t.mu00.kron(a0)).unwrap();
    assoc.add_scaled(&t.mu00.mat_mul(&a0.kron(&t.mu00)).unwrap(), &rat(-1));
    check("(h)", d.mat_mul(&t.mu3).unwrap(), assoc);
    let mut i1_rhs = t.mu01.mat_mul(&t.mu00.kron(a1)).unwrap();
    i1_rhs.add_scaled(&t.mu01.mat_mul(&a0.kron(&t.mu01)).unwrap(), &rat(-1));
    check("(i1)", t.mu3.mat_mul(&kron3(&i0, &i0, d)).unwrap(), i1_rhs);
    let mut i2_rhs = t.mu10.mat_mul(&t.mu01.kron(a0)).unwrap();
    i2_rhs.add_scaled(&t.mu01.mat_mul(&a0.kron(&t.mu10)).unwrap(), &rat(-1));
    check("(i2)", t.mu3.mat_mul(&kron3(&i0, d, &i0)).unwrap(), i2_rhs);
    let mut i3_rhs = t.mu10.mat_mul(&t.mu10.kron(a0)).unwrap();
    i3_rhs.add_scaled(&t.mu10.mat_mul(&a1.kron(&t.mu00)).unwrap(), &rat(-1));
    check("(i3)", t.mu3.mat_mul(&kron3(d, &i0, &i0)).unwrap(), i3_rhs);
    let mut j_lhs = t.mu3.mat_mul(&kron3(&t.mu00, a0, a0)).unwrap();
    j_lhs.add_scaled(&t.mu3.mat_mul(&kron3(a0, &t.mu00, a0)).unwrap(), &rat(-1));
    j_lhs.add_scaled(&t.mu3.mat_mul(&kron3(a0, a0, &t.mu00)).unwrap(), &rat(1));
    let mut j_rhs = t.mu10.mat_mul(&t.mu3.kron(&a0sq)).unwrap();
    j_rhs.add_scaled(&t.mu01.mat_mul(&a0sq.kron(&t.mu3)).unwrap(), &rat(1));
    check("(j)", j_lhs, j_rhs);
    AxiomReport { failures }
}

/// A morphism between two-term structures: a chain map (f0, f1) compatible
/// with the twists, plus a corrector f2 : A0⊗A0 → A1′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermMorphism {
    pub f0: Matrix,
    pub f1: Matrix,
    pub f2: Matrix,
}

impl TwoTermMorphism {
    pub fn identity(t: &TwoTermHA) -> Self {
        TwoTermMorphism {
            f0: Matrix::identity(t.dim0),
            f1: Matrix::identity(t.dim1),
            f2: Matrix::zero(t.dim1, t.dim0 * t.dim0),
        }
    }
}

/// (g∘f)_0 = g0 f0, (g∘f)_1 = g1 f1, (g∘f)_2(a,b) = g2(f0 a, f0 b) + g1 f2(a,b).
pub fn compose_twoterm_morphisms(
    g: &TwoTermMorphism,
    f: &TwoTermMorphism,
) -> Result<TwoTermMorphism> {
    Ok(TwoTermMorphism {
        f0: g.f0.mat_mul(&f.f0)?,
        f1: g.f1.mat_mul(&f.f1)?,
        f2: {
            let mut out = g.f2.mat_mul(&f.f0.kron(&f.f0))?;
            out.add_scaled(&g.f1.mat_mul(&f.f2)?, &rat(1));
            out
        },
    })
}

/// Check the morphism conditions: the chain-map and twist compatibilities,
/// then (a)–(d) measuring how f2 corrects the failure of f to preserve the
/// products and the ternary maps.
pub fn verify_twoterm_morphism(
    f: &TwoTermMorphism,
    src: &TwoTermHA,
    dst: &TwoTermHA,
) -> Result<AxiomReport> {
    for (m, r, c) in [
        (&f.f0, dst.dim0, src.dim0),
        (&f.f1, dst.dim1, src.dim1),
        (&f.f2, dst.dim1, src.dim0 * src.dim0),
    ] {
        if m.rows() != r || m.cols() != c {
            return Err(Error::InvalidInput("morphism component: wrong shape".into()));
        }
    }
    let mut failures = Vec::new();
    let mut check = |label: &str, lhs: Matrix, rhs: Matrix| {
        if lhs != rhs {
            failures.push(String::from(label));
        }
    };
    check(
        "chain map",
        f.f0.mat_mul(&src.d).unwrap(),
        dst.d.mat_mul(&f.f1).unwrap(),
    );
    check(
        "twist on f0",
        dst.alpha0.mat_mul(&f.f0).unwrap(),
        f.f0.mat_mul(&src.alpha0).unwrap(),
    );
    check(
        "twist on f1",
        dst.alpha1.mat_mul(&f.f1).unwrap(),
        f.f1.mat_mul(&src.alpha1).unwrap(),
    );
    check(
        "twist on f2",
        dst.alpha1.mat_mul(&f.f2).unwrap(),
        f.f2.mat_mul(&src.alpha0.kron(&src.alpha0)).unwrap(),
    );
    let mut a_rhs = f.f0.mat_mul(&src.mu00).unwrap();
    a_rhs.add_scaled(&dst.mu00.mat_mul(&f.f0.kron(&f.f0)).unwrap(), &rat(-1));
    check("(a)", dst.d.mat_mul(&f.f2).unwrap(), a_rhs);
    let i0 = Matrix::identity(src.dim0);
    let mut b_rhs = f.f1.mat_mul(&src.mu01).unwrap();
    b_rhs.add_scaled(&dst.mu01.mat_mul(&f.f0.kron(&f.f1)).unwrap(), &rat(-1));
    check("(b)", f.f2.mat_mul(&i0.kron(&src.d)).unwrap(), b_rhs);
    let mut c_rhs = f.f1.mat_mul(&src.mu10).unwrap();
    c_rhs.add_scaled(&dst.mu10.mat_mul(&f.f1.kron(&f.f0)).unwrap(), &rat(-1));
    check("(c)", f.f2.mat_mul(&src.d.kron(&i0)).unwrap(), c_rhs);
    let af0 = dst.alpha0.mat_mul(&f.f0).unwrap();
    let mut d_lhs = f.f2.mat_mul(&src.mu00.kron(&src.alpha0)).unwrap();
    d_lhs.add_scaled(&f.f2.mat_mul(&src.alpha0.kron(&src.mu00)).unwrap(), &rat(-1));
    d_lhs.add_scaled(&dst.mu10.mat_mul(&f.f2.kron(&af0)).unwrap(), &rat(-1));
    d_lhs.add_scaled(&dst.mu01.mat_mul(&af0.kron(&f.f2)).unwrap(), &rat(1));
    let mut d_rhs = f.f1.mat_mul(&src.mu3).unwrap();
    d_rhs.add_scaled(
        &dst.mu3.mat_mul(&kron3(&f.f0, &f.f0, &f.f0)).unwrap(),
        &rat(-1),
    );
    check("(d)", d_lhs, d_rhs);
    Ok(AxiomReport { failures })
}

/// The classification record attached to a zero-differential structure with
/// nonzero pieces in the bottom degree and one other: an algebra, the module
/// it acts on, and the top operation viewed as a cochain.
#[derive(Debug, Clone)]
pub struct SkeletalClassification {
    /// The cochain degree: n + 1 for an n-term structure.
    pub degree: usize,
    pub algebra: ClassicalAlgebra,
    pub bimodule: ClassicalBimodule,
    pub theta: Matrix,
    pub is_cocycle: bool,
}

fn classify(
    degree: usize,
    alpha0: &Matrix,
    mu00: &Matrix,
    alpha_m: &Matrix,
    left: &Matrix,
    right: &Matrix,
    theta: &Matrix,
) -> Result<SkeletalClassification> {
    let algebra = ClassicalAlgebra::new(alpha0.rows(), mu00.clone(), alpha0.clone())?;
    if !algebra.is_multiplicative() || !algebra.is_hom_associative() {
        return Err(Error::InvalidInput("degree-0 part is not hom-associative".into()));
    }
    let bimodule = ClassicalBimodule::new(
        alpha_m.rows(),
        alpha_m.clone(),
        left.clone(),
        right.clone(),
        alpha0.rows(),
    )?;
    if !bimodule.verify_axioms(&algebra) {
        return Err(Error::InvalidInput("the actions do not form a bimodule".into()));
    }
    let is_cocycle = delta(&algebra, &bimodule, degree, theta).is_zero();
    Ok(SkeletalClassification {
        degree,
        algebra,
        bimodule,
        theta: theta.clone(),
        is_cocycle,
    })
}

/// Extract (algebra, bimodule, 3-cochain) from a zero-differential structure
/// and report whether the ternary map is a cocycle.
pub fn skeletal_to_cocycle(t: &TwoTermHA) -> Result<SkeletalClassification> {
    if !t.is_skeletal() {
        return Err(Error::InvalidInput("the differential must vanish".into()));
    }
    classify(3, &t.alpha0, &t.mu00, &t.alpha1, &t.mu01, &t.mu10, &t.mu3)
}

fn equivalence_solve(
    cl: &SkeletalClassification,
    theta2: &Matrix,
) -> Result<Option<Matrix>> {
    let n = cl.degree - 1;
    let basis = cochain_basis(&cl.algebra, &cl.bimodule, n);
    let mut target = theta2.clone();
    target.add_scaled(&cl.theta, &rat(-1));
    let rows = target.rows() * target.cols();
    let mut span = Matrix::zero(rows, basis.len());
    for (j, sigma) in basis.iter().enumerate() {
        let ds = delta(&cl.algebra, &cl.bimodule, n, sigma);
        for (i, v) in vec_of(&ds).into_iter().enumerate() {
            span.set(i, j, v);
        }
    }
    let Some(x) = span.solve_linear(&vec_of(&target))? else {
        return Ok(None);
    };
    let mut sigma = Matrix::zero(cl.theta.rows(), cl.algebra.dim().pow(n as u32));
    for (j, c) in x.into_iter().enumerate() {
        sigma.add_scaled(&basis[j], &c);
    }
    Ok(Some(sigma))
}

/// For two skeletal structures on the same complex with the same product
/// blocks and twists, find an equivariant σ : A0⊗A0 → A1 with
/// μ3′ = μ3 + δ(σ). Returns None exactly when the classes differ.
pub fn skeletal_equivalence(t: &TwoTermHA, t2: &TwoTermHA) -> Result<Option<Matrix>> {
    if !t.is_skeletal() || !t2.is_skeletal() {
        return Err(Error::InvalidInput("the differentials must vanish".into()));
    }
    if t.dim0 != t2.dim0
        || t.dim1 != t2.dim1
        || t.mu00 != t2.mu00
        || t.mu01 != t2.mu01
        || t.mu10 != t2.mu10
        || t.alpha0 != t2.alpha0
        || t.alpha1 != t2.alpha1
    {
        return Err(Error::InvalidInput(
            "equivalence needs the same complex, products, and twists".into(),
        ));
    }
    let cl = skeletal_to_cocycle(t)?;
    equivalence_solve(&cl, &t2.mu3)
}

/// An n-term structure with nonzero pieces only in degrees 0 and n−1 and
/// zero differential: a binary product on A0, the two action blocks on the
/// top piece M, and a top operation μ_{n+1} : A0^{⊗(n+1)} → M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NTermHA {
    n: usize,
    dim0: usize,
    dim_m: usize,
    mu00: Matrix,
    left: Matrix,
    right: Matrix,
    mu_top: Matrix,
    alpha0: Matrix,
    alpha_m: Matrix,
}

impl NTermHA {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        mu00: Matrix,
        left: Matrix,
        right: Matrix,
        mu_top: Matrix,
        alpha0: Matrix,
        alpha_m: Matrix,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("need at least two terms".into()));
        }
        let n0 = alpha0.rows();
        let m = alpha_m.rows();
        for (name, mat, r, c) in [
            ("alpha0", &alpha0, n0, n0),
            ("alpha_m", &alpha_m, m, m),
            ("mu00", &mu00, n0, n0 * n0),
            ("left", &left, m, n0 * m),
            ("right", &right, m, m * n0),
            ("mu_top", &mu_top, m, n0.pow(n as u32 + 1)),
        ] {
            if mat.rows() != r || mat.cols() != c {
                return Err(Error::InvalidInput(format!("{name}: wrong shape")));
            }
        }
        let mut a_tensor = Matrix::identity(1);
        for _ in 0..=n {
            a_tensor = a_tensor.kron(&alpha0);
        }
        if alpha_m.mat_mul(&mu_top)? != mu_top.mat_mul(&a_tensor)? {
            return Err(Error::InvalidInput("top operation is not equivariant".into()));
        }
        Ok(NTermHA { n, dim0: n0, dim_m: m, mu00, left, right, mu_top, alpha0, alpha_m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu_top(&self) -> &Matrix {
        &self.mu_top
    }
}

/// Classify an n-term structure of the two-piece, zero-differential shape by
/// an (n+1)-cochain; the structure axioms make it a cocycle.
pub fn nterm_skeletal_to_cocycle(t: &NTermHA) -> Result<SkeletalClassification> {
    classify(t.n + 1, &t.alpha0, &t.mu00, &t.alpha_m, &t.left, &t.right, &t.mu_top)
}

/// The n-term analogue of `skeletal_equivalence`: solve
/// μ_{n+1}′ = μ_{n+1} + δ(σ) for an equivariant n-cochain σ.
pub fn nterm_equivalence(t: &NTermHA, t2: &NTermHA) -> Result<Option<Matrix>> {
    if t.n != t2.n
        || t.dim0 != t2.dim0
        || t.dim_m != t2.dim_m
        || t.mu00 != t2.mu00
        || t.left != t2.left
        || t.right != t2.right
        || t.alpha0 != t2.alpha0
        || t.alpha_m != t2.alpha_m
    {
        return Err(Error::InvalidInput(
            "equivalence needs the same complex, products, and twists".into(),
        ));
    }
    let cl = nterm_skeletal_to_cocycle(t)?;
    equivalence_solve(&cl, &t2.mu_top)
}

/// A crossed module: two hom-associative algebras, a morphism dt : A → B,
/// and a bimodule action of B on A subject to six compatibility identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    a: ClassicalAlgebra,
    b: ClassicalAlgebra,
    dt: Matrix,
    phi_left: Matrix,
    phi_right: Matrix,
}

impl CrossedModule {
    pub fn new(
        a: ClassicalAlgebra,
        b: ClassicalAlgebra,
        dt: Matrix,
        phi_left: Matrix,
        phi_right: Matrix,
    ) -> Result<Self> {
        for alg in [&a, &b] {
            if !alg.is_multiplicative() || !alg.is_hom_associative() {
                return Err(Error::InvalidInput("both algebras must be hom-associative".into()));
            }
        }
        if dt.rows() != b.dim() || dt.cols() != a.dim() {
            return Err(Error::InvalidInput("dt: wrong shape".into()));
        }
        if phi_left.rows() != a.dim() || phi_left.cols() != b.dim() * a.dim() {
            return Err(Error::InvalidInput("phi_left: wrong shape".into()));
        }
        if phi_right.rows() != a.dim() || phi_right.cols() != a.dim() * b.dim() {
            return Err(Error::InvalidInput("phi_right: wrong shape".into()));
        }
        if b.alpha().mat_mul(&dt)? != dt.mat_mul(a.alpha())? {
            return Err(Error::InvalidInput("dt does not commute with the twists".into()));
        }
        if dt.mat_mul(a.mu())? != b.mu().mat_mul(&dt.kron(&dt))? {
            return Err(Error::InvalidInput("dt is not an algebra morphism".into()));
        }
        Ok(CrossedModule { a, b, dt, phi_left, phi_right })
    }

    pub fn a(&self) -> &ClassicalAlgebra {
        &self.a
    }

    pub fn b(&self) -> &ClassicalAlgebra {
        &self.b
    }

    pub fn dt(&self) -> &Matrix {
        &self.dt
    }

    pub fn phi_left(&self) -> &Matrix {
        &self.phi_left
    }

    pub fn phi_right(&self) -> &Matrix {
        &self.phi_right
    }
}

/// The six crossed-module identities plus the bimodule axioms for the
/// action of B on A.
pub fn verify_crossed(c: &CrossedModule) -> Result<AxiomReport> {
    let mut failures = Vec::new();
    let bim = ClassicalBimodule::new(
        c.a.dim(),
        c.a.alpha().clone(),
        c.phi_left.clone(),
        c.phi_right.clone(),
        c.b.dim(),
    )?;
    if !bim.verify_axioms(&c.b) {
        failures.push(String::from("bimodule axioms"));
    }
    let ia = Matrix::identity(c.a.dim());
    let ib = Matrix::identity(c.b.dim());
    let mut check = |label: &str, lhs: Matrix, rhs: Matrix| {
        if lhs != rhs {
            failures.push(String::from(label));
        }
    };
    check(
        "dt(phi(b,m)) = mu_B(b, dt m)",
        c.dt.mat_mul(&c.phi_left).unwrap(),
        c.b.mu().mat_mul(&ib.kron(&c.dt)).unwrap(),
    );
    check(
        "dt(phi(m,b)) = mu_B(dt m, b)",
        c.dt.mat_mul(&c.phi_right).unwrap(),
        c.b.mu().mat_mul(&c.dt.kron(&ib)).unwrap(),
    );
    check(
        "phi(dt m, n) = mu_A(m,n)",
        c.phi_left.mat_mul(&c.dt.kron(&ia)).unwrap(),
        c.a.mu().clone(),
    );
    check(
        "phi(m, dt n) = mu_A(m,n)",
        c.phi_right.mat_mul(&ia.kron(&c.dt)).unwrap(),
        c.a.mu().clone(),
    );
    check(
        "phi(alpha_B b, mu_A(m,n)) = mu_A(phi(b,m), alpha_A n)",
        c.phi_left.mat_mul(&c.b.alpha().kron(c.a.mu())).unwrap(),
        c.a.mu().mat_mul(&c.phi_left.kron(c.a.alpha())).unwrap(),
    );
    check(
        "phi(mu_A(m,n), alpha_B b) = mu_A(alpha_A m, phi(n,b))",
        c.phi_right.mat_mul(&c.a.mu().kron(c.b.alpha())).unwrap(),
        c.a.mu().mat_mul(&c.a.alpha().kron(&c.phi_right)).unwrap(),
    );
    Ok(AxiomReport { failures })
}

/// μ3 = 0 structures become crossed modules: B = A0 with its product,
/// A = A1 with m·n := μ2(dm, n), dt = d, and the action blocks the mixed
/// products.
pub fn strict_to_crossed(t: &TwoTermHA) -> Result<CrossedModule> {
    if !t.is_strict() {
        return Err(Error::InvalidInput("the ternary operation must vanish".into()));
    }
    let b = ClassicalAlgebra::new(t.dim0, t.mu00.clone(), t.alpha0.clone())?;
    let mu_a = t.mu01.mat_mul(&t.d.kron(&Matrix::identity(t.dim1)))?;
    let a = ClassicalAlgebra::new(t.dim1, mu_a, t.alpha1.clone())?;
    CrossedModule::new(a, b, t.d.clone(), t.mu01.clone(), t.mu10.clone())
}

/// The inverse construction: A1 = A, A0 = B, d = dt, products from μ_B and
/// the action blocks, μ3 = 0.
pub fn crossed_to_strict(c: &CrossedModule) -> Result<TwoTermHA> {
    let n0 = c.b.dim();
    let n1 = c.a.dim();
    TwoTermHA::new(
        c.dt.clone(),
        c.b.mu().clone(),
        c.phi_left.clone(),
        c.phi_right.clone(),
        Matrix::zero(n1, n0 * n0 * n0),
        c.b.alpha().clone(),
        c.a.alpha().clone(),
    )
}

/// An algebra structure on a 2-vector space C1 ⇉ C0: source, target, and
/// identity maps; a bilinear functor μ given on objects and morphisms; a
/// multiplicative endofunctor Φ; and the hom-associator, stored as a
/// trilinear map on objects with values in morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomAss2Algebra {
    dim0: usize,
    dim1: usize,
    s: Matrix,
    t: Matrix,
    i: Matrix,
    mu_obj: Matrix,
    mu_mor: Matrix,
    phi0: Matrix,
    phi1: Matrix,
    assoc: Matrix,
}

impl HomAss2Algebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        s: Matrix,
        t: Matrix,
        i: Matrix,
        mu_obj: Matrix,
        mu_mor: Matrix,
        phi0: Matrix,
        phi1: Matrix,
        assoc: Matrix,
    ) -> Result<Self> {
        let n0 = phi0.rows();
        let n1 = phi1.rows();
        for (name, m, r, c) in [
            ("s", &s, n0, n1),
            ("t", &t, n0, n1),
            ("i", &i, n1, n0),
            ("mu_obj", &mu_obj, n0, n0 * n0),
            ("mu_mor", &mu_mor, n1, n1 * n1),
            ("phi0", &phi0, n0, n0),
            ("phi1", &phi1, n1, n1),
            ("assoc", &assoc, n1, n0 * n0 * n0),
        ] {
            if m.rows() != r || m.cols() != c {
                return Err(Error::InvalidInput(format!("{name}: wrong shape")));
            }
        }
        let id0 = Matrix::identity(n0);
        if s.mat_mul(&i)? != id0 || t.mat_mul(&i)? != id0 {
            return Err(Error::InvalidInput("s and t must split i".into()));
        }
        if s.mat_mul(&assoc)? != mu_obj.mat_mul(&mu_obj.kron(&phi0))? {
            return Err(Error::InvalidInput("associator has the wrong source".into()));
        }
        if t.mat_mul(&assoc)? != mu_obj.mat_mul(&phi0.kron(&mu_obj))? {
            return Err(Error::InvalidInput("associator has the wrong target".into()));
        }
        if phi1.mat_mul(&assoc)? != assoc.mat_mul(&kron3(&phi0, &phi0, &phi0))? {
            return Err(Error::InvalidInput("associator does not commute with phi".into()));
        }
        Ok(HomAss2Algebra { dim0: n0, dim1: n1, s, t, i, mu_obj, mu_mor, phi0, phi1, assoc })
    }

    pub fn dim0(&self) -> usize {
        self.dim0
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn t(&self) -> &Matrix {
        &self.t
    }

    pub fn i(&self) -> &Matrix {
        &self.i
    }

    pub fn mu_obj(&self) -> &Matrix {
        &self.mu_obj
    }

    pub fn mu_mor(&self) -> &Matrix {
        &self.mu_mor
    }

    pub fn phi0(&self) -> &Matrix {
        &self.phi0
    }

    pub fn phi1(&self) -> &Matrix {
        &self.phi1
    }

    pub fn assoc(&self) -> &Matrix {
        &self.assoc
    }
}

fn vec_kron(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a.clone() * b.clone());
        }
    }
    out
}

fn add_into(acc: &mut [Rat], v: &[Rat], sign: i64) {
    for (a, b) in acc.iter_mut().zip(v) {
        if sign >= 0 {
            *a += b.clone();
        } else {
            *a -= b.clone();
        }
    }
}

impl HomAss2Algebra {
    fn mor_product(&self, f: &[Rat], g: &[Rat]) -> Vec<Rat> {
        self.mu_mor.mat_vec(&vec_kron(f, g)).unwrap()
    }

    fn assoc_at(&self, x: &[Rat], y: &[Rat], z: &[Rat]) -> Vec<Rat> {
        self.assoc.mat_vec(&vec_kron(&vec_kron(x, y), z)).unwrap()
    }

    /// Composition of morphisms: g∘f = f + g − i(t(f)) when s(g) = t(f).
    pub fn compose(&self, g: &[Rat], f: &[Rat]) -> Vec<Rat> {
        let mut out = f.to_vec();
        add_into(&mut out, g, 1);
        let correction = self.i.mat_vec(&self.t.mat_vec(f).unwrap()).unwrap();
        add_into(&mut out, &correction, -1);
        out
    }
}

fn unit(dim: usize, k: usize) -> Vec<Rat> {
    let mut v = vec![rat(0); dim];
    v[k] = rat(1);
    v
}

/// Full verification: μ and Φ are functors, Φ is multiplicative, the
/// associator has the stated source and target and is natural, and the
/// coherence diagram commutes. Naturality and functoriality with respect to
/// composition are multilinear identities, so checking them on basis
/// morphisms suffices.
pub fn verify_homass2(c: &HomAss2Algebra) -> Result<AxiomReport> {
    let mut failures = Vec::new();
    let mut check = |label: &str, ok: bool| {
        if !ok {
            failures.push(String::from(label));
        }
    };
    check(
        "mu respects sources",
        c.s.mat_mul(&c.mu_mor)? == c.mu_obj.mat_mul(&c.s.kron(&c.s))?,
    );
    check(
        "mu respects targets",
        c.t.mat_mul(&c.mu_mor)? == c.mu_obj.mat_mul(&c.t.kron(&c.t))?,
    );
    check(
        "mu respects identities",
        c.mu_mor.mat_mul(&c.i.kron(&c.i))? == c.i.mat_mul(&c.mu_obj)?,
    );
    check(
        "phi respects sources",
        c.s.mat_mul(&c.phi1)? == c.phi0.mat_mul(&c.s)?,
    );
    check(
        "phi respects targets",
        c.t.mat_mul(&c.phi1)? == c.phi0.mat_mul(&c.t)?,
    );
    check(
        "phi respects identities",
        c.phi1.mat_mul(&c.i)? == c.i.mat_mul(&c.phi0)?,
    );
    check(
        "phi multiplicative on objects",
        c.phi0.mat_mul(&c.mu_obj)? == c.mu_obj.mat_mul(&c.phi0.kron(&c.phi0))?,
    );
    check(
        "phi multiplicative on morphisms",
        c.phi1.mat_mul(&c.mu_mor)? == c.mu_mor.mat_mul(&c.phi1.kron(&c.phi1))?,
    );
    check(
        "associator source",
        c.s.mat_mul(&c.assoc)? == c.mu_obj.mat_mul(&c.mu_obj.kron(&c.phi0))?,
    );
    check(
        "associator target",
        c.t.mat_mul(&c.assoc)? == c.mu_obj.mat_mul(&c.phi0.kron(&c.mu_obj))?,
    );
    check(
        "associator commutes with phi",
        c.phi1.mat_mul(&c.assoc)? == c.assoc.mat_mul(&kron3(&c.phi0, &c.phi0, &c.phi0))?,
    );

    // μ preserves composition. A pair composable with f is exactly
    // i(t(f)) + m for m in ker s, so the interchange law is a multilinear
    // identity in (f, m, f′, m′); check it on basis morphisms and a basis of
    // ker s.
    let kernel: Vec<Vec<Rat>> = c.s.nullspace_basis();
    let mut interchange_ok = true;
    'outer: for fi in 0..c.dim1 {
        let f = unit(c.dim1, fi);
        let itf = c.i.mat_vec(&c.t.mat_vec(&f)?)?;
        for m in &kernel {
            let g = {
                let mut g = itf.clone();
                add_into(&mut g, m, 1);
                g
            };
            let gof = c.compose(&g, &f);
            for fj in 0..c.dim1 {
                let f2 = unit(c.dim1, fj);
                let itf2 = c.i.mat_vec(&c.t.mat_vec(&f2)?)?;
                for m2 in &kernel {
                    let g2 = {
                        let mut g2 = itf2.clone();
                        add_into(&mut g2, m2, 1);
                        g2
                    };
                    let lhs = c.mor_product(&gof, &c.compose(&g2, &f2));
                    let rhs = c.compose(&c.mor_product(&g, &g2), &c.mor_product(&f, &f2));
                    if lhs != rhs {
                        interchange_ok = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    check("mu preserves composition", interchange_ok);

    // Naturality of the associator on basis morphism triples (f, g, h):
    // composing with the associator at the sources must match composing at
    // the targets.
    let mut natural_ok = true;
    'nat: for fi in 0..c.dim1 {
        for gi in 0..c.dim1 {
            for hi in 0..c.dim1 {
                let f = unit(c.dim1, fi);
                let g = unit(c.dim1, gi);
                let h = unit(c.dim1, hi);
                let top = c.mor_product(&c.mor_product(&f, &g), &c.phi1.mat_vec(&h)?);
                let bottom =
                    c.mor_product(&c.phi1.mat_vec(&f)?, &c.mor_product(&g, &h));
                let a_src = c.assoc_at(
                    &c.s.mat_vec(&f)?,
                    &c.s.mat_vec(&g)?,
                    &c.s.mat_vec(&h)?,
                );
                let a_tgt = c.assoc_at(
                    &c.t.mat_vec(&f)?,
                    &c.t.mat_vec(&g)?,
                    &c.t.mat_vec(&h)?,
                );
                if c.compose(&a_tgt, &top) != c.compose(&bottom, &a_src) {
                    natural_ok = false;
                    break 'nat;
                }
            }
        }
    }
    check("associator naturality", natural_ok);

    // Coherence: the two composites around the pentagon agree on basis
    // object quadruples. The right-hand face contains an identity edge,
    // which composition absorbs.
    let mut coherence_ok = true;
    'coh: for xi in 0..c.dim0 {
        for yi in 0..c.dim0 {
            for zi in 0..c.dim0 {
                for wi in 0..c.dim0 {
                    let x = unit(c.dim0, xi);
                    let y = unit(c.dim0, yi);
                    let z = unit(c.dim0, zi);
                    let w = unit(c.dim0, wi);
                    let px = c.phi0.mat_vec(&x)?;
                    let py = c.phi0.mat_vec(&y)?;
                    let pz = c.phi0.mat_vec(&z)?;
                    let pw = c.phi0.mat_vec(&w)?;
                    let ppw = c.phi0.mat_vec(&pw)?;
                    let ppx = c.phi0.mat_vec(&px)?;
                    let mu = |u: &[Rat], v: &[Rat]| c.mu_obj.mat_vec(&vec_kron(u, v)).unwrap();
                    let e1 = c.mor_product(&c.assoc_at(&x, &y, &z), &c.i.mat_vec(&ppw)?);
                    let e2 = c.assoc_at(&px, &mu(&y, &z), &pw);
                    let e3 = c.mor_product(&c.i.mat_vec(&ppx)?, &c.assoc_at(&y, &z, &w));
                    let left = c.compose(&e3, &c.compose(&e2, &e1));
                    let r1 = c.assoc_at(&mu(&x, &y), &pz, &pw);
                    let r2 = c.assoc_at(&px, &py, &mu(&z, &w));
                    let right = c.compose(&r2, &r1);
                    if left != right {
                        coherence_ok = false;
                        break 'coh;
                    }
                }
            }
        }
    }
    check("coherence diagram", coherence_ok);

    Ok(AxiomReport { failures })
}

/// Build the 2-vector-space algebra out of a verified two-term structure:
/// objects A0, morphisms A0 ⊕ A1 with s(a,m) = a, t(a,m) = a + dm,
/// μ((a,m),(b,n)) = (μ2(a,b), μ2(a,n) + μ2(m,b) + μ2(dm,n)), and associator
/// (μ2(μ2(a,b), α0 c), μ3(a,b,c)).
pub fn t_functor(t: &TwoTermHA) -> Result<HomAss2Algebra> {
    let report = verify_twoterm(t);
    if !report.passed() {
        return Err(Error::InvalidInput(format!(
            "input fails axioms {:?}",
            report.failures
        )));
    }
    let n0 = t.dim0;
    let n1 = t.dim1;
    let nc = n0 + n1;
    let mut s = Matrix::zero(n0, nc);
    let mut tt = Matrix::zero(n0, nc);
    let mut i = Matrix::zero(nc, n0);
    for k in 0..n0 {
        s.set(k, k, rat(1));
        tt.set(k, k, rat(1));
        i.set(k, k, rat(1));
    }
    for r in 0..n0 {
        for cidx in 0..n1 {
            tt.set(r, n0 + cidx, t.d.get(r, cidx).clone());
        }
    }
    // μ2(dm, n) as a map A1⊗A1 → A1.
    let md = t.mu01.mat_mul(&t.d.kron(&Matrix::identity(n1)))?;
    let mut mu_mor = Matrix::zero(nc, nc * nc);
    for u in 0..nc {
        for v in 0..nc {
            let col = u * nc + v;
            match (u < n0, v < n0) {
                (true, true) => {
                    for r in 0..n0 {
                        mu_mor.set(r, col, t.mu00.get(r, u * n0 + v).clone());
                    }
                }
                (true, false) => {
                    let j = v - n0;
                    for r in 0..n1 {
                        mu_mor.set(n0 + r, col, t.mu01.get(r, u * n1 + j).clone());
                    }
                }
                (false, true) => {
                    let m = u - n0;
                    for r in 0..n1 {
                        mu_mor.set(n0 + r, col, t.mu10.get(r, m * n0 + v).clone());
                    }
                }
                (false, false) => {
                    let (m, j) = (u - n0, v - n0);
                    for r in 0..n1 {
                        mu_mor.set(n0 + r, col, md.get(r, m * n1 + j).clone());
                    }
                }
            }
        }
    }
    let mut phi1 = Matrix::zero(nc, nc);
    for r in 0..n0 {
        for cidx in 0..n0 {
            phi1.set(r, cidx, t.alpha0.get(r, cidx).clone());
        }
    }
    for r in 0..n1 {
        for cidx in 0..n1 {
            phi1.set(n0 + r, n0 + cidx, t.alpha1.get(r, cidx).clone());
        }
    }
    let obj_part = t.mu00.mat_mul(&t.mu00.kron(&t.alpha0))?;
    let mut assoc = Matrix::zero(nc, n0 * n0 * n0);
    for r in 0..n0 {
        for cidx in 0..obj_part.cols() {
            assoc.set(r, cidx, obj_part.get(r, cidx).clone());
        }
    }
    for r in 0..n1 {
        for cidx in 0..t.mu3.cols() {
            assoc.set(n0 + r, cidx, t.mu3.get(r, cidx).clone());
        }
    }
    HomAss2Algebra::new(
        s,
        tt,
        i,
        t.mu00.clone(),
        mu_mor,
        t.alpha0.clone(),
        phi1,
        assoc,
    )
}

/// Express each column of `m` (assumed to lie in the span of the kernel
/// basis `k`) in kernel coordinates.
fn kernel_coords(k: &Matrix, m: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zero(k.cols(), m.cols());
    for j in 0..m.cols() {
        let col: Vec<Rat> = (0..m.rows()).map(|r| m.get(r, j).clone()).collect();
        let x = k.solve_linear(&col)?.ok_or_else(|| {
            Error::Incompatible("a structure map leaves the kernel of s".into())
        })?;
        for (r, v) in x.into_iter().enumerate() {
            out.set(r, j, v);
        }
    }
    Ok(out)
}

/// Recover a two-term structure from a 2-vector-space algebra: A1 = ker s
/// with differential t, mixed products through the identity-assigning map,
/// and μ3(a,b,c) the kernel part of the associator.
pub fn s_functor(c: &HomAss2Algebra) -> Result<TwoTermHA> {
    let kernel = c.s.nullspace_basis();
    let k = kernel.len();
    let mut kmat = Matrix::zero(c.dim1, k);
    for (j, v) in kernel.iter().enumerate() {
        for (r, val) in v.iter().enumerate() {
            kmat.set(r, j, val.clone());
        }
    }
    let d = c.t.mat_mul(&kmat)?;
    let mu01 = kernel_coords(&kmat, &c.mu_mor.mat_mul(&c.i.kron(&kmat))?)?;
    let mu10 = kernel_coords(&kmat, &c.mu_mor.mat_mul(&kmat.kron(&c.i))?)?;
    let mut assoc_kernel = c.assoc.clone();
    assoc_kernel.add_scaled(&c.i.mat_mul(&c.s.mat_mul(&c.assoc)?)?, &rat(-1));
    let mu3 = kernel_coords(&kmat, &assoc_kernel)?;
    let alpha1 = kernel_coords(&kmat, &c.phi1.mat_mul(&kmat)?)?;
    TwoTermHA::new(d, c.mu_obj.clone(), mu01, mu10, mu3, c.phi0.clone(), alpha1)
}

/// The comparison isomorphism from `t_functor(s_functor(c))` back to `c`:
/// identity on objects, (a, m) ↦ i(a) + m on morphisms. Returns the
/// morphism-level matrix.
pub fn comparison_iso(c: &HomAss2Algebra) -> Matrix {
    let kernel = c.s.nullspace_basis();
    let mut out = Matrix::zero(c.dim1, c.dim0 + kernel.len());
    for r in 0..c.dim1 {
        for j in 0..c.dim0 {
            out.set(r, j, c.i.get(r, j).clone());
        }
    }
    for (j, v) in kernel.iter().enumerate() {
        for (r, val) in v.iter().enumerate() {
            out.set(r, c.dim0 + j, val.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::delta_matrix;

    // ℚ[x]/(x²) with product and twist scaled along x ↦ q·x.
    fn qalg(q: i64) -> ClassicalAlgebra {
        let mut mu = Matrix::zero(2, 4);
        mu.set(0, 0, rat(1));
        mu.set(1, 1, rat(q));
        mu.set(1, 2, rat(q));
        let mut alpha = Matrix::identity(2);
        alpha.set(1, 1, rat(q));
        ClassicalAlgebra::new(2, mu, alpha).unwrap()
    }

    fn adjoint_of(alg: &ClassicalAlgebra) -> ClassicalBimodule {
        ClassicalBimodule::adjoint(alg)
    }

    // A0 = A1 = the algebra, d = id: the basic μ3 = 0 structure.
    fn strict_fixture(q: i64) -> TwoTermHA {
        let alg = qalg(q);
        TwoTermHA::new(
            Matrix::identity(2),
            alg.mu().clone(),
            alg.mu().clone(),
            alg.mu().clone(),
            Matrix::zero(2, 8),
            alg.alpha().clone(),
            alg.alpha().clone(),
        )
        .unwrap()
    }

    // Skeletal structure on the same algebra acting on itself, with a chosen
    // ternary map.
    fn skeletal_fixture(q: i64, mu3: Matrix) -> TwoTermHA {
        let alg = qalg(q);
        TwoTermHA::new(
            Matrix::zero(2, 2),
            alg.mu().clone(),
            alg.mu().clone(),
            alg.mu().clone(),
            mu3,
            alg.alpha().clone(),
            alg.alpha().clone(),
        )
        .unwrap()
    }

    // An equivariant 2-cochain whose coboundary is nonzero.
    fn noncocycle_sigma(q: i64) -> (Matrix, Matrix) {
        let alg = qalg(q);
        let bim = adjoint_of(&alg);
        for sigma in cochain_basis(&alg, &bim, 2) {
            let ds = delta(&alg, &bim, 2, &sigma);
            if !ds.is_zero() {
                return (sigma, ds);
            }
        }
        panic!("no 2-cochain with nonzero coboundary");
    }

    #[test]
    fn strict_example_roundtrips_through_crossed_modules() {
        let t = strict_fixture(3);
        assert!(verify_twoterm(&t).passed());
        let c = strict_to_crossed(&t).unwrap();
        assert_eq!(*c.dt(), Matrix::identity(2));
        assert_eq!(c.phi_left(), qalg(3).mu());
        assert_eq!(c.a().mu(), qalg(3).mu());
        assert!(verify_crossed(&c).unwrap().passed());
        assert_eq!(crossed_to_strict(&c).unwrap(), t);
        // ... and back again on the crossed-module side.
        let t2 = crossed_to_strict(&c).unwrap();
        assert_eq!(strict_to_crossed(&t2).unwrap(), c);
    }

    #[test]
    fn zero_multiplication_gives_the_zero_crossed_module() {
        let t = TwoTermHA::new(
            Matrix::zero(1, 1),
            Matrix::zero(1, 1),
            Matrix::zero(1, 1),
            Matrix::zero(1, 1),
            Matrix::zero(1, 1),
            Matrix::identity(1),
            Matrix::identity(1),
        )
        .unwrap();
        assert!(verify_twoterm(&t).passed());
        let c = strict_to_crossed(&t).unwrap();
        assert!(c.a().mu().is_zero() && c.b().mu().is_zero() && c.dt().is_zero());
        assert!(verify_crossed(&c).unwrap().passed());
        assert_eq!(crossed_to_strict(&c).unwrap(), t);
    }

    #[test]
    fn perturbed_ternary_map_fails_named_axioms() {
        let t = strict_fixture(3);
        let mut mu3 = Matrix::zero(2, 8);
        mu3.set(0, 0, rat(1)); // equivariant: weight-0 input, weight-0 output
        let bad = TwoTermHA::new(
            t.d.clone(),
            t.mu00.clone(),
            t.mu01.clone(),
            t.mu10.clone(),
            mu3,
            t.alpha0.clone(),
            t.alpha1.clone(),
        )
        .unwrap();
        let report = verify_twoterm(&bad);
        assert!(report.failures.contains(&String::from("(h)")));
    }

    #[test]
    fn corrupted_crossed_action_is_reported() {
        let t = strict_fixture(3);
        let good = strict_to_crossed(&t).unwrap();
        let mut phi_left = good.phi_left().clone();
        phi_left.set(0, 0, rat(5));
        let bad = CrossedModule::new(
            good.a().clone(),
            good.b().clone(),
            good.dt().clone(),
            phi_left,
            good.phi_right().clone(),
        )
        .unwrap();
        assert!(!verify_crossed(&bad).unwrap().passed());
    }

    #[test]
    fn skeletal_classification_and_equivalence() {
        let (sigma, dsigma) = noncocycle_sigma(2);
        let t0 = skeletal_fixture(2, Matrix::zero(2, 8));
        let t1 = skeletal_fixture(2, dsigma.clone());
        assert!(verify_twoterm(&t0).passed());
        assert!(verify_twoterm(&t1).passed());
        let cl = skeletal_to_cocycle(&t1).unwrap();
        assert!(cl.is_cocycle);
        // The classes agree, and the recovered map has the same coboundary.
        let alg = qalg(2);
        let bim = adjoint_of(&alg);
        let recovered = skeletal_equivalence(&t0, &t1).unwrap().unwrap();
        assert_eq!(delta(&alg, &bim, 2, &recovered), dsigma);
        assert!(skeletal_equivalence(&t1, &t0).unwrap().is_some());
        drop(sigma);
        // A strict structure is rejected: the differential must vanish.
        assert!(skeletal_to_cocycle(&strict_fixture(2)).is_err());
    }

    #[test]
    fn nonzero_class_means_no_equivalence() {
        // One-dimensional space with the zero product: the coboundary
        // operator vanishes, so any nonzero ternary map is a cocycle that is
        // not a coboundary.
        let zero = Matrix::zero(1, 1);
        let make = |mu3: Matrix| {
            TwoTermHA::new(
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                mu3,
                Matrix::identity(1),
                Matrix::identity(1),
            )
            .unwrap()
        };
        let t0 = make(Matrix::zero(1, 1));
        let mut theta = Matrix::zero(1, 1);
        theta.set(0, 0, rat(1));
        let t1 = make(theta);
        assert!(verify_twoterm(&t1).passed());
        assert!(skeletal_to_cocycle(&t1).unwrap().is_cocycle);
        assert!(skeletal_equivalence(&t0, &t1).unwrap().is_none());
    }

    #[test]
    fn morphism_identity_scaling_and_composition() {
        let t = strict_fixture(3);
        let id = TwoTermMorphism::identity(&t);
        assert!(verify_twoterm_morphism(&id, &t, &t).unwrap().passed());
        // 1 ↦ 1, x ↦ λx is an endomorphism of the structure.
        let scaling = |l: i64| {
            let mut f0 = Matrix::identity(2);
            f0.set(1, 1, rat(l));
            TwoTermMorphism { f0: f0.clone(), f1: f0, f2: Matrix::zero(2, 4) }
        };
        let f = scaling(2);
        let g = scaling(5);
        assert!(verify_twoterm_morphism(&f, &t, &t).unwrap().passed());
        let gf = compose_twoterm_morphisms(&g, &f).unwrap();
        assert!(verify_twoterm_morphism(&gf, &t, &t).unwrap().passed());
        assert_eq!(gf, scaling(10));
        // Breaking equivariance of f2 is reported by name.
        let mut f2 = Matrix::zero(2, 4);
        f2.set(1, 0, rat(1)); // (1,1) ↦ x has mismatched weights
        let bad = TwoTermMorphism { f0: Matrix::identity(2), f1: Matrix::identity(2), f2 };
        let report = verify_twoterm_morphism(&bad, &t, &t).unwrap();
        assert!(report.failures.contains(&String::from("twist on f2")));
    }

    #[test]
    fn nterm_classification_generalizes_the_two_term_case() {
        let alg = qalg(2);
        let bim = adjoint_of(&alg);
        // n = 3: a coboundary top operation has trivial class.
        let sigma3 = cochain_basis(&alg, &bim, 3)
            .into_iter()
            .find(|s| !delta(&alg, &bim, 3, s).is_zero())
            .expect("a 3-cochain with nonzero coboundary");
        let dsigma3 = delta(&alg, &bim, 3, &sigma3);
        let make = |top: Matrix| {
            NTermHA::new(
                3,
                alg.mu().clone(),
                alg.mu().clone(),
                alg.mu().clone(),
                top,
                alg.alpha().clone(),
                alg.alpha().clone(),
            )
            .unwrap()
        };
        let t0 = make(Matrix::zero(2, 16));
        let t1 = make(dsigma3);
        let cl = nterm_skeletal_to_cocycle(&t1).unwrap();
        assert_eq!(cl.degree, 4);
        assert!(cl.is_cocycle);
        assert!(nterm_equivalence(&t0, &t1).unwrap().is_some());
        // Non-coboundary top map on the zero algebra: class is nonzero.
        let zero = Matrix::zero(1, 1);
        let zmake = |top: Matrix| {
            NTermHA::new(3, zero.clone(), zero.clone(), zero.clone(), top,
                Matrix::identity(1), Matrix::identity(1)).unwrap()
        };
        let mut top = Matrix::zero(1, 1);
        top.set(0, 0, rat(1));
        let z1 = zmake(top);
        assert!(nterm_skeletal_to_cocycle(&z1).unwrap().is_cocycle);
        assert!(nterm_equivalence(&zmake(Matrix::zero(1, 1)), &z1).unwrap().is_none());
        // n = 2 coincides with the two-term classification.
        let (_, ds2) = noncocycle_sigma(2);
        let two = NTermHA::new(
            2,
            alg.mu().clone(),
            alg.mu().clone(),
            alg.mu().clone(),
            ds2.clone(),
            alg.alpha().clone(),
            alg.alpha().clone(),
        )
        .unwrap();
        let via_n = nterm_skeletal_to_cocycle(&two).unwrap();
        let via_two = skeletal_to_cocycle(&skeletal_fixture(2, ds2)).unwrap();
        assert_eq!(via_n.degree, via_two.degree);
        assert_eq!(via_n.theta, via_two.theta);
        assert_eq!(via_n.is_cocycle, via_two.is_cocycle);
        // The coboundary operators agree too.
        assert_eq!(
            delta_matrix(&alg, &bim, 2).unwrap(),
            delta_matrix(&via_n.algebra, &via_n.bimodule, 2).unwrap()
        );
    }

    #[test]
    fn two_algebra_images_verify_and_recover() {
        let (_, dsigma) = noncocycle_sigma(2);
        for t in [strict_fixture(2), skeletal_fixture(2, dsigma)] {
            let c = t_functor(&t).unwrap();
            assert!(verify_homass2(&c).unwrap().passed());
            // The kernel part of the associator is exactly the ternary map,
            // and the whole structure comes back on the nose.
            assert_eq!(s_functor(&c).unwrap(), t);
        }
        // Strict input leaves the associator with identity components only.
        let c = t_functor(&strict_fixture(2)).unwrap();
        assert_eq!(
            c.assoc().mat_mul(&Matrix::identity(8)).unwrap(),
            c.i().mat_mul(&c.s().mat_mul(c.assoc()).unwrap()).unwrap()
        );
    }

    #[test]
    fn t_functor_rejects_unverified_input() {
        let t = strict_fixture(3);
        let mut mu3 = Matrix::zero(2, 8);
        mu3.set(0, 0, rat(1));
        let bad = TwoTermHA::new(
            t.d.clone(), t.mu00.clone(), t.mu01.clone(), t.mu10.clone(),
            mu3, t.alpha0.clone(), t.alpha1.clone(),
        )
        .unwrap();
        assert!(t_functor(&bad).is_err());
    }

    // Change morphism coordinates by an invertible shear so the kernel of s
    // no longer sits in standard position.
    fn sheared(c: &HomAss2Algebra) -> HomAss2Algebra {
        let n1 = c.dim1();
        let mut p = Matrix::identity(n1);
        p.set(0, 2, rat(1));
        let mut pinv = Matrix::identity(n1);
        pinv.set(0, 2, rat(-1));
        HomAss2Algebra::new(
            c.s().mat_mul(&pinv).unwrap(),
            c.t().mat_mul(&pinv).unwrap(),
            p.mat_mul(c.i()).unwrap(),
            c.mu_obj().clone(),
            p.mat_mul(c.mu_mor()).unwrap().mat_mul(&pinv.kron(&pinv)).unwrap(),
            c.phi0().clone(),
            p.mat_mul(c.phi1()).unwrap().mat_mul(&pinv).unwrap(),
            p.mat_mul(c.assoc()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn comparison_iso_witnesses_the_other_roundtrip() {
        let (_, dsigma) = noncocycle_sigma(2);
        let c = sheared(&t_functor(&skeletal_fixture(2, dsigma)).unwrap());
        assert!(verify_homass2(&c).unwrap().passed());
        let back = t_functor(&s_functor(&c).unwrap()).unwrap();
        assert_ne!(back, c);
        let theta = comparison_iso(&c);
        assert_eq!(theta.rank(), c.dim1());
        assert_eq!(c.s().mat_mul(&theta).unwrap(), *back.s());
        assert_eq!(c.t().mat_mul(&theta).unwrap(), *back.t());
        assert_eq!(theta.mat_mul(back.i()).unwrap(), *c.i());
        assert_eq!(
            c.phi1().mat_mul(&theta).unwrap(),
            theta.mat_mul(back.phi1()).unwrap()
        );
        assert_eq!(
            c.mu_mor().mat_mul(&theta.kron(&theta)).unwrap(),
            theta.mat_mul(back.mu_mor()).unwrap()
        );
        assert_eq!(theta.mat_mul(back.assoc()).unwrap(), *c.assoc());
    }

    #[test]
    fn corrupted_associator_fails_the_coherence_diagram() {
        let alg = qalg(2);
        let bim = adjoint_of(&alg);
        let (_, dsigma) = noncocycle_sigma(2);
        let c = t_functor(&skeletal_fixture(2, dsigma)).unwrap();
        let bad_cochain = cochain_basis(&alg, &bim, 3)
            .into_iter()
            .find(|e| !delta(&alg, &bim, 3, e).is_zero())
            .expect("a non-cocycle 3-cochain");
        let mut assoc = c.assoc().clone();
        for r in 0..2 {
            for j in 0..8 {
                let cur = assoc.get(2 + r, j).clone();
                assoc.set(2 + r, j, cur + bad_cochain.get(r, j).clone());
            }
        }
        let bad = HomAss2Algebra::new(
            c.s().clone(),
            c.t().clone(),
            c.i().clone(),
            c.mu_obj().clone(),
            c.mu_mor().clone(),
            c.phi0().clone(),
            c.phi1().clone(),
            assoc,
        )
        .unwrap();
        let report = verify_homass2(&bad).unwrap();
        assert!(report.failures.contains(&String::from("coherence diagram")));
    }
}
