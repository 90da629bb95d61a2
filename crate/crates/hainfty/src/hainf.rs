//! Strongly homotopy hom-associative algebras: structures, identity
//! verification, the degree shift, conversion to coderivations, morphisms,
//! bimodules, the homology algebra and the twist construction.
//!
//! A structure is a table of operations μ_k : A^{⊗k} → A of degree k-2
//! together with a degree-0 map α commuting with every μ_k, subject to the
//! homotopy hom-associativity identity: for every n ≥ 1,
//!
//!   Σ_{i+j=n+1} Σ_{λ=1..j} (-1)^{λ(i+1)+i(|a_1|+…+|a_{λ-1}|)}
//!     μ_j(α^{i-1}a_1, …, α^{i-1}a_{λ-1}, μ_i(a_λ,…,a_{λ+i-1}),
//!         α^{i-1}a_{λ+i}, …, α^{i-1}a_n) = 0.
//!
//! The shifted form lives on sA with degree -1 operations and the simpler
//! sign (-1)^{|v_1|+…+|v_{λ-1}|}.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::coder::{Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::{compositions, BasisElement, GradedSpace};
use crate::linalg::Matrix;
use crate::multiop::{shift_down, shift_up, Budget, MultiOp, SparseVec};
use crate::rational::{rat, sign_pow, Rat};
use num_traits::Zero;

/// One nonzero residual of a homotopy identity.
#[derive(Debug, Clone)]
pub struct IdentityFailure {
    pub n: usize,
    pub inputs: Vec<BasisElement>,
    pub residual: SparseVec,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub failures: Vec<IdentityFailure>,
    pub tuples_checked: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A homotopy hom-associative structure. `shifted = false` stores μ_k of
/// degree k-2 on A; `shifted = true` stores the suspended ϱ_k of degree -1
/// on sA. Both live in the same container because every consumer needs both
/// forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HAInfStructure {
    alpha: MultiOp,
    ops: BTreeMap<usize, MultiOp>,
    max_arity: usize,
    shifted: bool,
}

impl HAInfStructure {
    pub fn new(alpha: MultiOp, max_arity: usize) -> Result<Self> {
        Self::with_form(alpha, max_arity, false)
    }

    pub fn new_shifted(alpha: MultiOp, max_arity: usize) -> Result<Self> {
        Self::with_form(alpha, max_arity, true)
    }

    fn with_form(alpha: MultiOp, max_arity: usize, shifted: bool) -> Result<Self> {
        if alpha.arity() != 1 || alpha.degree() != 0 || alpha.source() != alpha.target() {
            return Err(Error::InvalidInput("alpha must be a degree-0 endomorphism".into()));
        }
        Ok(HAInfStructure { alpha, ops: BTreeMap::new(), max_arity, shifted })
    }

    pub fn space(&self) -> &GradedSpace {
        self.alpha.source()
    }

    pub fn alpha(&self) -> &MultiOp {
        &self.alpha
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    pub fn op(&self, k: usize) -> Option<&MultiOp> {
        self.ops.get(&k)
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.ops.iter().map(|(&k, op)| (k, op))
    }

    pub fn expected_degree(&self, arity: usize) -> i64 {
        if self.shifted {
            -1
        } else {
            arity as i64 - 2
        }
    }

    pub fn set_op(&mut self, op: MultiOp) -> Result<()> {
        let k = op.arity();
        if k > self.max_arity {
            return Err(Error::InvalidInput(format!(
                "operation arity {k} exceeds truncation bound {}",
                self.max_arity
            )));
        }
        if op.degree() != self.expected_degree(k) {
            return Err(Error::DegreeMismatch {
                expected: self.expected_degree(k),
                got: op.degree(),
            });
        }
        if op.source() != self.space() || op.target() != self.space() {
            return Err(Error::Incompatible("operation space mismatch".into()));
        }
        if !op.commutes_with(&self.alpha, &mut Budget::unlimited())? {
            return Err(Error::InvalidInput(format!(
                "arity-{k} operation does not commute with alpha"
            )));
        }
        if op.is_zero() {
            self.ops.remove(&k);
        } else {
            self.ops.insert(k, op);
        }
        Ok(())
    }

    fn op_or_zero(&self, k: usize) -> MultiOp {
        self.ops
            .get(&k)
            .cloned()
            .unwrap_or_else(|| MultiOp::endo(k, self.expected_degree(k), self.space().clone()))
    }

    /// Suspend every operation to sA (degree -1 form).
    pub fn to_shifted(&self) -> Result<HAInfStructure> {
        if self.shifted {
            return Ok(self.clone());
        }
        let mut out = HAInfStructure::new_shifted(shift_up(&self.alpha), self.max_arity)?;
        for (_, op) in self.ops() {
            out.set_op(shift_up(op))?;
        }
        Ok(out)
    }

    /// Inverse of [`to_shifted`]: exact table roundtrip.
    pub fn to_unshifted(&self) -> Result<HAInfStructure> {
        if !self.shifted {
            return Ok(self.clone());
        }
        let mut out = HAInfStructure::new(shift_down(&self.alpha), self.max_arity)?;
        for (_, op) in self.ops() {
            out.set_op(shift_down(op))?;
        }
        Ok(out)
    }

    /// The structure as a degree -1 tensor coderivation on sA; its square
    /// vanishes exactly when the structure verifies.
    pub fn to_coderivation(&self) -> Result<Coderivation> {
        let sh = self.to_shifted()?;
        let mut d = Coderivation::new(Flavor::Tensor, -1, sh.alpha.clone(), sh.max_arity)?;
        for (_, op) in sh.ops() {
            d.set_component(op.clone())?;
        }
        Ok(d)
    }

    /// Evaluate the defining identity on every basis tuple of length ≤ n_max.
    pub fn verify(&self, n_max: usize, budget: &mut Budget) -> Result<VerifyReport> {
        let space = self.space().clone();
        let mut report = VerifyReport::default();
        for n in 1..=n_max {
            for tuple in space.tuples(n) {
                budget.charge(1)?;
                report.tuples_checked += 1;
                let residual = self.identity_residual(n, &tuple)?;
                if !residual.is_zero() {
                    report.failures.push(IdentityFailure { n, inputs: tuple, residual });
                }
            }
        }
        Ok(report)
    }

    /// The Σ_{i+j=n+1} Σ_λ sum on one tuple.
    pub fn identity_residual(&self, n: usize, tuple: &[BasisElement]) -> Result<SparseVec> {
        let mut residual = SparseVec::zero();
        for i in 1..=n {
            let j = n + 1 - i;
            let Some(inner) = self.ops.get(&i) else { continue };
            let Some(outer) = self.ops.get(&j) else { continue };
            let ap = self.alpha.power((i - 1) as u32)?;
            for lambda in 1..=j {
                let lo = lambda - 1;
                let prefix: i64 = tuple[..lo].iter().map(|e| e.degree).sum();
                let exp = if self.shifted {
                    prefix
                } else {
                    (lambda as i64) * (i as i64 + 1) + (i as i64) * prefix
                };
                let sign = sign_pow(exp);
                let mid = inner.apply(&tuple[lo..lo + i])?;
                if mid.is_zero() {
                    continue;
                }
                let mut slots: Vec<SparseVec> = Vec::with_capacity(j);
                for e in &tuple[..lo] {
                    slots.push(ap.apply(&[*e])?);
                }
                slots.push(mid);
                for e in &tuple[lo + i..] {
                    slots.push(ap.apply(&[*e])?);
                }
                let term = outer.apply_multi(&slots)?;
                residual.add_scaled(&term, &sign);
            }
        }
        Ok(residual)
    }

    /// Induced graded hom-associative algebra on the homology of μ_1.
    /// `reverse_scan` flips the deterministic choice of cycle representatives
    /// and boundary spanning order, for representative-independence checks.
    pub fn homology_algebra(&self, reverse_scan: bool) -> Result<HomologyAlgebra> {
        if self.shifted {
            return Err(Error::Unsupported("homology of the unshifted form only".into()));
        }
        let space = self.space();
        let d = self.op_or_zero(1);
        let mu2 = self.op_or_zero(2);

        // Degrees that can carry homology.
        let mut degrees: Vec<i64> = space.degrees().collect();
        degrees.sort_unstable();

        let mut dims = BTreeMap::new();
        let mut reps: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
        let mut bnds: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
        for &deg in &degrees {
            let dim = space.dim(deg);
            // Matrix of μ_1 : A_deg → A_{deg-1}.
            let rows = space.dim(deg - 1);
            let mut m = Matrix::zero(rows, dim);
            for (c, e) in space.basis_of_degree(deg).iter().enumerate() {
                for (out, coef) in d.apply(&[*e])?.iter() {
                    m.set(out.index, c, coef.clone());
                }
            }
            let cycles = m.nullspace_basis();
            // Boundaries inside A_deg: images of the degree deg+1 basis.
            let mut boundary_cols: Vec<Vec<Rat>> = Vec::new();
            for e in space.basis_of_degree(deg + 1) {
                let img = d.apply(&[e])?;
                let mut col = alloc::vec![Rat::from_integer(0.into()); dim];
                for (out, coef) in img.iter() {
                    col[out.index] = coef.clone();
                }
                if col.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                    boundary_cols.push(col);
                }
            }
            if reverse_scan {
                boundary_cols.reverse();
            }
            let boundary = independent_subset(&boundary_cols, dim);
            // Representatives: cycles extending the boundary span.
            let mut scan = cycles;
            if reverse_scan {
                scan.reverse();
            }
            let mut chosen: Vec<Vec<Rat>> = Vec::new();
            let mut span = boundary.clone();
            for v in scan {
                let mut trial = span.clone();
                trial.push(v.clone());
                if rank_of_cols(&trial, dim) > rank_of_cols(&span, dim) {
                    span.push(v.clone());
                    chosen.push(v);
                }
            }
            if !chosen.is_empty() {
                dims.insert(deg, chosen.len());
            }
            reps.insert(deg, chosen);
            bnds.insert(deg, boundary);
        }

        let h_space = GradedSpace::new(dims);
        let mut h = HomologyAlgebra {
            space: h_space,
            reps,
            boundaries: bnds,
            ambient: space.clone(),
            mu2: MultiOp::endo(2, 0, GradedSpace::default()),
            alpha: MultiOp::endo(1, 0, GradedSpace::default()),
        };
        // Induced alpha and product on representatives.
        let mut h_alpha = MultiOp::endo(1, 0, h.space.clone());
        for e in h.space.basis() {
            let rep = h.rep_vector(&e)?;
            let img = h.push_vec(&rep, e.degree, &self.alpha)?;
            let cls = h.class_of(&img, e.degree)?;
            h_alpha.add_vec(&[e], &cls, &rat(1))?;
        }
        let mut h_mu2 = MultiOp::endo(2, 0, h.space.clone());
        for e1 in h.space.basis() {
            for e2 in h.space.basis() {
                let r1 = SparseVec::from_rep(&h.rep_vector(&e1)?, e1.degree);
                let r2 = SparseVec::from_rep(&h.rep_vector(&e2)?, e2.degree);
                let prod = mu2.apply_multi(&[r1, r2])?;
                let cls = h.class_of_sparse(&prod, e1.degree + e2.degree)?;
                h_mu2.add_vec(&[e1, e2], &cls, &rat(1))?;
            }
        }
        h.alpha = h_alpha;
        h.mu2 = h_mu2;
        Ok(h)
    }
}

impl SparseVec {
    fn from_rep(coords: &[Rat], degree: i64) -> SparseVec {
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| (BasisElement::new(degree, i), c.clone()))
            .collect()
    }
}

fn rank_of_cols(cols: &[Vec<Rat>], dim: usize) -> usize {
    if cols.is_empty() || dim == 0 {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = cols.to_vec();
    Matrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

fn independent_subset(cols: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for c in cols {
        let mut trial = out.clone();
        trial.push(c.clone());
        if rank_of_cols(&trial, dim) > rank_of_cols(&out, dim) {
            out.push(c.clone());
        }
    }
    out
}

/// The graded hom-associative algebra on H_*(A, μ_1), with the chosen cycle
/// representatives retained for change-of-basis checks.
#[derive(Debug, Clone)]
pub struct HomologyAlgebra {
    pub space: GradedSpace,
    pub mu2: MultiOp,
    pub alpha: MultiOp,
    pub ambient: GradedSpace,
    reps: BTreeMap<i64, Vec<Vec<Rat>>>,
    boundaries: BTreeMap<i64, Vec<Vec<Rat>>>,
}

impl HomologyAlgebra {
    fn rep_vector(&self, e: &BasisElement) -> Result<Vec<Rat>> {
        self.reps
            .get(&e.degree)
            .and_then(|v| v.get(e.index))
            .cloned()
            .ok_or_else(|| Error::InvalidInput("homology class out of range".into()))
    }

    /// Representative of a class, as an ambient sparse vector.
    pub fn representative(&self, e: &BasisElement) -> Result<SparseVec> {
        Ok(SparseVec::from_rep(&self.rep_vector(e)?, e.degree))
    }

    fn push_vec(&self, coords: &[Rat], degree: i64, op: &MultiOp) -> Result<Vec<Rat>> {
        let v = SparseVec::from_rep(coords, degree);
        let img = v.map_through(op)?;
        let dim = self.ambient.dim(degree + op.degree());
        let mut out = alloc::vec![Rat::from_integer(0.into()); dim];
        for (e, c) in img.iter() {
            out[e.index] = c.clone();
        }
        Ok(out)
    }

    /// Express a cycle (ambient coordinates in one degree) as a homology
    /// class: solve against [representatives | boundaries].
    fn class_of(&self, coords: &[Rat], degree: i64) -> Result<SparseVec> {
        let reps = self.reps.get(&degree).cloned().unwrap_or_default();
        let bnds = self.boundaries.get(&degree).cloned().unwrap_or_default();
        let dim = self.ambient.dim(degree);
        let ncols = reps.len() + bnds.len();
        let mut m = Matrix::zero(dim, ncols);
        for (j, col) in reps.iter().chain(bnds.iter()).enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        let sol = m
            .solve_linear(coords)?
            .ok_or_else(|| Error::InvalidInput("vector is not a cycle of this degree".into()))?;
        let mut out = SparseVec::zero();
        for (j, c) in sol[..reps.len()].iter().enumerate() {
            out.add(BasisElement::new(degree, j), c.clone());
        }
        Ok(out)
    }

    /// Class of an ambient sparse vector expected to be a homogeneous cycle.
    pub fn class_of_sparse(&self, v: &SparseVec, degree: i64) -> Result<SparseVec> {
        let dim = self.ambient.dim(degree);
        let mut coords = alloc::vec![Rat::from_integer(0.into()); dim];
        for (e, c) in v.iter() {
            if e.degree != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: e.degree });
            }
            coords[e.index] = c.clone();
        }
        self.class_of(&coords, degree)
    }

    /// Graded hom-associativity of the induced product:
    /// μ(α h₁, μ(h₂,h₃)) = μ(μ(h₁,h₂), α h₃) on every basis triple.
    pub fn verify_hom_associative(&self, budget: &mut Budget) -> Result<bool> {
        for t in self.space.tuples(3) {
            budget.charge(1)?;
            let a = self.alpha.apply(&[t[0]])?;
            let bc = self.mu2.apply(&[t[1], t[2]])?;
            let lhs = self.mu2.apply_multi(&[a, bc])?;
            let ab = self.mu2.apply(&[t[0], t[1]])?;
            let c = self.alpha.apply(&[t[2]])?;
            let rhs = self.mu2.apply_multi(&[ab, c])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Twist: from a structure with identity twisting map and a strict
/// endomorphism α, produce (A, α^{k-1}∘μ_k, α).
pub fn yau_twist(assoc: &HAInfStructure, alpha: &MultiOp) -> Result<HAInfStructure> {
    if assoc.shifted {
        return Err(Error::Unsupported("twist the unshifted form".into()));
    }
    if *assoc.alpha() != MultiOp::identity(assoc.space()) {
        return Err(Error::InvalidInput("twist input must have identity structure map".into()));
    }
    for (k, op) in assoc.ops() {
        if !op.commutes_with(alpha, &mut Budget::unlimited())? {
            return Err(Error::InvalidInput(format!(
                "alpha is not a strict morphism: fails on the arity-{k} operation"
            )));
        }
    }
    let mut out = HAInfStructure::new(alpha.clone(), assoc.max_arity)?;
    for (k, op) in assoc.ops() {
        out.set_op(op.post_compose(&alpha.power((k - 1) as u32)?)?)?;
    }
    Ok(out)
}

/// Morphism of structures: components f_k : A^{⊗k} → A' of degree k-1 with
/// α'∘f_k = f_k∘α^{⊗k}.
#[derive(Debug, Clone)]
pub struct HAInfMorphism {
    source: HAInfStructure,
    target: HAInfStructure,
    components: BTreeMap<usize, MultiOp>,
}

impl HAInfMorphism {
    pub fn new(source: HAInfStructure, target: HAInfStructure) -> Result<Self> {
        if source.shifted || target.shifted {
            return Err(Error::Unsupported("morphisms act on the unshifted form".into()));
        }
        Ok(HAInfMorphism { source, target, components: BTreeMap::new() })
    }

    pub fn source(&self) -> &HAInfStructure {
        &self.source
    }

    pub fn target(&self) -> &HAInfStructure {
        &self.target
    }

    pub fn component(&self, k: usize) -> Option<&MultiOp> {
        self.components.get(&k)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.components.iter().map(|(&k, op)| (k, op))
    }

    pub fn is_strict(&self) -> bool {
        self.components.keys().all(|&k| k == 1)
    }

    pub fn set_component(&mut self, op: MultiOp) -> Result<()> {
        let k = op.arity();
        if op.degree() != k as i64 - 1 {
            return Err(Error::DegreeMismatch { expected: k as i64 - 1, got: op.degree() });
        }
        if op.source() != self.source.space() || op.target() != self.target.space() {
            return Err(Error::Incompatible("morphism component space mismatch".into()));
        }
        // Equivariance: α'∘f_k = f_k∘(α⊗…⊗α).
        let lhs = op.post_compose(self.target.alpha())?;
        let rhs = op.pre_compose_each(self.source.alpha())?;
        if lhs != rhs {
            return Err(Error::InvalidInput(format!(
                "morphism component of arity {k} is not equivariant"
            )));
        }
        if op.is_zero() {
            self.components.remove(&k);
        } else {
            self.components.insert(k, op);
        }
        Ok(())
    }

    /// Identity morphism of a structure: f_1 = id, f_k = 0 otherwise.
    pub fn identity(s: &HAInfStructure) -> Result<Self> {
        let mut f = HAInfMorphism::new(s.clone(), s.clone())?;
        f.set_component(MultiOp::identity(s.space()))?;
        Ok(f)
    }

    fn component_or_zero(&self, k: usize) -> MultiOp {
        self.components.get(&k).cloned().unwrap_or_else(|| {
            MultiOp::new(
                k,
                k as i64 - 1,
                self.source.space().clone(),
                self.target.space().clone(),
            )
        })
    }

    /// Both sides of the morphism identity accumulated as arity-n operations
    /// A^{⊗n} → A'; the report lists tuples where they differ.
    pub fn verify(&self, n_max: usize, budget: &mut Budget) -> Result<VerifyReport> {
        let mut report = VerifyReport::default();
        for n in 1..=n_max {
            let diff = self.identity_difference(n)?;
            for tuple in self.source.space().tuples(n) {
                budget.charge(1)?;
                report.tuples_checked += 1;
                let residual = diff.apply(&tuple)?;
                if !residual.is_zero() {
                    report.failures.push(IdentityFailure { n, inputs: tuple, residual });
                }
            }
        }
        Ok(report)
    }

    /// LHS − RHS of the identity at arity n:
    ///
    ///   Σ_{r+s+t=n} (-1)^{rs+t} f_{r+1+t}((α^{s-1})^{⊗r} ⊗ μ_s ⊗ (α^{s-1})^{⊗t})
    ///   = Σ_l Σ_{i_1+…+i_l=n} (-1)^u μ'_l(α'^{Σ_{p≠1}(i_p-1)}f_{i_1} ⊗ …),
    ///   u = (l-1)(i_1-1) + (l-2)(i_2-1) + … + (i_{l-1}-1),
    ///
    /// with Koszul evaluation signs from the block degrees on both sides.
    pub fn identity_difference(&self, n: usize) -> Result<MultiOp> {
        let a = self.source.space().clone();
        let alpha = self.source.alpha();
        let mut acc = MultiOp::new(n, n as i64 - 2, a, self.target.space().clone());
        // Left side.
        for s in 1..=n {
            let Some(mu_s) = self.source.op(s) else { continue };
            let ap = alpha.power((s - 1) as u32)?;
            for r in 0..=(n - s) {
                let t = n - s - r;
                let outer = self.component_or_zero(r + 1 + t);
                let mut blocks: Vec<&MultiOp> = Vec::with_capacity(r + 1 + t);
                for _ in 0..r {
                    blocks.push(&ap);
                }
                blocks.push(mu_s);
                for _ in 0..t {
                    blocks.push(&ap);
                }
                let term = outer.compose_blocks(&blocks)?;
                let sign = sign_pow((r * s + t) as i64);
                acc.add_scaled_op(&term, &sign)?;
            }
        }
        // Right side, subtracted.
        let alpha_t = self.target.alpha();
        for l in 1..=n {
            let Some(mu_l) = self.target.op(l) else { continue };
            for comp in compositions(n) {
                if comp.len() != l {
                    continue;
                }
                let mut u = 0i64;
                for (p, &ip) in comp.iter().enumerate() {
                    u += (l - 1 - p) as i64 * (ip as i64 - 1);
                }
                let total: usize = comp.iter().map(|&ip| ip - 1).sum();
                let mut blocks: Vec<MultiOp> = Vec::with_capacity(l);
                for (p, &ip) in comp.iter().enumerate() {
                    let power = (total - (ip - 1)) as u32;
                    let _ = p;
                    blocks.push(
                        self.component_or_zero(ip).post_compose(&alpha_t.power(power)?)?,
                    );
                }
                let refs: Vec<&MultiOp> = blocks.iter().collect();
                let term = mu_l.compose_blocks(&refs)?;
                acc.add_scaled_op(&term, &-sign_pow(u))?;
            }
        }
        Ok(acc)
    }
}

/// Composition of morphisms via the shifted form, where components have
/// degree 0 and composition is the plain (g∘f)_k = Σ g_l∘(f_{i_1}⊗…⊗f_{i_l}).
pub fn compose_morphisms(g: &HAInfMorphism, f: &HAInfMorphism) -> Result<HAInfMorphism> {
    if f.target.space() != g.source.space() || f.target.alpha() != g.source.alpha() {
        return Err(Error::Incompatible("morphism composition space mismatch".into()));
    }
    let max_arity = f.source.max_arity.min(g.target.max_arity);
    let fs: BTreeMap<usize, MultiOp> =
        f.components().map(|(k, op)| (k, shift_up(op))).collect();
    let gs: BTreeMap<usize, MultiOp> =
        g.components().map(|(k, op)| (k, shift_up(op))).collect();
    let mut out = HAInfMorphism::new(f.source.clone(), g.target.clone())?;
    for k in 1..=max_arity {
        let mut acc: Option<MultiOp> = None;
        for comp in compositions(k) {
            let l = comp.len();
            let Some(gl) = gs.get(&l) else { continue };
            let blocks: Option<Vec<&MultiOp>> = comp.iter().map(|ip| fs.get(ip)).collect();
            let Some(blocks) = blocks else { continue };
            let term = gl.compose_blocks(&blocks)?;
            match &mut acc {
                Some(a) => a.add_scaled_op(&term, &rat(1))?,
                None => acc = Some(term),
            }
        }
        if let Some(a) = acc {
            if !a.is_zero() {
                out.set_component(shift_down(&a))?;
            }
        }
    }
    Ok(out)
}

/// One block of a bimodule operation: A^{⊗p} ⊗ M ⊗ A^{⊗(k-1-p)} → M with the
/// module factor at slot `m_pos`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOp {
    arity: usize,
    m_pos: usize,
    degree: i64,
    algebra: GradedSpace,
    module: GradedSpace,
    entries: BTreeMap<Vec<BasisElement>, SparseVec>,
}

impl BlockOp {
    pub fn new(
        arity: usize,
        m_pos: usize,
        degree: i64,
        algebra: GradedSpace,
        module: GradedSpace,
    ) -> Result<Self> {
        if m_pos >= arity {
            return Err(Error::InvalidInput("module slot outside arity".into()));
        }
        Ok(BlockOp { arity, m_pos, degree, algebra, module, entries: BTreeMap::new() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn m_pos(&self) -> usize {
        self.m_pos
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    fn slot_space(&self, i: usize) -> &GradedSpace {
        if i == self.m_pos {
            &self.module
        } else {
            &self.algebra
        }
    }

    pub fn add_term(&mut self, inputs: &[BasisElement], out: BasisElement, c: Rat) -> Result<()> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        for (i, e) in inputs.iter().enumerate() {
            if !self.slot_space(i).contains(e) {
                return Err(Error::InvalidInput("block input outside its slot space".into()));
            }
        }
        if !self.module.contains(&out) {
            return Err(Error::InvalidInput("block output outside module".into()));
        }
        let expected: i64 = inputs.iter().map(|e| e.degree).sum::<i64>() + self.degree;
        if out.degree != expected {
            return Err(Error::DegreeMismatch { expected, got: out.degree });
        }
        if c.is_zero() {
            return Ok(());
        }
        let v = self.entries.entry(inputs.to_vec()).or_insert_with(SparseVec::zero);
        v.add(out, c);
        Ok(())
    }

    pub fn apply(&self, inputs: &[BasisElement]) -> Result<SparseVec> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        Ok(self.entries.get(inputs).cloned().unwrap_or_default())
    }

    pub fn apply_multi(&self, slots: &[SparseVec]) -> Result<SparseVec> {
        if slots.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: slots.len() });
        }
        let mut stack: Vec<(Vec<BasisElement>, Rat)> = alloc::vec![(Vec::new(), rat(1))];
        for slot in slots {
            let mut next = Vec::new();
            for (prefix, c) in &stack {
                for (e, x) in slot.iter() {
                    let mut p = prefix.clone();
                    p.push(*e);
                    next.push((p, c * x));
                }
            }
            stack = next;
        }
        let mut out = SparseVec::zero();
        for (tuple, c) in stack {
            out.add_scaled(&self.apply(&tuple)?, &c);
        }
        Ok(out)
    }

    /// β∘η = η∘(α,…,β,…,α) on every basis tuple.
    pub fn compatible(&self, alpha: &MultiOp, beta: &MultiOp, budget: &mut Budget) -> Result<bool> {
        let tuples = mixed_tuples(&self.algebra, &self.module, self.arity, self.m_pos);
        for tuple in tuples {
            budget.charge(1)?;
            let lhs = self.apply(&tuple)?.map_through(beta)?;
            let slots: Vec<SparseVec> = tuple
                .iter()
                .enumerate()
                .map(|(i, e)| if i == self.m_pos { beta.apply(&[*e]) } else { alpha.apply(&[*e]) })
                .collect::<Result<_>>()?;
            let rhs = self.apply_multi(&slots)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn mixed_tuples(
    algebra: &GradedSpace,
    module: &GradedSpace,
    n: usize,
    m_pos: usize,
) -> Vec<Vec<BasisElement>> {
    let mut out = alloc::vec![Vec::new()];
    for i in 0..n {
        let basis = if i == m_pos { module.basis() } else { algebra.basis() };
        out = out
            .into_iter()
            .flat_map(|t| {
                basis.iter().map(move |e| {
                    let mut t2 = t.clone();
                    t2.push(*e);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Bimodule data over a structure: blocks η_k on A^{⊗i} ⊗ M ⊗ A^{⊗j},
/// i + j = k - 1, stored per (arity, module position).
#[derive(Debug, Clone)]
pub struct BimoduleData {
    module: GradedSpace,
    beta: MultiOp,
    blocks: BTreeMap<(usize, usize), BlockOp>,
}

impl BimoduleData {
    pub fn new(beta: MultiOp) -> Result<Self> {
        if beta.arity() != 1 || beta.degree() != 0 || beta.source() != beta.target() {
            return Err(Error::InvalidInput("beta must be a degree-0 endomorphism".into()));
        }
        Ok(BimoduleData { module: beta.source().clone(), beta, blocks: BTreeMap::new() })
    }

    pub fn module(&self) -> &GradedSpace {
        &self.module
    }

    pub fn beta(&self) -> &MultiOp {
        &self.beta
    }

    pub fn block(&self, arity: usize, m_pos: usize) -> Option<&BlockOp> {
        self.blocks.get(&(arity, m_pos))
    }

    pub fn set_block(&mut self, b: BlockOp, alpha: &MultiOp) -> Result<()> {
        if b.degree != b.arity as i64 - 2 {
            return Err(Error::DegreeMismatch { expected: b.arity as i64 - 2, got: b.degree });
        }
        if b.module != self.module {
            return Err(Error::Incompatible("block module mismatch".into()));
        }
        if !b.compatible(alpha, &self.beta, &mut Budget::unlimited())? {
            return Err(Error::InvalidInput("block is not (alpha, beta)-compatible".into()));
        }
        self.blocks.insert((b.arity, b.m_pos), b);
        Ok(())
    }

    /// The structure as a bimodule over itself: η_k = μ_k in every slot,
    /// β = α.
    pub fn adjoint(s: &HAInfStructure) -> Result<Self> {
        let mut out = BimoduleData::new(s.alpha().clone())?;
        for (k, op) in s.ops() {
            for pos in 0..k {
                let mut b = BlockOp::new(
                    k,
                    pos,
                    k as i64 - 2,
                    s.space().clone(),
                    s.space().clone(),
                )?;
                for (inputs, v) in op.entries() {
                    for (e, c) in v.iter() {
                        b.add_term(inputs, *e, c.clone())?;
                    }
                }
                out.set_block(b, s.alpha())?;
            }
        }
        Ok(out)
    }
}

/// Verify the module form of the structure identity on all basis tuples with
/// exactly one module slot, n ≤ n_max. Conventions: γ acts as α on algebra
/// slots and β on the module slot; an inner operation on pure algebra slots
/// is μ_i, otherwise the matching η_i block.
pub fn verify_bimodule(
    s: &HAInfStructure,
    b: &BimoduleData,
    n_max: usize,
    budget: &mut Budget,
) -> Result<VerifyReport> {
    if s.shifted {
        return Err(Error::Unsupported("bimodule verification on the unshifted form".into()));
    }
    let mut report = VerifyReport::default();
    for n in 1..=n_max {
        for m_pos in 0..n {
            for tuple in mixed_tuples(s.space(), b.module(), n, m_pos) {
                budget.charge(1)?;
                report.tuples_checked += 1;
                let residual = bimodule_residual(s, b, n, m_pos, &tuple)?;
                if !residual.is_zero() {
                    report.failures.push(IdentityFailure { n, inputs: tuple, residual });
                }
            }
        }
    }
    Ok(report)
}

fn bimodule_residual(
    s: &HAInfStructure,
    b: &BimoduleData,
    n: usize,
    m_pos: usize,
    tuple: &[BasisElement],
) -> Result<SparseVec> {
    let mut residual = SparseVec::zero();
    for i in 1..=n {
        let j = n + 1 - i;
        let ap = s.alpha().power((i - 1) as u32)?;
        let bp = b.beta().power((i - 1) as u32)?;
        for lambda in 1..=j {
            let lo = lambda - 1;
            let prefix: i64 = tuple[..lo].iter().map(|e| e.degree).sum();
            let sign = sign_pow((lambda as i64) * (i as i64 + 1) + (i as i64) * prefix);
            let inner_has_m = (lo..lo + i).contains(&m_pos);
            let (mid, outer_mpos) = if inner_has_m {
                let Some(inner) = b.block(i, m_pos - lo) else { continue };
                (inner.apply(&tuple[lo..lo + i])?, lo)
            } else {
                let Some(inner) = s.op(i) else { continue };
                let pos = if m_pos < lo { m_pos } else { m_pos - (i - 1) };
                (inner.apply(&tuple[lo..lo + i])?, pos)
            };
            if mid.is_zero() {
                continue;
            }
            let Some(outer) = b.block(j, outer_mpos) else { continue };
            let mut slots: Vec<SparseVec> = Vec::with_capacity(j);
            let push_slot = |e: &BasisElement, is_m: bool| -> Result<SparseVec> {
                if is_m {
                    bp.apply(&[*e])
                } else {
                    ap.apply(&[*e])
                }
            };
            for (idx, e) in tuple[..lo].iter().enumerate() {
                slots.push(push_slot(e, idx == m_pos)?);
            }
            slots.push(mid);
            for (off, e) in tuple[lo + i..].iter().enumerate() {
                let idx = lo + i + off;
                slots.push(push_slot(e, idx == m_pos)?);
            }
            let term = outer.apply_multi(&slots)?;
            residual.add_scaled(&term, &sign);
        }
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coder::square_is_zero;
    use crate::fixtures::*;

    fn unlimited() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn associative_fixture_verifies() {
        let s = assoc_poly(4);
        let report = s.verify(4, &mut unlimited()).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn twisted_fixture_verifies() {
        assert!(yau_poly(2, 4).verify(4, &mut unlimited()).unwrap().passed());
        assert!(dg_twisted(2, 4).verify(4, &mut unlimited()).unwrap().passed());
        assert!(dg_big(4).verify(3, &mut unlimited()).unwrap().passed());
    }

    fn perturbed_yau() -> HAInfStructure {
        // Bump μ(1,1) from 1 to 2: still alpha-equivariant, not
        // hom-associative.
        let mut s = yau_poly(2, 4);
        let mut mu = s.op(2).unwrap().clone();
        let one = BasisElement::new(0, 0);
        mu.add_term(&[one, one], one, rat(1)).unwrap();
        s.set_op(mu).unwrap();
        s
    }

    #[test]
    fn perturbed_fixture_fails_at_three() {
        let s = perturbed_yau();
        let report = s.verify(3, &mut unlimited()).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.n == 3));
    }

    #[test]
    fn shift_identity_agreement_and_roundtrip() {
        for s in [yau_poly(2, 4), dg_twisted(2, 4), assoc_poly(4)] {
            let sh = s.to_shifted().unwrap();
            assert!(sh.is_shifted());
            assert!(sh.verify(4, &mut unlimited()).unwrap().passed());
            assert_eq!(sh.to_unshifted().unwrap(), s);
        }
        // A failing structure also fails in shifted form.
        let bad = perturbed_yau().to_shifted().unwrap();
        assert!(!bad.verify(3, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn coderivation_square_matches_verification() {
        for (s, expect) in [
            (assoc_poly(4), true),
            (yau_poly(2, 4), true),
            (dg_twisted(2, 4), true),
            (perturbed_yau(), false),
        ] {
            let d = s.to_coderivation().unwrap();
            let sq = square_is_zero(&d, 4, &mut unlimited()).unwrap();
            assert_eq!(sq.passed(), s.verify(4, &mut unlimited()).unwrap().passed());
            assert_eq!(sq.passed(), expect);
        }
        // Failure arity matches: the perturbation violates n = 3.
        let sq = square_is_zero(&perturbed_yau().to_coderivation().unwrap(), 4, &mut unlimited())
            .unwrap();
        assert!(sq.failures.iter().all(|f| f.arity == 3));
    }

    #[test]
    fn low_arity_consequences() {
        // μ_1² = 0 and the derivation rule are the n = 1, 2 residuals.
        let s = dg_twisted(3, 4);
        let d = s.op(1).unwrap();
        let one_sq = d.post_compose(d).unwrap();
        assert!(one_sq.is_zero());
        for t in s.space().tuples(2) {
            assert!(s.identity_residual(2, &t).unwrap().is_zero());
        }
        // n = 3: hom-associator of μ_2 equals minus the μ_3 boundary; with
        // μ_3 = 0 here, the twisted product is exactly hom-associative.
        let mu = s.op(2).unwrap();
        let alpha = s.alpha();
        for t in s.space().tuples(3) {
            let bc = mu.apply(&[t[1], t[2]]).unwrap();
            let lhs = mu.apply_multi(&[alpha.apply(&[t[0]]).unwrap(), bc]).unwrap();
            let ab = mu.apply(&[t[0], t[1]]).unwrap();
            let rhs = mu.apply_multi(&[ab, alpha.apply(&[t[2]]).unwrap()]).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn identity_morphism_verifies() {
        let s = yau_poly(2, 4);
        let f = HAInfMorphism::identity(&s).unwrap();
        assert!(f.verify(4, &mut unlimited()).unwrap().passed());
        assert!(f.is_strict());
    }

    #[test]
    fn alpha_is_a_strict_endomorphism() {
        for s in [yau_poly(2, 4), dg_twisted(2, 4)] {
            let mut f = HAInfMorphism::new(s.clone(), s.clone()).unwrap();
            f.set_component(s.alpha().clone()).unwrap();
            assert!(f.verify(3, &mut unlimited()).unwrap().passed());
        }
    }

    #[test]
    fn non_multiplicative_map_fails_at_two() {
        let s = assoc_poly(4);
        let mut f = HAInfMorphism::new(s.clone(), s.clone()).unwrap();
        // 1 ↦ x is not multiplicative.
        let mut f1 = MultiOp::endo(1, 0, s.space().clone());
        f1.add_term(&[BasisElement::new(0, 0)], BasisElement::new(0, 1), rat(1)).unwrap();
        f.set_component(f1).unwrap();
        let report = f.verify(2, &mut unlimited()).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|x| x.n == 2));
    }

    #[test]
    fn composition_identity_and_strict() {
        let s = yau_poly(2, 4);
        let id = HAInfMorphism::identity(&s).unwrap();
        let mut f = HAInfMorphism::new(s.clone(), s.clone()).unwrap();
        f.set_component(s.alpha().clone()).unwrap();
        // A nonstrict (unverified) morphism shape: identity + an equivariant
        // f_2 built from the product; id ∘ f must reproduce f exactly.
        let mut g = HAInfMorphism::new(s.clone(), s.clone()).unwrap();
        g.set_component(MultiOp::identity(s.space()).clone()).unwrap();
        let comp = compose_morphisms(&id, &f).unwrap();
        assert_eq!(comp.component(1), f.component(1));
        assert!(comp.is_strict());
        let comp2 = compose_morphisms(&f, &f).unwrap();
        assert_eq!(comp2.component(1).unwrap(), &s.alpha().power(2).unwrap());
        assert!(comp2.verify(3, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn yau_twist_with_identity_is_noop() {
        let s = assoc_poly(4);
        let t = yau_twist(&s, &MultiOp::identity(s.space())).unwrap();
        assert_eq!(t, s);
    }

    #[test]
    fn yau_twist_rejects_non_strict_alpha() {
        let s = assoc_poly(4);
        // x ↦ x + 1 is not multiplicative.
        let mut a = MultiOp::identity(s.space());
        a.add_term(&[BasisElement::new(0, 1)], BasisElement::new(0, 0), rat(1)).unwrap();
        assert!(yau_twist(&s, &a).is_err());
    }

    #[test]
    fn adjoint_bimodule_verifies() {
        let s = yau_poly(2, 3);
        let b = BimoduleData::adjoint(&s).unwrap();
        assert!(verify_bimodule(&s, &b, 3, &mut unlimited()).unwrap().passed());
        let s2 = dg_twisted(2, 3);
        let b2 = BimoduleData::adjoint(&s2).unwrap();
        assert!(verify_bimodule(&s2, &b2, 3, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn corrupted_bimodule_fails_at_three() {
        let s = yau_poly(2, 3);
        let mut b = BimoduleData::adjoint(&s).unwrap();
        // Perturb η_2 with module slot 0: bump η(m, 1) by m for m = 1.
        let mut blk = b.block(2, 0).unwrap().clone();
        let one = BasisElement::new(0, 0);
        blk.add_term(&[one, one], one, rat(1)).unwrap();
        b.set_block(blk, s.alpha()).unwrap();
        let report = verify_bimodule(&s, &b, 3, &mut unlimited()).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.n == 3));
    }

    #[test]
    fn homology_of_zero_differential_is_everything() {
        let s = yau_poly(2, 4); // μ_1 = 0
        let h = s.homology_algebra(false).unwrap();
        assert_eq!(h.space, *s.space());
        // Same structure constants on the canonical representatives.
        for t in h.space.tuples(2) {
            assert_eq!(h.mu2.apply(&t).unwrap(), s.op(2).unwrap().apply(&t).unwrap());
        }
        for e in h.space.basis() {
            assert_eq!(h.alpha.apply(&[e]).unwrap(), s.alpha().apply(&[e]).unwrap());
        }
        assert!(h.verify_hom_associative(&mut unlimited()).unwrap());
    }

    #[test]
    fn homology_of_small_dg_fixture() {
        // dg_twisted has H concentrated in degree 0, one class (the unit).
        let h = dg_twisted(2, 4).homology_algebra(false).unwrap();
        assert_eq!(h.space.total_dim(), 1);
        assert_eq!(h.space.dim(0), 1);
        assert!(h.verify_hom_associative(&mut unlimited()).unwrap());
        let e = BasisElement::new(0, 0);
        assert_eq!(h.mu2.apply(&[e, e]).unwrap(), SparseVec::single(e, rat(1)));
    }

    #[test]
    fn homology_acyclic_is_zero() {
        // Space {0:1, 1:1}, d(y) = x, no product: homology vanishes.
        let space = GradedSpace::from_pairs(&[(0, 1), (1, 1)]);
        let mut s = HAInfStructure::new(MultiOp::identity(&space), 4).unwrap();
        let mut d = MultiOp::endo(1, -1, space);
        d.add_term(&[BasisElement::new(1, 0)], BasisElement::new(0, 0), rat(1)).unwrap();
        s.set_op(d).unwrap();
        let h = s.homology_algebra(false).unwrap();
        assert_eq!(h.space.total_dim(), 0);
    }

    #[test]
    fn homology_independent_of_representatives() {
        let s = dg_big(4);
        let h1 = s.homology_algebra(false).unwrap();
        let h2 = s.homology_algebra(true).unwrap();
        assert_eq!(h1.space, h2.space);
        assert!(h1.verify_hom_associative(&mut unlimited()).unwrap());
        assert!(h2.verify_hom_associative(&mut unlimited()).unwrap());
        // Change of basis: express h2's representatives as h1-classes and
        // check it intertwines the products.
        let phi = |e: &BasisElement| -> SparseVec {
            let rep = h2.representative(e).unwrap();
            h1.class_of_sparse(&rep, e.degree).unwrap()
        };
        for t in h2.space.tuples(2) {
            let lhs = {
                let prod = h2.mu2.apply(&t).unwrap();
                let mut out = SparseVec::zero();
                for (e, c) in prod.iter() {
                    out.add_scaled(&phi(e), c);
                }
                out
            };
            let rhs = h1.mu2.apply_multi(&[phi(&t[0]), phi(&t[1])]).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
