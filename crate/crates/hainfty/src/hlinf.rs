//! Strongly homotopy hom-Lie algebras: skew-symmetric operation tables,
//! identity verification, the suspension to symmetric coderivations, the
//! skew-symmetrization of the associative theory, modules, and
//! Chevalley–Eilenberg cohomology with its deformation complex.
//!
//! A structure is a table of χ-skew-symmetric operations l_k : L^{⊗k} → L of
//! degree k-2 together with a degree-0 map α commuting with every l_k,
//! subject to: for every n ≥ 1,
//!
//!   Σ_{i+j=n+1} Σ_{σ∈Sh(i,n-i)} χ(σ) (-1)^{i(j-1)}
//!     l_j(l_i(a_σ(1),…,a_σ(i)), α^{i-1}a_σ(i+1), …, α^{i-1}a_σ(n)) = 0.
//!
//! Suspending by ϱ_k = (-1)^{k(k-1)/2} s∘l_k∘(s⁻¹)^{⊗k} turns the table into
//! a degree -1 symmetric coderivation on S(sL) whose square vanishes exactly
//! when the identities hold.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::coder::{apply_sym, bracket, Coderivation, Flavor};
use crate::error::{Error, Result};
use crate::graded::{
    chi_sign, permutations, sort_with_chi_sign, unshuffles, BasisElement, GradedSpace,
};
use crate::hainf::{BlockOp, HAInfStructure, IdentityFailure, VerifyReport};
use crate::hochschild::{
    equivariant_cochain_basis, obstruction_sum, CochainBasis, CohomologyReport,
    DeformationSeries,
};
use crate::linalg::Matrix;
use crate::multiop::{shift_down, shift_up, Budget, MultiOp, SparseVec};
use crate::rational::{rat, sign_pow, Rat};

/// Canonical skew storage: every entry moved to its sorted key with the χ
/// sign; words with a repeated even-degree letter vanish.
pub fn skew_normalize(op: &MultiOp) -> MultiOp {
    let mut out = MultiOp::new(
        op.arity(),
        op.degree(),
        op.source().clone(),
        op.target().clone(),
    );
    for (inputs, v) in op.entries() {
        if let Some((sorted, sign)) = sort_with_chi_sign(inputs) {
            out.add_vec(&sorted, v, &sign).expect("normalized entry stays valid");
        }
    }
    out
}

/// Evaluate a canonically-stored skew op on an arbitrary word.
pub fn apply_skew(op: &MultiOp, inputs: &[BasisElement]) -> Result<SparseVec> {
    match sort_with_chi_sign(inputs) {
        None => Ok(SparseVec::zero()),
        Some((sorted, sign)) => {
            let mut v = op.apply(&sorted)?;
            v.scale(&sign);
            Ok(v)
        }
    }
}

/// Multilinear extension of [`apply_skew`].
pub fn apply_skew_multi(op: &MultiOp, slots: &[SparseVec]) -> Result<SparseVec> {
    if slots.len() != op.arity() {
        return Err(Error::ArityMismatch { expected: op.arity(), got: slots.len() });
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
        out.add_scaled(&apply_skew(op, &tuple)?, &c);
    }
    Ok(out)
}

/// The full tensor table of a skew-stored operation.
fn expand_skew(op: &MultiOp) -> Result<MultiOp> {
    let mut out = MultiOp::new(
        op.arity(),
        op.degree(),
        op.source().clone(),
        op.target().clone(),
    );
    for w in op.source().tuples(op.arity()) {
        let v = apply_skew(op, &w)?;
        out.add_vec(&w, &v, &rat(1))?;
    }
    Ok(out)
}

/// A homotopy hom-Lie structure in its unshifted form: χ-skew l_k of degree
/// k-2 on L, stored on sorted basis words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HLInfStructure {
    alpha: MultiOp,
    ops: BTreeMap<usize, MultiOp>,
    max_arity: usize,
}

impl HLInfStructure {
    pub fn new(alpha: MultiOp, max_arity: usize) -> Result<Self> {
        if alpha.arity() != 1 || alpha.degree() != 0 || alpha.source() != alpha.target() {
            return Err(Error::InvalidInput("alpha must be a degree-0 endomorphism".into()));
        }
        Ok(HLInfStructure { alpha, ops: BTreeMap::new(), max_arity })
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

    pub fn op(&self, k: usize) -> Option<&MultiOp> {
        self.ops.get(&k)
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.ops.iter().map(|(&k, op)| (k, op))
    }

    /// Install an operation; checks degree k-2, arity bound, space and
    /// α-equivariance, and canonicalizes the skew storage.
    pub fn set_op(&mut self, op: MultiOp) -> Result<()> {
        let k = op.arity();
        if k > self.max_arity {
            return Err(Error::InvalidInput(format!(
                "operation arity {k} exceeds truncation bound {}",
                self.max_arity
            )));
        }
        if op.degree() != k as i64 - 2 {
            return Err(Error::DegreeMismatch { expected: k as i64 - 2, got: op.degree() });
        }
        if op.source() != self.space() || op.target() != self.space() {
            return Err(Error::Incompatible("operation space mismatch".into()));
        }
        let op = skew_normalize(&op);
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

    /// The Σ_{i+j=n+1} Σ_σ unshuffle sum on one tuple.
    pub fn identity_residual(&self, n: usize, tuple: &[BasisElement]) -> Result<SparseVec> {
        let degrees: Vec<i64> = tuple.iter().map(|e| e.degree).collect();
        let mut residual = SparseVec::zero();
        for i in 1..=n {
            let j = n + 1 - i;
            let Some(inner) = self.ops.get(&i) else { continue };
            let Some(outer) = self.ops.get(&j) else { continue };
            let ap = self.alpha.power((i - 1) as u32)?;
            let sij = sign_pow((i as i64) * (j as i64 - 1));
            for sh in unshuffles(i, n - i) {
                let chi = chi_sign(&sh, &degrees);
                let head: Vec<BasisElement> = sh[..i].iter().map(|&x| tuple[x]).collect();
                let mid = apply_skew(inner, &head)?;
                if mid.is_zero() {
                    continue;
                }
                let mut slots: Vec<SparseVec> = Vec::with_capacity(j);
                slots.push(mid);
                for &x in &sh[i..] {
                    slots.push(ap.apply(&[tuple[x]])?);
                }
                let term = apply_skew_multi(outer, &slots)?;
                residual.add_scaled(&term, &(chi * &sij));
            }
        }
        Ok(residual)
    }

    /// The structure as a degree -1 symmetric coderivation on V = sL, with
    /// ϱ_k = (-1)^{k(k-1)/2} s∘l_k∘(s⁻¹)^{⊗k}. The suspension must flip skew
    /// into symmetric; a table for which it does not is rejected.
    pub fn to_sym_coderivation(&self) -> Result<Coderivation> {
        let alpha_up = shift_up(&self.alpha);
        let shifted_space = alpha_up.source().clone();
        let mut d = Coderivation::new(Flavor::Symmetric, -1, alpha_up, self.max_arity)?;
        for (k, op) in self.ops() {
            let up = shift_up(&expand_skew(op)?);
            // Symmetric components live on sorted words, holding the value on
            // one representative; check that the full table really is the
            // Koszul-symmetric spread of that restriction.
            let mut restricted =
                MultiOp::new(k, -1, shifted_space.clone(), shifted_space.clone());
            for w in shifted_space.sorted_tuples(k) {
                restricted.add_vec(&w, &up.apply(&w)?, &rat(1))?;
            }
            for w in shifted_space.tuples(k) {
                if up.apply(&w)? != apply_sym(&restricted, &w)? {
                    return Err(Error::InvalidInput(format!(
                        "suspension of the arity-{k} operation is not symmetric"
                    )));
                }
            }
            d.set_component(restricted)?;
        }
        Ok(d)
    }

    /// Inverse of [`to_sym_coderivation`]: l_k = s⁻¹∘ϱ_k∘s^{⊗k}, exact table
    /// roundtrip.
    pub fn from_sym_coderivation(d: &Coderivation) -> Result<HLInfStructure> {
        if d.flavor() != Flavor::Symmetric {
            return Err(Error::Incompatible("expected a symmetric coderivation".into()));
        }
        if d.degree() != -1 {
            return Err(Error::DegreeMismatch { expected: -1, got: d.degree() });
        }
        let mut out = HLInfStructure::new(shift_down(d.alpha()), d.max_arity())?;
        let space = d.space().clone();
        for (k, op) in d.components() {
            // Expand the sorted table to all words before unsuspending, then
            // keep only sorted words: set_op spreads them back out with χ.
            let mut full = MultiOp::endo(k, -1, space.clone());
            for w in space.tuples(k) {
                full.add_vec(&w, &apply_sym(op, &w)?, &rat(1))?;
            }
            let down = shift_down(&full);
            let mut table =
                MultiOp::new(k, k as i64 - 2, down.source().clone(), down.target().clone());
            for w in down.source().sorted_tuples(k) {
                if sort_with_chi_sign(&w).is_some() {
                    table.add_vec(&w, &down.apply(&w)?, &rat(1))?;
                }
            }
            out.set_op(table)?;
        }
        Ok(out)
    }
}

/// Twist: from a structure with identity twisting map and a strict
/// endomorphism α, produce (L, α^{k-1}∘l_k, α).
pub fn hl_yau_twist(lie: &HLInfStructure, alpha: &MultiOp) -> Result<HLInfStructure> {
    if *lie.alpha() != MultiOp::identity(lie.space()) {
        return Err(Error::InvalidInput("twist input must have identity structure map".into()));
    }
    for (k, op) in lie.ops() {
        if !op.commutes_with(alpha, &mut Budget::unlimited())? {
            return Err(Error::InvalidInput(format!(
                "alpha is not a strict morphism: fails on the arity-{k} operation"
            )));
        }
    }
    let mut out = HLInfStructure::new(alpha.clone(), lie.max_arity())?;
    for (k, op) in lie.ops() {
        out.set_op(op.post_compose(&alpha.power((k - 1) as u32)?)?)?;
    }
    Ok(out)
}

/// l_k(a_1,…,a_k) = Σ_{σ∈S_k} χ(σ) μ_k(a_σ(1),…,a_σ(k)): the commutator
/// construction in every arity. The input must verify its own identities.
pub fn skew_symmetrize(s: &HAInfStructure, budget: &mut Budget) -> Result<HLInfStructure> {
    let s = s.to_unshifted()?;
    let bound = (2 * s.max_arity()).saturating_sub(1).max(1);
    if !s.verify(bound, budget)?.passed() {
        return Err(Error::InvalidInput(
            "skew-symmetrization of an unverified structure".into(),
        ));
    }
    let space = s.space().clone();
    let mut out = HLInfStructure::new(s.alpha().clone(), s.max_arity())?;
    for (k, op) in s.ops() {
        let mut lk = MultiOp::endo(k, k as i64 - 2, space.clone());
        for w in space.sorted_tuples(k) {
            if sort_with_chi_sign(&w).is_none() {
                continue;
            }
            budget.charge(1)?;
            let degrees: Vec<i64> = w.iter().map(|e| e.degree).collect();
            let mut val = SparseVec::zero();
            for perm in permutations(k) {
                let chi = chi_sign(&perm, &degrees);
                let t: Vec<BasisElement> = perm.iter().map(|&x| w[x]).collect();
                val.add_scaled(&op.apply(&t)?, &chi);
            }
            lk.add_vec(&w, &val, &rat(1))?;
        }
        out.set_op(lk)?;
    }
    Ok(out)
}

/// Module data: blocks η_k : L^{⊗(k-1)} ⊗ M → M of degree k-2 with the
/// module slot last, (α,β)-compatible.
#[derive(Debug, Clone)]
pub struct HLModuleData {
    beta: MultiOp,
    etas: BTreeMap<usize, BlockOp>,
}

impl HLModuleData {
    pub fn new(beta: MultiOp) -> Result<Self> {
        if beta.arity() != 1 || beta.degree() != 0 || beta.source() != beta.target() {
            return Err(Error::InvalidInput("beta must be a degree-0 endomorphism".into()));
        }
        Ok(HLModuleData { beta, etas: BTreeMap::new() })
    }

    pub fn module(&self) -> &GradedSpace {
        self.beta.source()
    }

    pub fn beta(&self) -> &MultiOp {
        &self.beta
    }

    pub fn eta(&self, k: usize) -> Option<&BlockOp> {
        self.etas.get(&k)
    }

    pub fn set_eta(&mut self, b: BlockOp, alpha: &MultiOp) -> Result<()> {
        if b.m_pos() != b.arity() - 1 {
            return Err(Error::InvalidInput("module slot must be the last one".into()));
        }
        if b.degree() != b.arity() as i64 - 2 {
            return Err(Error::DegreeMismatch {
                expected: b.arity() as i64 - 2,
                got: b.degree(),
            });
        }
        if !b.compatible(alpha, &self.beta, &mut Budget::unlimited())? {
            return Err(Error::InvalidInput("block is not (alpha, beta)-compatible".into()));
        }
        self.etas.insert(b.arity(), b);
        Ok(())
    }

    /// The structure as a module over itself: η_k = l_k, β = α.
    pub fn over_itself(s: &HLInfStructure) -> Result<Self> {
        let mut out = HLModuleData::new(s.alpha().clone())?;
        for (k, op) in s.ops() {
            let mut b = BlockOp::new(
                k,
                k - 1,
                k as i64 - 2,
                s.space().clone(),
                s.space().clone(),
            )?;
            for w in s.space().tuples(k) {
                for (e, c) in apply_skew(op, &w)?.iter() {
                    b.add_term(&w, *e, c.clone())?;
                }
            }
            out.set_eta(b, s.alpha())?;
        }
        Ok(out)
    }
}

/// Verify the module identity on tuples (a_1,…,a_{n-1}, m), n ≤ n_max. When
/// the unshuffle routes the module element into the inner block, the inner
/// operation is η_i and its value is rotated to the last slot of η_j with
/// the sign (-1)^{j-1 + (i + Σ_head |a|)(Σ_tail |a|)}; otherwise the inner
/// operation is l_i and the module element rides through β^{i-1}.
pub fn verify_hl_module(
    s: &HLInfStructure,
    m: &HLModuleData,
    n_max: usize,
    budget: &mut Budget,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for n in 1..=n_max {
        let mut tuples: Vec<Vec<BasisElement>> = alloc::vec![Vec::new()];
        for _ in 0..n - 1 {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    s.space().basis().into_iter().map(move |e| {
                        let mut t2 = t.clone();
                        t2.push(e);
                        t2
                    })
                })
                .collect();
        }
        for base in tuples {
            for me in m.module().basis() {
                let mut tuple = base.clone();
                tuple.push(me);
                budget.charge(1)?;
                report.tuples_checked += 1;
                let residual = module_residual(s, m, n, &tuple)?;
                if !residual.is_zero() {
                    report.failures.push(IdentityFailure { n, inputs: tuple, residual });
                }
            }
        }
    }
    Ok(report)
}

fn module_residual(
    s: &HLInfStructure,
    m: &HLModuleData,
    n: usize,
    tuple: &[BasisElement],
) -> Result<SparseVec> {
    let degrees: Vec<i64> = tuple.iter().map(|e| e.degree).collect();
    let mut residual = SparseVec::zero();
    for i in 1..=n {
        let j = n + 1 - i;
        let ap = s.alpha().power((i - 1) as u32)?;
        let bp = m.beta().power((i - 1) as u32)?;
        let sij = sign_pow((i as i64) * (j as i64 - 1));
        for sh in unshuffles(i, n - i) {
            let chi = chi_sign(&sh, &degrees);
            if sh[i - 1] == n - 1 {
                // Module element inside the inner block (last slot of η_i).
                let (Some(inner), Some(outer)) = (m.eta(i), m.eta(j)) else { continue };
                let head: Vec<BasisElement> = sh[..i].iter().map(|&x| tuple[x]).collect();
                let mid = inner.apply(&head)?;
                if mid.is_zero() {
                    continue;
                }
                let head_deg: i64 = head.iter().map(|e| e.degree).sum();
                let tail_deg: i64 = sh[i..].iter().map(|&x| tuple[x].degree).sum();
                let rot = sign_pow((j as i64 - 1) + (i as i64 + head_deg) * tail_deg);
                let mut slots: Vec<SparseVec> = Vec::with_capacity(j);
                for &x in &sh[i..] {
                    slots.push(ap.apply(&[tuple[x]])?);
                }
                slots.push(mid);
                let term = outer.apply_multi(&slots)?;
                residual.add_scaled(&term, &(chi * &sij * rot));
            } else {
                // Pure-algebra inner block; the module element stays last.
                let Some(inner) = s.op(i) else { continue };
                let Some(outer) = m.eta(j) else { continue };
                let head: Vec<BasisElement> = sh[..i].iter().map(|&x| tuple[x]).collect();
                let mid = apply_skew(inner, &head)?;
                if mid.is_zero() {
                    continue;
                }
                let mut slots: Vec<SparseVec> = Vec::with_capacity(j);
                slots.push(mid);
                for &x in &sh[i..n - 1] {
                    slots.push(ap.apply(&[tuple[x]])?);
                }
                slots.push(bp.apply(&[tuple[n - 1]])?);
                let term = outer.apply_multi(&slots)?;
                residual.add_scaled(&term, &(chi * &sij));
            }
        }
    }
    Ok(residual)
}

/// The structure coderivation widened to a larger arity truncation.
fn sym_structure_coderivation(s: &HLInfStructure, bound: usize) -> Result<Coderivation> {
    let d = s.to_sym_coderivation()?;
    let mut wide = Coderivation::new(
        Flavor::Symmetric,
        -1,
        d.alpha().clone(),
        bound.max(d.max_arity()),
    )?;
    for (_, op) in d.components() {
        wide.set_component(op.clone())?;
    }
    Ok(wide)
}

/// Basis of the degree-n Chevalley–Eilenberg cochains: equivariant symmetric
/// maps S^m(sL) → sL of degree 1-n.
pub fn ce_cochain_basis(
    s: &HLInfStructure,
    n: usize,
    budget: &mut Budget,
) -> Result<CochainBasis> {
    equivariant_cochain_basis(&shift_up(s.alpha()), Flavor::Symmetric, n, budget)
}

/// δ(D′) = [D, D′] in the symmetric flavor.
pub fn ce_coboundary(s: &HLInfStructure, d_prime: &Coderivation) -> Result<Coderivation> {
    let bound = d_prime.max_arity() + s.max_arity();
    let d = sym_structure_coderivation(s, bound)?;
    let mut wide = Coderivation::new(
        d_prime.flavor(),
        d_prime.degree(),
        d_prime.alpha().clone(),
        bound,
    )?;
    for (_, op) in d_prime.components() {
        wide.set_component(op.clone())?;
    }
    bracket(&d, &wide)
}

/// Matrix of δ : Cⁿ → C^{n+1} in the generator bases.
pub fn ce_differential(s: &HLInfStructure, n: usize, budget: &mut Budget) -> Result<Matrix> {
    let bn = ce_cochain_basis(s, n, budget)?;
    let bn1 = ce_cochain_basis(s, n + 1, budget)?;
    ce_differential_in_bases(s, &bn, &bn1, budget)
}

pub fn ce_differential_in_bases(
    s: &HLInfStructure,
    bn: &CochainBasis,
    bn1: &CochainBasis,
    budget: &mut Budget,
) -> Result<Matrix> {
    if bn1.n() != bn.n() + 1 {
        return Err(Error::InvalidInput("bases are not consecutive".into()));
    }
    let bound = bn1.max_feasible_arity();
    let d = sym_structure_coderivation(s, bound)?;
    let mut out = Matrix::zero(bn1.len(), bn.len());
    for j in 0..bn.len() {
        budget.charge(bn1.len().max(1) as u64)?;
        let g = bn.generator_coderivation(j, bound)?;
        let db = bracket(&d, &g)?;
        let coords = bn1.coords(&db)?;
        for (i, v) in coords.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// dim Hⁿ = nullity(δₙ) − rank(δ_{n−1}); there are no 0-cochains, so δ₀ = 0.
pub fn ce_cohomology_dim(
    s: &HLInfStructure,
    n: usize,
    budget: &mut Budget,
) -> Result<CohomologyReport> {
    let bn = ce_cochain_basis(s, n, budget)?;
    let bn1 = ce_cochain_basis(s, n + 1, budget)?;
    let rank_out = ce_differential_in_bases(s, &bn, &bn1, budget)?.rank();
    let rank_in = if n >= 2 {
        let bp = ce_cochain_basis(s, n - 1, budget)?;
        ce_differential_in_bases(s, &bp, &bn, budget)?.rank()
    } else {
        0
    };
    Ok(CohomologyReport {
        n,
        dim_cochains: bn.len(),
        rank_in,
        rank_out,
        dim: bn.len() - rank_out - rank_in,
    })
}

/// The obstruction −Σ D_i ∘ D_{T+1−i} to extending a verified series past
/// its order, judged in the Chevalley–Eilenberg complex.
pub fn hl_obstruction(
    ds: &DeformationSeries,
    s: &HLInfStructure,
    budget: &mut Budget,
) -> Result<(Coderivation, bool)> {
    let acc = obstruction_sum(ds, budget)?;
    let cocycle = ce_coboundary(s, &acc)?.is_zero();
    Ok((acc, cocycle))
}

/// Solve δ(D_{T+1}) = obstruction in the 2-cochain basis; `None` when the
/// obstruction class is nonzero in H³.
pub fn hl_extend_deformation(
    ds: &DeformationSeries,
    s: &HLInfStructure,
    budget: &mut Budget,
) -> Result<Option<DeformationSeries>> {
    let (obs, _) = hl_obstruction(ds, s, budget)?;
    let b2 = ce_cochain_basis(s, 2, budget)?;
    let b3 = ce_cochain_basis(s, 3, budget)?;
    let delta2 = ce_differential_in_bases(s, &b2, &b3, budget)?;
    let obs_coords = b3.coords(&obs)?;
    let x = match delta2.solve_linear(&obs_coords)? {
        Some(x) => x,
        None => return Ok(None),
    };
    let next = b2.from_coords(&x, ds.base().max_arity())?;
    let mut terms = ds.terms().to_vec();
    terms.push(next);
    Ok(Some(DeformationSeries::new(ds.base().clone(), terms)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coder::{square_is_zero, symmetrize_coderivation};
    use crate::fixtures::dg_twisted;
    use num_traits::Zero;
    use crate::hochschild::verify_deformation;

    fn unlimited() -> Budget {
        Budget::unlimited()
    }

    fn e(d: i64, i: usize) -> BasisElement {
        BasisElement::new(d, i)
    }

    /// Two-dimensional solvable Lie algebra: [x, y] = x.
    fn solvable(max_arity: usize) -> HLInfStructure {
        let space = GradedSpace::concentrated(2);
        let mut s = HLInfStructure::new(MultiOp::identity(&space), max_arity).unwrap();
        let mut l2 = MultiOp::endo(2, 0, space);
        l2.add_term(&[e(0, 0), e(0, 1)], e(0, 0), rat(1)).unwrap();
        s.set_op(l2).unwrap();
        s
    }

    /// x ↦ qx, y ↦ y: a strict endomorphism of [`solvable`].
    fn diag2(q: i64) -> MultiOp {
        let mut a = MultiOp::endo(1, 0, GradedSpace::concentrated(2));
        a.add_term(&[e(0, 0)], e(0, 0), rat(q)).unwrap();
        a.add_term(&[e(0, 1)], e(0, 1), rat(1)).unwrap();
        a
    }

    /// Heisenberg algebra: [x, y] = z, z central.
    fn heisenberg(max_arity: usize) -> HLInfStructure {
        let space = GradedSpace::concentrated(3);
        let mut s = HLInfStructure::new(MultiOp::identity(&space), max_arity).unwrap();
        let mut l2 = MultiOp::endo(2, 0, space);
        l2.add_term(&[e(0, 0), e(0, 1)], e(0, 2), rat(1)).unwrap();
        s.set_op(l2).unwrap();
        s
    }

    /// A skew bracket that is not a Lie bracket: [e, f] = h, [h, e] = 2e,
    /// [h, f] = 0 leaves a Jacobi defect 2h on (e, f, h).
    fn broken(max_arity: usize) -> HLInfStructure {
        let space = GradedSpace::concentrated(3);
        let mut s = HLInfStructure::new(MultiOp::identity(&space), max_arity).unwrap();
        let mut l2 = MultiOp::endo(2, 0, space);
        l2.add_term(&[e(0, 0), e(0, 1)], e(0, 2), rat(1)).unwrap();
        l2.add_term(&[e(0, 2), e(0, 0)], e(0, 0), rat(2)).unwrap();
        s.set_op(l2).unwrap();
        s
    }

    /// Strictly upper-triangular 3×3 matrices: a·b = c is the only product.
    fn upper_triangular(max_arity: usize) -> HAInfStructure {
        let space = GradedSpace::concentrated(3);
        let mut st = HAInfStructure::new(MultiOp::identity(&space), max_arity).unwrap();
        let mut mu = MultiOp::endo(2, 0, space);
        mu.add_term(&[e(0, 0), e(0, 1)], e(0, 2), rat(1)).unwrap();
        st.set_op(mu).unwrap();
        st
    }

    /// A structure whose only operation is ternary: μ₃(a,b,c) = y with
    /// a, b, c in degree 0 and y in degree 1. Every composition of μ₃ with
    /// itself hits a slot that y cannot fill, so all identities hold.
    fn ternary_only() -> HAInfStructure {
        let space = GradedSpace::from_pairs(&[(0, 3), (1, 1)]);
        let mut st = HAInfStructure::new(MultiOp::identity(&space), 3).unwrap();
        let mut m3 = MultiOp::endo(3, 1, space);
        m3.add_term(&[e(0, 0), e(0, 1), e(0, 2)], e(1, 0), rat(1)).unwrap();
        st.set_op(m3).unwrap();
        st
    }

    fn comp_eq(a: Option<&MultiOp>, b: Option<&MultiOp>) -> bool {
        match (a, b) {
            (None, None) => true,
            (Some(x), None) => x.entries().next().is_none(),
            (None, Some(y)) => y.entries().next().is_none(),
            (Some(x), Some(y)) => x == y,
        }
    }

    #[test]
    fn hom_lie_fixtures_satisfy_the_identity() {
        assert!(solvable(4).verify(4, &mut unlimited()).unwrap().passed());
        assert!(heisenberg(4).verify(4, &mut unlimited()).unwrap().passed());

        let tw = hl_yau_twist(&solvable(4), &diag2(3)).unwrap();
        assert!(tw.verify(4, &mut unlimited()).unwrap().passed());
        // the twisted bracket is q·[x, y]
        let l2 = tw.op(2).unwrap();
        assert_eq!(
            apply_skew(l2, &[e(0, 0), e(0, 1)]).unwrap(),
            SparseVec::single(e(0, 0), rat(3))
        );

        // independent check of the twisted Jacobi identity
        // [[a,b], αc] - [[a,c], αb] + [[b,c], αa] = 0 on every triple
        let al = tw.alpha();
        for a in tw.space().basis() {
            for b in tw.space().basis() {
                for c in tw.space().basis() {
                    let mut r = SparseVec::zero();
                    for (x, y, z, sg) in
                        [(a, b, c, 1), (a, c, b, -1), (b, c, a, 1)]
                    {
                        let inner = apply_skew(l2, &[x, y]).unwrap();
                        let outer = apply_skew_multi(
                            l2,
                            &[inner, al.apply(&[z]).unwrap()],
                        )
                        .unwrap();
                        r.add_scaled(&outer, &rat(sg));
                    }
                    assert!(r.is_zero(), "Jacobi fails on ({a:?}, {b:?}, {c:?})");
                }
            }
        }
    }

    #[test]
    fn jacobi_failure_is_reported_with_its_residual() {
        let s = broken(3);
        let report = s.verify(3, &mut unlimited()).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.n == 3));

        // cyclic oracle on (e, f, h): [[e,f],h] + [[f,h],e] + [[h,e],f]
        let l2 = s.op(2).unwrap();
        let mut oracle = SparseVec::zero();
        for (a, b, c) in [
            (e(0, 0), e(0, 1), e(0, 2)),
            (e(0, 1), e(0, 2), e(0, 0)),
            (e(0, 2), e(0, 0), e(0, 1)),
        ] {
            let inner = apply_skew(l2, &[a, b]).unwrap();
            oracle.add_scaled(
                &apply_skew_multi(l2, &[inner, SparseVec::single(c, rat(1))]).unwrap(),
                &rat(1),
            );
        }
        assert_eq!(oracle, SparseVec::single(e(0, 2), rat(2)));
        let r = s.identity_residual(3, &[e(0, 0), e(0, 1), e(0, 2)]).unwrap();
        assert_eq!(r, oracle);
    }

    #[test]
    fn square_zero_suspension_tracks_verification() {
        let tw = hl_yau_twist(&solvable(4), &diag2(3)).unwrap();
        let d = tw.to_sym_coderivation().unwrap();
        assert!(square_is_zero(&d, 4, &mut unlimited()).unwrap().passed());
        assert_eq!(HLInfStructure::from_sym_coderivation(&d).unwrap(), tw);

        let bad = broken(3);
        let d2 = bad.to_sym_coderivation().unwrap();
        assert!(!square_is_zero(&d2, 3, &mut unlimited()).unwrap().passed());
        assert!(!bad.verify(3, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn suspended_operations_are_graded_symmetric() {
        let hl = skew_symmetrize(&ternary_only(), &mut unlimited()).unwrap();
        let d = hl.to_sym_coderivation().unwrap();
        // a, b, c shift to degree 1; swapping two odd letters flips the sign
        let v = d.eval(3, &[e(1, 0), e(1, 1), e(1, 2)]).unwrap();
        assert!(!v.is_zero());
        let mut w = d.eval(3, &[e(1, 1), e(1, 0), e(1, 2)]).unwrap();
        w.scale(&rat(-1));
        assert_eq!(v, w);
        // a repeated odd letter kills the word
        assert!(d.eval(3, &[e(1, 0), e(1, 0), e(1, 1)]).unwrap().is_zero());
    }

    #[test]
    fn commutator_of_matrix_products_is_the_matrix_bracket() {
        let s = upper_triangular(2);
        let hl = skew_symmetrize(&s, &mut unlimited()).unwrap();
        assert_eq!(hl.op(2), heisenberg(2).op(2));
        assert!(comp_eq(hl.op(1), None));
        assert!(hl.verify(3, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn commutator_of_a_dg_algebra_keeps_its_differential() {
        let s = dg_twisted(2, 2);
        let hl = skew_symmetrize(&s, &mut unlimited()).unwrap();
        assert_eq!(hl.op(1), s.op(1));
        assert!(hl.verify(3, &mut unlimited()).unwrap().passed());

        // l₂(a, b) = μ(a, b) - (-1)^{|a||b|} μ(b, a) on every pair; the
        // algebra is graded commutative, so both sides vanish
        let mu = s.op(2).unwrap();
        for a in s.space().basis() {
            for b in s.space().basis() {
                let mut oracle = mu.apply(&[a, b]).unwrap();
                oracle.add_scaled(&mu.apply(&[b, a]).unwrap(), &sign_pow(1 + a.degree * b.degree));
                let got = match hl.op(2) {
                    Some(l2) => apply_skew(l2, &[a, b]).unwrap(),
                    None => SparseVec::zero(),
                };
                assert_eq!(got, oracle);
                assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn skew_symmetrization_requires_a_valid_input() {
        let space = GradedSpace::concentrated(2);
        let mut st = HAInfStructure::new(MultiOp::identity(&space), 2).unwrap();
        let mut mu = MultiOp::endo(2, 0, space);
        mu.add_term(&[e(0, 0), e(0, 0)], e(0, 1), rat(1)).unwrap();
        mu.add_term(&[e(0, 1), e(0, 0)], e(0, 0), rat(1)).unwrap();
        st.set_op(mu).unwrap();
        assert!(matches!(
            skew_symmetrize(&st, &mut unlimited()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn ternary_bracket_from_a_ternary_product() {
        let hl = skew_symmetrize(&ternary_only(), &mut unlimited()).unwrap();
        let l3 = hl.op(3).unwrap();
        // only the identity permutation survives the alternating sum
        assert_eq!(
            apply_skew(l3, &[e(0, 0), e(0, 1), e(0, 2)]).unwrap(),
            SparseVec::single(e(1, 0), rat(1))
        );
        assert!(hl.verify(5, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn suspension_and_symmetrization_commute() {
        for s in [upper_triangular(2), ternary_only(), dg_twisted(3, 2)] {
            let left = skew_symmetrize(&s, &mut unlimited())
                .unwrap()
                .to_sym_coderivation()
                .unwrap();
            let right = symmetrize_coderivation(&s.to_coderivation().unwrap()).unwrap();
            for k in 1..=s.max_arity() {
                assert!(
                    comp_eq(left.component(k), right.component(k)),
                    "arity {k} components disagree"
                );
            }
        }
    }

    #[test]
    fn module_structure_over_itself() {
        let tw = hl_yau_twist(&solvable(3), &diag2(2)).unwrap();
        let m = HLModuleData::over_itself(&tw).unwrap();
        assert!(verify_hl_module(&tw, &m, 3, &mut unlimited()).unwrap().passed());

        let dg = skew_symmetrize(&dg_twisted(2, 2), &mut unlimited()).unwrap();
        let m = HLModuleData::over_itself(&dg).unwrap();
        assert!(verify_hl_module(&dg, &m, 3, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn one_dimensional_representation_and_its_mutation() {
        let s = solvable(3);
        let module = GradedSpace::concentrated(1);
        let m0 = e(0, 0);

        // y acts by 5, x acts by 0: a representation since [x, y] = x
        // must act by the commutator [ρ(x), ρ(y)] = 0 and ρ(x) = 0
        let mut data = HLModuleData::new(MultiOp::identity(&module)).unwrap();
        let mut eta = BlockOp::new(2, 1, 0, s.space().clone(), module.clone()).unwrap();
        eta.add_term(&[e(0, 1), m0], m0, rat(5)).unwrap();
        data.set_eta(eta, s.alpha()).unwrap();
        assert!(verify_hl_module(&s, &data, 3, &mut unlimited()).unwrap().passed());

        // letting x act by 1 breaks it: [x, y] = x now acts by 1, but the
        // commutator of the two scalars is still 0
        let mut bad = HLModuleData::new(MultiOp::identity(&module)).unwrap();
        let mut eta = BlockOp::new(2, 1, 0, s.space().clone(), module.clone()).unwrap();
        eta.add_term(&[e(0, 1), m0], m0, rat(5)).unwrap();
        eta.add_term(&[e(0, 0), m0], m0, rat(1)).unwrap();
        bad.set_eta(eta, s.alpha()).unwrap();
        let report = verify_hl_module(&s, &bad, 3, &mut unlimited()).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().all(|f| f.n == 3));
    }

    #[test]
    fn cochain_dimensions_and_the_coboundary_square() {
        let ab = HLInfStructure::new(
            MultiOp::identity(&GradedSpace::concentrated(2)),
            4,
        )
        .unwrap();
        assert_eq!(ce_cochain_basis(&ab, 1, &mut unlimited()).unwrap().len(), 4);
        assert_eq!(ce_cochain_basis(&ab, 2, &mut unlimited()).unwrap().len(), 2);
        assert_eq!(ce_cochain_basis(&ab, 3, &mut unlimited()).unwrap().len(), 0);
        // zero bracket: every cochain is a cocycle and none is a coboundary
        assert_eq!(ce_cohomology_dim(&ab, 1, &mut unlimited()).unwrap().dim, 4);
        assert_eq!(ce_cohomology_dim(&ab, 2, &mut unlimited()).unwrap().dim, 2);

        let s = heisenberg(4);
        let d1 = ce_differential(&s, 1, &mut unlimited()).unwrap();
        let d2 = ce_differential(&s, 2, &mut unlimited()).unwrap();
        assert!(d2.mat_mul(&d1).unwrap().is_zero());

        // Euler characteristic agrees whether computed from cochains or
        // from cohomology (the top degree is 3 on three odd letters)
        let mut chi_c = 0i64;
        let mut chi_h = 0i64;
        for n in 1..=3 {
            let r = ce_cohomology_dim(&s, n, &mut unlimited()).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            chi_c += sign * r.dim_cochains as i64;
            chi_h += sign * r.dim as i64;
        }
        assert_eq!(chi_c, chi_h);
    }

    #[test]
    fn coboundary_deformations_extend() {
        let s = heisenberg(4);
        let base = s.to_sym_coderivation().unwrap();
        let b1 = ce_cochain_basis(&s, 1, &mut unlimited()).unwrap();
        let delta1 = ce_differential(&s, 1, &mut unlimited()).unwrap();
        // pick a 1-cochain with a nonzero coboundary
        let j = (0..b1.len())
            .find(|&j| (0..delta1.rows()).any(|i| !delta1.get(i, j).is_zero()))
            .expect("the bracket is not abelian");
        let phi = b1.generator_coderivation(j, 4).unwrap();
        let dphi = ce_coboundary(&s, &phi).unwrap();
        let mut d1 = Coderivation::new(
            Flavor::Symmetric,
            -1,
            base.alpha().clone(),
            base.max_arity(),
        )
        .unwrap();
        for (_, op) in dphi.components() {
            d1.set_component(op.clone()).unwrap();
        }
        assert!(!d1.is_zero());

        let ds = DeformationSeries::new(base, alloc::vec![d1]).unwrap();
        assert!(verify_deformation(&ds, &mut unlimited()).unwrap().passed());
        let (_, cocycle) = hl_obstruction(&ds, &s, &mut unlimited()).unwrap();
        assert!(cocycle);
        let ext = hl_extend_deformation(&ds, &s, &mut unlimited())
            .unwrap()
            .expect("a trivial deformation extends");
        assert_eq!(ext.order(), 2);
        assert!(verify_deformation(&ext, &mut unlimited()).unwrap().passed());
    }

    #[test]
    fn obstructed_deformation_is_detected() {
        let s = HLInfStructure::new(
            MultiOp::identity(&GradedSpace::concentrated(3)),
            4,
        )
        .unwrap();
        let base = s.to_sym_coderivation().unwrap();
        // first-order term with a nonvanishing self-composition:
        // ϱ(x∧y) = z, ϱ(x∧z) = x gives ϱ(ϱ(x∧z) ∧ y) = z ≠ 0 on x∧y∧z
        let mut d1 = Coderivation::new(
            Flavor::Symmetric,
            -1,
            base.alpha().clone(),
            base.max_arity(),
        )
        .unwrap();
        let mut op = MultiOp::endo(2, -1, base.space().clone());
        op.add_term(&[e(1, 0), e(1, 1)], e(1, 2), rat(1)).unwrap();
        op.add_term(&[e(1, 0), e(1, 2)], e(1, 0), rat(1)).unwrap();
        d1.set_component(op).unwrap();

        let ds = DeformationSeries::new(base, alloc::vec![d1]).unwrap();
        assert!(verify_deformation(&ds, &mut unlimited()).unwrap().passed());
        let (obs, cocycle) = hl_obstruction(&ds, &s, &mut unlimited()).unwrap();
        assert!(!obs.is_zero());
        assert!(cocycle, "the zero bracket makes every cochain a cocycle");
        assert!(hl_extend_deformation(&ds, &s, &mut unlimited()).unwrap().is_none());
    }

    #[test]
    fn verification_respects_the_budget() {
        let s = heisenberg(2);
        assert!(matches!(
            s.verify(3, &mut Budget::new(5)),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            skew_symmetrize(&upper_triangular(2), &mut Budget::new(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
