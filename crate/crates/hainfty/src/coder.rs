//! Coderivations on the tensor coalgebra TV and the symmetric coalgebra SV,
//! twisted by a degree-0 structure map α.
//!
//! A coderivation is a finite table of α-commuting components
//! ϱ_n : V^{⊗n} → V (resp. S^n V → V), all of one degree; the co-Leibniz
//! lift, circle product, graded bracket and square-zero test below are the
//! engine behind the homotopy identities and every cohomology computation in
//! this crate.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{
    koszul_sign, permutations, sort_with_koszul_sign, unshuffles, BasisElement, GradedSpace,
};
use crate::multiop::{Budget, MultiOp, SparseVec};
use crate::rational::{rat, sign_pow, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Tensor,
    Symmetric,
}

/// Element of a tensor power of V: sparse combination of basis words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseTensor {
    terms: BTreeMap<Vec<BasisElement>, Rat>,
}

impl SparseTensor {
    pub fn zero() -> Self {
        SparseTensor::default()
    }

    pub fn add(&mut self, word: Vec<BasisElement>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(word).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &SparseTensor, c: &Rat) {
        for (w, x) in &other.terms {
            self.add(w.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<BasisElement>, &Rat)> {
        self.terms.iter()
    }
}

/// Normalize a k-ary operation to canonical symmetric storage: every entry is
/// moved to its sorted key with the Koszul sign; words with a repeated
/// odd-degree letter vanish.
pub fn sym_normalize(op: &MultiOp) -> MultiOp {
    let mut out = MultiOp::new(
        op.arity(),
        op.degree(),
        op.source().clone(),
        op.target().clone(),
    );
    for (inputs, v) in op.entries() {
        if let Some((sorted, sign)) = sort_with_koszul_sign(inputs) {
            out.add_vec(&sorted, v, &sign).expect("normalized entry stays valid");
        }
    }
    out
}

/// Evaluate a canonically-stored symmetric op on an arbitrary word.
pub fn apply_sym(op: &MultiOp, inputs: &[BasisElement]) -> Result<SparseVec> {
    match sort_with_koszul_sign(inputs) {
        None => Ok(SparseVec::zero()),
        Some((sorted, sign)) => {
            let mut v = op.apply(&sorted)?;
            v.scale(&sign);
            Ok(v)
        }
    }
}

/// Multilinear extension of [`apply_sym`].
pub fn apply_sym_multi(op: &MultiOp, slots: &[SparseVec]) -> Result<SparseVec> {
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
        out.add_scaled(&apply_sym(op, &tuple)?, &c);
    }
    Ok(out)
}

/// α-twisted coderivation: degree-homogeneous component table, truncated at
/// `max_arity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coderivation {
    flavor: Flavor,
    degree: i64,
    alpha: MultiOp,
    max_arity: usize,
    components: BTreeMap<usize, MultiOp>,
}

impl Coderivation {
    pub fn new(flavor: Flavor, degree: i64, alpha: MultiOp, max_arity: usize) -> Result<Self> {
        if alpha.arity() != 1 || alpha.degree() != 0 || alpha.source() != alpha.target() {
            return Err(Error::InvalidInput("alpha must be a degree-0 endomorphism".into()));
        }
        Ok(Coderivation { flavor, degree, alpha, max_arity, components: BTreeMap::new() })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn alpha(&self) -> &MultiOp {
        &self.alpha
    }

    pub fn space(&self) -> &GradedSpace {
        self.alpha.source()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn component(&self, arity: usize) -> Option<&MultiOp> {
        self.components.get(&arity)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &MultiOp)> {
        self.components.iter().map(|(&n, op)| (n, op))
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(MultiOp::is_zero)
    }

    /// Install a component; checks degree, arity bound, space and
    /// α-equivariance, and canonicalizes symmetric storage.
    pub fn set_component(&mut self, op: MultiOp) -> Result<()> {
        if op.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: op.degree() });
        }
        if op.arity() > self.max_arity {
            return Err(Error::InvalidInput(alloc::format!(
                "component arity {} exceeds truncation bound {}",
                op.arity(),
                self.max_arity
            )));
        }
        if op.source() != self.space() || op.target() != self.space() {
            return Err(Error::Incompatible("component space mismatch".into()));
        }
        let op = match self.flavor {
            Flavor::Tensor => op,
            Flavor::Symmetric => sym_normalize(&op),
        };
        if !op.commutes_with(&self.alpha, &mut Budget::unlimited())? {
            return Err(Error::InvalidInput(alloc::format!(
                "arity-{} component does not commute with alpha",
                op.arity()
            )));
        }
        if op.is_zero() {
            self.components.remove(&op.arity());
        } else {
            self.components.insert(op.arity(), op);
        }
        Ok(())
    }

    /// Flavor-aware evaluation of the arity-n component on a word.
    pub fn eval(&self, n: usize, inputs: &[BasisElement]) -> Result<SparseVec> {
        let Some(op) = self.components.get(&n) else {
            return Ok(SparseVec::zero());
        };
        match self.flavor {
            Flavor::Tensor => op.apply(inputs),
            Flavor::Symmetric => apply_sym(op, inputs),
        }
    }

    pub fn add_scaled(&mut self, other: &Coderivation, c: &Rat) -> Result<()> {
        self.check_compatible(other)?;
        for (&n, op) in &other.components {
            if n > self.max_arity {
                continue;
            }
            match self.components.get_mut(&n) {
                Some(mine) => mine.add_scaled_op(op, c)?,
                None => {
                    self.components.insert(n, op.scaled(c));
                }
            }
        }
        self.components.retain(|_, op| !op.is_zero());
        Ok(())
    }

    fn check_compatible(&self, other: &Coderivation) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(Error::Incompatible("coderivation flavor mismatch".into()));
        }
        if self.alpha != other.alpha {
            return Err(Error::Incompatible("coderivations have different alpha".into()));
        }
        Ok(())
    }
}

/// The unique co-Leibniz lift of ϱ : V^{⊗n} → V evaluated on one word:
///
///   ϱ̃(v_1 ⊗ … ⊗ v_k) = Σᵢ (-1)^{|ϱ|(|v_1|+…+|v_i|)}
///       α^{n-1}v_1 ⊗ … ⊗ ϱ(v_{i+1} … v_{i+n}) ⊗ … ⊗ α^{n-1}v_k,
///
/// zero when k < n.
pub fn lift_tensor_apply(
    rho: &MultiOp,
    alpha: &MultiOp,
    inputs: &[BasisElement],
) -> Result<SparseTensor> {
    let n = rho.arity();
    let k = inputs.len();
    let mut out = SparseTensor::zero();
    if k < n {
        return Ok(out);
    }
    let ap = alpha.power((n - 1) as u32)?;
    for i in 0..=(k - n) {
        let prefix_deg: i64 = inputs[..i].iter().map(|e| e.degree).sum();
        let sign = sign_pow(rho.degree() * prefix_deg);
        let mid = rho.apply(&inputs[i..i + n])?;
        let mut slots: Vec<SparseVec> = Vec::with_capacity(k - n + 1);
        for e in &inputs[..i] {
            slots.push(ap.apply(&[*e])?);
        }
        slots.push(mid);
        for e in &inputs[i + n..] {
            slots.push(ap.apply(&[*e])?);
        }
        distribute_word(&slots, &sign, &mut out);
    }
    Ok(out)
}

/// Lemma-7.7 lift of a symmetric ϱ : S^n V → V on one sorted word:
/// Σ_{σ∈Sh(n,k-n)} ε(σ) ϱ(v_σ(1) … v_σ(n)) ∧ α^{n-1}v_σ(n+1) ∧ …
/// Output words are kept on sorted keys. Zero when k < n.
pub fn lift_symmetric_apply(
    rho: &MultiOp,
    alpha: &MultiOp,
    inputs: &[BasisElement],
) -> Result<SparseTensor> {
    let n = rho.arity();
    let k = inputs.len();
    let mut out = SparseTensor::zero();
    if k < n {
        return Ok(out);
    }
    let degrees: Vec<i64> = inputs.iter().map(|e| e.degree).collect();
    let ap = alpha.power((n - 1) as u32)?;
    for sh in unshuffles(n, k - n) {
        let eps = koszul_sign(&sh, &degrees);
        let head: Vec<BasisElement> = sh[..n].iter().map(|&i| inputs[i]).collect();
        let mid = apply_sym(rho, &head)?;
        let mut slots: Vec<SparseVec> = Vec::with_capacity(k - n + 1);
        slots.push(mid);
        for &i in &sh[n..] {
            slots.push(ap.apply(&[inputs[i]])?);
        }
        distribute_sym_word(&slots, &eps, &mut out);
    }
    Ok(out)
}

/// Expand a word of sparse-vector slots into basis words.
fn distribute_word(slots: &[SparseVec], scale: &Rat, out: &mut SparseTensor) {
    let mut stack: Vec<(Vec<BasisElement>, Rat)> = alloc::vec![(Vec::new(), scale.clone())];
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
    for (word, c) in stack {
        out.add(word, c);
    }
}

/// As [`distribute_word`], then sort each word to its canonical symmetric key.
fn distribute_sym_word(slots: &[SparseVec], scale: &Rat, out: &mut SparseTensor) {
    let mut raw = SparseTensor::zero();
    distribute_word(slots, scale, &mut raw);
    for (word, c) in raw.iter() {
        if let Some((sorted, sign)) = sort_with_koszul_sign(word) {
            out.add(sorted, c * sign);
        }
    }
}

/// Check Δ∘ϱ̃ = (ϱ̃ ⊗ α^{n-1} + α^{n-1} ⊗ ϱ̃)∘Δ for every component of a
/// tensor-flavor coderivation, on all basis words of length ≤ k_max (Δ is
/// deconcatenation into two nonempty pieces).
pub fn coleibniz_check(d: &Coderivation, k_max: usize, budget: &mut Budget) -> Result<bool> {
    if d.flavor != Flavor::Tensor {
        return Err(Error::Unsupported("coleibniz_check applies to tensor flavor".into()));
    }
    for (n, rho) in d.components() {
        if !coleibniz_check_component(rho, d.alpha(), n, k_max, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same check for a single lift ϱ̃ (used directly on raw ops in tests).
pub fn coleibniz_check_component(
    rho: &MultiOp,
    alpha: &MultiOp,
    n: usize,
    k_max: usize,
    budget: &mut Budget,
) -> Result<bool> {
    let table = materialize_lift_tensor(rho, alpha, k_max)?;
    coleibniz_check_table(&table, alpha, n, rho.degree(), k_max, budget)
}

/// A lift ϱ̃ stored explicitly on basis words (up to some length); exists so
/// candidate lifts can be checked or perturbed independently of the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftTable {
    pub entries: BTreeMap<Vec<BasisElement>, SparseTensor>,
}

impl LiftTable {
    pub fn value(&self, word: &[BasisElement]) -> SparseTensor {
        self.entries.get(word).cloned().unwrap_or_default()
    }
}

pub fn materialize_lift_tensor(
    rho: &MultiOp,
    alpha: &MultiOp,
    k_max: usize,
) -> Result<LiftTable> {
    if !rho.commutes_with(alpha, &mut Budget::unlimited())? {
        return Err(Error::InvalidInput("lift of a non-alpha-commuting map".into()));
    }
    let space = alpha.source();
    let mut entries = BTreeMap::new();
    for k in 1..=k_max {
        for w in space.tuples(k) {
            let t = lift_tensor_apply(rho, alpha, &w)?;
            if !t.is_zero() {
                entries.insert(w, t);
            }
        }
    }
    Ok(LiftTable { entries })
}

/// Check Δ∘ϱ̃ = (ϱ̃⊗α^{n-1} + α^{n-1}⊗ϱ̃)∘Δ for an explicitly tabulated ϱ̃.
pub fn coleibniz_check_table(
    table: &LiftTable,
    alpha: &MultiOp,
    n: usize,
    rho_degree: i64,
    k_max: usize,
    budget: &mut Budget,
) -> Result<bool> {
    type TwoTensor = BTreeMap<(Vec<BasisElement>, Vec<BasisElement>), Rat>;
    fn add2(m: &mut TwoTensor, k: (Vec<BasisElement>, Vec<BasisElement>), c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = m.entry(k).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            m.retain(|_, v| !v.is_zero());
        }
    }

    let space = alpha.source();
    let ap = alpha.power((n - 1) as u32)?;
    for k in 2..=k_max {
        for w in space.tuples(k) {
            budget.charge(1)?;
            let mut lhs = TwoTensor::new();
            for (word, c) in table.value(&w).iter() {
                for j in 1..word.len() {
                    add2(&mut lhs, (word[..j].to_vec(), word[j..].to_vec()), c.clone());
                }
            }
            let mut rhs = TwoTensor::new();
            for j in 1..k {
                let (a, b) = w.split_at(j);
                // ϱ̃ ⊗ α^{n-1} on the split a ⊗ b.
                let la = table.value(a);
                let mut bw = SparseTensor::zero();
                let b_slots: Vec<SparseVec> =
                    b.iter().map(|e| ap.apply(&[*e])).collect::<Result<_>>()?;
                distribute_word(&b_slots, &rat(1), &mut bw);
                for (wa, ca) in la.iter() {
                    for (wb, cb) in bw.iter() {
                        add2(&mut rhs, (wa.clone(), wb.clone()), ca * cb);
                    }
                }
                // α^{n-1} ⊗ ϱ̃, with ϱ̃ crossing the first factor.
                let deg_a: i64 = a.iter().map(|e| e.degree).sum();
                let sign = sign_pow(rho_degree * deg_a);
                let lb = table.value(b);
                let mut aw = SparseTensor::zero();
                let a_slots: Vec<SparseVec> =
                    a.iter().map(|e| ap.apply(&[*e])).collect::<Result<_>>()?;
                distribute_word(&a_slots, &sign, &mut aw);
                for (wa, ca) in aw.iter() {
                    for (wb, cb) in lb.iter() {
                        add2(&mut rhs, (wa.clone(), wb.clone()), ca * cb);
                    }
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Circle product D ∘ E: arity-a component = Σ_{n+m-1=a} corestriction of
/// ϱ̃_n ∘ σ̃_m. Arities above the (common) truncation bound are dropped.
pub fn circle(d: &Coderivation, e: &Coderivation) -> Result<Coderivation> {
    d.check_compatible(e)?;
    let max_arity = d.max_arity.min(e.max_arity);
    let mut out =
        Coderivation::new(d.flavor, d.degree + e.degree, d.alpha.clone(), max_arity)?;
    for (n, rho) in d.components() {
        for (m, sigma) in e.components() {
            let a = n + m - 1;
            if a > max_arity {
                continue;
            }
            let comp = match d.flavor {
                Flavor::Tensor => circle_component_tensor(rho, sigma, &d.alpha, e.degree)?,
                Flavor::Symmetric => circle_component_symmetric(rho, sigma, &d.alpha)?,
            };
            let mut acc = out
                .components
                .remove(&a)
                .unwrap_or_else(|| MultiOp::endo(a, out.degree, d.space().clone()));
            acc.add_scaled_op(&comp, &rat(1))?;
            if !acc.is_zero() {
                out.components.insert(a, acc);
            }
        }
    }
    Ok(out)
}

fn circle_component_tensor(
    rho: &MultiOp,
    sigma: &MultiOp,
    alpha: &MultiOp,
    sigma_degree: i64,
) -> Result<MultiOp> {
    // (ϱ_n ∘ σ_m)(v_1,…,v_{n+m-1}) =
    //   Σᵢ (-1)^{(|v_1|+…+|v_{i-1}|)·|σ|} ϱ_n(α^{m-1}v_1, …, σ_m(vᵢ…), …).
    let n = rho.arity();
    let m = sigma.arity();
    let mut out = MultiOp::endo(n + m - 1, rho.degree() + sigma_degree, rho.source().clone());
    for i in 0..n {
        let term = rho.plug(sigma, i, alpha, (m - 1) as u32, sigma_degree)?;
        out.add_scaled_op(&term, &rat(1))?;
    }
    Ok(out)
}

fn circle_component_symmetric(
    rho: &MultiOp,
    sigma: &MultiOp,
    alpha: &MultiOp,
) -> Result<MultiOp> {
    // Corestriction of ϱ̃∘σ̃ on S^{n+m-1}:
    //   Σ_{σ∈Sh(m,n-1)} ε(σ) ϱ(σ_m(v_σ(1)…v_σ(m)) ∧ α^{m-1}v_σ(m+1) ∧ …).
    let n = rho.arity();
    let m = sigma.arity();
    let a = n + m - 1;
    let space = rho.source().clone();
    let ap = alpha.power((m - 1) as u32)?;
    let mut out = MultiOp::endo(a, rho.degree() + sigma.degree(), space.clone());
    for w in space.sorted_tuples(a) {
        if sort_with_koszul_sign(&w).is_none() {
            continue;
        }
        let degrees: Vec<i64> = w.iter().map(|e| e.degree).collect();
        let mut val = SparseVec::zero();
        for sh in unshuffles(m, n - 1) {
            let eps = koszul_sign(&sh, &degrees);
            let head: Vec<BasisElement> = sh[..m].iter().map(|&i| w[i]).collect();
            let mid = apply_sym(sigma, &head)?;
            let mut slots: Vec<SparseVec> = Vec::with_capacity(n);
            slots.push(mid);
            for &i in &sh[m..] {
                slots.push(ap.apply(&[w[i]])?);
            }
            let mut term = apply_sym_multi(rho, &slots)?;
            term.scale(&eps);
            val.add_scaled(&term, &rat(1));
        }
        out.add_vec(&w, &val, &rat(1))?;
    }
    Ok(out)
}

/// Graded commutator [D, E] = D∘E − (-1)^{pq} E∘D.
pub fn bracket(d: &Coderivation, e: &Coderivation) -> Result<Coderivation> {
    let mut out = circle(d, e)?;
    let back = circle(e, d)?;
    out.add_scaled(&back, &-sign_pow(d.degree * e.degree))?;
    Ok(out)
}

/// One nonzero value of D∘D.
#[derive(Debug, Clone)]
pub struct SquareFailure {
    pub arity: usize,
    pub inputs: Vec<BasisElement>,
    pub residual: SparseVec,
}

#[derive(Debug, Clone, Default)]
pub struct SquareReport {
    pub failures: Vec<SquareFailure>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluate every component of D∘D on basis words up to arity `n_max` and
/// report the nonzero values. D must have degree -1.
pub fn square_is_zero(d: &Coderivation, n_max: usize, budget: &mut Budget) -> Result<SquareReport> {
    if d.degree != -1 {
        return Err(Error::DegreeMismatch { expected: -1, got: d.degree });
    }
    let sq = circle(d, d)?;
    let mut report = SquareReport::default();
    for (a, comp) in sq.components() {
        if a > n_max {
            continue;
        }
        let words = match d.flavor {
            Flavor::Tensor => d.space().tuples(a),
            Flavor::Symmetric => d.space().sorted_tuples(a),
        };
        for w in words {
            budget.charge(1)?;
            let v = comp.apply(&w)?;
            if !v.is_zero() {
                report.failures.push(SquareFailure { arity: a, inputs: w, residual: v });
            }
        }
    }
    Ok(report)
}

/// Symmetrization 𝐃 of a tensor coderivation D: the arity-n component is
/// π∘D∘Q, i.e. 𝐃_n(v_1∧…∧v_n) = Σ_{σ∈S_n} ε(σ) ϱ_n(v_σ(1),…,v_σ(n)).
pub fn symmetrize_coderivation(d: &Coderivation) -> Result<Coderivation> {
    if d.flavor != Flavor::Tensor {
        return Err(Error::Unsupported("symmetrize_coderivation expects tensor flavor".into()));
    }
    let mut out = Coderivation::new(Flavor::Symmetric, d.degree, d.alpha.clone(), d.max_arity)?;
    for (n, rho) in d.components() {
        let mut comp = MultiOp::endo(n, d.degree, d.space().clone());
        for w in d.space().sorted_tuples(n) {
            if sort_with_koszul_sign(&w).is_none() {
                continue;
            }
            let degrees: Vec<i64> = w.iter().map(|e| e.degree).collect();
            let mut val = SparseVec::zero();
            for perm in permutations(n) {
                let eps = koszul_sign(&perm, &degrees);
                let tuple: Vec<BasisElement> = perm.iter().map(|&i| w[i]).collect();
                val.add_scaled(&rho.apply(&tuple)?, &eps);
            }
            comp.add_vec(&w, &val, &rat(1))?;
        }
        out.set_component(comp)?;
    }
    Ok(out)
}

/// Check Q∘𝐃 = D∘Q on S^k V for k ≤ k_max, where Q(v_1∧…∧v_k) =
/// Σ_{σ∈S_k} ε(σ) v_σ(1)⊗…⊗v_σ(k).
pub fn symmetrize_compatible(
    d: &Coderivation,
    dsym: &Coderivation,
    k_max: usize,
    budget: &mut Budget,
) -> Result<bool> {
    if d.flavor != Flavor::Tensor || dsym.flavor != Flavor::Symmetric {
        return Err(Error::Incompatible("expected (tensor, symmetric) pair".into()));
    }
    let space = d.space();
    for k in 1..=k_max {
        for w in space.sorted_tuples(k) {
            if sort_with_koszul_sign(&w).is_none() {
                continue;
            }
            budget.charge(1)?;
            let degrees: Vec<i64> = w.iter().map(|e| e.degree).collect();
            // D(Q(w)) in TV.
            let mut lhs_t = SparseTensor::zero();
            for perm in permutations(k) {
                let eps = koszul_sign(&perm, &degrees);
                let word: Vec<BasisElement> = perm.iter().map(|&i| w[i]).collect();
                for (_, rho) in d.components() {
                    lhs_t.add_scaled(&lift_tensor_apply(rho, d.alpha(), &word)?, &eps);
                }
            }
            // Q(𝐃(w)) in TV.
            let mut rhs_t = SparseTensor::zero();
            for (_, rho) in dsym.components() {
                for (word, c) in lift_symmetric_apply(rho, dsym.alpha(), &w)?.iter() {
                    let degs: Vec<i64> = word.iter().map(|e| e.degree).collect();
                    for perm in permutations(word.len()) {
                        let eps = koszul_sign(&perm, &degs);
                        let t: Vec<BasisElement> = perm.iter().map(|&i| word[i]).collect();
                        rhs_t.add(t, c * eps);
                    }
                }
            }
            if lhs_t != rhs_t {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
