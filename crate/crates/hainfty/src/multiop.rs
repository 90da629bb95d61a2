//! Sparse multilinear operations on graded spaces.
//!
//! A [`MultiOp`] is a k-ary operation V^{⊗k} → W of fixed homogeneous
//! degree, stored as a sparse table on basis tuples. Everything downstream
//! (coderivations, homotopy identities, cohomology) is built from these.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{total_degree, BasisElement, GradedSpace};
use crate::rational::{sign_pow, Rat};

/// Sparse vector: finite linear combination of basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    terms: BTreeMap<BasisElement, Rat>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec::default()
    }

    pub fn single(e: BasisElement, c: Rat) -> Self {
        let mut v = SparseVec::zero();
        v.add(e, c);
        v
    }

    pub fn add(&mut self, e: BasisElement, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, other: &SparseVec, c: &Rat) {
        for (e, x) in &other.terms {
            self.add(*e, x * c);
        }
    }

    pub fn scale(&mut self, c: &Rat) {
        if c.is_zero() {
            self.terms.clear();
        } else {
            for x in self.terms.values_mut() {
                *x *= c;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisElement, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &BasisElement) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FromIterator<(BasisElement, Rat)> for SparseVec {
    fn from_iter<I: IntoIterator<Item = (BasisElement, Rat)>>(iter: I) -> Self {
        let mut v = SparseVec::zero();
        for (e, c) in iter {
            v.add(e, c);
        }
        v
    }
}

/// Evaluation budget: verification loops charge one unit per basis tuple
/// evaluated and abort once the limit is hit.
#[derive(Debug, Clone)]
pub struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 1_000_000;

    pub fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    pub fn unlimited() -> Self {
        Budget { used: 0, limit: u64::MAX }
    }

    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::BudgetExceeded { needed: self.used, budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Budget::DEFAULT_LIMIT)
    }
}

/// Homogeneous k-ary operation `source`^{⊗k} → `target` of fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiOp {
    arity: usize,
    degree: i64,
    source: GradedSpace,
    target: GradedSpace,
    entries: BTreeMap<Vec<BasisElement>, SparseVec>,
}

impl MultiOp {
    pub fn new(arity: usize, degree: i64, source: GradedSpace, target: GradedSpace) -> Self {
        assert!(arity >= 1, "operations have arity >= 1");
        MultiOp { arity, degree, source, target, entries: BTreeMap::new() }
    }

    /// Endomorphism-style op: source and target coincide.
    pub fn endo(arity: usize, degree: i64, space: GradedSpace) -> Self {
        MultiOp::new(arity, degree, space.clone(), space)
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut op = MultiOp::endo(1, 0, space.clone());
        for e in space.basis() {
            op.add_term(&[e], e, Rat::from_integer(1.into())).unwrap();
        }
        op
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<BasisElement>, &SparseVec)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(SparseVec::is_zero)
    }

    /// Add `c * out` to the value on the basis tuple `inputs`, checking arity,
    /// membership and degree homogeneity.
    pub fn add_term(&mut self, inputs: &[BasisElement], out: BasisElement, c: Rat) -> Result<()> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        for e in inputs {
            if !self.source.contains(e) {
                return Err(Error::InvalidInput(format!(
                    "input ({}, {}) outside source space",
                    e.degree, e.index
                )));
            }
        }
        if !self.target.contains(&out) {
            return Err(Error::InvalidInput(format!(
                "output ({}, {}) outside target space",
                out.degree, out.index
            )));
        }
        let expected = total_degree(inputs) + self.degree;
        if out.degree != expected {
            return Err(Error::DegreeMismatch { expected, got: out.degree });
        }
        if c.is_zero() {
            return Ok(());
        }
        let v = self.entries.entry(inputs.to_vec()).or_insert_with(SparseVec::zero);
        v.add(out, c);
        if v.is_zero() {
            self.entries.remove(inputs);
        }
        Ok(())
    }

    pub fn add_vec(&mut self, inputs: &[BasisElement], vec: &SparseVec, c: &Rat) -> Result<()> {
        for (e, x) in vec.iter() {
            self.add_term(inputs, *e, x * c)?;
        }
        Ok(())
    }

    /// Value on a basis tuple; zero when no entry is stored.
    pub fn apply(&self, inputs: &[BasisElement]) -> Result<SparseVec> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        Ok(self.entries.get(inputs).cloned().unwrap_or_default())
    }

    /// Multilinear extension to sparse-vector inputs. Carries no sign: signs
    /// belong to map composition, not to substitution of arguments.
    pub fn apply_multi(&self, inputs: &[SparseVec]) -> Result<SparseVec> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        let mut out = SparseVec::zero();
        let mut stack: Vec<(Vec<BasisElement>, Rat)> =
            alloc::vec![(Vec::new(), Rat::from_integer(1.into()))];
        for slot in inputs {
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
        for (tuple, c) in stack {
            out.add_scaled(&self.apply(&tuple)?, &c);
        }
        Ok(out)
    }

    /// Post-compose with a unary op: `u ∘ self`.
    pub fn post_compose(&self, u: &MultiOp) -> Result<MultiOp> {
        if u.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, got: u.arity });
        }
        if u.source != self.target {
            return Err(Error::Incompatible("post_compose: space mismatch".into()));
        }
        let mut out = MultiOp::new(
            self.arity,
            self.degree + u.degree,
            self.source.clone(),
            u.target.clone(),
        );
        for (inputs, v) in &self.entries {
            for (e, c) in v.iter() {
                out.add_vec(inputs, &u.apply(&[*e])?, c)?;
            }
        }
        Ok(out)
    }

    /// Pre-compose every slot with the same degree-0 unary op:
    /// `self ∘ (u ⊗ ... ⊗ u)`. Degree 0 keeps the Koszul bookkeeping trivial.
    pub fn pre_compose_each(&self, u: &MultiOp) -> Result<MultiOp> {
        if u.arity != 1 || u.degree != 0 {
            return Err(Error::Incompatible("pre_compose_each needs a degree-0 unary op".into()));
        }
        if u.target != self.source {
            return Err(Error::Incompatible("pre_compose_each: space mismatch".into()));
        }
        let mut out =
            MultiOp::new(self.arity, self.degree, u.source.clone(), self.target.clone());
        for tuple in u.source.tuples(self.arity) {
            let images: Vec<SparseVec> =
                tuple.iter().map(|e| u.apply(&[*e])).collect::<Result<_>>()?;
            let v = self.apply_multi(&images)?;
            out.add_vec(&tuple, &v, &Rat::from_integer(1.into()))?;
        }
        Ok(out)
    }

    pub fn add_scaled_op(&mut self, other: &MultiOp, c: &Rat) -> Result<()> {
        if other.arity != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        if other.degree != self.degree || other.source != self.source || other.target != self.target
        {
            return Err(Error::Incompatible("add_scaled_op: op shape mismatch".into()));
        }
        for (inputs, v) in &other.entries {
            self.add_vec(inputs, v, c)?;
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Rat) -> MultiOp {
        let mut out = self.clone();
        if c.is_zero() {
            out.entries.clear();
        } else {
            for v in out.entries.values_mut() {
                v.scale(c);
            }
        }
        out
    }

    /// Does `u ∘ self = self ∘ (u ⊗ ... ⊗ u)` hold on every basis tuple?
    /// `u` must be degree 0 (the structure-map case).
    pub fn commutes_with(&self, u: &MultiOp, budget: &mut Budget) -> Result<bool> {
        if u.arity != 1 || u.degree != 0 {
            return Err(Error::Incompatible("commutes_with needs a degree-0 unary op".into()));
        }
        for tuple in self.source.tuples(self.arity) {
            budget.charge(1)?;
            let lhs = self.apply(&tuple)?.map_through(u)?;
            let images: Vec<SparseVec> =
                tuple.iter().map(|e| u.apply(&[*e])).collect::<Result<_>>()?;
            let rhs = self.apply_multi(&images)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Insert `inner` at slot `pos` (0-indexed) of `self`, applying
    /// `alpha^alpha_power` to every other slot:
    ///
    ///   self(α^p v_1, …, inner(v_pos, …), …, α^p v_n)
    ///
    /// Each basis-tuple value is multiplied by
    /// (-1)^{prefix_sign_weight · (|v_1| + … + |v_pos|)}, the Koszul cost of
    /// moving `inner` past the first `pos` inputs; callers pick the weight
    /// demanded by their sign convention.
    pub fn plug(
        &self,
        inner: &MultiOp,
        pos: usize,
        alpha: &MultiOp,
        alpha_power: u32,
        prefix_sign_weight: i64,
    ) -> Result<MultiOp> {
        if pos >= self.arity {
            return Err(Error::InvalidInput(format!("plug position {pos} out of range")));
        }
        if inner.target != self.source || alpha.source != self.source {
            return Err(Error::Incompatible("plug: space mismatch".into()));
        }
        let n = self.arity + inner.arity - 1;
        let mut out = MultiOp::new(
            n,
            self.degree + inner.degree,
            inner.source.clone(),
            self.target.clone(),
        );
        let ap = alpha.power(alpha_power)?;
        for tuple in inner.source.tuples(n) {
            let prefix_deg: i64 = tuple[..pos].iter().map(|e| e.degree).sum();
            let sign = sign_pow(prefix_sign_weight * prefix_deg);
            let mut slots: Vec<SparseVec> = Vec::with_capacity(self.arity);
            for e in &tuple[..pos] {
                slots.push(ap.apply(&[*e])?);
            }
            slots.push(inner.apply(&tuple[pos..pos + inner.arity])?);
            for e in &tuple[pos + inner.arity..] {
                slots.push(ap.apply(&[*e])?);
            }
            let v = self.apply_multi(&slots)?;
            out.add_vec(&tuple, &v, &sign)?;
        }
        Ok(out)
    }

    /// Compose with a tensor product of blocks:
    /// `self ∘ (b_1 ⊗ … ⊗ b_l)`, where `self` has arity l and the result has
    /// arity Σ arity(b_p). Koszul convention: evaluating `b_1⊗…⊗b_l` on a
    /// tuple costs (-1)^{Σ_p |b_p|·(degree of inputs before block p)}.
    pub fn compose_blocks(&self, blocks: &[&MultiOp]) -> Result<MultiOp> {
        if blocks.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: blocks.len() });
        }
        let src = blocks[0].source().clone();
        for b in blocks {
            if *b.source() != src {
                return Err(Error::Incompatible("compose_blocks: block source mismatch".into()));
            }
            if *b.target() != self.source {
                return Err(Error::Incompatible("compose_blocks: block target mismatch".into()));
            }
        }
        let k: usize = blocks.iter().map(|b| b.arity()).sum();
        let degree: i64 = self.degree + blocks.iter().map(|b| b.degree()).sum::<i64>();
        let mut out = MultiOp::new(k, degree, src.clone(), self.target.clone());
        for tuple in src.tuples(k) {
            let mut exp = 0i64;
            let mut offset = 0usize;
            let mut slots: Vec<SparseVec> = Vec::with_capacity(blocks.len());
            for b in blocks {
                let prefix_deg: i64 = tuple[..offset].iter().map(|e| e.degree).sum();
                exp += b.degree() * prefix_deg;
                slots.push(b.apply(&tuple[offset..offset + b.arity()])?);
                offset += b.arity();
            }
            let v = self.apply_multi(&slots)?;
            out.add_vec(&tuple, &v, &sign_pow(exp))?;
        }
        Ok(out)
    }

    /// `self^n` for a unary op (n = 0 gives the identity).
    pub fn power(&self, n: u32) -> Result<MultiOp> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, got: self.arity });
        }
        if self.source != self.target {
            return Err(Error::Incompatible("power needs an endomorphism".into()));
        }
        let mut acc = MultiOp::identity(&self.source);
        for _ in 0..n {
            acc = acc.post_compose(self)?;
        }
        Ok(acc)
    }
}

impl SparseVec {
    /// Apply a unary op to every term.
    pub fn map_through(&self, u: &MultiOp) -> Result<SparseVec> {
        let mut out = SparseVec::zero();
        for (e, c) in self.iter() {
            out.add_scaled(&u.apply(&[*e])?, c);
        }
        Ok(out)
    }
}

/// Suspension: ϱ_k = (-1)^{k(k-1)/2} s ∘ μ_k ∘ (s^{-1})^{⊗k}, living on the
/// space shifted up by one. A k-ary op of degree d becomes one of degree
/// d + 1 - k.
pub fn shift_up(op: &MultiOp) -> MultiOp {
    shift(op, 1, true)
}

/// Inverse of [`shift_up`]: μ_k = s^{-1} ∘ ϱ_k ∘ s^{⊗k}, no prefactor.
pub fn shift_down(op: &MultiOp) -> MultiOp {
    shift(op, -1, false)
}

fn shift(op: &MultiOp, dir: i64, with_prefactor: bool) -> MultiOp {
    let k = op.arity as i64;
    let mut out = MultiOp::new(
        op.arity,
        op.degree + dir * (1 - k),
        op.source.shifted(dir),
        op.target.shifted(dir),
    );
    let prefactor =
        if with_prefactor { sign_pow(k * (k - 1) / 2) } else { Rat::from_integer(1.into()) };
    for (inputs, v) in &op.entries {
        // (s^{∓1})^{⊗k} applied to the shifted tuple: slot i (1-indexed)
        // crosses k - i shift symbols, contributing (k - i) times its degree.
        let mut exp = 0i64;
        for (i, e) in inputs.iter().enumerate() {
            exp += (k - 1 - i as i64) * (e.degree + dir);
        }
        let sign = &prefactor * sign_pow(exp);
        let shifted_inputs: Vec<BasisElement> = inputs
            .iter()
            .map(|e| BasisElement::new(e.degree + dir, e.index))
            .collect();
        for (e, c) in v.iter() {
            out.add_term(&shifted_inputs, BasisElement::new(e.degree + dir, e.index), c * &sign)
                .expect("shifted entry stays homogeneous");
        }
    }
    out
}
