//! Shared example structures used by tests and the structure generator:
//! a truncated polynomial algebra, its scaling twist, a two-degree DG
//! algebra with a deformation retract onto its homology, and a DG algebra
//! with nontrivial multi-dimensional homology.

use alloc::vec::Vec;

use crate::graded::{BasisElement, GradedSpace};
use crate::hainf::HAInfStructure;
use crate::linalg::Matrix;
use crate::multiop::MultiOp;
use crate::rational::{rat, Rat};

/// ℚ[x]/(x³) concentrated in degree 0; basis 1, x, x².
pub fn poly_space() -> GradedSpace {
    GradedSpace::from_pairs(&[(0, 3)])
}

/// The associative product on ℚ[x]/(x³), identity structure map.
pub fn assoc_poly(max_arity: usize) -> HAInfStructure {
    let s = poly_space();
    let mut st = HAInfStructure::new(MultiOp::identity(&s), max_arity).unwrap();
    let mut mu = MultiOp::endo(2, 0, s);
    for i in 0..3usize {
        for j in 0..3usize {
            if i + j <= 2 {
                mu.add_term(
                    &[BasisElement::new(0, i), BasisElement::new(0, j)],
                    BasisElement::new(0, i + j),
                    rat(1),
                )
                .unwrap();
            }
        }
    }
    st.set_op(mu).unwrap();
    st
}

/// The scaling endomorphism 1 ↦ 1, x ↦ q·x, x² ↦ q²·x² of ℚ[x]/(x³).
pub fn poly_alpha(q: i64) -> MultiOp {
    let s = poly_space();
    let mut a = MultiOp::endo(1, 0, s);
    let mut pw = rat(1);
    for i in 0..3usize {
        a.add_term(&[BasisElement::new(0, i)], BasisElement::new(0, i), pw.clone()).unwrap();
        pw *= rat(q);
    }
    a
}

/// Twist of [`assoc_poly`] along [`poly_alpha`]: product α∘μ, structure map α.
pub fn yau_poly(q: i64, max_arity: usize) -> HAInfStructure {
    crate::hainf::yau_twist(&assoc_poly(max_arity), &poly_alpha(q)).unwrap()
}

/// Two-degree space: degree 0 = span{1, x}, degree 1 = span{y}.
pub fn dg_space() -> GradedSpace {
    GradedSpace::from_pairs(&[(0, 2), (1, 1)])
}

pub fn dg_unit() -> BasisElement {
    BasisElement::new(0, 0)
}

pub fn dg_x() -> BasisElement {
    BasisElement::new(0, 1)
}

pub fn dg_y() -> BasisElement {
    BasisElement::new(1, 0)
}

/// DG associative algebra on [`dg_space`]: unital, x·x = x·y = y·x = y·y = 0,
/// differential d(y) = x; identity structure map.
pub fn dg_assoc(max_arity: usize) -> HAInfStructure {
    let s = dg_space();
    let (one, x, y) = (dg_unit(), dg_x(), dg_y());
    let mut st = HAInfStructure::new(MultiOp::identity(&s), max_arity).unwrap();
    let mut d = MultiOp::endo(1, -1, s.clone());
    d.add_term(&[y], x, rat(1)).unwrap();
    st.set_op(d).unwrap();
    let mut mu = MultiOp::endo(2, 0, s);
    for e in [one, x, y] {
        mu.add_term(&[one, e], e, rat(1)).unwrap();
        if e != one {
            mu.add_term(&[e, one], e, rat(1)).unwrap();
        }
    }
    st.set_op(mu).unwrap();
    st
}

/// Scaling map on [`dg_space`]: 1 ↦ 1, x ↦ q·x, y ↦ q·y.
pub fn dg_alpha(q: i64) -> MultiOp {
    let s = dg_space();
    let mut a = MultiOp::endo(1, 0, s);
    a.add_term(&[dg_unit()], dg_unit(), rat(1)).unwrap();
    a.add_term(&[dg_x()], dg_x(), rat(q)).unwrap();
    a.add_term(&[dg_y()], dg_y(), rat(q)).unwrap();
    a
}

/// Twist of [`dg_assoc`] along [`dg_alpha`].
pub fn dg_twisted(q: i64, max_arity: usize) -> HAInfStructure {
    crate::hainf::yau_twist(&dg_assoc(max_arity), &dg_alpha(q)).unwrap()
}

/// Homology of the [`dg_assoc`] complex: one class in degree 0.
pub fn dg_h_space() -> GradedSpace {
    GradedSpace::from_pairs(&[(0, 1)])
}

/// Inclusion H → A of [`dg_h_space`] into [`dg_space`], class ↦ 1.
pub fn dg_inclusion() -> MultiOp {
    let mut i = MultiOp::new(1, 0, dg_h_space(), dg_space());
    i.add_term(&[BasisElement::new(0, 0)], dg_unit(), rat(1)).unwrap();
    i
}

/// Projection A → H: 1 ↦ class, x ↦ 0, y ↦ 0.
pub fn dg_projection() -> MultiOp {
    let mut p = MultiOp::new(1, 0, dg_space(), dg_h_space());
    p.add_term(&[dg_unit()], BasisElement::new(0, 0), rat(1)).unwrap();
    p
}

/// Chain homotopy h : A → A of degree +1 with 1 − i∘p = d∘h + h∘d:
/// h(x) = y, h(1) = h(y) = 0.
pub fn dg_homotopy() -> MultiOp {
    let mut h = MultiOp::endo(1, 1, dg_space());
    h.add_term(&[dg_x()], dg_y(), rat(1)).unwrap();
    h
}

/// DG associative algebra with two-dimensional homology in degree 0:
/// degree 0 = span{a, b, c} with unit a, b and c idempotent,
/// b·c = c·b = c·c = c; degree 1 = span{y} with d(y) = a − b,
/// a·y = y·a = y and all other products with y zero.
pub fn dg_big(max_arity: usize) -> HAInfStructure {
    let space = GradedSpace::from_pairs(&[(0, 3), (1, 1)]);
    let a = BasisElement::new(0, 0);
    let b = BasisElement::new(0, 1);
    let c = BasisElement::new(0, 2);
    let y = BasisElement::new(1, 0);
    let mut st = HAInfStructure::new(MultiOp::identity(&space), max_arity).unwrap();
    let mut d = MultiOp::endo(1, -1, space.clone());
    d.add_term(&[y], a, rat(1)).unwrap();
    d.add_term(&[y], b, rat(-1)).unwrap();
    st.set_op(d).unwrap();
    let mut mu = MultiOp::endo(2, 0, space);
    let table: &[(BasisElement, BasisElement, BasisElement)] = &[
        (a, a, a),
        (a, b, b),
        (b, a, b),
        (a, c, c),
        (c, a, c),
        (b, b, b),
        (b, c, c),
        (c, b, c),
        (c, c, c),
        (a, y, y),
        (y, a, y),
    ];
    for &(u, v, w) in table {
        mu.add_term(&[u, v], w, rat(1)).unwrap();
    }
    st.set_op(mu).unwrap();
    st
}

/// Coordinates of a sparse vector within one degree of a space.
pub fn coords_in_degree(
    v: &crate::multiop::SparseVec,
    space: &GradedSpace,
    degree: i64,
) -> Vec<Rat> {
    let mut out = alloc::vec![rat(0); space.dim(degree)];
    for (e, c) in v.iter() {
        if e.degree == degree {
            out[e.index] = c.clone();
        }
    }
    out
}

/// ℚ[x]/(x²) as matrices, with product and twist scaled along x ↦ q·x.
pub fn dual_algebra(q: i64) -> crate::classical::ClassicalAlgebra {
    let mut mu = Matrix::zero(2, 4);
    mu.set(0, 0, rat(1));
    mu.set(1, 1, rat(q));
    mu.set(1, 2, rat(q));
    let mut alpha = Matrix::identity(2);
    alpha.set(1, 1, rat(q));
    crate::classical::ClassicalAlgebra::new(2, mu, alpha).unwrap()
}

/// Two-term structure with d = id on [`dual_algebra`] and μ₃ = 0.
pub fn strict_twoterm(q: i64) -> crate::twoterm::TwoTermHA {
    let alg = dual_algebra(q);
    crate::twoterm::TwoTermHA::new(
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

/// Skeletal structure on [`dual_algebra`] acting on itself; the ternary map
/// is the coboundary of the first 2-cochain that has a nonzero one, so the
/// structure verifies and classifies as a trivial cohomology class.
pub fn skeletal_twoterm(q: i64) -> crate::twoterm::TwoTermHA {
    let alg = dual_algebra(q);
    let bim = crate::classical::ClassicalBimodule::adjoint(&alg);
    let mu3 = crate::classical::cochain_basis(&alg, &bim, 2)
        .iter()
        .map(|sigma| crate::classical::delta(&alg, &bim, 2, sigma))
        .find(|ds| !ds.is_zero())
        .expect("the dual-number adjoint complex has a nonzero coboundary");
    crate::twoterm::TwoTermHA::new(
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

/// Contraction of [`dg_space`] onto its one-dimensional homology, with the
/// homotopy [`dg_homotopy`] and the scaling twist [`dg_alpha`].
pub fn dg_contraction(q: i64) -> crate::transfer::Contraction {
    let d = dg_assoc(2).op(1).cloned().expect("the fixture has a differential");
    let d_h = MultiOp::endo(1, -1, dg_h_space());
    crate::transfer::Contraction::new(
        d,
        d_h,
        dg_alpha(q),
        dg_projection(),
        dg_inclusion(),
        dg_homotopy(),
    )
    .unwrap()
}
