//! Graded vector spaces, basis bookkeeping, permutations and Koszul signs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{sign_pow, Rat};

/// Finite-dimensional Z-graded vector space, described by the dimension of
/// each homogeneous component. Degrees with dimension zero are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
}

impl GradedSpace {
    pub fn new(dims: BTreeMap<i64, usize>) -> Self {
        let dims = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        GradedSpace { dims }
    }

    /// Ungraded space: everything in degree 0.
    pub fn concentrated(dim: usize) -> Self {
        let mut dims = BTreeMap::new();
        if dim > 0 {
            dims.insert(0, dim);
        }
        GradedSpace { dims }
    }

    pub fn from_pairs(pairs: &[(i64, usize)]) -> Self {
        Self::new(pairs.iter().copied().collect())
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn contains(&self, e: &BasisElement) -> bool {
        e.index < self.dim(e.degree)
    }

    /// All basis elements, ordered by (degree, index).
    pub fn basis(&self) -> Vec<BasisElement> {
        self.dims
            .iter()
            .flat_map(|(&degree, &d)| (0..d).map(move |index| BasisElement { degree, index }))
            .collect()
    }

    /// Basis of a single homogeneous component.
    pub fn basis_of_degree(&self, degree: i64) -> Vec<BasisElement> {
        (0..self.dim(degree)).map(|index| BasisElement { degree, index }).collect()
    }

    /// Position of `e` in the `basis()` ordering.
    pub fn flat_index(&self, e: &BasisElement) -> Result<usize> {
        if !self.contains(e) {
            return Err(Error::InvalidInput(alloc::format!(
                "basis element ({}, {}) outside space",
                e.degree,
                e.index
            )));
        }
        let mut offset = 0;
        for (&deg, &d) in &self.dims {
            if deg == e.degree {
                return Ok(offset + e.index);
            }
            offset += d;
        }
        unreachable!()
    }

    /// Degree shift: `shifted(k)` has `dim(d) = self.dim(d - k)`, i.e. a basis
    /// element of degree d moves to degree d + k.
    pub fn shifted(&self, k: i64) -> GradedSpace {
        GradedSpace { dims: self.dims.iter().map(|(&d, &n)| (d + k, n)).collect() }
    }

    /// All weakly increasing length-`n` tuples (canonical keys for symmetric
    /// words).
    pub fn sorted_tuples(&self, n: usize) -> Vec<Vec<BasisElement>> {
        let b = self.basis();
        let mut out: Vec<Vec<BasisElement>> = alloc::vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    let lo = t.last().copied();
                    b.iter()
                        .filter(move |e| lo.is_none_or(|l| **e >= l))
                        .map(move |e| {
                            let mut t2 = t.clone();
                            t2.push(*e);
                            t2
                        })
                })
                .collect();
        }
        out
    }

    /// All length-`n` tuples of basis elements, lexicographic in the
    /// `basis()` order.
    pub fn tuples(&self, n: usize) -> Vec<Vec<BasisElement>> {
        let b = self.basis();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    b.iter().map(move |e| {
                        let mut t2 = t.clone();
                        t2.push(*e);
                        t2
                    })
                })
                .collect();
        }
        out
    }
}

/// A basis element of a graded space: the `index`-th vector of the
/// homogeneous component of the given `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub degree: i64,
    pub index: usize,
}

impl BasisElement {
    pub fn new(degree: i64, index: usize) -> Self {
        BasisElement { degree, index }
    }
}

pub fn total_degree(elems: &[BasisElement]) -> i64 {
    elems.iter().map(|e| e.degree).sum()
}

/// The Koszul sign of sorting `elems` into weakly increasing order together
/// with the sorted tuple: each transposition of adjacent elements of degrees
/// p, q contributes (-1)^{pq}. Returns `None` when two equal elements of odd
/// degree collide (the symmetric-word case where the product vanishes).
pub fn sort_with_koszul_sign(
    elems: &[BasisElement],
) -> Option<(Vec<BasisElement>, Rat)> {
    let mut v = elems.to_vec();
    let mut sign = Rat::from_integer(1.into());
    // Insertion sort; n is always small.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            sign *= sign_pow(v[j - 1].degree * v[j].degree);
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && w[0].degree % 2 != 0 {
            return None;
        }
    }
    Some((v, sign))
}

/// Like [`sort_with_koszul_sign`] but with the antisymmetric sign
/// chi(sigma) = sgn(sigma) * koszul(sigma). Returns `None` when two equal
/// elements of even degree collide (the exterior-word case).
pub fn sort_with_chi_sign(elems: &[BasisElement]) -> Option<(Vec<BasisElement>, Rat)> {
    let mut v = elems.to_vec();
    let mut sign = Rat::from_integer(1.into());
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            sign *= sign_pow(v[j - 1].degree * v[j].degree + 1);
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && w[0].degree % 2 == 0 {
            return None;
        }
    }
    Some((v, sign))
}

/// Koszul sign of applying the permutation `perm` (in one-line notation:
/// output position `i` receives input `perm[i]`, 0-indexed) to the tuple of
/// graded elements `degrees`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Rat {
    permutation_sign(perm, degrees, false)
}

/// chi(sigma) = sgn(sigma) * Koszul sign.
pub fn chi_sign(perm: &[usize], degrees: &[i64]) -> Rat {
    permutation_sign(perm, degrees, true)
}

fn permutation_sign(perm: &[usize], degrees: &[i64], with_sgn: bool) -> Rat {
    debug_assert_eq!(perm.len(), degrees.len());
    // Count inversions; each inversion (i < j, perm[i] > perm[j]) swaps the
    // original elements perm[j] past perm[i].
    let mut exp = 0i64;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                exp += degrees[perm[i]] * degrees[perm[j]];
                if with_sgn {
                    exp += 1;
                }
            }
        }
    }
    sign_pow(exp)
}

/// All (p, q)-unshuffles of {0, .., p+q-1}: permutations increasing on the
/// first p slots and on the last q slots, in lexicographic order of the
/// first block.
pub fn unshuffles(p: usize, q: usize) -> Vec<Vec<usize>> {
    let n = p + q;
    let mut out = Vec::new();
    let mut pick = (0..p).collect::<Vec<usize>>();
    loop {
        let mut perm = pick.clone();
        perm.extend((0..n).filter(|i| !pick.contains(i)));
        out.push(perm);
        // Next p-subset of {0..n-1} in lexicographic order.
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] != i + n - p {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        pick[i] += 1;
        for j in i + 1..p {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// All compositions of n (ordered tuples of positive integers summing to n),
/// lexicographic.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// All permutations of {0, .., n-1} in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = (0..n).collect::<Vec<usize>>();
    permute_rec(&mut cur, 0, &mut out);
    out
}

fn permute_rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    let mut rest: Vec<usize> = cur[k..].to_vec();
    rest.sort_unstable();
    for &x in &rest {
        let pos = cur[k..].iter().position(|&y| y == x).unwrap() + k;
        cur[k..=pos].rotate_right(1);
        permute_rec(cur, k + 1, out);
        cur[k..=pos].rotate_left(1);
    }
}
