//! Quadratic forms over Q: diagonalization, local invariants, Witt
//! equivalence, Weil indices, and the forms attached to Lagrangian triples.
//!
//! A [`QuadForm`] stores the Gram matrix of its bilinear form `b`; the
//! quadratic value is `q(v) = b(v, v) / 2`.

use num_traits::{Signed, Zero};

use crate::error::{domain, shape, Result};
use crate::matrix::Matrix;
use crate::rational::{int, Rational};
use crate::scalars::{
    hilbert, hilbert_minus_one, square_class, weil_index, AdditiveCharacter, Mu8, Place, Sign,
    SquareClass,
};
use crate::spgroup::symplectic_gram;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    gram: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    /// Class of the product of the diagonal entries of `b`.
    pub disc: SquareClass,
    /// `∏_{i<j} (a_i, a_j)` over a diagonalization of `b`.
    pub hasse: Sign,
}

impl QuadForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return shape("Gram matrix must be square and symmetric");
        }
        Ok(Self { gram })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            gram: Matrix::zeros(dim, dim),
        }
    }

    /// Diagonal Gram `diag(entries)`.
    pub fn diagonal(entries: &[Rational]) -> Self {
        Self {
            gram: Matrix::diagonal(entries),
        }
    }

    /// The hyperbolic plane, Gram `[[0, 1], [1, 0]]`.
    pub fn hyperbolic_plane() -> Self {
        Self {
            gram: Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        }
    }

    pub fn hyperbolic(planes: usize) -> Self {
        (0..planes).fold(Self::zero(0), |acc, _| acc.orthogonal_sum(&Self::hyperbolic_plane()))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn orthogonal_sum(&self, other: &QuadForm) -> QuadForm {
        QuadForm {
            gram: self.gram.direct_sum(&other.gram),
        }
    }

    pub fn negated(&self) -> QuadForm {
        QuadForm { gram: -&self.gram }
    }

    /// The form in a new basis given by the columns of `basis`.
    pub fn change_basis(&self, basis: &Matrix) -> QuadForm {
        QuadForm {
            gram: &(&basis.transpose() * &self.gram) * basis,
        }
    }

    /// `b(u, v)` for coordinate vectors.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += &u[i] * &self.gram[(i, j)] * &v[j];
            }
        }
        acc
    }

    /// `q(v) = b(v, v) / 2`.
    pub fn value(&self, v: &[Rational]) -> Rational {
        self.bilinear(v, v) / int(2)
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }
}

/// Diagonal entries of `b` on an orthogonal basis of the nondegenerate
/// quotient, by symmetric Gaussian elimination.
pub fn diagonalize(q: &QuadForm) -> Vec<Rational> {
    let mut g = q.gram.clone();
    let n = g.rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        let pivot = active.iter().copied().find(|&i| !g[(i, i)].is_zero());
        let i = match pivot {
            Some(i) => i,
            None => {
                // all remaining diagonal entries vanish: e_i ← e_i + e_j
                let pair = active.iter().find_map(|&i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !g[(i, j)].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                for c in 0..n {
                    let t = g[(j, c)].clone();
                    g[(i, c)] += t;
                }
                for r in 0..n {
                    let t = g[(r, j)].clone();
                    g[(r, i)] += t;
                }
                i
            }
        };
        let d = g[(i, i)].clone();
        active.retain(|&k| k != i);
        for &k in &active {
            if g[(k, i)].is_zero() {
                continue;
            }
            let f = &g[(k, i)] / &d;
            for c in 0..n {
                let t = &g[(i, c)] * &f;
                g[(k, c)] -= t;
            }
            for r in 0..n {
                let t = &g[(r, i)] * &f;
                g[(r, k)] -= t;
            }
        }
        out.push(d);
    }
    out
}

pub fn invariants(q: &QuadForm, place: Place) -> FormInvariants {
    invariants_of_diagonal(&diagonalize(q), place)
}

pub fn invariants_of_diagonal(diag: &[Rational], place: Place) -> FormInvariants {
    let prod: Rational = diag.iter().fold(int(1), |acc, a| acc * a);
    let mut hasse = Sign::Plus;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            hasse = hasse * hilbert(&diag[i], &diag[j], place).expect("nonzero");
        }
    }
    FormInvariants {
        rank: diag.len(),
        disc: square_class(&prod, place).expect("nonzero"),
        hasse,
    }
}

/// Signature `(positive, negative)` of the nondegenerate part.
pub fn signature(q: &QuadForm) -> (usize, usize) {
    let d = diagonalize(q);
    let pos = d.iter().filter(|a| a.is_positive()).count();
    (pos, d.len() - pos)
}

fn is_hyperbolic(diag: &[Rational], place: Place) -> bool {
    let r = diag.len();
    if r % 2 == 1 {
        return false;
    }
    if place == Place::Real {
        let pos = diag.iter().filter(|a| a.is_positive()).count();
        return 2 * pos == r;
    }
    let inv = invariants_of_diagonal(diag, place);
    let m = (r / 2) as u64;
    let disc = square_class(&int(if m % 2 == 0 { 1 } else { -1 }), place).expect("nonzero");
    inv.disc == disc && inv.hasse == hilbert_minus_one(place).pow(m * (m.saturating_sub(1)) / 2)
}

/// True iff `q1 ⊥ (−q2)` is hyperbolic at `place` (radicals ignored).
pub fn witt_equivalent(q1: &QuadForm, q2: &QuadForm, place: Place) -> bool {
    let f = q1.orthogonal_sum(&q2.negated());
    is_hyperbolic(&diagonalize(&f), place)
}

/// Witt index of the nondegenerate part, from rank, discriminant and Hasse
/// invariant (signature at the real place).
pub fn witt_index(q: &QuadForm, place: Place) -> usize {
    let diag = diagonalize(q);
    if place == Place::Real {
        let pos = diag.iter().filter(|a| a.is_positive()).count();
        return pos.min(diag.len() - pos);
    }
    let inv = invariants_of_diagonal(&diag, place);
    let (mut r, mut d, mut eps) = (inv.rank, inv.disc.representative().clone(), inv.hasse);
    let minus_one = int(-1);
    let mut index = 0;
    while local_isotropic(r, &d, eps, place) {
        index += 1;
        r -= 2;
        d = -d;
        eps = eps * hilbert(&minus_one, &d, place).expect("nonzero");
    }
    index
}

fn local_isotropic(rank: usize, d: &Rational, eps: Sign, place: Place) -> bool {
    let minus_one = int(-1);
    match rank {
        0 | 1 => false,
        2 => square_class(&-d, place).expect("nonzero").is_trivial(),
        3 => eps == hilbert(&minus_one, &-d, place).expect("nonzero"),
        4 => {
            !square_class(d, place).expect("nonzero").is_trivial()
                || eps == hilbert_minus_one(place)
        }
        _ => true,
    }
}

/// Dimension of a maximal totally isotropic subspace (radical included).
pub fn max_isotropic_dim(q: &QuadForm, place: Place) -> usize {
    q.dim() - q.rank() + witt_index(q, place)
}

/// Signed discriminant `(−1)^{r(r−1)/2} ∏ q(e_i)` of the quadratic form
/// `q = b/2` on its nondegenerate quotient.
pub fn signed_discriminant(q: &QuadForm, place: Place) -> SquareClass {
    let diag = diagonalize(q);
    let r = diag.len();
    let sign = if (r * r.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
    let prod = diag.iter().fold(int(sign), |acc, a| acc * a / int(2));
    square_class(&prod, place).expect("nonzero")
}

/// `γ(ψ∘q)` for nondegenerate `q`, the product of `γ(ψ_{q(e_i)})` over an
/// orthogonal basis.
pub fn weil_index_form(q: &QuadForm, psi: &AdditiveCharacter) -> Result<Mu8> {
    let diag = diagonalize(q);
    if diag.len() != q.dim() {
        return domain("Weil index of a degenerate form");
    }
    weil_index_of_diagonal(&diag, psi)
}

/// Same as [`weil_index_form`] from a given list of `b`-diagonal entries.
pub fn weil_index_of_diagonal(diag: &[Rational], psi: &AdditiveCharacter) -> Result<Mu8> {
    diag.iter()
        .map(|a| weil_index(&(a / int(2)), psi))
        .product()
}

/// A Lagrangian subspace of the standard symplectic space of dimension 2n,
/// spanned by the columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lagrangian {
    basis: Matrix,
}

impl Lagrangian {
    pub fn new(basis: Matrix) -> Result<Self> {
        let rows = basis.rows();
        if rows % 2 != 0 || basis.cols() * 2 != rows {
            return shape("Lagrangian basis must be 2n x n");
        }
        if basis.rank() != basis.cols() {
            return domain("Lagrangian basis is not linearly independent");
        }
        let j = symplectic_gram(rows / 2);
        if !(&(&basis.transpose() * &j) * &basis).is_zero() {
            return domain("subspace is not isotropic");
        }
        Ok(Self { basis })
    }

    /// `Y = span(y_1, …, y_n)`.
    pub fn y(n: usize) -> Self {
        let mut b = Matrix::zeros(2 * n, n);
        b.set_block(0, 0, &Matrix::identity(n));
        Self { basis: b }
    }

    /// `Y* = span(y*_1, …, y*_n)`.
    pub fn y_star(n: usize) -> Self {
        let mut b = Matrix::zeros(2 * n, n);
        b.set_block(n, 0, &Matrix::identity(n));
        Self { basis: b }
    }

    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `g·L` for a symplectic matrix `g`.
    pub fn translate(&self, g: &Matrix) -> Self {
        Self {
            basis: g * &self.basis,
        }
    }
}

fn pairing(l1: &Lagrangian, l2: &Lagrangian) -> Matrix {
    let j = symplectic_gram(l1.n());
    &(&l1.basis.transpose() * &j) * &l2.basis
}

fn check_ambient(ls: &[&Lagrangian]) -> Result<()> {
    if ls.windows(2).any(|w| w[0].basis.rows() != w[1].basis.rows()) {
        return shape("Lagrangians live in different symplectic spaces");
    }
    Ok(())
}

/// The form `Q(v1+v2+v3) = ⟨v1,v2⟩ + ⟨v2,v3⟩ + ⟨v3,v1⟩` on `l1 ⊕ l2 ⊕ l3`.
/// Degenerate in general; the radical is left in place.
pub fn kashiwara_form(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<QuadForm> {
    check_ambient(&[l1, l2, l3])?;
    let n = l1.n();
    let o12 = pairing(l1, l2);
    let o23 = pairing(l2, l3);
    let o13 = pairing(l1, l3);
    let mut g = Matrix::zeros(3 * n, 3 * n);
    g.set_block(0, n, &o12);
    g.set_block(n, 0, &o12.transpose());
    g.set_block(n, 2 * n, &o23);
    g.set_block(2 * n, n, &o23.transpose());
    g.set_block(0, 2 * n, &-&o13);
    g.set_block(2 * n, 0, &-&o13.transpose());
    QuadForm::new(g)
}

/// The Leray form: `q(x) = ⟨x1, x2⟩` on the space of triples
/// `(x1, x2, x3) ∈ l1 × l2 × l3` with `x1 + x2 + x3 = 0`.
pub fn leray_form(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<QuadForm> {
    check_ambient(&[l1, l2, l3])?;
    let n = l1.n();
    let mut stacked = Matrix::zeros(2 * n, 3 * n);
    stacked.set_block(0, 0, &l1.basis);
    stacked.set_block(0, n, &l2.basis);
    stacked.set_block(0, 2 * n, &l3.basis);
    let k = stacked.kernel();
    let c1 = k.submatrix(0, 0, n, k.cols());
    let c2 = k.submatrix(n, 0, n, k.cols());
    let w = &(&c1.transpose() * &pairing(l1, l2)) * &c2;
    QuadForm::new(&w + &w.transpose())
}
