//! Odd orthogonal spaces of discriminant one and generators of `SO(V)`.
//!
//! The split space uses the basis `(x_1, …, x_n, x_0, x*_1, …, x*_n)` with
//! `b(x_i, x*_j) = δ_ij` and `q(x_0) = 1`.

use crate::error::{domain, shape, Error, Result};
use crate::matrix::Matrix;
use crate::qforms::{self, signed_discriminant, QuadForm};
use crate::rational::{frac, int, Rational};
use crate::scalars::{least_nonresidue, Place, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthSpace {
    n: usize,
    epsilon: Sign,
    place: Place,
    gram: Matrix,
}

/// Gram of the split space of dimension `2n + 1`.
pub fn split_gram(n: usize) -> Matrix {
    let mut g = Matrix::zeros(2 * n + 1, 2 * n + 1);
    for i in 0..n {
        g[(i, n + 1 + i)] = int(1);
        g[(n + 1 + i, i)] = int(1);
    }
    g[(n, n)] = int(2);
    g
}

/// `(a, b)` with Hilbert symbol `−1` at `place`.
fn quaternion_pair(place: Place) -> (Rational, Rational) {
    match place {
        Place::Finite(2) | Place::Real => (int(-1), int(-1)),
        Place::Finite(p) => (int(least_nonresidue(p) as i64), int(p as i64)),
    }
}

pub fn orth_space(n: usize, epsilon: Sign, place: Place) -> Result<OrthSpace> {
    let gram = match epsilon {
        Sign::Plus => split_gram(n),
        Sign::Minus => {
            if n == 0 {
                return domain("the non-split space needs n >= 1");
            }
            // (n − 1) hyperbolic planes and q-values ⟨a, b, −ab⟩ in the
            // x_n, x_0, x*_n slots
            let (a, b) = quaternion_pair(place);
            let mut g = split_gram(n);
            let (xn, x0, xsn) = (n - 1, n, 2 * n);
            g[(xn, xsn)] = int(0);
            g[(xsn, xn)] = int(0);
            g[(xn, xn)] = &a * int(2);
            g[(x0, x0)] = &b * int(2);
            g[(xsn, xsn)] = -(&a * &b * int(2));
            g
        }
    };
    let space = OrthSpace {
        n,
        epsilon,
        place,
        gram,
    };
    let q = space.form();
    let expected = if epsilon == Sign::Plus { n } else { n - 1 };
    if !signed_discriminant(&q, place).is_trivial()
        || qforms::max_isotropic_dim(&q, place) != expected
    {
        return Err(Error::Domain(format!(
            "constructed space fails its invariants at {place}"
        )));
    }
    Ok(space)
}

impl OrthSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn form(&self) -> QuadForm {
        QuadForm::new(self.gram.clone()).expect("symmetric by construction")
    }
}

pub fn max_isotropic_dim(space: &OrthSpace) -> usize {
    qforms::max_isotropic_dim(&space.form(), space.place)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoElement {
    mat: Matrix,
}

impl SoElement {
    pub fn new(space: &OrthSpace, mat: Matrix) -> Result<Self> {
        if mat.rows() != space.dim() || !mat.is_square() {
            return shape("matrix does not act on this space");
        }
        if !preserves(&mat, &space.gram) || mat.det() != int(1) {
            return domain("matrix is not in SO(V)");
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_trusted(mat: Matrix) -> Self {
        Self { mat }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: Matrix::identity(2 * n + 1),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }
}

pub fn preserves(m: &Matrix, gram: &Matrix) -> bool {
    &(&m.transpose() * gram) * m == *gram
}

/// Generators of `SO(V⁺)`, written in the blocks `(X_k, V_0, X*_k)` with
/// `V_0 = span(x_{k+1..n}, x_0, x*_{k+1..n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SoGenerator {
    /// `diag(a, 1, a^{-T})`.
    L(Matrix),
    /// Unipotent with `X_k ← V_0` block `b` (`k × (2(n−k)+1)`).
    Ub(Matrix),
    /// Unipotent with `X_k ← X*_k` block `c`, `c` alternating.
    Uc(Matrix),
    WX(usize),
}

fn block_order(n: usize, k: usize) -> Vec<usize> {
    (0..k)
        .chain(k..n)
        .chain(std::iter::once(n))
        .chain(n + 1 + k..2 * n + 1)
        .chain(n + 1..n + 1 + k)
        .collect()
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return domain(format!("block size {k} outside 1..={n}"));
    }
    Ok(())
}

pub fn so_generator(space: &OrthSpace, spec: &SoGenerator) -> Result<SoElement> {
    if space.epsilon != Sign::Plus {
        return domain("block generators are defined on the split space only");
    }
    let n = space.n;
    let (k, blk) = match spec {
        SoGenerator::L(a) => {
            let k = a.rows();
            check_k(n, k)?;
            let inv = match a.inverse() {
                Some(inv) if a.is_square() => inv,
                _ => return domain("l(a) needs an invertible square matrix"),
            };
            let blk = a
                .direct_sum(&Matrix::identity(2 * (n - k) + 1))
                .direct_sum(&inv.transpose());
            (k, blk)
        }
        SoGenerator::Ub(b) => {
            let k = b.rows();
            check_k(n, k)?;
            let w = 2 * (n - k) + 1;
            if b.cols() != w {
                return shape(format!("u^b block must be {k}x{w}"));
            }
            let g0_inv = split_gram(n - k).inverse().expect("nondegenerate");
            let f = -&(&g0_inv * &b.transpose());
            let e = (&(b * &g0_inv) * &b.transpose()).scale(&frac(-1, 2));
            let mut blk = Matrix::identity(2 * k + w);
            blk.set_block(0, k, b);
            blk.set_block(0, k + w, &e);
            blk.set_block(k, k + w, &f);
            (k, blk)
        }
        SoGenerator::Uc(c) => {
            let k = c.rows();
            check_k(n, k)?;
            if !c.is_square() || c.transpose() != -c {
                return domain("u^c needs an alternating block");
            }
            let w = 2 * (n - k) + 1;
            let mut blk = Matrix::identity(2 * k + w);
            blk.set_block(0, k + w, c);
            (k, blk)
        }
        SoGenerator::WX(k) => {
            let k = *k;
            check_k(n, k)?;
            let w = 2 * (n - k) + 1;
            let mut blk = Matrix::zeros(2 * k + w, 2 * k + w);
            blk.set_block(0, k + w, &-&Matrix::identity(k));
            blk.set_block(k + w, 0, &-&Matrix::identity(k));
            let s = int(if k % 2 == 0 { 1 } else { -1 });
            blk.set_block(k, k, &Matrix::identity(w).scale(&s));
            (k, blk)
        }
    };
    let mat = blk.relabel(&block_order(n, k));
    debug_assert!(preserves(&mat, &space.gram));
    Ok(SoElement::from_trusted(mat))
}

/// Converts a matrix in the `(X_k, V_0, X*_k)` order to the standard order.
pub(crate) fn from_blocks(n: usize, k: usize, blk: &Matrix) -> Matrix {
    blk.relabel(&block_order(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::weil_index_form;
    use crate::scalars::{weil_index, AdditiveCharacter, Mu8};

    #[test]
    fn space_examples() {
        let p3 = Place::Finite(3);
        assert_eq!(orth_space(0, Sign::Plus, p3).unwrap().gram(), &Matrix::from_i64(&[&[2]]));
        let v = orth_space(1, Sign::Plus, p3).unwrap();
        assert_eq!(v.gram(), &Matrix::from_i64(&[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]]));
        assert!(orth_space(0, Sign::Minus, p3).is_err());
        for place in [Place::Finite(2), p3, Place::Finite(5), Place::Real] {
            for n in 1..=3 {
                assert_eq!(max_isotropic_dim(&orth_space(n, Sign::Plus, place).unwrap()), n);
                assert_eq!(max_isotropic_dim(&orth_space(n, Sign::Minus, place).unwrap()), n - 1);
            }
        }
    }

    #[test]
    fn weil_index_of_spaces_tracks_epsilon() {
        for p in [2u64, 3, 5] {
            let place = Place::Finite(p);
            let psi = AdditiveCharacter::standard(place).unwrap();
            let g1 = weil_index(&int(1), &psi).unwrap();
            for n in 1..=3 {
                let plus = orth_space(n, Sign::Plus, place).unwrap();
                let minus = orth_space(n, Sign::Minus, place).unwrap();
                assert_eq!(weil_index_form(&plus.form(), &psi).unwrap(), g1);
                assert_eq!(weil_index_form(&minus.form(), &psi).unwrap(), g1 * Mu8::MINUS_ONE);
            }
        }
    }

    #[test]
    fn generators_lie_in_so() {
        let v = orth_space(3, Sign::Plus, Place::Finite(3)).unwrap();
        let specs = [
            SoGenerator::L(Matrix::from_i64(&[&[2, 1], &[1, 1]])),
            SoGenerator::Ub(Matrix::from_i64(&[&[1, -2, 3], &[0, 1, 1]])),
            SoGenerator::Ub(Matrix::from_i64(&[&[1, -2, 3, 1, 2]])),
            SoGenerator::Uc(Matrix::from_i64(&[&[0, 2], &[-2, 0]])),
            SoGenerator::WX(1),
            SoGenerator::WX(2),
            SoGenerator::WX(3),
        ];
        for s in &specs {
            let g = so_generator(&v, s).unwrap();
            assert!(SoElement::new(&v, g.matrix().clone()).is_ok(), "{s:?}");
        }
        let v1 = orth_space(1, Sign::Plus, Place::Finite(3)).unwrap();
        assert_eq!(
            so_generator(&v1, &SoGenerator::WX(1)).unwrap().matrix(),
            &Matrix::from_i64(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]])
        );
        assert!(so_generator(&v1, &SoGenerator::Uc(Matrix::from_i64(&[&[0]]))).unwrap().matrix().is_identity());
        assert!(so_generator(&v, &SoGenerator::Uc(Matrix::from_i64(&[&[1]]))).is_err());
    }
}
