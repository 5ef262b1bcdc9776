//! Sp(2n) over Q in the basis `(y_1, …, y_n, y*_1, …, y*_n)`, block
//! generators, and the Siegel-parabolic Bruhat decomposition.

use std::ops::Mul;

use num_traits::{One, Zero};

use crate::error::{domain, shape, Result};
use crate::matrix::Matrix;
use crate::rational::{frac, int, Rational};
use crate::scalars::{square_class, Place, SquareClass};

/// Gram matrix `[[0, I], [−I, 0]]` of the standard symplectic form.
pub fn symplectic_gram(n: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = int(1);
        j[(n + i, i)] = int(-1);
    }
    j
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SympSpace {
    n: usize,
}

impl SympSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("symplectic space needs n >= 1");
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> Matrix {
        symplectic_gram(self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpElement {
    mat: Matrix,
}

pub fn is_symplectic(m: &Matrix) -> bool {
    if !m.is_square() || m.rows() % 2 != 0 {
        return false;
    }
    let j = symplectic_gram(m.rows() / 2);
    &(&m.transpose() * &j) * m == j
}

impl SpElement {
    pub fn new(mat: Matrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() % 2 != 0 || mat.rows() == 0 {
            return shape("symplectic matrix must be 2n x 2n with n >= 1");
        }
        if !is_symplectic(&mat) {
            return domain("matrix does not preserve the symplectic form");
        }
        Ok(Self { mat })
    }

    /// Caller guarantees `mat` is symplectic.
    pub(crate) fn from_trusted(mat: Matrix) -> Self {
        debug_assert!(is_symplectic(&mat));
        Self { mat }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: Matrix::identity(2 * n),
        }
    }

    pub fn n(&self) -> usize {
        self.mat.rows() / 2
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// `g⁻¹ = −J gᵀ J`.
    pub fn inverse(&self) -> SpElement {
        let j = symplectic_gram(self.n());
        SpElement {
            mat: -&(&(&j * &self.mat.transpose()) * &j),
        }
    }

    pub fn pow(&self, e: i64) -> SpElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        SpElement {
            mat: base.mat.pow(e.unsigned_abs() as u32),
        }
    }

    /// The `Y → Y` block.
    pub fn a_block(&self) -> Matrix {
        let n = self.n();
        self.mat.submatrix(0, 0, n, n)
    }

    /// The `Y → Y*` block; zero exactly on the Siegel parabolic.
    pub fn c_block(&self) -> Matrix {
        let n = self.n();
        self.mat.submatrix(n, 0, n, n)
    }

    pub fn in_siegel_parabolic(&self) -> bool {
        self.c_block().is_zero()
    }

    pub fn commutes_with(&self, other: &SpElement) -> bool {
        &self.mat * &other.mat == &other.mat * &self.mat
    }
}

impl Mul for &SpElement {
    type Output = SpElement;
    fn mul(self, rhs: &SpElement) -> SpElement {
        SpElement {
            mat: &self.mat * &rhs.mat,
        }
    }
}

/// Sorted, deduplicated 1-based index set checked against `n`.
pub fn normalize_subset(s: &[usize], n: usize) -> Result<Vec<usize>> {
    if let Some(&bad) = s.iter().find(|&&i| i == 0 || i > n) {
        return domain(format!("index {bad} outside 1..={n}"));
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Generator specifications. Matrices `a`, `b`, `c` act on the blocks
/// `(Y_k, W_0, Y*_k)` with `W_0 = span(y_{k+1..n}, y*_{k+1..n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `diag(a, 1, a^{-T})` for `a ∈ GL_k`.
    M(Matrix),
    /// Unipotent with `Y_k ← W_0` block `b` (`k × 2(n−k)`).
    Nb(Matrix),
    /// Unipotent with `Y_k ← Y*_k` block `c`, `c` symmetric.
    Nc(Matrix),
    Sigma(Vec<usize>),
    A(Vec<usize>),
    WY(usize),
    /// Siegel Levi `diag(a, a^{-T})`, `a ∈ GL_n`.
    Mn(Matrix),
    /// `m_n(diag(1_r, a, 1_t))`.
    Iota { r: usize, a: Matrix },
    /// `m_n(ι_{0,k,n−k}(J(k, n)))`.
    J(usize),
    /// `m_n(ι_{r,l,n−r−l}(κ_l))`.
    Kappa { r: usize, l: usize },
}

/// Coordinates of the blocks `(Y_k, W_0, Y*_k)` inside the standard basis.
fn block_order(n: usize, k: usize) -> Vec<usize> {
    (0..k)
        .chain(k..n)
        .chain(n + k..2 * n)
        .chain(n..n + k)
        .collect()
}

/// Converts a matrix written in the `(Y_k, W_0, Y*_k)` order to the
/// standard order.
fn from_blocks(n: usize, k: usize, blk: &Matrix) -> Matrix {
    blk.relabel(&block_order(n, k))
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return domain(format!("block size {k} outside 1..={n}"));
    }
    Ok(())
}

fn invertible(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return shape("expected a square matrix");
    }
    a.inverse()
        .map_or_else(|| domain("matrix is not invertible"), Ok)
}

/// `diag(1_r, a, 1_t)`.
pub fn iota_gl(r: usize, a: &Matrix, t: usize) -> Matrix {
    Matrix::identity(r)
        .direct_sum(a)
        .direct_sum(&Matrix::identity(t))
}

/// Antidiagonal `k × k` matrix whose row `i` (1-based) carries `(−1)^{n+i}`.
pub fn j_matrix(k: usize, n: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 1..=k {
        m[(i - 1, k - i)] = int(if (n + i) % 2 == 0 { 1 } else { -1 });
    }
    m
}

/// `l × l` matrix with `−1` on the superdiagonal and `1` in the bottom-left
/// corner.
pub fn kappa_matrix(l: usize) -> Matrix {
    let mut m = Matrix::zeros(l, l);
    for i in 0..l.saturating_sub(1) {
        m[(i, i + 1)] = int(-1);
    }
    if l > 0 {
        m[(l - 1, 0)] += int(1);
    }
    m
}

pub fn levi_n(a: &Matrix) -> Result<SpElement> {
    let inv = invertible(a)?;
    Ok(SpElement::from_trusted(a.direct_sum(&inv.transpose())))
}

pub fn sigma(n: usize, s: &[usize]) -> Result<SpElement> {
    let s = normalize_subset(s, n)?;
    let mut m = Matrix::identity(2 * n);
    for &i in &s {
        let i = i - 1;
        m[(i, i)] = int(0);
        m[(n + i, n + i)] = int(0);
        m[(n + i, i)] = int(1);
        m[(i, n + i)] = int(-1);
    }
    Ok(SpElement::from_trusted(m))
}

pub fn a_sign(n: usize, s: &[usize]) -> Result<SpElement> {
    let s = normalize_subset(s, n)?;
    let mut m = Matrix::identity(2 * n);
    for &i in &s {
        m[(i - 1, i - 1)] = int(-1);
        m[(n + i - 1, n + i - 1)] = int(-1);
    }
    Ok(SpElement::from_trusted(m))
}

pub fn generator(space: &SympSpace, spec: &Generator) -> Result<SpElement> {
    let n = space.n();
    match spec {
        Generator::M(a) => {
            let k = a.rows();
            check_k(n, k)?;
            let inv = invertible(a)?;
            let blk = a
                .direct_sum(&Matrix::identity(2 * (n - k)))
                .direct_sum(&inv.transpose());
            Ok(SpElement::from_trusted(from_blocks(n, k, &blk)))
        }
        Generator::Nb(b) => {
            let k = b.rows();
            check_k(n, k)?;
            let w = 2 * (n - k);
            if b.cols() != w {
                return shape(format!("n^b block must be {k}x{w}"));
            }
            let j0 = symplectic_gram(n - k);
            let jbt = &j0 * &b.transpose();
            let corner = (b * &jbt).scale(&frac(1, 2));
            let mut blk = Matrix::identity(2 * k + w);
            blk.set_block(0, k, b);
            blk.set_block(0, k + w, &corner);
            blk.set_block(k, k + w, &jbt);
            Ok(SpElement::from_trusted(from_blocks(n, k, &blk)))
        }
        Generator::Nc(c) => {
            let k = c.rows();
            check_k(n, k)?;
            if !c.is_symmetric() {
                return domain("n^c needs a symmetric block");
            }
            let w = 2 * (n - k);
            let mut blk = Matrix::identity(2 * k + w);
            blk.set_block(0, k + w, c);
            Ok(SpElement::from_trusted(from_blocks(n, k, &blk)))
        }
        Generator::Sigma(s) => sigma(n, s),
        Generator::A(s) => a_sign(n, s),
        Generator::WY(k) => {
            let k = *k;
            check_k(n, k)?;
            let w = 2 * (n - k);
            let mut blk = Matrix::zeros(2 * k + w, 2 * k + w);
            blk.set_block(0, k + w, &Matrix::identity(k));
            blk.set_block(k + w, 0, &-&Matrix::identity(k));
            let s = int(if k % 2 == 0 { 1 } else { -1 });
            blk.set_block(k, k, &Matrix::identity(w).scale(&s));
            Ok(SpElement::from_trusted(from_blocks(n, k, &blk)))
        }
        Generator::Mn(a) => {
            if a.rows() != n {
                return shape(format!("m_n needs an {n}x{n} matrix"));
            }
            levi_n(a)
        }
        Generator::Iota { r, a } => {
            if r + a.rows() > n {
                return shape("iota block does not fit");
            }
            levi_n(&iota_gl(*r, a, n - r - a.rows()))
        }
        Generator::J(k) => {
            check_k(n, *k)?;
            levi_n(&iota_gl(0, &j_matrix(*k, n), n - k))
        }
        Generator::Kappa { r, l } => {
            if *l == 0 || r + l > n {
                return shape("kappa block does not fit");
            }
            levi_n(&iota_gl(*r, &kappa_matrix(*l), n - r - l))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatForm {
    pub p1: SpElement,
    /// 1-based, sorted.
    pub s: Vec<usize>,
    pub p2: SpElement,
}

impl BruhatForm {
    pub fn reconstruct(&self) -> SpElement {
        let n = self.p1.n();
        let sig = sigma(n, &self.s).expect("indices in range");
        &(&self.p1 * &sig) * &self.p2
    }
}

/// Row and column operations `M·C·R = E_S`, with pivots taken on the
/// lowest-index available row of each column.
fn reduce_lower_block(c: &Matrix) -> (Matrix, Matrix, Vec<usize>) {
    let n = c.rows();
    let mut c = c.clone();
    let mut left = Matrix::identity(n);
    let mut right = Matrix::identity(n);
    let mut used = vec![false; n];
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(row) = (0..n).find(|&r| !used[r] && !c[(r, col)].is_zero()) else {
            continue;
        };
        used[row] = true;
        let inv = c[(row, col)].recip();
        for j in 0..n {
            c[(row, j)] = &c[(row, j)] * &inv;
            left[(row, j)] = &left[(row, j)] * &inv;
        }
        for r in 0..n {
            if r != row && !c[(r, col)].is_zero() {
                let f = c[(r, col)].clone();
                for j in 0..n {
                    let t = &c[(row, j)] * &f;
                    c[(r, j)] -= t;
                    let t = &left[(row, j)] * &f;
                    left[(r, j)] -= t;
                }
            }
        }
        for j in 0..n {
            if j != col && !c[(row, j)].is_zero() {
                let f = c[(row, j)].clone();
                for r in 0..n {
                    let t = &c[(r, col)] * &f;
                    c[(r, j)] -= t;
                    let t = &right[(r, col)] * &f;
                    right[(r, j)] -= t;
                }
            }
        }
        pivots.push((row, col));
    }
    // move pivot (row, col) to (row, row); free columns fill the free rows
    let mut target = vec![usize::MAX; n];
    for &(row, col) in &pivots {
        target[col] = row;
    }
    let mut free_rows = (0..n).filter(|r| !used[*r]);
    for t in target.iter_mut() {
        if *t == usize::MAX {
            *t = free_rows.next().expect("square block");
        }
    }
    let mut perm = Matrix::zeros(n, n);
    for (col, &t) in target.iter().enumerate() {
        perm[(col, t)] = Rational::one();
    }
    let right = &right * &perm;
    let mut s: Vec<usize> = pivots.iter().map(|&(r, _)| r + 1).collect();
    s.sort_unstable();
    (left, right, s)
}

/// Writes `g = p1·σ_S·p2` with `p1, p2` in the Siegel parabolic.
pub fn bruhat_decompose(g: &SpElement) -> BruhatForm {
    let n = g.n();
    if g.in_siegel_parabolic() {
        return BruhatForm {
            p1: g.clone(),
            s: Vec::new(),
            p2: SpElement::identity(n),
        };
    }
    let (left, right, s) = reduce_lower_block(&g.c_block());
    // m(L)·g·m(R) has lower block L^{-T}·C·R, so take L = left^{-T}
    let l = left.inverse().expect("row operations are invertible").transpose();
    let m_l = levi_n(&l).expect("invertible");
    let m_r = levi_n(&right).expect("invertible");
    let h = &(&m_l * g) * &m_r;
    let a = h.a_block();
    let in_s: Vec<bool> = (1..=n).map(|i| s.contains(&i)).collect();
    let mut x = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if in_s[j] {
                x[(i, j)] = -a[(i, j)].clone();
                if !in_s[i] {
                    x[(j, i)] = -a[(i, j)].clone();
                }
            }
        }
    }
    let mut nx = Matrix::identity(2 * n);
    nx.set_block(0, n, &x);
    let nx = SpElement::from_trusted(nx);
    let p1 = &m_l.inverse() * &nx.inverse();
    let sig = sigma(n, &s).expect("indices in range");
    let p2 = &(&sig.inverse() * &p1.inverse()) * g;
    debug_assert!(p2.in_siegel_parabolic(), "Bruhat elimination failed");
    BruhatForm { p1, s, p2 }
}

/// `det` of the `Y → Y` block of a Siegel-parabolic element.
pub fn parabolic_det(p: &SpElement) -> Rational {
    p.a_block().det()
}

/// Class of `det(p1 p2 |_Y)` for any decomposition `g = p1 σ_S p2`.
pub fn x_function(g: &SpElement, place: Place) -> SquareClass {
    let b = bruhat_decompose(g);
    let d = parabolic_det(&b.p1) * parabolic_det(&b.p2);
    square_class(&d, place).expect("parabolic blocks are invertible")
}

/// Rank of the `Y → Y*` block, the Bruhat cell invariant.
pub fn cell_rank(g: &SpElement) -> usize {
    g.c_block().rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize) -> SympSpace {
        SympSpace::new(n).unwrap()
    }

    #[test]
    fn generator_examples() {
        let s = generator(&sp(1), &Generator::Sigma(vec![1])).unwrap();
        assert_eq!(s.matrix(), &Matrix::from_i64(&[&[0, -1], &[1, 0]]));
        assert!(generator(&sp(3), &Generator::Mn(Matrix::identity(3))).unwrap().is_identity());
        assert_eq!(j_matrix(2, 2), Matrix::from_i64(&[&[0, -1], &[1, 0]]));
        let w = generator(&sp(1), &Generator::WY(1)).unwrap();
        assert_eq!(w.matrix(), &Matrix::from_i64(&[&[0, 1], &[-1, 0]]));
        assert!(generator(&sp(2), &Generator::Sigma(vec![3])).is_err());
        assert!(generator(&sp(2), &Generator::Nc(Matrix::from_i64(&[&[0, 1], &[2, 0]]))).is_err());
        assert!(generator(&sp(2), &Generator::M(Matrix::from_i64(&[&[1, 1], &[1, 1]]))).is_err());
    }

    #[test]
    fn all_generators_are_symplectic() {
        let n = 3;
        let space = sp(n);
        let specs = vec![
            Generator::M(Matrix::from_i64(&[&[2, 1], &[1, 1]])),
            Generator::Nb(Matrix::from_i64(&[&[1, -2], &[3, 1]])),
            Generator::Nb(Matrix::from_i64(&[&[1, -2, 0, 3]])),
            Generator::Nc(Matrix::from_i64(&[&[1, 2], &[2, -3]])),
            Generator::Sigma(vec![1, 3]),
            Generator::A(vec![2]),
            Generator::WY(1),
            Generator::WY(2),
            Generator::WY(3),
            Generator::Mn(Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, -1]])),
            Generator::Iota { r: 1, a: Matrix::from_i64(&[&[0, 1], &[1, 0]]) },
            Generator::J(2),
            Generator::Kappa { r: 1, l: 2 },
        ];
        for spec in specs {
            let g = generator(&space, &spec).unwrap();
            assert!(is_symplectic(g.matrix()), "{spec:?}");
            assert!((&g * &g.inverse()).is_identity());
        }
    }

    #[test]
    fn bruhat_examples() {
        let n = 2;
        let s = sigma(n, &[2]).unwrap();
        let b = bruhat_decompose(&s);
        assert!(b.p1.is_identity() && b.p2.is_identity());
        assert_eq!(b.s, vec![2]);

        let w = generator(&sp(1), &Generator::WY(1)).unwrap();
        let b = bruhat_decompose(&w);
        assert_eq!(b.reconstruct(), w);
        let x = x_function(&w, Place::Finite(3));
        assert_eq!(x, square_class(&int(-1), Place::Finite(3)).unwrap());
        for n in 1..=3 {
            let w = generator(&sp(n), &Generator::WY(n)).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(x_function(&w, Place::Finite(5)), square_class(&int(sign), Place::Finite(5)).unwrap());
        }
    }

    #[test]
    fn bruhat_on_mixed_product() {
        let space = sp(3);
        let g = [
            Generator::Nb(Matrix::from_i64(&[&[1, 2, -1, 0]])),
            Generator::Sigma(vec![1, 2]),
            Generator::Nc(Matrix::from_i64(&[&[1, 1, 0], &[1, 0, 2], &[0, 2, -1]])),
            Generator::Sigma(vec![3]),
            Generator::M(Matrix::from_i64(&[&[2, 1], &[3, 1]])),
        ]
        .iter()
        .map(|s| generator(&space, s).unwrap())
        .fold(SpElement::identity(3), |acc, g| &acc * &g);
        let b = bruhat_decompose(&g);
        assert!(b.p1.in_siegel_parabolic() && b.p2.in_siegel_parabolic());
        assert_eq!(b.reconstruct(), g);
        assert_eq!(b.s.len(), cell_rank(&g));
    }
}
