//! Type-C Weyl combinatorics, simple root vectors of `Sp(2n)` and
//! `SO(2n+1)`, and Langlands–Shelstad representatives.

use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use crate::mpcover::{lift_elements, MpElement};
use crate::rational::{int, Rational};
use crate::scalars::{hilbert_minus_one, Place};
use crate::soodd::{from_blocks as so_from_blocks, split_gram, SoElement};
use crate::spgroup::{symplectic_gram, SpElement};

/// Signed permutation: `w(e_i) = signs[i]·e_{perm[i]}` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElementC {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl WeylElementC {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return domain("not a permutation");
            }
        }
        if signs.len() != n || signs.iter().any(|s| s.abs() != 1) {
            return domain("signs must be ±1, one per coordinate");
        }
        Ok(Self { perm, signs })
    }

    /// Simple reflection `s_i`, `1 ≤ i ≤ n`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return domain(format!("simple reflection {i} outside 1..={n}"));
        }
        let mut w = Self::identity(n);
        if i < n {
            w.perm.swap(i - 1, i);
        } else {
            w.signs[n - 1] = -1;
        }
        Ok(w)
    }

    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        word.iter().try_fold(Self::identity(n), |acc, &i| {
            Ok(acc.compose(&Self::simple(n, i)?))
        })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        Self { perm, signs }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            out[self.perm[i]] += i64::from(self.signs[i]) * c;
        }
        out
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self) -> usize {
        positive_roots(self.n())
            .iter()
            .filter(|r| !is_positive(&self.apply(r)))
            .count()
    }
}

/// Positive roots `e_i ± e_j` (`i < j`) and `2e_i` in coordinates.
pub fn positive_roots(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for s in [-1, 1] {
                let mut r = vec![0; n];
                r[i] = 1;
                r[j] = s;
                out.push(r);
            }
        }
        let mut r = vec![0; n];
        r[i] = 2;
        out.push(r);
    }
    out
}

pub fn is_positive(root: &[i64]) -> bool {
    root.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    /// Checks that the word is reduced.
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        let w = WeylElementC::from_word(n, &letters)?;
        if w.length() != letters.len() {
            return domain("word is not reduced");
        }
        Ok(Self { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn element(&self) -> WeylElementC {
        WeylElementC::from_word(self.n, &self.letters).expect("validated")
    }
}

/// `r_k q_1 r_k q_2 ⋯ q_{k−1} r_k` with `q_i = s_{k−1}⋯s_i` and
/// `r_i = s_i⋯s_{n−1} s_n s_{n−1}⋯s_i`.
pub fn wm_word(n: usize, k: usize) -> Result<ReducedWord> {
    if k == 0 || k > n {
        return domain(format!("k = {k} outside 1..={n}"));
    }
    let r: Vec<usize> = (k..=n).chain((k..n).rev()).collect();
    let mut letters = r.clone();
    for i in 1..k {
        letters.extend((i..k).rev());
        letters.extend(&r);
    }
    ReducedWord::new(n, letters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Sp(usize),
    So(usize),
}

impl Group {
    pub fn n(self) -> usize {
        match self {
            Group::Sp(n) | Group::So(n) => n,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Group::Sp(n) => 2 * n,
            Group::So(n) => 2 * n + 1,
        }
    }

    /// Gram of the invariant form.
    pub fn gram(self) -> Matrix {
        match self {
            Group::Sp(n) => symplectic_gram(n),
            Group::So(n) => split_gram(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootVector {
    pub group: Group,
    pub index: usize,
    pub positive: bool,
    pub mat: Matrix,
}

fn simple_root_matrix(group: Group, i: usize) -> Matrix {
    let n = group.n();
    let mut x = Matrix::zeros(group.dim(), group.dim());
    // offset of the dual basis vectors
    let star = match group {
        Group::Sp(_) => n,
        Group::So(_) => n + 1,
    };
    if i < n {
        x[(i - 1, i)] = int(1);
        x[(star + i, star + i - 1)] = int(-1);
    } else {
        match group {
            Group::Sp(_) => x[(n - 1, 2 * n - 1)] = int(1),
            Group::So(_) => {
                x[(n - 1, n)] = int(2);
                x[(n, 2 * n)] = int(-1);
            }
        }
    }
    x
}

/// The opposite root vector: supported on the transposed positions, in the
/// Lie algebra, with `[X, X₋]` the coroot.
fn opposite_root_matrix(group: Group, x: &Matrix) -> Result<Matrix> {
    let d = x.rows();
    let g = group.gram();
    let support: Vec<(usize, usize)> = (0..d)
        .flat_map(|r| (0..d).map(move |c| (r, c)))
        .filter(|&(r, c)| !x[(c, r)].is_zero())
        .collect();
    // Mᵀ G + G M = 0, linear in the support entries
    let basis: Vec<Matrix> = support
        .iter()
        .map(|&(r, c)| {
            let mut m = Matrix::zeros(d, d);
            m[(r, c)] = int(1);
            m
        })
        .collect();
    let mut system = Matrix::zeros(d * d, support.len());
    for (col, m) in basis.iter().enumerate() {
        let e = &(&m.transpose() * &g) + &(&g * m);
        for r in 0..d {
            for c in 0..d {
                system[(r * d + c, col)] = e[(r, c)].clone();
            }
        }
    }
    let kernel = system.kernel();
    if kernel.cols() != 1 {
        return Err(Error::Domain("opposite root space is not a line".into()));
    }
    let mut y = Matrix::zeros(d, d);
    for (idx, &(r, c)) in support.iter().enumerate() {
        y[(r, c)] = kernel[(idx, 0)].clone();
    }
    let h = x.commutator(&y);
    let hx = h.commutator(x);
    let (r, c) = (0..d * d)
        .map(|t| (t / d, t % d))
        .find(|&(r, c)| !x[(r, c)].is_zero())
        .expect("nonzero root vector");
    let lambda: Rational = &hx[(r, c)] / &x[(r, c)];
    Ok(y.scale(&(int(2) / lambda)))
}

pub fn root_vector(group: Group, i: usize, positive: bool) -> Result<RootVector> {
    let n = group.n();
    if i == 0 || i > n {
        return domain(format!("root index {i} outside 1..={n}"));
    }
    let x = simple_root_matrix(group, i);
    let mat = if positive {
        x
    } else {
        opposite_root_matrix(group, &x)?
    };
    Ok(RootVector {
        group,
        index: i,
        positive,
        mat,
    })
}

/// `exp(X)` for nilpotent `X`, as a finite sum.
pub fn exp_nilpotent(x: &Matrix) -> Result<Matrix> {
    if !x.is_square() {
        return domain("exponential of a non-square matrix");
    }
    let d = x.rows();
    let mut acc = Matrix::identity(d);
    let mut term = Matrix::identity(d);
    for k in 1..=d + 1 {
        term = (&term * x).scale(&(int(1) / int(k as i64)));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
    }
    domain("matrix is not nilpotent")
}

/// `exp(X_α) exp(−X_{−α}) exp(X_α)` for the simple root `α_i` (or `β_i`).
pub fn simple_reflection_rep(group: Group, i: usize) -> Result<Matrix> {
    let x = root_vector(group, i, true)?.mat;
    let y = root_vector(group, i, false)?.mat;
    let e = exp_nilpotent(&x)?;
    Ok(&(&e * &exp_nilpotent(&-&y)?) * &e)
}

fn check_word(group: Group, word: &ReducedWord) -> Result<()> {
    if word.n() != group.n() {
        return domain("word and group have different rank");
    }
    Ok(())
}

/// Langlands–Shelstad representative in `Mp(2n)`: each letter lifted with
/// sign `+1` and multiplied in the cover.
pub fn ls_representative_mp(word: &ReducedWord, place: Place) -> Result<MpElement> {
    let n = word.n();
    check_word(Group::Sp(n), word)?;
    let letters = word
        .letters()
        .iter()
        .map(|&i| Ok(SpElement::from_trusted(simple_reflection_rep(Group::Sp(n), i)?)))
        .collect::<Result<Vec<_>>>()?;
    lift_elements(&letters, n, place)
}

/// Langlands–Shelstad representative in `SO(2n+1)` for the split space.
pub fn ls_representative_so(word: &ReducedWord) -> Result<SoElement> {
    let n = word.n();
    check_word(Group::So(n), word)?;
    let m = word
        .letters()
        .iter()
        .try_fold(Matrix::identity(2 * n + 1), |acc, &i| {
            Ok::<_, Error>(&acc * &simple_reflection_rep(Group::So(n), i)?)
        })?;
    Ok(SoElement::from_trusted(m))
}

fn sign_matrix(k: usize) -> Rational {
    int(if k % 2 == 0 { 1 } else { -1 })
}

/// `((−1)^k [[0, 0, −J], [0, 1, 0], [J, 0, 0]], (−1,−1)^{k(k−1)/2})` in the
/// blocks `(Y_k, W_0, Y*_k)`.
pub fn target_representative_mp(n: usize, k: usize, place: Place) -> Result<MpElement> {
    if k == 0 || k > n {
        return domain(format!("k = {k} outside 1..={n}"));
    }
    let j = crate::spgroup::j_matrix(k, n);
    let w = 2 * (n - k);
    let mut blk = Matrix::zeros(2 * k + w, 2 * k + w);
    blk.set_block(0, k + w, &-&j);
    blk.set_block(k, k, &Matrix::identity(w));
    blk.set_block(k + w, 0, &j);
    let blk = blk.scale(&sign_matrix(k));
    let order: Vec<usize> = (0..n).chain(n + k..2 * n).chain(n..n + k).collect();
    let g = SpElement::new(blk.relabel(&order))?;
    let eps = hilbert_minus_one(place).pow((k * (k - 1) / 2) as u64);
    Ok(MpElement::new(g, eps, place))
}

/// `(−1)^k [[0, 0, J], [0, 1, 0], [J, 0, 0]]` in the blocks
/// `(X_k, V_0, X*_k)`.
pub fn target_representative_so(n: usize, k: usize) -> Result<SoElement> {
    if k == 0 || k > n {
        return domain(format!("k = {k} outside 1..={n}"));
    }
    let j = crate::spgroup::j_matrix(k, n);
    let w = 2 * (n - k) + 1;
    let mut blk = Matrix::zeros(2 * k + w, 2 * k + w);
    blk.set_block(0, k + w, &j);
    blk.set_block(k, k, &Matrix::identity(w));
    blk.set_block(k + w, 0, &j);
    Ok(SoElement::from_trusted(so_from_blocks(n, k, &blk.scale(&sign_matrix(k)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Sign;
    use crate::soodd::preserves;

    #[test]
    fn word_examples() {
        assert_eq!(wm_word(1, 1).unwrap().letters(), &[1]);
        assert_eq!(wm_word(2, 1).unwrap().letters(), &[1, 2, 1]);
        assert_eq!(wm_word(2, 2).unwrap().letters(), &[2, 1, 2]);
        assert!(wm_word(2, 3).is_err());
        assert!(ReducedWord::new(2, vec![1, 1]).is_err());
    }

    #[test]
    fn wm_word_preserves_levi_positivity() {
        for n in 1..=4 {
            for k in 1..=n {
                let w = wm_word(n, k).unwrap().element();
                for r in positive_roots(n) {
                    let inside = r.iter().enumerate().all(|(i, &c)| c == 0 || i < k)
                        && r.iter().sum::<i64>() == 0
                        || r.iter().enumerate().all(|(i, &c)| c == 0 || i >= k);
                    if inside {
                        assert!(is_positive(&w.apply(&r)), "n={n} k={k} {r:?}");
                    } else {
                        assert!(!is_positive(&w.apply(&r)), "n={n} k={k} {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn root_vector_examples() {
        let x = root_vector(Group::Sp(1), 1, true).unwrap().mat;
        assert_eq!(x, Matrix::from_i64(&[&[0, 1], &[0, 0]]));
        let y = root_vector(Group::Sp(1), 1, false).unwrap().mat;
        assert_eq!(x.commutator(&y), Matrix::from_i64(&[&[1, 0], &[0, -1]]));
        let xb = root_vector(Group::So(1), 1, true).unwrap().mat;
        assert_eq!(xb, Matrix::from_i64(&[&[0, 2, 0], &[0, 0, -1], &[0, 0, 0]]));
        assert_eq!(
            exp_nilpotent(&xb).unwrap(),
            Matrix::from_i64(&[&[1, 2, -1], &[0, 1, -1], &[0, 0, 1]])
        );
        assert!(exp_nilpotent(&Matrix::identity(2)).is_err());
    }

    #[test]
    fn root_vectors_lie_in_the_algebra() {
        for n in 1..=3 {
            for group in [Group::Sp(n), Group::So(n)] {
                let g = group.gram();
                for i in 1..=n {
                    for pos in [true, false] {
                        let m = root_vector(group, i, pos).unwrap().mat;
                        assert!((&(&m.transpose() * &g) + &(&g * &m)).is_zero());
                    }
                    let w = simple_reflection_rep(group, i).unwrap();
                    assert!(preserves(&w, &g));
                }
            }
        }
    }

    #[test]
    fn rank_one_representatives() {
        let place = Place::Finite(2);
        let w = ls_representative_mp(&wm_word(1, 1).unwrap(), place).unwrap();
        assert_eq!(w.g.matrix(), &Matrix::from_i64(&[&[0, 1], &[-1, 0]]));
        assert_eq!(w.eps, Sign::Plus);
        assert_eq!(w, target_representative_mp(1, 1, place).unwrap());
        assert_eq!(
            target_representative_so(1, 1).unwrap().matrix(),
            &Matrix::from_i64(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]])
        );
        assert_eq!(target_representative_mp(2, 2, place).unwrap().eps, Sign::Minus);
        let empty = ReducedWord::new(2, vec![]).unwrap();
        assert!(ls_representative_mp(&empty, place).unwrap().g.is_identity());
    }

    #[test]
    fn representatives_match_targets() {
        for n in 1..=3 {
            for k in 1..=n {
                let word = wm_word(n, k).unwrap();
                for place in [Place::Finite(2), Place::Finite(3)] {
                    assert_eq!(
                        ls_representative_mp(&word, place).unwrap(),
                        target_representative_mp(n, k, place).unwrap(),
                        "Mp n={n} k={k} {place}"
                    );
                }
                assert_eq!(
                    ls_representative_so(&word).unwrap(),
                    target_representative_so(n, k).unwrap(),
                    "SO n={n} k={k}"
                );
            }
        }
    }
}
