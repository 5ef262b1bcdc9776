//! Random group elements, always built as words in generators.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrix::Matrix;
use crate::rational::{int, Rational};
use crate::spgroup::{generator, Generator, SpElement, SympSpace};

pub fn random_entry<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(-3..=3)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = int(random_entry(rng));
        }
    }
    m
}

pub fn random_gl<R: Rng>(rng: &mut R, k: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, k, k);
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn random_symmetric<R: Rng>(rng: &mut R, k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = int(random_entry(rng));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

pub fn random_alternating<R: Rng>(rng: &mut R, k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i + 1..k {
            let v = int(random_entry(rng));
            m[(j, i)] = -&v;
            m[(i, j)] = v;
        }
    }
    m
}

/// Uniform subset of `{1, …, n}`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (1..=n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Nonzero rational with numerator and denominator bounded by `bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-bound..=bound);
    }
    Rational::new(n.into(), rng.gen_range(1..=bound).into())
}

pub fn random_generator<R: Rng>(rng: &mut R, n: usize) -> Generator {
    let k = rng.gen_range(1..=n);
    match rng.gen_range(0..6) {
        0 => Generator::M(random_gl(rng, k)),
        1 if k < n => Generator::Nb(random_matrix(rng, k, 2 * (n - k))),
        1 | 2 => Generator::Nc(random_symmetric(rng, k)),
        3 => Generator::Sigma(random_subset(rng, n)),
        4 => Generator::A(random_subset(rng, n)),
        _ => Generator::WY(k),
    }
}

fn space(n: usize) -> SympSpace {
    SympSpace::new(n).expect("n >= 1")
}

fn product<R: Rng>(rng: &mut R, n: usize, len: usize, mut pick: impl FnMut(&mut R) -> Generator) -> SpElement {
    let sp = space(n);
    (0..len).fold(SpElement::identity(n), |acc, _| {
        let g = generator(&sp, &pick(rng)).expect("generated specs are valid");
        &acc * &g
    })
}

/// Word of length `1..=max_len` in all generators.
pub fn random_sp<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> SpElement {
    let len = rng.gen_range(1..=max_len);
    product(rng, n, len, |r| random_generator(r, n))
}

/// Word in the generators of the Siegel parabolic.
pub fn random_parabolic<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> SpElement {
    let len = rng.gen_range(1..=max_len);
    product(rng, n, len, |r| {
        let k = r.gen_range(1..=n);
        match r.gen_range(0..4) {
            0 => Generator::M(random_gl(r, k)),
            1 if k < n => Generator::Nb(random_matrix(r, k, 2 * (n - k))),
            1 | 2 => Generator::Nc(random_symmetric(r, k)),
            _ => Generator::A(random_subset(r, n)),
        }
    })
}

/// `diag(±t_1, …, ±t_n)` times a permutation matrix, `t_i ∈ {1, 2, 3}`.
pub fn random_monomial_gl<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        let t = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        m[(i, j)] = int(t);
    }
    m
}

pub fn random_torus<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let d: Vec<Rational> = (0..n)
        .map(|_| int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    Matrix::diagonal(&d)
}

/// Word in `σ_S`, `a_S` and monomial Levi elements.
pub fn random_monomial<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> SpElement {
    let len = rng.gen_range(1..=max_len);
    product(rng, n, len, |r| match r.gen_range(0..3) {
        0 => Generator::Sigma(random_subset(r, n)),
        1 => Generator::A(random_subset(r, n)),
        _ => Generator::Mn(random_monomial_gl(r, n)),
    })
}

/// Element of the unipotent radical of the maximal parabolic fixing
/// `Y_k`.
pub fn random_unipotent<R: Rng>(rng: &mut R, n: usize, k: usize, max_len: usize) -> SpElement {
    let len = rng.gen_range(1..=max_len);
    product(rng, n, len, |r| {
        if k < n && r.gen_bool(0.5) {
            Generator::Nb(random_matrix(r, k, 2 * (n - k)))
        } else {
            Generator::Nc(random_symmetric(r, k))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgroup::is_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_group_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            for _ in 0..10 {
                assert!(is_symplectic(random_sp(&mut rng, n, 8).matrix()));
                assert!(random_parabolic(&mut rng, n, 4).in_siegel_parabolic());
                assert!(is_symplectic(random_monomial(&mut rng, n, 4).matrix()));
                let k = rng.gen_range(1..=n);
                let u = random_unipotent(&mut rng, n, k, 3);
                assert!(u.in_siegel_parabolic() && u.a_block().det() == int(1));
            }
        }
        let a = random_alternating(&mut rng, 3);
        assert_eq!(a.transpose(), -&a);
    }
}
