//! The metaplectic double cover `Mp(2n)` as pairs `(g, ε)` multiplied with
//! Rao's normalized cocycle, and the determinant cover of `GL_k`.
//!
//! Two cocycle backends are provided. The word backend evaluates
//! `c(g1, g2)` only through the rules
//!
//! * `c(σ_S, σ_T) = (−1,−1)^{j(j+1)/2}`, `j = |S ∩ T|`,
//! * `c(g, p) = c(p, g) = (x(p), x(g))`,
//! * `c(pg, g′p′) = c(g, g′)(x(g), x(p))(x(g′), x(p′))(x(p), x(p′))(x(gg′), x(pp′))`,
//! * the 2-cocycle identity,
//!
//! and reports [`Error::Irreducible`] when they do not reach a base case.
//! The Leray backend (feature `leray`) evaluates Rao's closed formula on
//! every pair.

use std::ops::Mul;

use crate::error::{domain, shape, Error, Result};
use crate::matrix::Matrix;
use crate::rational::{int, Rational};
use crate::scalars::{hilbert, hilbert_minus_one, Place, Sign};
use crate::spgroup::{bruhat_decompose, normalize_subset, parabolic_det, sigma, SpElement};

fn hs(a: &Rational, b: &Rational, place: Place) -> Sign {
    hilbert(a, b, place).expect("x-values are nonzero")
}

/// `c(σ_S, σ_T)`.
pub fn sigma_cocycle(s: &[usize], t: &[usize], place: Place) -> Sign {
    let j = s.iter().filter(|i| t.contains(i)).count() as u64;
    hilbert_minus_one(place).pow(j * (j + 1) / 2)
}

/// A rational whose square class is `x(g)`.
pub fn x_value(g: &SpElement) -> Rational {
    let b = bruhat_decompose(g);
    parabolic_det(&b.p1) * parabolic_det(&b.p2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// A Siegel-parabolic element with the determinant of its `Y` block.
    Parabolic { g: SpElement, det: Rational },
    Sigma(Vec<usize>),
}

impl Letter {
    pub fn parabolic(g: SpElement) -> Result<Self> {
        if !g.in_siegel_parabolic() {
            return domain("parabolic letter outside the Siegel parabolic");
        }
        let det = parabolic_det(&g);
        Ok(Letter::Parabolic { g, det })
    }

    fn element(&self, n: usize) -> SpElement {
        match self {
            Letter::Parabolic { g, .. } => g.clone(),
            Letter::Sigma(s) => sigma(n, s).expect("validated on construction"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredWord {
    n: usize,
    letters: Vec<Letter>,
}

impl FactoredWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        let mut checked = Vec::with_capacity(letters.len());
        for l in letters {
            checked.push(match l {
                Letter::Parabolic { g, .. } if g.n() != n => {
                    return shape(format!("letter of rank {} in a word of rank {n}", g.n()))
                }
                Letter::Parabolic { g, .. } => Letter::parabolic(g)?,
                Letter::Sigma(s) => Letter::Sigma(normalize_subset(&s, n)?),
            });
        }
        Ok(Self {
            n,
            letters: checked,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            letters: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_elements(&self) -> Vec<SpElement> {
        self.letters.iter().map(|l| l.element(self.n)).collect()
    }

    pub fn product(&self) -> SpElement {
        self.letters
            .iter()
            .fold(SpElement::identity(self.n), |acc, l| &acc * &l.element(self.n))
    }
}

/// `c(σ_S, m)` for `m` a product `q·σ_T` with `q` parabolic, by moving
/// `q` across one of the two Weyl letters.
fn sigma_against(s: &[usize], q: &SpElement, t: &[usize], place: Place) -> Result<Sign> {
    let n = q.n();
    let m = q * &sigma(n, t)?;
    // q σ_T = σ_{T'} q′
    let t2 = lower_support_rows(&m);
    let q2 = &sigma(n, &t2)?.inverse() * &m;
    if q2.in_siegel_parabolic() {
        let ss = &sigma(n, s)? * &sigma(n, &t2)?;
        return Ok(sigma_cocycle(s, &t2, place) * hs(&x_value(&ss), &parabolic_det(&q2), place));
    }
    // σ_S q = q″ σ_{S′}
    let lm = &sigma(n, s)? * q;
    let s2 = lower_support_cols(&lm);
    let q3 = &lm * &sigma(n, &s2)?.inverse();
    if q3.in_siegel_parabolic() {
        let st = &sigma(n, &s2)? * &sigma(n, t)?;
        return Ok(sigma_cocycle(&s2, t, place) * hs(&x_value(&st), &parabolic_det(&q3), place));
    }
    Err(Error::Irreducible)
}

/// Indices `i` whose row `y*_i` meets the image of `Y`.
fn lower_support_rows(m: &SpElement) -> Vec<usize> {
    let c = m.c_block();
    (0..c.rows())
        .filter(|&i| c.row(i).iter().any(|x| !num_traits::Zero::is_zero(x)))
        .map(|i| i + 1)
        .collect()
}

/// Indices `i` for which `m·y_i` has a `Y*` component.
fn lower_support_cols(m: &SpElement) -> Vec<usize> {
    let c = m.c_block();
    (0..c.cols())
        .filter(|&j| (0..c.rows()).any(|i| !num_traits::Zero::is_zero(&c[(i, j)])))
        .map(|j| j + 1)
        .collect()
}

/// Word-backend cocycle on plain elements.
pub fn cocycle_rules(g1: &SpElement, g2: &SpElement, place: Place) -> Result<Sign> {
    if g1.n() != g2.n() {
        return shape("cocycle of elements of different rank");
    }
    if g1.in_siegel_parabolic() {
        return Ok(hs(&parabolic_det(g1), &x_value(g2), place));
    }
    if g2.in_siegel_parabolic() {
        return Ok(hs(&parabolic_det(g2), &x_value(g1), place));
    }
    let n = g1.n();
    let b1 = bruhat_decompose(g1);
    let b2 = bruhat_decompose(g2);
    let (x_p1, x_p2) = (parabolic_det(&b1.p1), parabolic_det(&b1.p2));
    let (x_p3, x_p4) = (parabolic_det(&b2.p1), parabolic_det(&b2.p2));
    let h = &sigma(n, &b1.s)? * &b1.p2;
    let h2 = &b2.p1 * &sigma(n, &b2.s)?;
    let hh = &h * &h2;
    // c(p1 h, h′ p4) = c(h, h′)·(x(h), x(p1))(x(h′), x(p4))(x(p1), x(p4))(x(hh′), x(p1 p4))
    let outer = hs(&x_p2, &x_p1, place)
        * hs(&x_p3, &x_p4, place)
        * hs(&x_p1, &x_p4, place)
        * hs(&x_value(&hh), &(&x_p1 * &x_p4), place);
    // c(σ_S p2, p3 σ_T) = c(p2, p3 σ_T)·c(σ_S, p2 p3 σ_T)
    let inner = hs(&x_p2, &x_p3, place);
    let q = &b1.p2 * &b2.p1;
    Ok(outer * inner * sigma_against(&b1.s, &q, &b2.s, place)?)
}

/// Rao's cocycle evaluated through the rewrite rules on factored words.
pub fn cocycle_word(w1: &FactoredWord, w2: &FactoredWord, place: Place) -> Result<Sign> {
    if w1.n != w2.n {
        return shape("words of different rank");
    }
    // strip an outer parabolic pair with the cached determinants
    if let (Some(Letter::Parabolic { det: d1, .. }), Some(Letter::Parabolic { det: d2, .. })) =
        (w1.letters.first(), w2.letters.last())
    {
        let g = FactoredWord {
            n: w1.n,
            letters: w1.letters[1..].to_vec(),
        };
        let g2 = FactoredWord {
            n: w2.n,
            letters: w2.letters[..w2.letters.len() - 1].to_vec(),
        };
        let (gp, g2p) = (g.product(), g2.product());
        let gg = &gp * &g2p;
        let (xg, xg2, xgg) = (x_value(&gp), x_value(&g2p), x_value(&gg));
        return Ok(cocycle_word(&g, &g2, place)?
            * hs(&xg, d1, place)
            * hs(&xg2, d2, place)
            * hs(d1, d2, place)
            * hs(&xgg, &(d1 * d2), place));
    }
    cocycle_rules(&w1.product(), &w2.product(), place)
}

#[cfg(feature = "leray")]
pub use leray::cocycle_leray;

#[cfg(feature = "leray")]
mod leray {
    use super::*;
    use crate::qforms::{diagonalize, leray_form, Lagrangian};
    use crate::spgroup::cell_rank;

    /// Rao's closed formula
    /// `(x1, x2)(−x1x2, x12)((−1)^l, d(q))(−1,−1)^{l(l−1)/2} h(q)` with `q`
    /// the Leray form of `(g1g2Y, g1Y, Y)`, `2l = j(g1) + j(g2) − j(g1g2) − rank q`,
    /// `d` the signed discriminant and `h` the Hasse invariant of `q`.
    pub fn cocycle_leray(g1: &SpElement, g2: &SpElement, place: Place) -> Sign {
        let n = g1.n();
        let g12 = g1 * g2;
        let y = Lagrangian::y(n);
        let q = leray_form(&y.translate(g12.matrix()), &y.translate(g1.matrix()), &y)
            .expect("common ambient space");
        let vals: Vec<Rational> = diagonalize(&q).iter().map(|a| a / int(2)).collect();
        let t = vals.len() as i64;
        let twice_l = cell_rank(g1) as i64 + cell_rank(g2) as i64 - cell_rank(&g12) as i64 - t;
        debug_assert!(twice_l >= 0 && twice_l % 2 == 0);
        let l = (twice_l / 2) as u64;
        let disc = vals.iter().fold(int(1), |acc, a| acc * a);
        let mut hasse = Sign::Plus;
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                hasse = hasse * hs(&vals[i], &vals[j], place);
            }
        }
        let (x1, x2, x12) = (x_value(g1), x_value(g2), x_value(&g12));
        let minus_l = int(if l % 2 == 0 { 1 } else { -1 });
        hs(&x1, &x2, place)
            * hs(&(-(&x1 * &x2)), &x12, place)
            * hs(&minus_l, &disc, place)
            * hilbert_minus_one(place).pow(l * l.saturating_sub(1) / 2)
            * hasse
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Word,
    #[cfg(feature = "leray")]
    Leray,
    /// Word backend, falling back to Leray when it is built.
    Auto,
}

pub fn cocycle(g1: &SpElement, g2: &SpElement, place: Place, backend: Backend) -> Result<Sign> {
    match backend {
        Backend::Word => cocycle_rules(g1, g2, place),
        #[cfg(feature = "leray")]
        Backend::Leray => Ok(cocycle_leray(g1, g2, place)),
        Backend::Auto => match cocycle_rules(g1, g2, place) {
            #[cfg(feature = "leray")]
            Err(Error::Irreducible) => Ok(cocycle_leray(g1, g2, place)),
            other => other,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpElement {
    pub g: SpElement,
    pub eps: Sign,
    pub place: Place,
}

impl MpElement {
    pub fn new(g: SpElement, eps: Sign, place: Place) -> Self {
        Self { g, eps, place }
    }

    pub fn lift(g: SpElement, place: Place) -> Self {
        Self::new(g, Sign::Plus, place)
    }

    pub fn identity(n: usize, place: Place) -> Self {
        Self::lift(SpElement::identity(n), place)
    }

    /// The nontrivial central element `(1, −1)`.
    pub fn central(n: usize, place: Place) -> Self {
        Self::new(SpElement::identity(n), Sign::Minus, place)
    }
}

pub fn mp_multiply(x: &MpElement, y: &MpElement) -> Result<MpElement> {
    mp_multiply_with(x, y, Backend::Auto)
}

pub fn mp_multiply_with(x: &MpElement, y: &MpElement, backend: Backend) -> Result<MpElement> {
    if x.place != y.place {
        return domain("elements over different places");
    }
    let c = cocycle(&x.g, &y.g, x.place, backend)?;
    Ok(MpElement::new(&x.g * &y.g, x.eps * y.eps * c, x.place))
}

pub fn mp_invert(x: &MpElement) -> Result<MpElement> {
    mp_invert_with(x, Backend::Auto)
}

pub fn mp_invert_with(x: &MpElement, backend: Backend) -> Result<MpElement> {
    let inv = x.g.inverse();
    let c = cocycle(&x.g, &inv, x.place, backend)?;
    Ok(MpElement::new(inv, x.eps * c, x.place))
}

/// Product of the letters of `w`, each lifted with sign `+1`, using only
/// the rewrite rules.
pub fn lift_word(w: &FactoredWord, place: Place) -> Result<MpElement> {
    lift_elements(&w.letter_elements(), w.n, place)
}

pub(crate) fn lift_elements(letters: &[SpElement], n: usize, place: Place) -> Result<MpElement> {
    letters.iter().try_fold(MpElement::identity(n, place), |acc, g| {
        mp_multiply_with(&acc, &MpElement::lift(g.clone(), place), Backend::Word)
    })
}

/// An element of the determinant cover of `GL_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlElement {
    pub a: Matrix,
    pub eps: Sign,
    pub place: Place,
}

impl MlElement {
    pub fn new(a: Matrix, eps: Sign, place: Place) -> Result<Self> {
        if !a.is_square() || a.det() == int(0) {
            return domain("ML element needs an invertible square matrix");
        }
        Ok(Self { a, eps, place })
    }
}

pub fn ml_multiply(x: &MlElement, y: &MlElement) -> Result<MlElement> {
    if x.a.rows() != y.a.rows() {
        return shape("ML elements of different size");
    }
    if x.place != y.place {
        return domain("elements over different places");
    }
    let c = hs(&x.a.det(), &y.a.det(), x.place);
    Ok(MlElement {
        a: &x.a * &y.a,
        eps: x.eps * y.eps * c,
        place: x.place,
    })
}

impl Mul for &MlElement {
    type Output = MlElement;
    fn mul(self, rhs: &MlElement) -> MlElement {
        ml_multiply(self, rhs).expect("compatible ML elements")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgroup::{a_sign, generator, levi_n, Generator, SympSpace};

    const P2: Place = Place::Finite(2);
    const P3: Place = Place::Finite(3);

    fn subsets(n: usize) -> Vec<Vec<usize>> {
        (0..1u32 << n)
            .map(|m| (1..=n).filter(|i| m & (1 << (i - 1)) != 0).collect())
            .collect()
    }

    #[test]
    fn word_examples() {
        let s1 = FactoredWord::new(1, vec![Letter::Sigma(vec![1])]).unwrap();
        assert_eq!(cocycle_word(&s1, &s1, P2).unwrap(), Sign::Minus);
        assert_eq!(cocycle_word(&FactoredWord::empty(1), &s1, P2).unwrap(), Sign::Plus);
        let p = levi_n(&Matrix::from_i64(&[&[-1]])).unwrap();
        let wp = FactoredWord::new(1, vec![Letter::parabolic(p).unwrap()]).unwrap();
        let w = FactoredWord::new(1, vec![Letter::Sigma(vec![1]), Letter::parabolic(levi_n(&Matrix::from_i64(&[&[-1]])).unwrap()).unwrap()]).unwrap();
        let xw = x_value(&w.product());
        assert_eq!(cocycle_word(&w, &wp, P2).unwrap(), hs(&int(-1), &xw, P2));
    }

    #[test]
    fn sigma_products_reduce() {
        for n in 1..=3 {
            for s in subsets(n) {
                for t in subsets(n) {
                    let a = FactoredWord::new(n, vec![Letter::Sigma(s.clone())]).unwrap();
                    let b = FactoredWord::new(n, vec![Letter::Sigma(t.clone())]).unwrap();
                    for place in [P2, P3] {
                        assert_eq!(cocycle_word(&a, &b, place).unwrap(), sigma_cocycle(&s, &t, place));
                    }
                }
            }
        }
    }

    #[test]
    fn ml_examples() {
        let p5 = Place::Finite(5);
        let one = MlElement::new(Matrix::identity(1), Sign::Minus, p5).unwrap();
        assert_eq!((&one * &one).eps, Sign::Plus);
        let x = MlElement::new(Matrix::from_i64(&[&[5]]), Sign::Plus, p5).unwrap();
        let y = MlElement::new(Matrix::from_i64(&[&[2]]), Sign::Plus, p5).unwrap();
        let z = &x * &y;
        assert_eq!((z.a, z.eps), (Matrix::from_i64(&[&[10]]), Sign::Minus));
    }

    #[test]
    fn central_element_has_order_two() {
        let c = MpElement::central(2, P2);
        let sq = mp_multiply(&c, &c).unwrap();
        assert_eq!(sq, MpElement::identity(2, P2));
        let g = MpElement::lift(sigma(2, &[1]).unwrap(), P2);
        assert_eq!(mp_multiply(&c, &g).unwrap(), mp_multiply(&g, &c).unwrap());
        let inv = mp_invert(&g).unwrap();
        assert_eq!(mp_multiply(&g, &inv).unwrap(), MpElement::identity(2, P2));
    }

    #[test]
    fn commuting_pairs_are_symmetric() {
        let n = 2;
        let space = SympSpace::new(n).unwrap();
        let t = generator(&space, &Generator::Mn(Matrix::from_i64(&[&[3, 0], &[0, -2]]))).unwrap();
        let a = a_sign(n, &[1]).unwrap();
        let s = sigma(n, &[1, 2]).unwrap();
        for place in [P2, P3] {
            assert_eq!(cocycle_rules(&t, &a, place).unwrap(), cocycle_rules(&a, &t, place).unwrap());
            assert_eq!(cocycle_rules(&s, &a, place).unwrap(), cocycle_rules(&a, &s, place).unwrap());
        }
    }
}
