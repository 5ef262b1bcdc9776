use std::collections::BTreeMap;
use std::fmt::Display;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::random::*;
use super::{CaseRecord, Job, SuitePlan, SuiteParams};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mpcover::{
    cocycle_rules, cocycle_word, lift_word, ml_multiply, mp_invert, mp_multiply, FactoredWord,
    Letter, MlElement, MpElement,
};
use crate::qforms::{
    invariants, kashiwara_form, weil_index_form, witt_equivalent, Lagrangian, QuadForm,
};
use crate::rational::{int, Rational};
use crate::scalars::{
    hilbert, hilbert_minus_one, normalized_weil_index, square_class, weil_index,
    weil_index_oracle, AdditiveCharacter, Mu8, Place, Sign, SquareClass,
};
use crate::soodd::{max_isotropic_dim, orth_space, so_generator, SoElement, SoGenerator};
use crate::spgroup::{
    a_sign, bruhat_decompose, cell_rank, generator, j_matrix, sigma, x_function, Generator,
    SpElement, SympSpace,
};
use crate::weylreps::{
    ls_representative_mp, ls_representative_so, simple_reflection_rep, target_representative_mp,
    target_representative_so, wm_word, Group,
};

#[cfg(feature = "leray")]
use crate::mpcover::cocycle_leray;

type Params = BTreeMap<String, Value>;

macro_rules! params {
    ($($k:literal => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = Params::new();
        $(m.insert($k.to_string(), json!($v));)*
        m
    }};
}

fn exact<T: PartialEq + Display>(
    suite: &str,
    name: &str,
    params: Params,
    expected: Result<T>,
    computed: Result<T>,
) -> CaseRecord {
    let show = |r: &Result<T>| match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    };
    let diagnostic = match (&expected, &computed) {
        (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        _ => None,
    };
    let pass = matches!((&expected, &computed), (Ok(a), Ok(b)) if a == b);
    CaseRecord {
        suite: suite.to_string(),
        name: name.to_string(),
        params,
        expected: show(&expected),
        computed: show(&computed),
        pass,
        diagnostic,
    }
}

/// Many checks folded into one case; the first failure is kept verbatim.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    first: Option<(String, String, String)>,
}

impl Tally {
    fn check<T: PartialEq + Display>(&mut self, expected: T, computed: T, at: impl FnOnce() -> String) {
        self.checked += 1;
        if expected != computed {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some((expected.to_string(), computed.to_string(), at()));
            }
        }
    }

    fn check_result<T: PartialEq + Display>(
        &mut self,
        expected: Result<T>,
        computed: Result<T>,
        at: impl FnOnce() -> String,
    ) {
        match (expected, computed) {
            (Ok(e), Ok(c)) => self.check(e, c, at),
            (e, c) => {
                let show = |r: Result<T>| match r {
                    Ok(v) => v.to_string(),
                    Err(err) => format!("error: {err}"),
                };
                self.checked += 1;
                self.failed += 1;
                if self.first.is_none() {
                    self.first = Some((show(e), show(c), at()));
                }
            }
        }
    }

    fn record(self, suite: &str, name: &str, mut params: Params) -> CaseRecord {
        params.insert("checks".into(), json!(self.checked));
        let expected = format!("{} of {} hold", self.checked, self.checked);
        let (computed, diagnostic) = match self.first {
            None => (expected.clone(), None),
            Some((e, c, at)) => (
                format!("{} of {} hold", self.checked - self.failed, self.checked),
                Some(format!("first failure at {at}: expected {e}, computed {c}")),
            ),
        };
        CaseRecord {
            suite: suite.to_string(),
            name: name.to_string(),
            params,
            pass: self.failed == 0 && self.checked > 0,
            expected,
            computed,
            diagnostic,
        }
    }
}

struct Planner {
    suite: &'static str,
    jobs: Vec<Job>,
}

impl Planner {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            jobs: Vec::new(),
        }
    }

    fn add(&mut self, f: impl Fn(&mut ChaCha8Rng) -> CaseRecord + Send + Sync + 'static) {
        let index = self.jobs.len();
        self.jobs.push(Job {
            suite: self.suite,
            index,
            run: Box::new(f),
        });
    }

    fn finish(self, ops: &'static [&'static str]) -> SuitePlan {
        SuitePlan {
            jobs: self.jobs,
            ops,
        }
    }
}

pub(crate) fn plan(name: &str, params: &SuiteParams) -> SuitePlan {
    match name {
        "prop-ls-sp" => prop_ls_sp(params),
        "prop-ls-so" => prop_ls_so(params),
        "cocycle-table" => cocycle_table(params),
        "proof-chain" => proof_chain(params),
        "hilbert-laws" => hilbert_laws(params),
        "weil-oracle" => weil_oracle(params),
        "bruhat" => bruhat(params),
        "levi-cover" => levi_cover(params),
        "mp-associativity" => mp_associativity(params),
        other => unreachable!("unknown suite {other}"),
    }
}

fn finite(p: u64) -> Place {
    Place::Finite(p)
}

fn space(n: usize) -> SympSpace {
    SympSpace::new(n).expect("n >= 1")
}

fn gen(n: usize, spec: Generator) -> SpElement {
    generator(&space(n), &spec).expect("valid generator")
}

struct Shown<'a>(&'a MpElement);

impl Display for Shown<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.0.g.matrix(), self.0.eps)
    }
}

#[derive(Clone, PartialEq)]
struct Mp(MpElement);

impl Display for Mp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Shown(&self.0).fmt(f)
    }
}

#[derive(PartialEq)]
struct So(SoElement);

impl Display for So {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.matrix().fmt(f)
    }
}

#[derive(PartialEq)]
struct Sp(SpElement);

impl Display for Sp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.matrix().fmt(f)
    }
}

fn pm_one(k: usize) -> Rational {
    int(if k % 2 == 0 { 1 } else { -1 })
}

// ---------------------------------------------------------------- LS

fn prop_ls_sp(params: &SuiteParams) -> SuitePlan {
    const S: &str = "prop-ls-sp";
    let mut pl = Planner::new(S);
    for n in 1..=params.n_max {
        for k in params.ks(n) {
            for &p in &params.primes {
                pl.add(move |_| {
                    let place = finite(p);
                    let computed = wm_word(n, k).and_then(|w| ls_representative_mp(&w, place)).map(Mp);
                    let expected = target_representative_mp(n, k, place).map(Mp);
                    exact(S, "ls-equals-target", params!("n" => n, "k" => k, "p" => p), expected, computed)
                });
            }
            pl.add(move |_| {
                // (−1)^k [[0,0,−J],[0,1,0],[J,0,0]] = w_Y(k)·m((−1)^{k+1} J)
                let a = j_matrix(k, n).scale(&pm_one(k + 1));
                let computed = Ok(Sp(&gen(n, Generator::WY(k)) * &gen(n, Generator::M(a))));
                let expected = target_representative_mp(n, k, finite(2)).map(|t| Sp(t.g));
                exact(S, "target-block-form", params!("n" => n, "k" => k), expected, computed)
            });
        }
    }
    pl.finish(&[
        "wM_word",
        "root_vector",
        "exp_nilpotent",
        "ls_representative",
        "target_representative",
        "mp_multiply",
        "generator",
        "hilbert",
    ])
}

fn prop_ls_so(params: &SuiteParams) -> SuitePlan {
    const S: &str = "prop-ls-so";
    let mut pl = Planner::new(S);
    let place = finite(params.primes[0]);
    for n in 1..=params.n_max {
        for k in params.ks(n) {
            pl.add(move |_| {
                let computed = wm_word(n, k).and_then(|w| ls_representative_so(&w)).map(So);
                let expected = target_representative_so(n, k).map(So);
                exact(S, "ls-equals-target", params!("n" => n, "k" => k), expected, computed)
            });
            pl.add(move |_| {
                // (−1)^k [[0,0,J],[0,1,0],[J,0,0]] = w_X(k)·l((−1)^{k+1} J)
                let computed = orth_space(n, Sign::Plus, place).and_then(|v| {
                    let w = so_generator(&v, &SoGenerator::WX(k))?;
                    let a = j_matrix(k, n).scale(&pm_one(k + 1));
                    let l = so_generator(&v, &SoGenerator::L(a))?;
                    SoElement::new(&v, w.matrix() * l.matrix()).map(So)
                });
                let expected = target_representative_so(n, k).map(So);
                exact(S, "target-block-form", params!("n" => n, "k" => k), expected, computed)
            });
        }
    }
    pl.finish(&[
        "wM_word",
        "root_vector",
        "exp_nilpotent",
        "ls_representative",
        "target_representative",
        "orth_space",
        "so_generator",
    ])
}

// ---------------------------------------------------------------- cocycle table

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .map(|m| (1..=n).filter(|i| m & (1 << (i - 1)) != 0).collect())
        .collect()
}

fn sigma_word(n: usize, s: &[usize]) -> FactoredWord {
    FactoredWord::new(n, vec![Letter::Sigma(s.to_vec())]).expect("indices in range")
}

fn table_formula(s: &[usize], t: &[usize], place: Place) -> Sign {
    let j = s.iter().filter(|i| t.contains(i)).count() as u64;
    hilbert_minus_one(place).pow(j * (j + 1) / 2)
}

fn cocycle_table(params: &SuiteParams) -> SuitePlan {
    const S: &str = "cocycle-table";
    let mut pl = Planner::new(S);
    for n in 1..=params.n_max.min(3) {
        for &p in &params.primes {
            pl.add(move |_| {
                let place = finite(p);
                let mut t = Tally::default();
                for a in subsets(n) {
                    for b in subsets(n) {
                        let c = cocycle_word(&sigma_word(n, &a), &sigma_word(n, &b), place);
                        t.check_result(Ok(table_formula(&a, &b, place)), c, || format!("S={a:?} T={b:?}"));
                    }
                }
                t.record(S, "word-backend", params!("n" => n, "p" => p))
            });
            #[cfg(feature = "leray")]
            pl.add(move |_| {
                let place = finite(p);
                let mut t = Tally::default();
                for a in subsets(n) {
                    for b in subsets(n) {
                        let c = cocycle_leray(&sigma(n, &a).unwrap(), &sigma(n, &b).unwrap(), place);
                        t.check(table_formula(&a, &b, place), c, || format!("S={a:?} T={b:?}"));
                    }
                }
                t.record(S, "leray-backend", params!("n" => n, "p" => p))
            });
        }
    }
    pl.finish(&["cocycle_word", "cocycle_leray", "hilbert"])
}

// ---------------------------------------------------------------- proof chain

struct Chain {
    n: usize,
    k: usize,
    omega: Vec<SpElement>,
}

impl Chain {
    fn new(n: usize, k: usize) -> Self {
        let omega = (1..=n)
            .map(|i| SpElement::from_trusted(simple_reflection_rep(Group::Sp(n), i).expect("in range")))
            .collect();
        Self { n, k, omega }
    }

    fn w(&self, i: usize) -> &SpElement {
        &self.omega[i - 1]
    }

    fn prod<'a>(&self, it: impl IntoIterator<Item = &'a SpElement>) -> SpElement {
        it.into_iter().fold(SpElement::identity(self.n), |acc, g| &acc * g)
    }

    /// `ω_i ⋯ ω_{n−1} ω_n ω_{n−1} ⋯ ω_i`.
    fn v(&self, i: usize) -> SpElement {
        let idx: Vec<usize> = (i..=self.n).chain((i..self.n).rev()).collect();
        self.prod(idx.iter().map(|&j| self.w(j)))
    }

    /// `ω_{k−1} ⋯ ω_i`.
    fn u(&self, i: usize) -> SpElement {
        self.prod((i..self.k).rev().map(|j| self.w(j)))
    }

    /// `ω_{k−1}^{-1} ⋯ ω_i^{-1}`.
    fn z(&self, i: usize) -> SpElement {
        let inv: Vec<SpElement> = (i..self.k).rev().map(|j| self.w(j).inverse()).collect();
        self.prod(&inv)
    }

    fn a(&self, s: impl IntoIterator<Item = usize>) -> SpElement {
        a_sign(self.n, &s.into_iter().collect::<Vec<_>>()).expect("in range")
    }

    fn sigma(&self, s: impl IntoIterator<Item = usize>) -> SpElement {
        sigma(self.n, &s.into_iter().collect::<Vec<_>>()).expect("in range")
    }

    /// `a_{i+1..n} σ_i^{2(n−i−1)+1}`.
    fn v_closed(&self, i: usize) -> SpElement {
        let e = 2 * (self.n as i64 - i as i64 - 1) + 1;
        &self.a(i + 1..=self.n) * &self.sigma([i]).pow(e)
    }

    fn z_closed(&self, j: usize) -> SpElement {
        gen(self.n, Generator::Kappa { r: j - 1, l: self.k - j + 1 })
    }

    /// `a_i^{n−i+1} a_{i+1..n}`.
    fn p(&self, i: usize) -> SpElement {
        &self.a([i]).pow((self.n - i + 1) as i64) * &self.a(i + 1..=self.n)
    }

    /// `a_{i..k}^{n−i+1} a_{k+1..n}^{k−i+1}`.
    fn p_tail(&self, i: usize) -> SpElement {
        &self.a(i..=self.k).pow((self.n - i + 1) as i64) * &self.a(self.k + 1..=self.n).pow((self.k - i + 1) as i64)
    }

    fn parabolic(g: SpElement) -> Letter {
        Letter::parabolic(g).expect("parabolic")
    }
}

fn proof_chain(params: &SuiteParams) -> SuitePlan {
    const S: &str = "proof-chain";
    let mut pl = Planner::new(S);
    for n in 1..=params.n_max {
        pl.add(move |_| {
            let c = Chain::new(n, n);
            let mut t = Tally::default();
            for i in 1..=n {
                t.check(Sp(c.v_closed(i)), Sp(c.v(i)), || format!("i={i}"));
            }
            t.record(S, "v-closed-form", params!("n" => n))
        });
        for k in params.ks(n) {
            let ps = params!("n" => n, "k" => k);
            let p0 = ps.clone();
            pl.add(move |_| {
                let c = Chain::new(n, k);
                let mut t = Tally::default();
                for j in 1..k {
                    t.check(Sp(c.z_closed(j)), Sp(c.z(j)), || format!("j={j}"));
                }
                t.check(true, true, String::new);
                t.record(S, "z-closed-form", p0.clone())
            });
            let p1 = ps.clone();
            pl.add(move |_| {
                let c = Chain::new(n, k);
                let mut t = Tally::default();
                for j in 1..k {
                    for i in 1..j {
                        t.check(Sp(&c.z(j) * &c.v(i)), Sp(&c.v(i) * &c.z(j)), || format!("i={i} j={j}"));
                    }
                }
                t.check(true, true, String::new);
                t.record(S, "v-z-commute", p1.clone())
            });
            let p2 = ps.clone();
            pl.add(move |_| {
                let c = Chain::new(n, k);
                let mut t = Tally::default();
                for i in 1..k {
                    t.check(Sp(&c.z(i) * &c.v(i)), Sp(&c.v(k) * &c.u(i)), || format!("i={i}"));
                }
                t.check(true, true, String::new);
                t.record(S, "vk-u-equals-z-v", p2.clone())
            });
            let p3 = ps.clone();
            pl.add(move |_| {
                let c = Chain::new(n, k);
                let mut t = Tally::default();
                for i in 1..=k {
                    let tail = c.prod(&(i..=k).map(|j| c.v(j)).collect::<Vec<_>>());
                    t.check(Sp(&c.sigma(i..=k) * &c.p_tail(i)), Sp(tail), || format!("tail i={i}"));
                    t.check(Sp(&c.p(i) * &c.sigma([i])), Sp(c.v(i)), || format!("head i={i}"));
                }
                t.record(S, "v-factorizations", p3.clone())
            });
            let p4 = ps.clone();
            pl.add(move |_| {
                let c = Chain::new(n, k);
                let mut lhs = SpElement::identity(n);
                for i in 1..k {
                    lhs = &(&lhs * &c.v(k)) * &c.u(i);
                }
                lhs = &lhs * &c.v(k);
                let zs: Vec<SpElement> = (1..k).map(|j| c.z(j)).collect();
                let vs: Vec<SpElement> = (1..=k).map(|j| c.v(j)).collect();
                let rhs = &c.prod(&zs) * &c.prod(&vs);
                exact(S, "w-reordering", p4.clone(), Ok(Sp(lhs)), Ok(Sp(rhs)))
            });
            for &p in &params.primes {
                let place = finite(p);
                pl.add(move |_| {
                    let c = Chain::new(n, k);
                    let letters = (1..k).map(|j| Chain::parabolic(c.z(j))).collect();
                    let computed = FactoredWord::new(n, letters)
                        .and_then(|w| lift_word(&w, place))
                        .map(Mp);
                    let j = j_matrix(k, n).scale(&pm_one(n + k));
                    let target = gen(n, Generator::Iota { r: 0, a: j });
                    let expected = Ok(Mp(MpElement::new(target, Sign::Plus, place)));
                    exact(S, "z-product", params!("n" => n, "k" => k, "p" => p), expected, computed)
                });
                pl.add(move |_| {
                    let c = Chain::new(n, k);
                    let mut letters = Vec::new();
                    for i in 1..=k {
                        letters.push(Chain::parabolic(c.p(i)));
                        letters.push(Letter::Sigma(vec![i]));
                    }
                    let computed = FactoredWord::new(n, letters)
                        .and_then(|w| lift_word(&w, place))
                        .map(Mp);
                    let g = &c.sigma(1..=k).pow(2 * n as i64 + 1) * &c.a(k + 1..=n).pow(k as i64);
                    let eps = hilbert_minus_one(place).pow((k * (k - 1) / 2) as u64);
                    let expected = Ok(Mp(MpElement::new(g, eps, place)));
                    exact(S, "v-product", params!("n" => n, "k" => k, "p" => p), expected, computed)
                });
                pl.add(move |_| {
                    let c = Chain::new(n, k);
                    let mut t = Tally::default();
                    for i in 1..k {
                        let head = FactoredWord::new(
                            n,
                            vec![Chain::parabolic(c.p(i)), Letter::Sigma(vec![i])],
                        );
                        let tail = FactoredWord::new(
                            n,
                            vec![Letter::Sigma((i + 1..=k).collect()), Chain::parabolic(c.p_tail(i + 1))],
                        );
                        let computed = match (head, tail) {
                            (Ok(h), Ok(tl)) => {
                                let rest = c.prod(&(i + 1..=k).map(|j| c.v(j)).collect::<Vec<_>>());
                                if h.product() != c.v(i) || tl.product() != rest {
                                    Err(Error::Domain("word does not spell the chain element".into()))
                                } else {
                                    cocycle_word(&h, &tl, place)
                                }
                            }
                            (Err(e), _) | (_, Err(e)) => Err(e),
                        };
                        let expected = hilbert_minus_one(place).pow((k + i) as u64);
                        t.check_result(Ok(expected), computed, || format!("i={i}"));
                    }
                    t.check(true, true, String::new);
                    t.record(S, "v-tail-cocycle", params!("n" => n, "k" => k, "p" => p))
                });
            }
        }
    }
    pl.finish(&[
        "generator",
        "root_vector",
        "exp_nilpotent",
        "cocycle_word",
        "lift_word",
        "mp_multiply",
        "bruhat_decompose",
        "hilbert",
    ])
}

// ---------------------------------------------------------------- Hilbert symbols

fn places(params: &SuiteParams) -> Vec<Place> {
    params
        .primes
        .iter()
        .map(|&p| finite(p))
        .chain(std::iter::once(Place::Real))
        .collect()
}

fn place_json(place: Place) -> Value {
    json!(place.to_string())
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn support(r: &Rational) -> Vec<u64> {
    let conv = |x: &num_bigint::BigInt| -> u64 { x.magnitude().try_into().expect("bounded entries") };
    let mut v = prime_factors(conv(r.numer()));
    v.extend(prime_factors(conv(r.denom())));
    v
}

fn hilbert_laws(params: &SuiteParams) -> SuitePlan {
    const S: &str = "hilbert-laws";
    let mut pl = Planner::new(S);
    let trials = params.trials;
    for place in places(params) {
        let pj = place_json(place);
        let p0 = pj.clone();
        pl.add(move |_| {
            let mut t = Tally::default();
            let classes = SquareClass::all(place);
            for a in &classes {
                for b in &classes {
                    let (x, y) = (a.representative(), b.representative());
                    t.check(hilbert(x, y, place).unwrap(), hilbert(y, x, place).unwrap(), || format!("a={a} b={b}"));
                }
            }
            t.record(S, "symmetry", params!("place" => p0.clone()))
        });
        let p1 = pj.clone();
        pl.add(move |_| {
            let mut t = Tally::default();
            let classes = SquareClass::all(place);
            for a in &classes {
                for a2 in &classes {
                    for b in &classes {
                        let (x, x2, y) = (a.representative(), a2.representative(), b.representative());
                        let lhs = hilbert(&(x * x2), y, place).unwrap();
                        let rhs = hilbert(x, y, place).unwrap() * hilbert(x2, y, place).unwrap();
                        t.check(rhs, lhs, || format!("a={a} a'={a2} b={b}"));
                    }
                }
            }
            t.record(S, "bimultiplicativity", params!("place" => p1.clone()))
        });
        let p2 = pj.clone();
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..trials {
                let a = random_rational(rng, 1000);
                t.check(Sign::Plus, hilbert(&a, &-&a, place).unwrap(), || format!("(a,-a) a={a}"));
                let b = int(1) - &a;
                if b != int(0) {
                    t.check(Sign::Plus, hilbert(&a, &b, place).unwrap(), || format!("(a,1-a) a={a}"));
                }
            }
            t.record(S, "steinberg", params!("place" => p2.clone(), "samples" => trials))
        });
        let p3 = pj.clone();
        pl.add(move |rng| {
            let mut t = Tally::default();
            let classes = SquareClass::all(place);
            for _ in 0..trials {
                let a = random_rational(rng, 1000);
                let c = square_class(&a, place).unwrap();
                t.check(true, classes.contains(&c), || format!("canonical a={a}"));
                let ratio = &a / c.representative();
                t.check(true, square_class(&ratio, place).unwrap().is_trivial(), || format!("ratio a={a}"));
            }
            t.record(S, "square-class", params!("place" => p3.clone(), "samples" => trials))
        });
    }
    let pairs = 2 * trials;
    pl.add(move |rng| {
        let mut t = Tally::default();
        for _ in 0..pairs {
            let a = random_rational(rng, 1_000_000);
            let b = random_rational(rng, 1_000_000);
            let mut primes = vec![2];
            primes.extend(support(&a));
            primes.extend(support(&b));
            primes.sort_unstable();
            primes.dedup();
            let prod: Sign = primes
                .iter()
                .map(|&p| hilbert(&a, &b, finite(p)).unwrap())
                .product::<Sign>()
                * hilbert(&a, &b, Place::Real).unwrap();
            t.check(Sign::Plus, prod, || format!("a={a} b={b}"));
        }
        t.record(S, "product-formula", params!("samples" => pairs))
    });
    pl.finish(&["square_class", "hilbert"])
}

// ---------------------------------------------------------------- Weil indices

fn random_form(rng: &mut ChaCha8Rng, dim: usize) -> QuadForm {
    loop {
        let q = QuadForm::new(random_symmetric(rng, dim)).expect("symmetric");
        if q.is_nondegenerate() {
            return q;
        }
    }
}

fn weil_oracle(params: &SuiteParams) -> SuitePlan {
    const S: &str = "weil-oracle";
    let mut pl = Planner::new(S);
    let samples = (params.trials * 2 / 5).max(1);
    let small = (params.trials / 10).max(1);
    for &p in &params.primes {
        let place = finite(p);
        pl.add(move |_| {
            let mut t = Tally::default();
            let mut worst = 0.0f64;
            for shift in [int(1), int(p as i64), int(-1)] {
                let psi = AdditiveCharacter::new(place, shift.clone()).unwrap();
                for a in SquareClass::all(place) {
                    let a = a.representative();
                    let oracle = weil_index_oracle(a, &psi);
                    if let Ok(r) = &oracle {
                        worst = worst.max(r.residual);
                    }
                    t.check_result(oracle.map(|r| r.value), weil_index(a, &psi), || format!("a={a} c={shift}"));
                }
            }
            let mut rec = t.record(S, "closed-vs-oracle", params!("p" => p));
            rec.params.insert("residual_below_1e-6".into(), json!(worst < 1e-6));
            rec.pass &= worst < 1e-6;
            rec
        });
        pl.add(move |_| {
            let mut t = Tally::default();
            let psi = AdditiveCharacter::standard(place).unwrap();
            let classes = SquareClass::all(place);
            for a in &classes {
                for b in &classes {
                    let (x, y) = (a.representative(), b.representative());
                    let g = |v: &Rational| normalized_weil_index(v, &psi).unwrap();
                    let lhs = g(x) * g(y) / g(&(x * y));
                    t.check(Mu8::from(hilbert(x, y, place).unwrap()), lhs, || format!("a={a} b={b}"));
                }
                let n4 = normalized_weil_index(a.representative(), &psi).unwrap().pow(4);
                t.check(Mu8::ONE, n4, || format!("fourth power a={a}"));
            }
            t.record(S, "normalized-vs-hilbert", params!("p" => p))
        });
        pl.add(move |_| {
            let mut t = Tally::default();
            let psi = AdditiveCharacter::standard(place).unwrap();
            let g1 = weil_index(&int(1), &psi).unwrap();
            for n in 1..=3 {
                for eps in [Sign::Plus, Sign::Minus] {
                    let at = || format!("n={n} eps={eps}");
                    match orth_space(n, eps, place) {
                        Ok(v) => {
                            t.check_result(Ok(g1 * Mu8::from(eps)), weil_index_form(&v.form(), &psi), at);
                            let iso = if eps == Sign::Plus { n } else { n - 1 };
                            t.check(iso, max_isotropic_dim(&v), at);
                            let disc = crate::qforms::signed_discriminant(&v.form(), place);
                            t.check(true, disc.is_trivial(), at);
                        }
                        Err(e) => t.check_result(Ok(g1), Err::<Mu8, _>(e), at),
                    }
                }
            }
            t.record(S, "space-epsilon", params!("p" => p))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            let psi = AdditiveCharacter::standard(place).unwrap();
            for _ in 0..samples {
                let d1 = rng.gen_range(1..=3);
                let d2 = rng.gen_range(1..=3);
                let (q1, q2) = (random_form(rng, d1), random_form(rng, d2));
                let lhs = weil_index_form(&q1.orthogonal_sum(&q2), &psi);
                let rhs = weil_index_form(&q1, &psi).and_then(|a| Ok(a * weil_index_form(&q2, &psi)?));
                t.check_result(rhs, lhs, || format!("{} ⊥ {}", q1.gram(), q2.gram()));
            }
            t.record(S, "form-multiplicativity", params!("p" => p, "samples" => samples))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            let psi = AdditiveCharacter::standard(place).unwrap();
            for _ in 0..samples {
                let d = rng.gen_range(1..=6);
                let q = random_form(rng, d);
                let q2 = q.change_basis(&random_gl(rng, d));
                let at = || format!("{}", q.gram());
                t.check(invariants(&q, place).hasse, invariants(&q2, place).hasse, at);
                t.check(invariants(&q, place).disc, invariants(&q2, place).disc, at);
                t.check_result(weil_index_form(&q, &psi), weil_index_form(&q2, &psi), at);
            }
            t.record(S, "form-basis-independence", params!("p" => p, "samples" => samples))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            let psi = AdditiveCharacter::standard(place).unwrap();
            for _ in 0..small {
                let d = rng.gen_range(1..=4);
                let q = random_form(rng, d);
                let (a, b) = (rng.gen_range(0..3), rng.gen_range(0..3));
                let qa = q.orthogonal_sum(&QuadForm::hyperbolic(a));
                let qb = q.change_basis(&random_gl(rng, d)).orthogonal_sum(&QuadForm::hyperbolic(b));
                let at = || format!("{} H^{a} vs H^{b}", q.gram());
                t.check(true, witt_equivalent(&qa, &qb, place), at);
                t.check(true, witt_equivalent(&qb, &qa, place), at);
                t.check_result(weil_index_form(&qa, &psi), weil_index_form(&qb, &psi), at);
            }
            t.record(S, "witt-padding", params!("p" => p, "samples" => small))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..small {
                let n = rng.gen_range(1..=2);
                let y = Lagrangian::y(n);
                let ls: Vec<Lagrangian> = (0..3).map(|_| y.translate(random_sp(rng, n, 6).matrix())).collect();
                let k = |a: usize, b: usize, c: usize| kashiwara_form(&ls[a], &ls[b], &ls[c]).unwrap();
                let at = || format!("n={n}");
                t.check(true, witt_equivalent(&k(0, 1, 2), &k(1, 2, 0), place), at);
                t.check(true, witt_equivalent(&k(1, 0, 2), &k(0, 1, 2).negated(), place), at);
                t.check(true, witt_equivalent(&k(0, 0, 1), &QuadForm::zero(0), place), at);
            }
            t.record(S, "kashiwara", params!("p" => p, "samples" => small))
        });
    }
    pl.finish(&[
        "square_class",
        "hilbert",
        "weil_index_oracle",
        "weil_index",
        "normalized_weil_index",
        "diagonalize",
        "invariants",
        "witt_equivalent",
        "weil_index_form",
        "kashiwara_form",
        "orth_space",
        "max_isotropic_dim",
    ])
}

// ---------------------------------------------------------------- Bruhat

fn bruhat(params: &SuiteParams) -> SuitePlan {
    const S: &str = "bruhat";
    let mut pl = Planner::new(S);
    let n_max = params.n_max;
    let recon = 2 * params.trials;
    let inv = (params.trials * 2 / 5).max(1);
    pl.add(move |rng| {
        let mut t = Tally::default();
        for _ in 0..recon {
            let n = rng.gen_range(1..=n_max);
            let g = random_sp(rng, n, 8);
            let b = bruhat_decompose(&g);
            let at = || format!("g={}", g.matrix());
            t.check(true, b.p1.in_siegel_parabolic() && b.p2.in_siegel_parabolic(), at);
            t.check(Sp(g.clone()), Sp(b.reconstruct()), at);
            t.check(cell_rank(&g), b.s.len(), at);
        }
        t.record(S, "reconstruction", params!("samples" => recon, "n_max" => n_max))
    });
    for &p in &params.primes {
        let place = finite(p);
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..inv {
                let n = rng.gen_range(1..=n_max);
                let g = random_sp(rng, n, 8);
                let (q1, q2) = (random_parabolic(rng, n, 4), random_parabolic(rng, n, 4));
                let lhs = x_function(&(&(&q1 * &g) * &q2), place);
                let rhs = &(&x_function(&q1, place) * &x_function(&g, place)) * &x_function(&q2, place);
                t.check(rhs, lhs, || format!("g={} p={} p'={}", g.matrix(), q1.matrix(), q2.matrix()));
            }
            t.record(S, "x-invariance", params!("p" => p, "samples" => inv, "n_max" => n_max))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for n in 1..=n_max {
                let w = gen(n, Generator::WY(n));
                t.check(square_class(&pm_one(n), place).unwrap(), x_function(&w, place), || format!("w_Y n={n}"));
                for s in subsets(n) {
                    let sg = sigma(n, &s).unwrap();
                    t.check(square_class(&int(1), place).unwrap(), x_function(&sg, place), || format!("sigma {s:?}"));
                }
                let a = random_gl(rng, n);
                let m = gen(n, Generator::Mn(a.clone()));
                t.check(square_class(&a.det(), place).unwrap(), x_function(&m, place), || format!("m_n({a})"));
            }
            t.record(S, "x-examples", params!("p" => p, "n_max" => n_max))
        });
    }
    pl.finish(&["generator", "bruhat_decompose", "x_function", "square_class"])
}

// ---------------------------------------------------------------- cover laws

fn levi_cover(params: &SuiteParams) -> SuitePlan {
    const S: &str = "levi-cover";
    let mut pl = Planner::new(S);
    let n_max = params.n_max;
    let trials = params.trials;
    let small = (trials / 10).max(1);
    for &p in &params.primes {
        let place = finite(p);
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..trials {
                let n = rng.gen_range(1..=n_max);
                let k = rng.gen_range(1..=n);
                let r = rng.gen_range(0..=n - k);
                let (a, a2) = (random_gl(rng, k), random_gl(rng, k));
                let g = gen(n, Generator::Iota { r, a: a.clone() });
                let g2 = gen(n, Generator::Iota { r, a: a2.clone() });
                let at = || format!("a={a} a'={a2} r={r}");
                let expected = hilbert(&a.det(), &a2.det(), place).unwrap();
                t.check_result(Ok(expected), cocycle_rules(&g, &g2, place), at);
                #[cfg(feature = "leray")]
                t.check(expected, cocycle_leray(&g, &g2, place), at);
                let ml = ml_multiply(
                    &MlElement::new(a.clone(), Sign::Plus, place).unwrap(),
                    &MlElement::new(a2.clone(), Sign::Plus, place).unwrap(),
                )
                .unwrap();
                let mp = mp_multiply(&MpElement::lift(g.clone(), place), &MpElement::lift(g2.clone(), place)).map(|x| x.eps);
                t.check_result(Ok(ml.eps), mp, at);
            }
            t.record(S, "levi-restriction", params!("p" => p, "samples" => trials))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..trials {
                let n = rng.gen_range(1..=n_max);
                let k = rng.gen_range(1..=n);
                let u = random_unipotent(rng, n, k, 3);
                let u2 = random_unipotent(rng, n, k, 3);
                let at = || format!("n={n} k={k} u={} u'={}", u.matrix(), u2.matrix());
                let prod = mp_multiply(&MpElement::lift(u.clone(), place), &MpElement::lift(u2.clone(), place)).map(Mp);
                t.check_result(Ok(Mp(MpElement::lift(&u * &u2, place))), prod, at);
                #[cfg(feature = "leray")]
                t.check(Sign::Plus, cocycle_leray(&u, &u2, place), at);
            }
            t.record(S, "unipotent-splitting", params!("p" => p, "samples" => trials))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..small {
                let k = rng.gen_range(1..=3);
                let a = random_gl(rng, k);
                let x = MlElement::new(a.clone(), Sign::Plus, place).unwrap();
                let y = MlElement::new(a.inverse().unwrap(), Sign::Plus, place).unwrap();
                let z = ml_multiply(&x, &y).unwrap();
                let expected = hilbert(&a.det(), &a.inverse().unwrap().det(), place).unwrap();
                t.check(true, z.a.is_identity(), || format!("a={a}"));
                t.check(expected, z.eps, || format!("a={a}"));
                let c = MlElement::new(Matrix::identity(k), Sign::Minus, place).unwrap();
                t.check(Sign::Plus, ml_multiply(&c, &c).unwrap().eps, || "central".into());
            }
            t.record(S, "ml-law", params!("p" => p, "samples" => small))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..small {
                let n = rng.gen_range(1..=n_max);
                let c = MpElement::central(n, place);
                let one = MpElement::identity(n, place);
                t.check_result(Ok(Mp(one)), mp_multiply(&c, &c).map(Mp), || format!("square n={n}"));
                let g = MpElement::lift(random_monomial(rng, n, 4), place);
                let left = mp_multiply(&c, &g).map(Mp);
                let right = mp_multiply(&g, &c).map(Mp);
                let flipped = MpElement::new(g.g.clone(), g.eps * Sign::Minus, place);
                t.check_result(left, right, || format!("commute g={}", g.g.matrix()));
                t.check_result(Ok(Mp(flipped)), mp_multiply(&c, &g).map(Mp), || format!("g={}", g.g.matrix()));
            }
            t.record(S, "central", params!("p" => p, "samples" => small))
        });
    }
    pl.finish(&["generator", "ml_multiply", "mp_multiply", "cocycle_leray", "hilbert"])
}

/// Word in sigma letters and monomial parabolic letters.
fn monomial_letters(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Letter::Sigma(random_subset(rng, n)),
            1 => Letter::parabolic(a_sign(n, &random_subset(rng, n)).unwrap()).unwrap(),
            _ => Letter::parabolic(gen(n, Generator::Mn(random_monomial_gl(rng, n)))).unwrap(),
        })
        .collect()
}

fn word(n: usize, letters: Vec<Letter>) -> FactoredWord {
    FactoredWord::new(n, letters).expect("valid letters")
}

fn concat(a: &FactoredWord, b: &FactoredWord) -> FactoredWord {
    word(a.n(), a.letters().iter().chain(b.letters()).cloned().collect())
}

/// `(p·m1, m2, m3·p′)` with `p, p′` general parabolic and `m_i` monomial;
/// resampled until every pair needed by the cocycle identity reduces.
fn reducible_triple(rng: &mut ChaCha8Rng, n: usize, place: Place) -> Option<([FactoredWord; 3], [Sign; 4])> {
    for _ in 0..20 {
        let mut l1 = Vec::new();
        if rng.gen_bool(0.5) {
            l1.push(Letter::parabolic(random_parabolic(rng, n, 3)).unwrap());
        }
        l1.extend(monomial_letters(rng, n, 3));
        let l2 = monomial_letters(rng, n, 3);
        let mut l3 = monomial_letters(rng, n, 3);
        if rng.gen_bool(0.5) {
            l3.push(Letter::parabolic(random_parabolic(rng, n, 3)).unwrap());
        }
        let (w1, w2, w3) = (word(n, l1), word(n, l2), word(n, l3));
        let c = (
            cocycle_word(&w1, &w2, place),
            cocycle_word(&concat(&w1, &w2), &w3, place),
            cocycle_word(&w1, &concat(&w2, &w3), place),
            cocycle_word(&w2, &w3, place),
        );
        if let (Ok(a), Ok(b), Ok(c), Ok(d)) = c {
            return Some(([w1, w2, w3], [a, b, c, d]));
        }
    }
    None
}

fn mp_associativity(params: &SuiteParams) -> SuitePlan {
    const S: &str = "mp-associativity";
    let mut pl = Planner::new(S);
    let n_max = params.n_max;
    let trials = params.trials;
    let small = (trials / 5).max(1);
    for &p in &params.primes {
        let place = finite(p);
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..trials {
                let n = rng.gen_range(1..=n_max);
                match reducible_triple(rng, n, place) {
                    Some((_, [a, b, c, d])) => t.check(c * d, a * b, || format!("n={n}")),
                    None => t.check_result(Ok(Sign::Plus), Err(Error::Irreducible), || format!("n={n}: no reducible triple")),
                }
            }
            t.record(S, "cocycle-identity-word", params!("p" => p, "samples" => trials))
        });
        #[cfg(feature = "leray")]
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..trials {
                let n = rng.gen_range(1..=n_max);
                let g: Vec<SpElement> = (0..3).map(|_| random_sp(rng, n, 8)).collect();
                let c = |x: &SpElement, y: &SpElement| cocycle_leray(x, y, place);
                let lhs = c(&g[0], &g[1]) * c(&(&g[0] * &g[1]), &g[2]);
                let rhs = c(&g[0], &(&g[1] * &g[2])) * c(&g[1], &g[2]);
                t.check(lhs, rhs, || format!("{} {} {}", g[0].matrix(), g[1].matrix(), g[2].matrix()));
            }
            t.record(S, "cocycle-identity-leray", params!("p" => p, "samples" => trials))
        });
        #[cfg(feature = "leray")]
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..trials {
                let n = rng.gen_range(1..=n_max);
                match reducible_triple(rng, n, place) {
                    Some(([w1, w2, _], [c, ..])) => {
                        t.check(c, cocycle_leray(&w1.product(), &w2.product(), place), || {
                            format!("{} {}", w1.product().matrix(), w2.product().matrix())
                        })
                    }
                    None => t.check_result(Ok(Sign::Plus), Err(Error::Irreducible), || format!("n={n}")),
                }
            }
            t.record(S, "cross-backend", params!("p" => p, "samples" => trials))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..100 {
                let n = rng.gen_range(1..=n_max);
                let g = random_sp(rng, n, 8);
                let one = SpElement::identity(n);
                let at = || format!("g={}", g.matrix());
                t.check_result(Ok(Sign::Plus), cocycle_rules(&one, &g, place), at);
                t.check_result(Ok(Sign::Plus), cocycle_rules(&g, &one, place), at);
                #[cfg(feature = "leray")]
                {
                    t.check(Sign::Plus, cocycle_leray(&one, &g, place), at);
                    t.check(Sign::Plus, cocycle_leray(&g, &one, place), at);
                }
                let e = FactoredWord::empty(n);
                let wg = word(n, monomial_letters(rng, n, 3));
                t.check_result(Ok(Sign::Plus), cocycle_word(&e, &wg, place), at);
            }
            t.record(S, "normalization", params!("p" => p, "samples" => 100))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..small {
                let n = rng.gen_range(1..=n_max);
                let pick = |r: &mut ChaCha8Rng| match r.gen_range(0..3) {
                    0 => gen(n, Generator::Mn(random_torus(r, n))),
                    1 => a_sign(n, &random_subset(r, n)).unwrap(),
                    _ => sigma(n, &random_subset(r, n)).unwrap(),
                };
                let (g, h) = (pick(rng), pick(rng));
                if !g.commutes_with(&h) {
                    continue;
                }
                let at = || format!("g={} h={}", g.matrix(), h.matrix());
                t.check_result(cocycle_rules(&g, &h, place), cocycle_rules(&h, &g, place), at);
                #[cfg(feature = "leray")]
                t.check(cocycle_leray(&g, &h, place), cocycle_leray(&h, &g, place), at);
            }
            t.check(true, true, String::new);
            t.record(S, "commuting-symmetry", params!("p" => p, "samples" => small))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..small {
                let n = rng.gen_range(1..=n_max);
                let g = if rng.gen_bool(0.5) { random_monomial(rng, n, 4) } else { random_sp(rng, n, 6) };
                let eps = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                let x = MpElement::new(g, eps, place);
                let at = || format!("g={}", x.g.matrix());
                let one = Ok(Mp(MpElement::identity(n, place)));
                let both = mp_invert(&x).and_then(|inv| {
                    Ok((mp_multiply(&x, &inv)?, mp_multiply(&inv, &x)?))
                });
                match both {
                    Ok((a, b)) => {
                        t.check_result(one.clone(), Ok(Mp(a)), at);
                        t.check_result(one, Ok(Mp(b)), at);
                    }
                    Err(e) => t.check_result(one, Err(e), at),
                }
            }
            t.record(S, "mp-inverse", params!("p" => p, "samples" => small))
        });
        pl.add(move |rng| {
            let mut t = Tally::default();
            for _ in 0..small {
                let n = rng.gen_range(1..=n_max);
                let w1 = word(n, monomial_letters(rng, n, 4));
                let w2 = word(n, monomial_letters(rng, n, 4));
                let whole = lift_word(&concat(&w1, &w2), place).map(Mp);
                let split = lift_word(&w1, place)
                    .and_then(|a| Ok((a, lift_word(&w2, place)?)))
                    .and_then(|(a, b)| mp_multiply(&a, &b))
                    .map(Mp);
                t.check_result(split, whole, || format!("n={n}"));
            }
            t.record(S, "lift-word", params!("p" => p, "samples" => small))
        });
    }
    pl.finish(&["cocycle_word", "cocycle_leray", "mp_multiply", "mp_invert", "lift_word"])
}
