//! Finite Gauss-sum evaluation of `γ(ψ_a)`.
//!
//! The sum runs over `x ∈ p^{-m}Z_p / p^{m'}Z_p` of `exp(2πi{c a x²}_p)`;
//! `m'` is the smallest exponent that makes the summand well defined on
//! cosets. The phase of the sum is snapped to the nearest eighth root of
//! unity.

use num_traits::Zero;

use super::{AdditiveCharacter, Mu8};
use crate::error::{domain, Error, Result};
use crate::rational::{mulmod, split_valuation, unit_residue, Rational};

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Largest number of terms a single level may sum.
    pub max_terms: u128,
    /// Largest snap distance accepted.
    pub snap_tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_terms: 1 << 24,
            snap_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleReading {
    pub value: Mu8,
    /// Distance between the normalized sum and `value` on the unit circle.
    pub residual: f64,
    /// Lattice exponent `m` of the last level summed.
    pub level: u32,
}

pub fn weil_index_oracle(a: &Rational, psi: &AdditiveCharacter) -> Result<OracleReading> {
    weil_index_oracle_with(a, psi, &OracleConfig::default())
}

pub fn weil_index_oracle_with(
    a: &Rational,
    psi: &AdditiveCharacter,
    cfg: &OracleConfig,
) -> Result<OracleReading> {
    if a.is_zero() {
        return domain("Weil index of the zero form");
    }
    let p = psi.prime();
    let b = psi.shift() * a;
    let (v, u) = split_valuation(&b, p);
    let v2 = i64::from(p == 2);
    // shells beyond this radius integrate to zero
    let start = (v.div_euclid(2) + v.rem_euclid(2) + v2 + 1).max(1) as u32;

    let mut prev: Option<OracleReading> = None;
    let mut m = start;
    loop {
        let reading = level_sum(p, v, &u, m, cfg)?;
        if let Some(prev) = prev {
            if prev.value == reading.value {
                return Ok(reading);
            }
        }
        prev = Some(reading);
        m = m.checked_mul(2).ok_or(Error::OracleUnstable(cfg.max_terms))?;
    }
}

fn level_sum(p: u64, v: i64, u: &Rational, m: u32, cfg: &OracleConfig) -> Result<OracleReading> {
    let v2 = i64::from(p == 2);
    let m_fine = (m as i64 - v - v2).max(0) as u32;
    let terms = (p as u128).checked_pow(m + m_fine);
    let terms = match terms {
        Some(t) if t <= cfg.max_terms => t as u64,
        _ => return Err(Error::OracleUnstable(cfg.max_terms)),
    };
    // b x² with x = k p^{-m} equals u k² / p^{2m - v}
    let e = 2 * m as i64 - v;
    let (re, im) = if e <= 0 {
        (terms as f64, 0.0)
    } else {
        let modulus = (p as u128)
            .checked_pow(e as u32)
            .filter(|&q| q <= u64::MAX as u128)
            .ok_or(Error::OracleUnstable(cfg.max_terms))? as u64;
        let ur = unit_residue(u, modulus);
        let scale = std::f64::consts::TAU / modulus as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..terms {
            let kk = k % modulus;
            let r = mulmod(ur, mulmod(kk, kk, modulus), modulus);
            let t = scale * r as f64;
            re += t.cos();
            im += t.sin();
        }
        (re, im)
    };
    let norm = re.hypot(im);
    if norm < 1e-9 * terms as f64 {
        return Err(Error::OracleUnstable(cfg.max_terms));
    }
    let (zr, zi) = (re / norm, im / norm);
    let k = (zi.atan2(zr) / (std::f64::consts::PI / 4.0)).round() as i64;
    let value = Mu8::new(k);
    let (wr, wi) = value.to_complex();
    let residual = (zr - wr).hypot(zi - wi);
    if residual >= cfg.snap_tolerance {
        return Err(Error::SnapFailure(residual));
    }
    Ok(OracleReading {
        value,
        residual,
        level: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::scalars::Place;

    #[test]
    fn invariant_under_square_scaling() {
        for p in [2u64, 3, 5] {
            let psi = AdditiveCharacter::standard(Place::Finite(p)).unwrap();
            for a in [1i64, -1, 2, 3, 5, 6, 10] {
                let base = weil_index_oracle(&int(a), &psi).unwrap().value;
                for t in [frac(1, 1), frac(2, 3), frac(5, 1), frac(1, 2)] {
                    let scaled = weil_index_oracle(&(int(a) * &t * &t), &psi).unwrap().value;
                    assert_eq!(base, scaled, "p={p} a={a} t={t}");
                }
            }
        }
    }

    #[test]
    fn hyperbolic_product_is_one() {
        for p in [2u64, 3, 5] {
            let psi = AdditiveCharacter::standard(Place::Finite(p)).unwrap();
            for a in [1i64, 2, 3, 5, 7, 10] {
                let g = weil_index_oracle(&int(a), &psi).unwrap().value
                    * weil_index_oracle(&int(-a), &psi).unwrap().value;
                assert_eq!(g, Mu8::ONE);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let psi = AdditiveCharacter::standard(Place::Finite(3)).unwrap();
        let cfg = OracleConfig {
            max_terms: 10,
            ..OracleConfig::default()
        };
        assert!(matches!(
            weil_index_oracle_with(&int(1), &psi, &cfg),
            Err(Error::OracleUnstable(_))
        ));
    }
}
