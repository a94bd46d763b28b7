//! The series `E_chi` and `E_{M,L,chi} = [Lbar]^- [Mbar]^+ E_chi`, each available
//! as a phi-vector and through the closed divisor-sum formula.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::phi::{PhiPoint, PhiVector};
use super::qexp::{op_minus, op_plus, QExpansion};
use crate::arith::cyclotomic::{field, CycNum};
use crate::arith::nt;
use crate::arith::rat::{rat, Rat};
use crate::arith::special::{gauss_ring, gauss_sum};
use crate::characters::DirichletCharacter;
use crate::error::SeriesError;

/// `sigma_chi(n) = sum_{d | n} d chi(d) chi^{-1}(n/d)` in `Q(zeta_ord)`.
pub fn sigma_chi(chi: &DirichletCharacter, n: u64) -> CycNum {
    assert!(n >= 1);
    let ord = chi.order();
    let mut acc = CycNum::zero(ord);
    for d in nt::divisors(n) {
        let v = &chi.value(d as i64, ord) * &chi.value_inv((n / d) as i64, ord);
        acc += &v.scale_int(d as i64);
    }
    acc
}

/// `sigma_chi(n)` for `n = 1..=prec` by a divisor sieve; index 0 holds zero.
pub fn sigma_chi_table(chi: &DirichletCharacter, prec: u64) -> Vec<CycNum> {
    let ord = chi.order();
    let r = ord as usize;
    let len = prec as usize + 1;
    let mut acc = vec![0i128; len * r];
    for d in 1..len {
        let Some(kd) = chi.value_exp(d as i64) else {
            continue;
        };
        for e in 1..=(len - 1) / d {
            let Some(ke) = chi.value_exp(e as i64) else {
                continue;
            };
            let k = ((kd + ord - ke) % ord) as usize;
            acc[d * e * r + k] += d as i128;
        }
    }
    let f = field(ord);
    (0..len)
        .map(|n| {
            let coords = f
                .reduce_i128(acc[n * r..(n + 1) * r].to_vec())
                .expect("divisor sums stay small");
            CycNum::from_coeffs(
                ord,
                coords
                    .into_iter()
                    .map(|x| Rat::from_integer(x.into()))
                    .collect(),
            )
        })
        .collect()
}

/// Closed form of `E_chi`: `a_0 = -1/24` for trivial `chi` else 0, `a_n = sigma_chi(n)`,
/// rider `delta_chi / 2`.
pub fn e_chi_closed(chi: &DirichletCharacter, prec: u64) -> QExpansion {
    let f = chi.modulus();
    let mut coeffs = sigma_chi_table(chi, prec);
    let (a0, rider) = if chi.is_trivial() {
        (rat(-1, 24), rat(1, 2))
    } else {
        (Rat::zero(), Rat::zero())
    };
    coeffs[0] = CycNum::from_rat(chi.order(), a0);
    QExpansion::from_coeffs(f * f, coeffs, CycNum::from_rat(1, rider))
}

/// `E_chi = -1/(2 g(chi)) sum_{a mod f} sum_{b mod f^2} chi(a) chi(b) phi_{(a/f, b/f^2)}`.
pub fn e_chi_phi(chi: &DirichletCharacter) -> Result<PhiVector, SeriesError> {
    chi.require_primitive()?;
    let f = chi.modulus();
    let n = chi.order();
    // 1/g(chi) = chi(-1) g(chibar) / f
    let gbar = gauss_sum(&chi.conj())?;
    let prefactor = gbar
        .scale(&rat(-chi.parity(), 2 * f as i64))
        .embed(gauss_ring(chi));
    let mut v = PhiVector::new(f * f, prefactor);
    for a in 0..f {
        let Some(ka) = chi.value_exp(a as i64) else {
            continue;
        };
        for b in 0..f * f {
            let Some(kb) = chi.value_exp(b as i64) else {
                continue;
            };
            v.push(
                PhiPoint::from_fracs(a as i64, f as i64, b as i64, (f * f) as i64),
                1,
                CycNum::zeta_pow(n, ((ka + kb) % n) as i64),
            );
        }
    }
    Ok(v)
}

/// Checks the constraints on `(chi, Mbar, Lbar)`.
pub fn validate_config(chi: &DirichletCharacter, mbar: u64, lbar: u64) -> Result<(), SeriesError> {
    chi.require_primitive()?;
    let f = chi.modulus();
    for (what, value) in [("Mbar", mbar), ("Lbar", lbar)] {
        if !nt::is_squarefree(value) {
            return Err(SeriesError::NotSquarefree { what, value });
        }
        if nt::gcd(value, f) != 1 {
            return Err(SeriesError::NotCoprime {
                what,
                value,
                conductor: f,
            });
        }
    }
    if f * mbar == 1 {
        return Err(SeriesError::TrivialM);
    }
    Ok(())
}

/// Which row of the eigenvalue table a prime falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenCase {
    /// `ell` does not divide the level.
    Unramified,
    /// `ell | M/(M,L)`.
    MOnly,
    /// `ell | L/(M,L)`.
    LOnly,
    /// `ell | (M,L)`, including `ell | f`.
    Common,
}

/// `E_{M,L,chi}` with `M = f Mbar`, `L = f Lbar`, of level `f^2 Mbar Lbar`.
#[derive(Clone, Debug)]
pub struct EisensteinSeries {
    chi: DirichletCharacter,
    mbar: u64,
    lbar: u64,
}

impl EisensteinSeries {
    pub fn new(chi: DirichletCharacter, mbar: u64, lbar: u64) -> Result<Self, SeriesError> {
        validate_config(&chi, mbar, lbar)?;
        Ok(EisensteinSeries { chi, mbar, lbar })
    }

    /// `E_chi` itself; allowed to keep its non-holomorphic part.
    pub fn e_chi(chi: DirichletCharacter) -> Result<Self, SeriesError> {
        chi.require_primitive()?;
        Ok(EisensteinSeries {
            chi,
            mbar: 1,
            lbar: 1,
        })
    }

    pub fn chi(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn mbar(&self) -> u64 {
        self.mbar
    }

    pub fn lbar(&self) -> u64 {
        self.lbar
    }

    pub fn conductor(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn m(&self) -> u64 {
        self.conductor() * self.mbar
    }

    pub fn l(&self) -> u64 {
        self.conductor() * self.lbar
    }

    pub fn level(&self) -> u64 {
        let f = self.conductor();
        f * f * self.mbar * self.lbar
    }

    /// Ring `Q(zeta_n)` of the q-expansion coefficients, `n = ord chi`.
    pub fn coefficient_ring(&self) -> u64 {
        self.chi.order()
    }

    pub fn closed_form(&self, prec: u64) -> Result<QExpansion, SeriesError> {
        let mut g = e_chi_closed(&self.chi, prec);
        for p in nt::prime_divisors(self.mbar) {
            g = op_plus(&self.chi, p, &g)?;
        }
        for p in nt::prime_divisors(self.lbar) {
            g = op_minus(&self.chi, p, &g)?;
        }
        Ok(g)
    }

    pub fn phi_vector(&self) -> Result<PhiVector, SeriesError> {
        let mut v = e_chi_phi(&self.chi)?;
        let n = self.chi.order();
        for p in nt::prime_divisors(self.mbar) {
            let c = -self.chi.value(p as i64, n);
            v = v.add_dilated(p, &c);
        }
        for p in nt::prime_divisors(self.lbar) {
            let c = -self.chi.value_inv(p as i64, n).scale(&rat(1, p as i64));
            v = v.add_dilated(p, &c);
        }
        Ok(v)
    }

    /// Both constructions to `prec`; fails if they disagree anywhere.
    pub fn two_path(&self, prec: u64) -> Result<(PhiVector, QExpansion), SeriesError> {
        let v = self.phi_vector()?;
        let from_phi = v.expand(prec)?;
        let closed = self.closed_form(prec)?;
        if let Some((k, d)) = from_phi.first_difference(&closed) {
            return Err(SeriesError::Incompatible(if d == 0 {
                "phi-vector and closed form disagree in the non-holomorphic term".into()
            } else {
                format!("phi-vector and closed form disagree at q^({k}/{d})")
            }));
        }
        Ok((v, closed))
    }

    pub fn eigen_case(&self, level: u64, ell: u64) -> Option<EigenCase> {
        if !level.is_multiple_of(ell) {
            return Some(EigenCase::Unramified);
        }
        match (self.m().is_multiple_of(ell), self.l().is_multiple_of(ell)) {
            (true, true) => Some(EigenCase::Common),
            (true, false) => Some(EigenCase::MOnly),
            (false, true) => Some(EigenCase::LOnly),
            (false, false) => None,
        }
    }

    /// Predicted `T_ell` eigenvalue at `level`; `None` when `ell | level` but `ell` divides neither `M` nor `L`.
    pub fn expected_eigenvalue(&self, level: u64, ell: u64) -> Option<(EigenCase, CycNum)> {
        let n = self.chi.order();
        let e = ell as i64;
        let case = self.eigen_case(level, ell)?;
        let value = match case {
            EigenCase::Unramified => &self.chi.value_inv(e, n) + &self.chi.value(e, n).scale_int(e),
            EigenCase::MOnly => self.chi.value_inv(e, n),
            EigenCase::LOnly => self.chi.value(e, n).scale_int(e),
            EigenCase::Common => CycNum::zero(n),
        };
        Some((case, value))
    }
}

/// `E_chi` as (phi-vector, expansion), after checking both constructions agree to `prec`.
pub fn build_e_chi(
    chi: &DirichletCharacter,
    prec: u64,
) -> Result<(PhiVector, QExpansion), SeriesError> {
    EisensteinSeries::e_chi(chi.clone())?.two_path(prec)
}

/// `E_{M,L,chi}` as (phi-vector, expansion), after checking both constructions agree to `prec`.
pub fn build_e_mlchi(
    chi: &DirichletCharacter,
    mbar: u64,
    lbar: u64,
    prec: u64,
) -> Result<(PhiVector, QExpansion), SeriesError> {
    EisensteinSeries::new(chi.clone(), mbar, lbar)?.two_path(prec)
}
