//! Truncated Fourier expansions `sum_t c_t q^t`, `t in (1/D) Z`, with a scalar
//! rider for the non-holomorphic term `nu = i / (2 pi (z - zbar))`.
//!
//! Slashing uses the weight-two action `g|alpha = det(alpha) (cz+d)^{-2} g(alpha z)`,
//! under which `nu` is invariant for upper-triangular `alpha` with positive diagonal.

use crate::arith::cyclotomic::CycNum;
use crate::arith::nt;
use crate::arith::rat::{int, Rat};
use crate::characters::DirichletCharacter;
use crate::error::SeriesError;

/// Lowest output precision a Hecke operator may produce.
pub const PRECISION_FLOOR: u64 = 1;

#[derive(Clone, Debug)]
pub struct QExpansion {
    level: u64,
    denom: u64,
    precision: u64,
    /// `coeffs[k]` is the coefficient of `q^(k/denom)`, `k = 0..=precision*denom`.
    coeffs: Vec<CycNum>,
    rider: CycNum,
}

impl QExpansion {
    pub fn new(level: u64, denom: u64, precision: u64, coeffs: Vec<CycNum>, rider: CycNum) -> Self {
        assert_eq!(
            coeffs.len() as u64,
            precision * denom + 1,
            "coefficient count"
        );
        QExpansion {
            level,
            denom,
            precision,
            coeffs,
            rider,
        }
    }

    /// Integral exponents `0..=coeffs.len()-1`.
    pub fn from_coeffs(level: u64, coeffs: Vec<CycNum>, rider: CycNum) -> Self {
        let precision = coeffs.len() as u64 - 1;
        Self::new(level, 1, precision, coeffs, rider)
    }

    pub fn zero(level: u64, precision: u64) -> Self {
        Self::from_coeffs(
            level,
            vec![CycNum::zero(1); precision as usize + 1],
            CycNum::zero(1),
        )
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn rider(&self) -> &CycNum {
        &self.rider
    }

    pub fn with_level(mut self, level: u64) -> Self {
        self.level = level;
        self
    }

    /// Coefficient of `q^n` for an integer `n <= precision`.
    pub fn coeff(&self, n: u64) -> &CycNum {
        &self.coeffs[(n * self.denom) as usize]
    }

    pub fn constant_term(&self) -> &CycNum {
        &self.coeffs[0]
    }

    pub fn is_holomorphic(&self) -> bool {
        self.rider.is_zero()
    }

    pub fn truncate(&self, precision: u64) -> Self {
        assert!(precision <= self.precision);
        let n = (precision * self.denom) as usize + 1;
        QExpansion {
            level: self.level,
            denom: self.denom,
            precision,
            coeffs: self.coeffs[..n].to_vec(),
            rider: self.rider.clone(),
        }
    }

    /// Same series on the finer exponent grid `(1/denom) Z`, `self.denom | denom`.
    pub fn regrid(&self, denom: u64) -> Self {
        assert!(
            denom.is_multiple_of(self.denom),
            "regrid target must be a multiple"
        );
        if denom == self.denom {
            return self.clone();
        }
        let step = (denom / self.denom) as usize;
        let mut coeffs = vec![CycNum::zero(1); (self.precision * denom) as usize + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = c.clone();
        }
        QExpansion {
            level: self.level,
            denom,
            precision: self.precision,
            coeffs,
            rider: self.rider.clone(),
        }
    }

    /// Drops to integral exponents if every fractional-exponent coefficient vanishes.
    pub fn to_integral(&self) -> Option<Self> {
        if self.denom == 1 {
            return Some(self.clone());
        }
        let d = self.denom as usize;
        let mut coeffs = Vec::with_capacity(self.precision as usize + 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % d == 0 {
                coeffs.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(QExpansion {
            level: self.level,
            denom: 1,
            precision: self.precision,
            coeffs,
            rider: self.rider.clone(),
        })
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let d = nt::lcm(self.denom, other.denom);
        let p = self.precision.min(other.precision);
        (self.truncate(p).regrid(d), other.truncate(p).regrid(d))
    }

    /// First exponent `(num, den)` where the two series differ, comparing up to the
    /// smaller precision; `Some((0, 0))` flags a rider mismatch.
    pub fn first_difference(&self, other: &Self) -> Option<(u64, u64)> {
        if self.rider != other.rider {
            return Some((0, 0));
        }
        let (a, b) = self.aligned(other);
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .position(|(x, y)| x != y)
            .map(|k| (k as u64, a.denom))
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        QExpansion {
            level: nt::lcm(self.level, other.level),
            denom: a.denom,
            precision: a.precision,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
            rider: &a.rider + &b.rider,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycNum::from_int(1, -1)))
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        QExpansion {
            level: self.level,
            denom: self.denom,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|x| scale_sparse(x, c)).collect(),
            rider: scale_sparse(&self.rider, c),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        QExpansion {
            level: self.level,
            denom: self.denom,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|x| x.scale(r)).collect(),
            rider: self.rider.scale(r),
        }
    }
}

fn scale_sparse(x: &CycNum, c: &CycNum) -> CycNum {
    if x.is_zero() {
        CycNum::zero(nt::lcm(x.conductor(), c.conductor()))
    } else {
        x * c
    }
}

fn require_prime(p: u64) -> Result<(), SeriesError> {
    if nt::is_prime(p) {
        Ok(())
    } else {
        Err(SeriesError::NotPrime(p))
    }
}

/// `g | diag(d, 1) = d * g(dz)`: `a_t -> d * a_{t/d}`; level multiplied by `d`.
fn scaled_dilation(g: &QExpansion, d: u64, factor: &Rat) -> QExpansion {
    let mut coeffs = vec![CycNum::zero(1); g.coeffs.len()];
    for (k, c) in g.coeffs.iter().enumerate() {
        let j = k * d as usize;
        if j >= coeffs.len() {
            break;
        }
        coeffs[j] = c.scale(factor);
    }
    QExpansion {
        level: g.level * d,
        denom: g.denom,
        precision: g.precision,
        coeffs,
        rider: g.rider.scale(factor).scale(&Rat::new(1.into(), d.into())),
    }
}

/// `g | (p 0; 0 1)`, coefficients `a_n -> p * a_{n/p}`.
pub fn gamma_p(g: &QExpansion, p: u64) -> Result<QExpansion, SeriesError> {
    require_prime(p)?;
    Ok(scaled_dilation(g, p, &int(p as i64)))
}

/// The degeneracy map `g(z) -> g(dz)`.
pub fn degeneracy(d: u64, g: &QExpansion) -> QExpansion {
    assert!(d >= 1);
    scaled_dilation(g, d, &int(1))
}

fn require_coprime(chi: &DirichletCharacter, p: u64) -> Result<(), SeriesError> {
    require_prime(p)?;
    if chi.modulus().is_multiple_of(p) {
        return Err(SeriesError::PrimeDividesConductor {
            p,
            conductor: chi.modulus(),
        });
    }
    Ok(())
}

/// `[p]^+ = 1 - chi(p) gamma_p`: `a_n - chi(p) p a_{n/p}`.
pub fn op_plus(
    chi: &DirichletCharacter,
    p: u64,
    g: &QExpansion,
) -> Result<QExpansion, SeriesError> {
    require_coprime(chi, p)?;
    let c = chi.value(p as i64, chi.order());
    Ok(g.sub(&gamma_p(g, p)?.scale(&c)).with_level(g.level * p))
}

/// `[p]^- = 1 - (p chi(p))^{-1} gamma_p`: `a_n - chi(p)^{-1} a_{n/p}`.
pub fn op_minus(
    chi: &DirichletCharacter,
    p: u64,
    g: &QExpansion,
) -> Result<QExpansion, SeriesError> {
    require_coprime(chi, p)?;
    let c = chi
        .value_inv(p as i64, chi.order())
        .scale(&Rat::new(1.into(), p.into()));
    Ok(g.sub(&gamma_p(g, p)?.scale(&c)).with_level(g.level * p))
}

/// `U_p`: `a_n -> a_{pn}`; the rider scales by `p`.
pub fn u_operator(p: u64, g: &QExpansion) -> Result<QExpansion, SeriesError> {
    hecke_core(p, g, false)
}

fn hecke_core(ell: u64, g: &QExpansion, with_dilation: bool) -> Result<QExpansion, SeriesError> {
    require_prime(ell)?;
    if g.denom != 1 {
        return Err(SeriesError::Incompatible(
            "Hecke operators need integral exponents".into(),
        ));
    }
    let prec = g.precision / ell;
    if prec < PRECISION_FLOOR {
        return Err(SeriesError::InsufficientPrecision {
            got: prec,
            floor: PRECISION_FLOOR,
        });
    }
    let l = ell as usize;
    let ell_rat = int(ell as i64);
    let coeffs = (0..=prec as usize)
        .map(|n| {
            let mut c = g.coeffs[l * n].clone();
            if with_dilation && n % l == 0 {
                let extra = g.coeffs[n / l].scale(&ell_rat);
                c = &c + &extra;
            }
            c
        })
        .collect();
    let rider_factor = if with_dilation { ell + 1 } else { ell };
    Ok(QExpansion {
        level: g.level,
        denom: 1,
        precision: prec,
        coeffs,
        rider: g.rider.scale_int(rider_factor as i64),
    })
}

/// `T_ell` on forms of level dividing `n`: `a_{ell m} + ell a_{m/ell}` if `ell` does not
/// divide `n`, else `a_{ell m}`. Output precision is `floor(B / ell)`.
pub fn hecke(n: u64, ell: u64, g: &QExpansion) -> Result<QExpansion, SeriesError> {
    if !n.is_multiple_of(g.level) {
        return Err(SeriesError::LevelMismatch {
            series: g.level,
            target: n,
        });
    }
    Ok(hecke_core(ell, g, !n.is_multiple_of(ell))?.with_level(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::legendre;
    use proptest::prelude::*;

    fn series(v: &[i64]) -> QExpansion {
        QExpansion::from_coeffs(
            1,
            v.iter().map(|&x| CycNum::from_int(1, x)).collect(),
            CycNum::zero(1),
        )
    }

    #[test]
    fn gamma_on_monomial() {
        let mut v = vec![0i64; 12];
        v[1] = 1;
        let g = gamma_p(&series(&v), 3).unwrap();
        assert_eq!(g.coeff(3), &CycNum::from_int(1, 3));
        assert!(g
            .coeffs()
            .iter()
            .enumerate()
            .all(|(k, c)| k == 3 || c.is_zero()));
        assert!(gamma_p(&series(&v), 4).is_err());
    }

    #[test]
    fn degeneracy_identities() {
        let g = series(&[
            3, 1, -4, 1, 5, -9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4, 6,
        ]);
        assert!(degeneracy(1, &g).agrees_with(&g));
        let up = u_operator(2, &degeneracy(2, &g)).unwrap();
        assert!(up.agrees_with(&g.truncate(10)));
    }

    #[test]
    fn insufficient_precision() {
        let g = series(&[1, 2, 3]);
        assert!(matches!(
            hecke(1, 5, &g),
            Err(SeriesError::InsufficientPrecision { got: 0, floor: 1 })
        ));
    }

    #[test]
    fn operators_reject_conductor_primes() {
        let g = series(&[0, 1, 2, 3]).with_level(9);
        assert!(op_plus(&legendre(3), 3, &g).is_err());
        assert!(op_minus(&legendre(3), 5, &g).is_ok());
    }

    fn arb_series(len: usize) -> impl Strategy<Value = QExpansion> {
        proptest::collection::vec(-50i64..50, len).prop_map(|v| series(&v))
    }

    proptest! {
        #[test]
        fn plus_minus_commute(g in arb_series(80),
                              p1 in prop::sample::select(vec![2u64, 5, 7]),
                              p2 in prop::sample::select(vec![2u64, 5, 7, 11])) {
            let chi = legendre(3);
            let a = op_minus(&chi, p2, &op_plus(&chi, p1, &g).unwrap()).unwrap();
            let b = op_plus(&chi, p1, &op_minus(&chi, p2, &g).unwrap()).unwrap();
            prop_assert!(a.agrees_with(&b));
            let c = op_plus(&chi, p2, &op_plus(&chi, p1, &g).unwrap()).unwrap();
            let d = op_plus(&chi, p1, &op_plus(&chi, p2, &g).unwrap()).unwrap();
            prop_assert!(c.agrees_with(&d));
        }

        #[test]
        fn hecke_operators_commute(g in arb_series(300),
                                   l1 in prop::sample::select(vec![2u64, 3, 5, 7]),
                                   l2 in prop::sample::select(vec![2u64, 3, 5, 7])) {
            prop_assume!(l1 != l2);
            let n = 1;
            let a = hecke(n, l1, &hecke(n, l2, &g).unwrap()).unwrap();
            let b = hecke(n, l2, &hecke(n, l1, &g).unwrap()).unwrap();
            prop_assert!(a.agrees_with(&b));
        }
    }
}
