//! Gauss sums and first generalized Bernoulli numbers.

use num_traits::Zero;

use super::cyclotomic::CycNum;
use super::nt;
use super::rat::{int, Rat};
use crate::characters::DirichletCharacter;
use crate::error::CharacterError;

/// Smallest ring `Q(zeta_m)` holding `g(chi)`: `m = lcm(f, ord chi)`.
pub fn gauss_ring(chi: &DirichletCharacter) -> u64 {
    nt::lcm(chi.modulus(), chi.order())
}

/// `g(chi) = sum_{t mod f} chi(t) e(t/f)` for primitive `chi`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<CycNum, CharacterError> {
    chi.require_primitive()?;
    let f = chi.modulus();
    let n = chi.order();
    let m = gauss_ring(chi);
    let mut poly = vec![Rat::zero(); m as usize];
    for t in 0..f {
        if let Some(k) = chi.value_exp(t as i64) {
            let e = (k * (m / n) + t * (m / f)) % m;
            poly[e as usize] += int(1);
        }
    }
    Ok(CycNum::from_poly(m, &poly))
}

/// `B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a` for non-trivial primitive `chi`, in `Q(zeta_ord)`.
pub fn gen_bernoulli1(chi: &DirichletCharacter) -> Result<CycNum, CharacterError> {
    if chi.is_trivial() {
        return Err(CharacterError::TrivialCharacter);
    }
    chi.require_primitive()?;
    let f = chi.modulus();
    let n = chi.order();
    let mut poly = vec![Rat::zero(); n as usize];
    for a in 1..=f {
        if let Some(k) = chi.value_exp(a as i64) {
            poly[k as usize] += int(a as i64);
        }
    }
    Ok(CycNum::from_poly(n, &poly).scale(&Rat::new(1.into(), f.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use crate::characters::{enumerate_characters, legendre, primitive_characters, unit_group};

    #[test]
    fn gauss_examples() {
        let triv = DirichletCharacter::trivial(1);
        assert!(gauss_sum(&triv).unwrap().is_one());
        let g = gauss_sum(&legendre(3)).unwrap();
        let expected = &CycNum::one(3) + &CycNum::zeta_pow(3, 1).scale_int(2);
        assert_eq!(g, expected);
        assert_eq!(g, &CycNum::zeta_pow(3, 1) - &CycNum::zeta_pow(3, 2));
        let non_primitive = legendre(3).induce(9);
        assert!(gauss_sum(&non_primitive).is_err());
    }

    #[test]
    fn gauss_product_identity() {
        for f in [1u64, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 21, 25, 27, 43] {
            for chi in primitive_characters(f) {
                let g = gauss_sum(&chi).unwrap();
                let gbar = gauss_sum(&chi.conj()).unwrap();
                let expect = CycNum::from_int(1, chi.parity() * f as i64);
                assert_eq!(&g * &gbar, expect, "f = {f}, {chi:?}");
            }
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(
            gen_bernoulli1(&legendre(3)).unwrap().as_rational().unwrap(),
            &rat(-1, 3)
        );
        let chi4 = DirichletCharacter::new(unit_group(4), vec![1]).unwrap();
        assert_eq!(
            gen_bernoulli1(&chi4).unwrap().as_rational().unwrap(),
            &rat(-1, 2)
        );
        assert!(gen_bernoulli1(&DirichletCharacter::trivial(1)).is_err());
        for f in [5u64, 7, 8, 9, 13, 16, 21, 43] {
            for chi in enumerate_characters(f) {
                if chi.is_primitive() && chi.is_even() && !chi.is_trivial() {
                    assert!(gen_bernoulli1(&chi).unwrap().is_zero());
                }
            }
        }
    }
}
