//! Constant terms at cusps, the residue divisor, and the two computations of the
//! order of the cuspidal group cut out by `E_{M,L,chi}`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::cyclotomic::CycNum;
use crate::arith::lattice::{lattice_index, relative_index, Lattice};
use crate::arith::matrix::Mat2;
use crate::arith::nt;
use crate::arith::rat::{bernoulli2, rat, Rat};
use crate::arith::special::{gauss_sum, gen_bernoulli1};
use crate::characters::{legendre, DirichletCharacter};
use crate::cusps::{enumerate_cusps, Cusp};
use crate::eisenstein::{EisensteinSeries, PhiVector};
use crate::error::{CuspidalError, SeriesError};

/// Constant term of `E | sigma` for `sigma` in `SL_2(Z)`.
pub fn constant_term_at(v: &PhiVector, sigma: &Mat2) -> Result<CycNum, CuspidalError> {
    let mut total = CycNum::zero(1);
    let mut rider = CycNum::zero(1);
    let half = rat(1, 2);
    for term in v.terms() {
        let m = Mat2::diag(term.scale as i64, 1).mul(sigma);
        let (gamma, u) = m.hermite().ok_or(SeriesError::BadMatrix)?;
        let y = term.x.act(&gamma);
        if y.is_zero() {
            rider -= &term.coef;
        }
        let weight = Rat::new((u.a as i64).into(), (u.d as i64).into()) * &half * bernoulli2(&y.x1);
        total += &term.coef.scale(&weight);
    }
    if !rider.is_zero() {
        return Err(CuspidalError::NonHolomorphic);
    }
    Ok(&total * v.prefactor())
}

/// `a_0(E; c)`; the level of `E` must divide the level of `c`.
pub fn constant_term(v: &PhiVector, c: &Cusp) -> Result<CycNum, CuspidalError> {
    if !c.level.is_multiple_of(v.level()) {
        return Err(SeriesError::LevelMismatch {
            series: v.level(),
            target: c.level,
        }
        .into());
    }
    constant_term_at(v, &c.sigma())
}

/// `n_chi = -(f / 4 g(chi)) sum_{a, b mod f} chi(a) chi(b) B_2((a + b)/f)`.
pub fn n_chi(chi: &DirichletCharacter) -> Result<CycNum, CuspidalError> {
    chi.require_primitive()?;
    let f = chi.modulus();
    let n = chi.order();
    let mut sum = CycNum::zero(n);
    for a in 0..f {
        let Some(ka) = chi.value_exp(a as i64) else {
            continue;
        };
        for b in 0..f {
            let Some(kb) = chi.value_exp(b as i64) else {
                continue;
            };
            let b2 = bernoulli2(&rat((a + b) as i64, f as i64));
            sum += &CycNum::zeta_pow(n, ((ka + kb) % n) as i64).scale(&b2);
        }
    }
    // f / g(chi) = chi(-1) g(chibar)
    let gbar = gauss_sum(&chi.conj())?;
    Ok((&gbar * &sum).scale(&rat(-chi.parity(), 4)))
}

/// `sum_x e_x a_0(E; x) [x]` over the cusps of `X_0(N)`.
#[derive(Clone, Debug)]
pub struct CuspDivisor {
    pub level: u64,
    pub entries: Vec<(Cusp, CycNum)>,
}

impl CuspDivisor {
    pub fn degree(&self) -> CycNum {
        let mut s = CycNum::zero(1);
        for (_, c) in &self.entries {
            s += c;
        }
        s
    }

    pub fn coefficient(&self, cusp: &Cusp) -> Option<&CycNum> {
        self.entries.iter().find(|(c, _)| c == cusp).map(|(_, v)| v)
    }

    pub fn support(&self) -> Vec<Cusp> {
        self.entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, _)| *c)
            .collect()
    }
}

pub fn delta_divisor(v: &PhiVector, n: u64) -> Result<CuspDivisor, CuspidalError> {
    let entries = enumerate_cusps(n)
        .into_par_iter()
        .map(|c| Ok((c, constant_term(v, &c)?.scale_int(c.width() as i64))))
        .collect::<Result<Vec<_>, CuspidalError>>()?;
    Ok(CuspDivisor { level: n, entries })
}

/// Cusps of `X_1(N)` as `(sigma, width)`: orbits of bottom rows `(c, d)` mod `N`
/// under `d -> d + kc` and `-1`.
pub fn gamma1_cusps(n: u64) -> Vec<(Mat2, u64)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for c in 0..n {
        let g = nt::gcd(c, n);
        for d0 in 0..g.max(1) {
            if nt::gcd(d0, g) != 1 && g > 1 {
                continue;
            }
            let key = (c, d0 % g.max(1));
            let neg = ((n - c) % n, (g - d0 % g) % g.max(1));
            if seen.contains(&key) || seen.contains(&neg) {
                continue;
            }
            seen.insert(key);
            out.push((lift_bottom_row(n, c, d0, g), n / g));
        }
    }
    out
}

fn lift_bottom_row(n: u64, c: u64, d0: u64, g: u64) -> Mat2 {
    let c = if c == 0 { n as i64 } else { c as i64 };
    let d = (0..)
        .map(|k| d0 as i64 + k * g as i64)
        .find(|&d| nt::gcd(c as u64, d as u64) == 1)
        .expect("a coprime lift exists");
    let (_, s, t) = nt::ext_gcd(c, d);
    // s c + t d = 1
    Mat2::new(t, -s, c, d)
}

/// Generators of the constant-term ideal, normalized by `g(chibar)` into `Q(zeta_ord)`.
#[derive(Clone, Debug)]
pub struct IdealData {
    pub ring: u64,
    pub generators: Vec<CycNum>,
    pub order: BigInt,
}

fn normalizer(chi: &DirichletCharacter) -> Result<CycNum, CuspidalError> {
    Ok(gauss_sum(&chi.conj())?.inv().map_err(SeriesError::from)?)
}

fn normalize(c: &CycNum, inv_g: &CycNum, ring: u64) -> Result<CycNum, CuspidalError> {
    Ok((c * inv_g).descend(ring).map_err(SeriesError::from)?)
}

fn inverted_primes(n: u64) -> Vec<u64> {
    nt::prime_divisors(6 * n)
}

/// Order of `Z[1/6N, chi] / a`, with `a` generated by the residue-divisor coefficients.
pub fn cuspidal_order(s: &EisensteinSeries, n: u64) -> Result<IdealData, CuspidalError> {
    let div = delta_divisor(&s.phi_vector()?, n)?;
    let ring = s.coefficient_ring();
    let rank = crate::arith::cyclotomic::field(ring).degree();
    let inv_g = normalizer(s.chi())?;
    let mut lattice = Lattice::new(rank, &inverted_primes(n));
    let mut generators = Vec::new();
    for (_, c) in &div.entries {
        if c.is_zero() {
            continue;
        }
        let r = normalize(c, &inv_g, ring)?;
        for i in 0..rank {
            let rz = &r * &CycNum::zeta_pow(ring, i as i64);
            lattice.push(rz.coeffs().to_vec());
        }
        generators.push(r);
    }
    let order = lattice_index(&lattice, rank)?;
    Ok(IdealData {
        ring,
        generators,
        order,
    })
}

/// Prime-to-`6N` part of `[P : R]`, `P = (g(chi^{-1})/L) Z[chi] + R`, with `R` spanned by
/// the residue coefficients at the cusps of `X_1(N)`.
pub fn period_order(s: &EisensteinSeries, n: u64) -> Result<BigInt, CuspidalError> {
    let v = s.phi_vector()?;
    if !n.is_multiple_of(v.level()) {
        return Err(SeriesError::LevelMismatch {
            series: v.level(),
            target: n,
        }
        .into());
    }
    let ring = s.coefficient_ring();
    let rank = crate::arith::cyclotomic::field(ring).degree();
    let inv_g = normalizer(s.chi())?;
    let coefficients = gamma1_cusps(n)
        .into_par_iter()
        .map(|(sigma, w)| Ok(constant_term_at(&v, &sigma)?.scale_int(w as i64)))
        .collect::<Result<Vec<_>, CuspidalError>>()?;
    let inverted = inverted_primes(n);
    let mut r_lat = Lattice::new(rank, &inverted);
    for c in &coefficients {
        r_lat.push(normalize(c, &inv_g, ring)?.coeffs().to_vec());
    }
    let mut p_lat = r_lat.clone();
    let inv_l = rat(1, s.l() as i64);
    for i in 0..rank {
        p_lat.push(
            CycNum::zeta_pow(ring, i as i64)
                .scale(&inv_l)
                .coeffs()
                .to_vec(),
        );
    }
    Ok(relative_index(&p_lat, &r_lat)?)
}

/// The twist used with `eta`: `eta` itself if `chi eta` is odd, else `eta` times the
/// Legendre symbol of its prime conductor.
pub fn eta_tilde(chi: &DirichletCharacter, eta: &DirichletCharacter) -> DirichletCharacter {
    if chi.parity() * eta.parity() == -1 {
        eta.clone()
    } else {
        eta.mul(&legendre(eta.modulus()))
    }
}

/// Closed form of `Lambda^{+-}(E_{M,L,chi}, eta)`, `sign = +1` or `-1`.
pub fn lambda_pm(
    s: &EisensteinSeries,
    eta: &DirichletCharacter,
    sign: i64,
    n: u64,
) -> Result<CycNum, CuspidalError> {
    assert!(sign == 1 || sign == -1);
    let f_eta = eta.modulus();
    if nt::gcd(f_eta, n) != 1 || nt::gcd(f_eta, s.level()) != 1 {
        return Err(SeriesError::TwistNotCoprime { f_eta, level: n }.into());
    }
    let chi = s.chi();
    let f = chi.modulus() as i64;
    let tilde = eta_tilde(chi, eta);
    let ring = nt::lcm(chi.order(), tilde.order());
    let chi_v = |a: i64| chi.value(a, ring);
    let chi_inv = |a: i64| chi.value_inv(a, ring);
    let tl = |a: i64| tilde.value(a, ring);

    let mut out = CycNum::from_int(1, sign * tilde.parity());
    out = &out * &chi_inv(tilde.modulus() as i64);
    out = &out * &tl(f);
    out = &out * &gauss_sum(&chi.conj())?.scale(&rat(1, s.l() as i64));
    let psi1 = chi.conj().mul(&tilde).conj();
    let psi2 = chi.mul(&tilde);
    out = &out * &gen_bernoulli1(&psi1)?.scale(&rat(1, 2));
    out = &out * &gen_bernoulli1(&psi2)?.scale(&rat(1, 2));
    for p in nt::prime_divisors(s.lbar()) {
        let p = p as i64;
        out = &out * &(&CycNum::from_int(1, p) - &(&chi_inv(p) * &tl(p)));
    }
    for p in nt::prime_divisors(s.mbar()) {
        let p = p as i64;
        out = &out * &(&CycNum::one(1) - &(&chi_v(p) * &tl(p)));
    }
    Ok(out)
}

/// Prime factors of an order that are coprime to `6N`.
pub fn eisenstein_primes(order: &BigInt, n: u64) -> Vec<u64> {
    let mut m = order.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * p <= m {
        if (&m % p).is_zero() {
            if !(6 * n).is_multiple_of(p) {
                out.push(p);
            }
            while (&m % p).is_zero() {
                m /= p;
            }
        }
        p += 1;
    }
    if let Some(last) = m.to_u64().filter(|&x| x > 1) {
        if !(6 * n).is_multiple_of(last) {
            out.push(last);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_eta, primitive_characters};
    use crate::cusps::cusp_for;
    use crate::eisenstein::{build_e_chi, e_chi_phi};

    fn series(p: u64) -> EisensteinSeries {
        EisensteinSeries::new(DirichletCharacter::trivial(1), p, 1).unwrap()
    }

    #[test]
    fn level_eleven_divisor() {
        let v = series(11).phi_vector().unwrap();
        let div = delta_divisor(&v, 11).unwrap();
        let inf = cusp_for(11, 1, 1).unwrap();
        let zero = cusp_for(11, 11, 1).unwrap();
        assert_eq!(
            div.coefficient(&inf).unwrap(),
            &CycNum::from_rat(1, rat(5, 12))
        );
        assert_eq!(
            div.coefficient(&zero).unwrap(),
            &CycNum::from_rat(1, rat(-5, 12))
        );
        assert!(div.degree().is_zero());
    }

    #[test]
    fn non_holomorphic_is_rejected() {
        let v = e_chi_phi(&DirichletCharacter::trivial(1)).unwrap();
        let inf = cusp_for(1, 1, 1).unwrap();
        assert!(matches!(
            constant_term(&v, &inf),
            Err(CuspidalError::NonHolomorphic)
        ));
    }

    #[test]
    fn n_chi_examples() {
        assert_eq!(
            n_chi(&DirichletCharacter::trivial(1)).unwrap(),
            CycNum::from_rat(1, rat(-1, 24))
        );
        for f in [3u64, 5, 7, 9] {
            for chi in primitive_characters(f) {
                let nc = n_chi(&chi).unwrap();
                assert_eq!(
                    n_chi(&chi.conj()).unwrap(),
                    nc.conj().scale_int(chi.parity())
                );
            }
        }
    }

    #[test]
    fn e_chi_support_and_values() {
        for f in [3u64, 4, 5, 7] {
            for chi in primitive_characters(f) {
                let v = e_chi_phi(&chi).unwrap();
                let nc = n_chi(&chi).unwrap();
                let div = delta_divisor(&v, f * f).unwrap();
                assert!(div.degree().is_zero());
                for (c, val) in &div.entries {
                    if c.d == f {
                        let expect = (&chi.value_inv(c.x as i64, chi.order()) * &nc)
                            .scale_int(c.width() as i64);
                        assert_eq!(val, &expect, "f={f} x={}", c.x);
                    } else {
                        assert!(val.is_zero(), "f={f} d={}", c.d);
                    }
                }
            }
        }
    }

    #[test]
    fn galois_permutes_labels() {
        let f = 7u64;
        for chi in primitive_characters(f) {
            let n = chi.order();
            let v = e_chi_phi(&chi).unwrap();
            let nc = n_chi(&chi).unwrap();
            let inv_nc = nc.inv().unwrap();
            let div = delta_divisor(&v, f * f).unwrap();
            let label = |x: u64| {
                let c = div
                    .entries
                    .iter()
                    .find(|(c, _)| c.d == f && c.x % f == x % f)
                    .unwrap();
                (&c.1 * &inv_nc).descend(n).unwrap()
            };
            for a in (1..n).filter(|&a| nt::gcd(a, n) == 1) {
                for x in 1..f {
                    let xa = nt::mod_pow(x, a, f);
                    assert_eq!(label(x).galois(a as i64), label(xa));
                }
            }
        }
    }

    #[test]
    fn constant_term_at_infinity_matches_expansion() {
        for f in [3u64, 5] {
            for chi in primitive_characters(f) {
                let s = EisensteinSeries::new(chi.clone(), 2, 1).unwrap();
                let v = s.phi_vector().unwrap();
                let q = s.closed_form(5).unwrap();
                let inf = cusp_for(s.level(), 1, 1).unwrap();
                assert_eq!(&constant_term(&v, &inf).unwrap(), q.constant_term());
            }
        }
        let (v, q) = build_e_chi(&primitive_characters(5)[1], 5).unwrap();
        assert_eq!(
            &constant_term(&v, &cusp_for(25, 1, 1).unwrap()).unwrap(),
            q.constant_term()
        );
    }

    #[test]
    fn gamma1_cusp_count() {
        for n in [1u64, 3, 5, 7, 9, 11, 15, 25, 45, 99] {
            let expect: u64 = if n == 1 {
                1
            } else {
                nt::divisors(n)
                    .iter()
                    .map(|&d| nt::euler_phi(d) * nt::euler_phi(n / d))
                    .sum::<u64>()
                    / 2
            };
            let cusps = gamma1_cusps(n);
            assert_eq!(cusps.len() as u64, expect, "N={n}");
            for (s, _) in &cusps {
                assert_eq!(s.det(), 1);
            }
        }
    }

    #[test]
    fn golden_prime_orders() {
        for (p, expect) in [(11u64, 5u64), (37, 1), (67, 11), (73, 1)] {
            let s = series(p);
            let data = cuspidal_order(&s, p).unwrap();
            assert_eq!(data.order, BigInt::from(expect), "p={p}");
            assert_eq!(period_order(&s, p).unwrap(), BigInt::from(expect), "p={p}");
        }
    }

    #[test]
    fn orders_agree_with_character() {
        for (chi, mbar, lbar, n) in [
            (primitive_characters(3)[0].clone(), 1u64, 1u64, 9u64),
            (primitive_characters(3)[0].clone(), 5, 1, 45),
            (primitive_characters(3)[0].clone(), 1, 5, 45),
            (DirichletCharacter::trivial(1), 3, 5, 15),
            (DirichletCharacter::trivial(1), 15, 1, 15),
        ] {
            let s = EisensteinSeries::new(chi, mbar, lbar).unwrap();
            let a = cuspidal_order(&s, n).unwrap().order;
            let b = period_order(&s, n).unwrap();
            assert_eq!(a, b, "Mbar={mbar} Lbar={lbar} N={n}");
        }
    }

    #[test]
    fn lambda_examples() {
        let s = series(11);
        let etas = enumerate_eta(11, 100);
        assert!(!etas.is_empty());
        for e in &etas {
            let plus = lambda_pm(&s, &e.eta, 1, 11).unwrap();
            let minus = lambda_pm(&s, &e.eta, -1, 11).unwrap();
            assert_eq!(plus, -&minus);
            // chi trivial, L = 1: +-eta~(-1) (B_{1,eta~bar}/2) (B_{1,eta~}/2) (1 - eta~(11))
            let t = eta_tilde(&DirichletCharacter::trivial(1), &e.eta);
            let r = t.order();
            let p = t.modulus() as i64;
            let b1 = |conj: bool| {
                let mut acc = CycNum::zero(r);
                for a in 1..p {
                    let v = if conj {
                        t.value_inv(a, r)
                    } else {
                        t.value(a, r)
                    };
                    acc += &v.scale(&rat(a, p));
                }
                acc.scale(&rat(1, 2))
            };
            let expect = (&(&b1(true) * &b1(false)) * &(&CycNum::one(r) - &t.value(11, r)))
                .scale_int(t.parity());
            assert_eq!(plus, expect);
        }
        let bad = primitive_characters(11)[0].clone();
        assert!(lambda_pm(&s, &bad, 1, 11).is_err());
    }

    #[test]
    fn eisenstein_prime_factors() {
        assert_eq!(eisenstein_primes(&BigInt::from(5), 11), vec![5]);
        assert_eq!(eisenstein_primes(&BigInt::from(1), 11), Vec::<u64>::new());
        assert_eq!(
            eisenstein_primes(&BigInt::from(5 * 5 * 7 * 11), 11),
            vec![5, 7]
        );
        assert_eq!(eisenstein_primes(&BigInt::from(97 * 13), 3), vec![13, 97]);
    }
}
