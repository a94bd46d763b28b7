//! Unit groups `(Z/f)^x` and Dirichlet characters.
//!
//! A character mod `f` is an exponent vector over the fixed generators of
//! [`UnitGroup`]: `chi(g_i) = e(e_i / ord_i)`. Values are stored as exponents
//! of `zeta_n`, `n` the order of the character.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::cyclotomic::CycNum;
use crate::arith::nt;
use crate::error::CharacterError;

#[derive(Debug)]
pub struct UnitGroup {
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
    /// Mixed-radix index of the exponent vector of each unit; `u32::MAX` on non-units.
    dlog: Vec<u32>,
}

impl UnitGroup {
    fn build(f: u64) -> Self {
        assert!(f >= 1);
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        let factors = nt::factorize(f);
        for &(p, k) in &factors {
            let pk = p.pow(k);
            let rest = f / pk;
            let lift = |g: u64| {
                if rest == 1 {
                    g % f
                } else {
                    nt::crt(&[(g % pk, pk), (1, rest)])
                }
            };
            if p == 2 {
                if k >= 2 {
                    generators.push(lift(pk - 1));
                    orders.push(2);
                }
                if k >= 3 {
                    generators.push(lift(5));
                    orders.push(1 << (k - 2));
                }
            } else {
                generators.push(lift(nt::primitive_root_prime_power(p, k)));
                orders.push(nt::euler_phi(pk));
            }
        }
        let mut dlog = vec![u32::MAX; f as usize];
        let total: u64 = orders.iter().product();
        // walk the mixed-radix counter, multiplying in the matching generator
        let mut exps = vec![0u64; orders.len()];
        let mut value = 1 % f;
        for idx in 0..total {
            dlog[value as usize] = idx as u32;
            for i in (0..orders.len()).rev() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    value = mul_mod(value, generators[i], f);
                    break;
                }
                exps[i] = 0;
                // undo g_i^(ord_i - 1), i.e. multiply by g_i once more
                value = mul_mod(value, generators[i], f);
            }
        }
        UnitGroup {
            modulus: f,
            generators,
            orders,
            dlog,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group (lcm of the cyclic orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &b| nt::lcm(a, b))
    }

    /// Exponent vector of a unit, `None` on non-units.
    pub fn discrete_log(&self, a: i64) -> Option<Vec<u64>> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        let mut idx = self.dlog[r];
        if idx == u32::MAX {
            return None;
        }
        let mut out = vec![0u64; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            out[i] = idx as u64 % self.orders[i];
            idx /= self.orders[i] as u32;
        }
        Some(out)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn group_cache() -> &'static Mutex<HashMap<u64, Arc<UnitGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnitGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn unit_group(f: u64) -> Arc<UnitGroup> {
    if let Some(g) = group_cache().lock().unwrap().get(&f) {
        return g.clone();
    }
    let g = Arc::new(UnitGroup::build(f));
    group_cache().lock().unwrap().entry(f).or_insert(g).clone()
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    order: u64,
    /// `chi(a) = zeta_order^table[a]`, or `-1` when `gcd(a, f) > 1`.
    table: Arc<Vec<i64>>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi(mod {}, exps {:?}, order {})",
            self.modulus(),
            self.exponents,
            self.order
        )
    }
}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroup>, exponents: Vec<u64>) -> Result<Self, CharacterError> {
        if exponents.len() != group.orders.len() {
            return Err(CharacterError::BadExponents(format!(
                "expected {} exponents for modulus {}, got {}",
                group.orders.len(),
                group.modulus,
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(&group.orders)
            .map(|(&e, &o)| e % o)
            .collect();
        let order = exponents
            .iter()
            .zip(&group.orders)
            .fold(1, |acc, (&e, &o)| nt::lcm(acc, o / nt::gcd(e, o)));
        let f = group.modulus;
        let weights: Vec<u64> = exponents
            .iter()
            .zip(&group.orders)
            .map(|(&e, &o)| e * order / o)
            .collect();
        let table = (0..f)
            .map(|a| match group.discrete_log(a as i64) {
                None => -1,
                Some(k) => {
                    (k.iter()
                        .zip(&weights)
                        .map(|(&ki, &wi)| (ki as u128 * wi as u128) % order as u128)
                        .sum::<u128>()
                        % order as u128) as i64
                }
            })
            .collect();
        Ok(DirichletCharacter {
            group,
            exponents,
            order,
            table: Arc::new(table),
        })
    }

    pub fn trivial(f: u64) -> Self {
        let g = unit_group(f);
        let n = g.orders.len();
        Self::new(g, vec![0; n]).unwrap()
    }

    /// Character mod `f` with `chi(g_j) = e(num_j / den_j)` on the generators of `unit_group(f)`.
    pub fn from_generator_values(f: u64, values: &[(u64, u64)]) -> Result<Self, CharacterError> {
        let g = unit_group(f);
        let mut exps = Vec::with_capacity(values.len());
        for (&(num, den), &o) in values.iter().zip(&g.orders) {
            if !(num as u128 * o as u128).is_multiple_of(den as u128) {
                return Err(CharacterError::BadExponents(format!(
                    "value e({num}/{den}) on a generator of order {o}"
                )));
            }
            exps.push(((num as u128 * o as u128 / den as u128) % o as u128) as u64);
        }
        Self::new(g, exps)
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `chi(a) = zeta_n^k` as `Some(k mod n)`, `None` when `gcd(a, f) > 1`.
    pub fn value_exp(&self, a: i64) -> Option<u64> {
        let t = self.table[a.rem_euclid(self.modulus() as i64) as usize];
        (t >= 0).then_some(t as u64)
    }

    /// `chi(a)` in `Q(zeta_m)`; `m` must be a multiple of the order.
    pub fn value(&self, a: i64, m: u64) -> CycNum {
        assert!(
            m.is_multiple_of(self.order),
            "value ring too small for the character"
        );
        match self.value_exp(a) {
            None => CycNum::zero(m),
            Some(k) => CycNum::zeta_pow(m, (k * (m / self.order)) as i64),
        }
    }

    /// `chi(a)^{-1}`, zero on non-units.
    pub fn value_inv(&self, a: i64, m: u64) -> CycNum {
        match self.value_exp(a) {
            None => CycNum::zero(m),
            Some(k) => CycNum::zeta_pow(m, -((k * (m / self.order)) as i64)),
        }
    }

    /// `chi(-1) = +1` or `-1`.
    pub fn parity(&self) -> i64 {
        match self.value_exp(-1) {
            Some(0) => 1,
            Some(_) => -1,
            None => unreachable!("-1 is a unit"),
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        Self::new(self.group.clone(), exps).unwrap()
    }

    /// Product of two characters, both induced to the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let m = nt::lcm(self.modulus(), other.modulus());
        let a = self.induce(m);
        let b = other.induce(m);
        let exps = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&a.group.orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect();
        Self::new(a.group.clone(), exps).unwrap()
    }

    /// Builds the character mod `target` whose value on each generator is read off `eval`.
    fn from_values_on(target: u64, order: u64, eval: impl Fn(u64) -> u64) -> Self {
        let g = unit_group(target);
        let vals: Vec<(u64, u64)> = g.generators.iter().map(|&x| (eval(x), order)).collect();
        Self::from_generator_values(target, &vals).expect("well-defined character")
    }

    /// The character mod `target` (a multiple of the modulus) induced from `self`.
    pub fn induce(&self, target: u64) -> Self {
        assert!(
            target.is_multiple_of(self.modulus()),
            "induce target must be a multiple"
        );
        if target == self.modulus() {
            return self.clone();
        }
        Self::from_values_on(target, self.order, |x| {
            self.value_exp(x as i64)
                .expect("unit mod target stays a unit")
        })
    }

    pub fn conductor(&self) -> u64 {
        let f = self.modulus();
        nt::divisors(f)
            .into_iter()
            .find(|&d| {
                (0..f / d).all(|t| {
                    let a = 1 + t * d;
                    self.value_exp(a as i64).is_none_or(|k| k == 0)
                })
            })
            .unwrap_or(f)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// The primitive character inducing `self`.
    pub fn primitive_part(&self) -> Self {
        let c = self.conductor();
        if c == self.modulus() {
            return self.clone();
        }
        let f = self.modulus();
        Self::from_values_on(c, self.order, |x| {
            let lift = (0..f / c)
                .map(|t| x + t * c)
                .find(|&a| nt::gcd(a, f) == 1)
                .expect("units lift");
            self.value_exp(lift as i64).unwrap()
        })
    }

    pub fn require_primitive(&self) -> Result<(), CharacterError> {
        let c = self.conductor();
        if c != self.modulus() {
            return Err(CharacterError::NotPrimitive {
                modulus: self.modulus(),
                conductor: c,
            });
        }
        Ok(())
    }

    pub fn record(&self) -> CharacterRecord {
        CharacterRecord {
            modulus: self.modulus(),
            generators: self.group.generators.clone(),
            exponents: self.exponents.clone(),
            order: self.order,
        }
    }
}

/// Serialized form of a character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub exponents: Vec<u64>,
    pub order: u64,
}

impl CharacterRecord {
    pub fn to_character(&self) -> Result<DirichletCharacter, CharacterError> {
        let g = unit_group(self.modulus);
        if g.generators != self.generators {
            return Err(CharacterError::BadExponents(format!(
                "generator list {:?} does not match {:?}",
                self.generators, g.generators
            )));
        }
        DirichletCharacter::new(g, self.exponents.clone())
    }
}

/// All characters mod `f`, in lexicographic order of exponent vectors.
pub fn enumerate_characters(f: u64) -> Vec<DirichletCharacter> {
    let g = unit_group(f);
    let mut out = Vec::new();
    let mut exps = vec![0u64; g.orders.len()];
    loop {
        out.push(DirichletCharacter::new(g.clone(), exps.clone()).unwrap());
        let mut i = exps.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < g.orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// Primitive characters of conductor exactly `f`, in enumeration order.
pub fn primitive_characters(f: u64) -> Vec<DirichletCharacter> {
    enumerate_characters(f)
        .into_iter()
        .filter(|c| c.is_primitive())
        .collect()
}

/// The `index`-th primitive character of conductor `f` (0-based).
pub fn primitive_character(f: u64, index: usize) -> Result<DirichletCharacter, CharacterError> {
    primitive_characters(f)
        .into_iter()
        .nth(index)
        .ok_or(CharacterError::NoSuchCharacter {
            conductor: f,
            index,
        })
}

/// Lifts `chibar` mod `f`, given by `chibar(g_i) = w^{e_i}` for a generator `w`
/// of `F_q^x`, to the character `chi(g_i) = zeta_{q-1}^{e_i}`.
pub fn teichmuller_lift(
    f: u64,
    q: u64,
    exponents: &[u64],
) -> Result<DirichletCharacter, CharacterError> {
    if q == 2 || !nt::is_prime(q) {
        return Err(CharacterError::BadCharacteristic(q));
    }
    let vals: Vec<(u64, u64)> = exponents.iter().map(|&e| (e % (q - 1), q - 1)).collect();
    if vals.len() != unit_group(f).orders.len() {
        return Err(CharacterError::BadExponents(format!(
            "expected {} exponents for modulus {f}",
            unit_group(f).orders.len()
        )));
    }
    DirichletCharacter::from_generator_values(f, &vals)
}

/// The quadratic character of an odd prime `p`.
pub fn legendre(p: u64) -> DirichletCharacter {
    assert!(p > 2 && nt::is_prime(p));
    DirichletCharacter::new(unit_group(p), vec![(p - 1) / 2]).unwrap()
}

/// An auxiliary twisting character and its Legendre twist.
#[derive(Clone, Debug)]
pub struct EtaCharacter {
    pub prime: u64,
    pub eta: DirichletCharacter,
    pub twisted: DirichletCharacter,
}

/// Non-quadratic non-trivial characters of prime conductor `p <= bound`, `p = -1 mod 4N`.
pub fn enumerate_eta(n: u64, bound: u64) -> Vec<EtaCharacter> {
    let mut out = Vec::new();
    for p in nt::primes_up_to(bound) {
        if p % (4 * n) != 4 * n - 1 {
            continue;
        }
        let leg = legendre(p);
        for eta in enumerate_characters(p) {
            if eta.order() <= 2 {
                continue;
            }
            let twisted = eta.mul(&leg);
            out.push(EtaCharacter {
                prime: p,
                eta,
                twisted,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn unit_group_examples() {
        let g = unit_group(1);
        assert!(g.generators().is_empty());
        assert_eq!(g.size(), 1);
        let g = unit_group(7);
        assert_eq!(g.generators(), &[3]);
        assert_eq!(g.orders(), &[6]);
        let g = unit_group(8);
        assert_eq!(g.orders(), &[2, 2]);
        for &x in g.generators() {
            assert_eq!(x * x % 8, 1);
        }
        for f in 1..200u64 {
            let g = unit_group(f);
            assert_eq!(g.size(), nt::euler_phi(f));
            for (&x, &o) in g.generators().iter().zip(g.orders()) {
                assert_eq!(nt::mult_order(x, f), o, "generator order mod {f}");
            }
        }
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(DirichletCharacter::trivial(9).conductor(), 1);
        let q3 = legendre(3);
        let lifted = q3.induce(9);
        assert_eq!(lifted.conductor(), 3);
        assert_eq!(lifted.primitive_part(), q3);
        let quartic = DirichletCharacter::new(unit_group(5), vec![1]).unwrap();
        assert_eq!(quartic.order(), 4);
        assert_eq!(quartic.conductor(), 5);
    }

    #[test]
    fn trivial_mod_one() {
        let t = DirichletCharacter::trivial(1);
        assert_eq!(t.value_exp(0), Some(0));
        assert_eq!(t.conductor(), 1);
        assert_eq!(primitive_characters(1).len(), 1);
    }

    #[test]
    fn primitive_counts() {
        // number of primitive characters mod f is multiplicative: p -> p-2, p^2 -> (p-1)^2 ...
        assert_eq!(primitive_characters(3).len(), 1);
        assert_eq!(primitive_characters(5).len(), 3);
        assert_eq!(primitive_characters(7).len(), 5);
        assert_eq!(primitive_characters(9).len(), 4);
        assert_eq!(primitive_characters(4).len(), 1);
        assert_eq!(primitive_characters(15).len(), 3);
    }

    #[test]
    fn teichmuller_examples() {
        assert!(teichmuller_lift(5, 7, &[0]).unwrap().is_trivial());
        let q = teichmuller_lift(5, 7, &[3]).unwrap();
        assert_eq!(q, legendre(5));
        let c = teichmuller_lift(5, 13, &[3]).unwrap();
        assert_eq!(c.order(), 4);
        assert_eq!(c.conductor(), 5);
        assert!(teichmuller_lift(5, 2, &[0]).is_err());
        assert!(teichmuller_lift(5, 13, &[1]).is_err());
    }

    #[test]
    fn teichmuller_reduces_back() {
        // w = 2 generates F_13^x
        let (q, w) = (13u64, 2u64);
        for e in [0u64, 3, 6, 9] {
            let chi = teichmuller_lift(5, q, &[e]).unwrap();
            let gen = unit_group(5).generators()[0] as i64;
            let val = chi.value(gen, q - 1);
            assert_eq!(val.reduce_mod(q, w), Some(nt::mod_pow(w, e, q)));
            assert_eq!(chi.conductor(), if e == 0 { 1 } else { 5 });
        }
    }

    #[test]
    fn eta_examples() {
        let etas = enumerate_eta(11, 50);
        assert_eq!(etas.len(), 40);
        assert!(etas.iter().all(|e| e.prime == 43 && e.eta.order() > 2));
        let etas = enumerate_eta(1, 10);
        assert!(etas.iter().all(|e| e.prime == 7));
        assert_eq!(etas.len(), 4);
        assert!(enumerate_eta(11, 40).is_empty());
        for e in enumerate_eta(3, 100) {
            assert_eq!(e.twisted, e.eta.mul(&legendre(e.prime)));
        }
    }

    #[test]
    fn multiplicativity_and_orthogonality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in [5u64, 7, 8, 9, 12, 15, 16, 21, 25, 27, 43, 45] {
            for chi in enumerate_characters(f) {
                let n = chi.order();
                for _ in 0..1000 {
                    let a = rng.gen_range(1..f as i64 + 1);
                    let b = rng.gen_range(1..f as i64 + 1);
                    match (chi.value_exp(a), chi.value_exp(b), chi.value_exp(a * b)) {
                        (Some(x), Some(y), Some(z)) => assert_eq!((x + y) % n, z),
                        (_, _, None) => {
                            assert!(chi.value_exp(a).is_none() || chi.value_exp(b).is_none())
                        }
                        _ => panic!("product of a non-unit is a unit"),
                    }
                }
                if !chi.is_trivial() {
                    let mut total = CycNum::zero(n);
                    for a in 0..f as i64 {
                        total += &chi.value(a, n);
                    }
                    assert!(total.is_zero());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn primitive_part_round_trip(f in 2u64..120, pick in any::<prop::sample::Index>()) {
            let chars = enumerate_characters(f);
            let chi = pick.get(&chars);
            let prim = chi.primitive_part();
            prop_assert_eq!(prim.conductor(), chi.conductor());
            prop_assert!(prim.is_primitive());
            prop_assert_eq!(&prim.induce(f), chi);
        }

        #[test]
        fn teichmuller_preserves_order_and_conductor(
            f in prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 15]),
            pick in any::<prop::sample::Index>(),
        ) {
            // characters with values in mu_(q-1) for a prime q = 1 mod exponent
            let g = unit_group(f);
            let lam = g.exponent();
            let q = (1..).map(|k| k * lam + 1).find(|&q| q > 2 && nt::is_prime(q)).unwrap();
            let chars = enumerate_characters(f);
            let chi = pick.get(&chars);
            let exps: Vec<u64> = chi.exponents().iter().zip(g.orders())
                .map(|(&e, &o)| e * (q - 1) / o).collect();
            let lifted = teichmuller_lift(f, q, &exps).unwrap();
            prop_assert_eq!(lifted.order(), chi.order());
            prop_assert_eq!(lifted.conductor(), chi.conductor());
        }
    }
}
