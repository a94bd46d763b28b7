//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(m)-1)` and reduced
//! modulo the cyclotomic polynomial `Phi_m`, so equal elements of the same field
//! have identical coefficient vectors. Binary operations between elements of
//! different conductors lift both operands to the compositum `Q(zeta_lcm)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::nt;
use super::rat::{int, rat_to_string, Rat};
use crate::error::ArithError;

#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    degree: usize,
    /// `Phi_m`, low degree first, monic.
    modulus: Vec<i64>,
    /// Nonzero positions of `modulus` below the leading term.
    support: Vec<(usize, i64)>,
}

impl CyclotomicField {
    fn new(m: u64) -> Self {
        let modulus = cyclotomic_polynomial(m);
        let degree = modulus.len() - 1;
        let support = modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        CyclotomicField {
            conductor: m,
            degree,
            modulus,
            support,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Reduces a polynomial of degree `< m` (already folded by `z^m = 1`) modulo `Phi_m`.
    fn reduce_rat(&self, mut poly: Vec<Rat>) -> Vec<Rat> {
        let d = self.degree;
        for i in (d..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[i], Rat::zero());
            for &(k, mk) in &self.support {
                poly[i - d + k] -= &c * BigInt::from(mk);
            }
        }
        poly.truncate(d);
        poly.resize(d, Rat::zero());
        poly
    }

    /// Same reduction on an integer group-ring vector of length `m`; returns the
    /// `phi(m)` power-basis coordinates.
    pub fn reduce_i128(&self, mut poly: Vec<i128>) -> Result<Vec<i128>, ArithError> {
        let d = self.degree;
        for i in (d..poly.len()).rev() {
            let c = poly[i];
            if c == 0 {
                continue;
            }
            poly[i] = 0;
            for &(k, mk) in &self.support {
                let delta = c.checked_mul(mk as i128).ok_or(ArithError::Overflow)?;
                let slot = &mut poly[i - d + k];
                *slot = slot.checked_sub(delta).ok_or(ArithError::Overflow)?;
            }
        }
        poly.truncate(d);
        poly.resize(d, 0);
        Ok(poly)
    }
}

/// `Phi_m` via `prod_{d | m} (x^d - 1)^{mu(m/d)}`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    let mut num: Vec<i64> = vec![1];
    let mut dens: Vec<u64> = Vec::new();
    for d in nt::divisors(m) {
        match mobius(m / d) {
            1 => num = mul_x_pow_minus_one(&num, d as usize),
            -1 => dens.push(d),
            _ => {}
        }
    }
    for d in dens {
        num = div_x_pow_minus_one(&num, d as usize);
    }
    num
}

fn mobius(n: u64) -> i32 {
    let f = nt::factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn mul_x_pow_minus_one(p: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0i64; p.len() + d];
    for (i, &c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_x_pow_minus_one(p: &[i64], d: usize) -> Vec<i64> {
    // p = q * (x^d - 1) exactly
    let n = p.len() - 1;
    let mut rem = p.to_vec();
    let mut q = vec![0i64; n + 1 - d];
    for i in (d..=n).rev() {
        let c = rem[i];
        q[i - d] = c;
        rem[i] = 0;
        rem[i - d] += c;
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn field_cache() -> &'static Mutex<HashMap<u64, Arc<CyclotomicField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared handle to `Q(zeta_m)`.
pub fn field(m: u64) -> Arc<CyclotomicField> {
    let mut cache = field_cache().lock().expect("field cache poisoned");
    cache
        .entry(m)
        .or_insert_with(|| Arc::new(CyclotomicField::new(m)))
        .clone()
}

/// An element of `Q(zeta_m)`.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rat>,
}

impl CycNum {
    pub fn zero(m: u64) -> Self {
        let field = field(m);
        let coeffs = vec![Rat::zero(); field.degree];
        CycNum { field, coeffs }
    }

    pub fn one(m: u64) -> Self {
        Self::from_rat(m, Rat::one())
    }

    pub fn from_rat(m: u64, r: Rat) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        Self::from_rat(m, int(n))
    }

    /// Builds an element from power-basis coordinates (length must be `phi(m)`).
    pub fn from_coeffs(m: u64, coeffs: Vec<Rat>) -> Self {
        let field = field(m);
        assert_eq!(coeffs.len(), field.degree, "coefficient vector length");
        CycNum { field, coeffs }
    }

    /// Builds an element from an arbitrary polynomial in `zeta_m` (any degree).
    pub fn from_poly(m: u64, poly: &[Rat]) -> Self {
        let field = field(m);
        let mut folded = vec![Rat::zero(); m as usize];
        for (i, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                folded[i % m as usize] += c;
            }
        }
        let coeffs = field.reduce_rat(folded);
        CycNum { field, coeffs }
    }

    /// `zeta_m^k` for any integer `k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let field = field(m);
        let mut folded = vec![Rat::zero(); m as usize];
        folded[k.rem_euclid(m as i64) as usize] = Rat::one();
        let coeffs = field.reduce_rat(folded);
        CycNum { field, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// `Some(r)` when the element is the rational number `r`.
    pub fn as_rational(&self) -> Option<&Rat> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| &self.coeffs[0])
    }

    /// Image under `Q(zeta_m) -> Q(zeta_M)`, `zeta_m -> zeta_M^(M/m)`; requires `m | M`.
    pub fn embed(&self, target: u64) -> CycNum {
        let m = self.conductor();
        if m == target {
            return self.clone();
        }
        assert!(
            target.is_multiple_of(m),
            "cannot embed Q(zeta_{m}) into Q(zeta_{target})"
        );
        let step = (target / m) as usize;
        let field = field(target);
        let mut folded = vec![Rat::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                folded[i * step] = c.clone();
            }
        }
        let coeffs = field.reduce_rat(folded);
        CycNum { field, coeffs }
    }

    fn lift_pair(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        let l = nt::lcm(a.conductor(), b.conductor());
        (a.embed(l), b.embed(l))
    }

    /// The automorphism `zeta_m -> zeta_m^a` (`gcd(a, m) = 1`).
    pub fn galois(&self, a: i64) -> CycNum {
        let m = self.conductor() as i64;
        assert_eq!(
            nt::gcd(a.rem_euclid(m) as u64, m as u64),
            1,
            "a must be a unit"
        );
        let mut folded = vec![Rat::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                folded[(i as i64 * a).rem_euclid(m) as usize] += c;
            }
        }
        CycNum {
            field: self.field.clone(),
            coeffs: self.field.reduce_rat(folded),
        }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> CycNum {
        self.scale(&int(n))
    }

    fn mul_same(&self, other: &CycNum) -> CycNum {
        let m = self.conductor() as usize;
        let mut folded = vec![Rat::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                folded[(i + j) % m] += a * b;
            }
        }
        CycNum {
            field: self.field.clone(),
            coeffs: self.field.reduce_rat(folded),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Phi_m`.
    pub fn inv(&self) -> Result<CycNum, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycNum::from_rat(self.conductor(), r.recip()));
        }
        let modulus: Vec<Rat> = self.field.modulus.iter().map(|&c| int(c)).collect();
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<Rat> = vec![];
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Phi_m is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let scaled: Vec<Rat> = s0.iter().map(|x| x * &c).collect();
        Ok(CycNum::from_poly(self.conductor(), &scaled))
    }

    pub fn pow(&self, e: i64) -> Result<CycNum, ArithError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one(self.conductor());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Expresses the element in `Q(zeta_target)` for `target | m`, if it lies there.
    pub fn descend(&self, target: u64) -> Result<CycNum, ArithError> {
        let m = self.conductor();
        if target == m {
            return Ok(self.clone());
        }
        assert!(
            m.is_multiple_of(target),
            "descend target must divide the conductor"
        );
        let small = field(target);
        let k = small.degree;
        let n = self.field.degree;
        // columns: images of zeta_target^j
        let cols: Vec<CycNum> = (0..k)
            .map(|j| CycNum::zeta_pow(target, j as i64).embed(m))
            .collect();
        let mut rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(self.coeffs[i].clone());
                row
            })
            .collect();
        let sol = solve_rational(&mut rows, k).ok_or(ArithError::NotInSubfield { target })?;
        Ok(CycNum::from_coeffs(target, sol))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// True when every coordinate is integral after inverting `primes`
    /// (the power basis is a Z-basis of `Z[zeta_m]`).
    pub fn is_integral_away_from(&self, primes: &[u64]) -> bool {
        super::rat::strip_primes(&self.denominator(), primes).is_one()
    }

    /// Image under `Z[zeta_m][1/den] -> F_q`, `zeta_m -> root`; `root` must be a
    /// primitive `m`-th root of unity mod `q`. `None` if a denominator is divisible by `q`.
    pub fn reduce_mod(&self, q: u64, root: u64) -> Option<u64> {
        let qb = BigInt::from(q);
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in &self.coeffs {
            if !c.is_zero() {
                let den = (c.denom() % &qb).to_u64().unwrap();
                if den == 0 {
                    return None;
                }
                let num = c.numer().mod_floor(&qb).to_u64().unwrap();
                let inv = nt::mod_inverse(den as i64, q as i64)? as u64;
                let term = (num as u128 * inv as u128 % q as u128) as u64;
                acc = ((acc as u128 + term as u128 * pw as u128) % q as u128) as u64;
            }
            pw = (pw as u128 * root as u128 % q as u128) as u64;
        }
        Some(acc)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }

    pub fn from_strings(m: u64, parts: &[String]) -> Result<CycNum, ArithError> {
        let coeffs = parts
            .iter()
            .map(|s| super::rat::parse_rat(s))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != field(m).degree {
            return Err(ArithError::Parse(format!(
                "expected {} coordinates for Q(zeta_{m}), got {}",
                field(m).degree,
                coeffs.len()
            )));
        }
        Ok(CycNum::from_coeffs(m, coeffs))
    }
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![Rat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Solves an (over)determined augmented system with `k` unknowns; `None` if inconsistent.
pub(crate) fn solve_rational(rows: &mut [Vec<Rat>], k: usize) -> Option<Vec<Rat>> {
    let n = rows.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=k {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rat::zero(); k];
    for (i, &c) in pivot_cols.iter().enumerate() {
        sol[c] = rows[i][k].clone();
    }
    Some(sol)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = CycNum::lift_pair(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}]({})", self.conductor(), self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", rat_to_string(&abs))?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", rat_to_string(&abs))?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                if self.conductor() == rhs.conductor() {
                    $body(self, rhs)
                } else {
                    let (a, b) = CycNum::lift_pair(self, rhs);
                    $body(&a, &b)
                }
            }
        }
        impl $trait<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycNum, b: &CycNum| CycNum {
    field: a.field.clone(),
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
});
binop!(Sub, sub, |a: &CycNum, b: &CycNum| CycNum {
    field: a.field.clone(),
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
});
binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_same(b));

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if self.conductor() == rhs.conductor() {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        if self.conductor() == rhs.conductor() {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !y.is_zero() {
                    *x -= y;
                }
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn zeta_relations() {
        let z = CycNum::zeta_pow(12, 1);
        assert!(z.pow(12).unwrap().is_one());
        assert!(!z.pow(6).unwrap().is_one());
        let z3 = CycNum::zeta_pow(3, 1);
        let s = &(&CycNum::one(3) + &z3) + &z3.pow(2).unwrap();
        assert!(s.is_zero());
        // zeta_6 embedded in Q(zeta_12) is zeta_12^2
        assert_eq!(CycNum::zeta_pow(6, 1).embed(12), CycNum::zeta_pow(12, 2));
        // Q(zeta_3) = Q(zeta_6): -zeta_3^2 = zeta_6
        assert_eq!(-CycNum::zeta_pow(3, 2), CycNum::zeta_pow(6, 1));
    }

    #[test]
    fn descend_and_galois() {
        let i = CycNum::zeta_pow(4, 1);
        let lifted = i.embed(20);
        assert_eq!(lifted.descend(4).unwrap(), i);
        assert!(CycNum::zeta_pow(20, 1).descend(4).is_err());
        assert_eq!(i.conj(), -&i);
        assert_eq!(CycNum::zeta_pow(5, 1).galois(2), CycNum::zeta_pow(5, 2));
    }

    #[test]
    fn reduction_mod_prime() {
        // zeta_4 -> 2 in F_5
        let x = &CycNum::from_int(4, 3) + &CycNum::zeta_pow(4, 1);
        assert_eq!(x.reduce_mod(5, 2), Some(0));
        let half = CycNum::from_rat(4, rat(1, 2));
        assert_eq!(half.reduce_mod(5, 2), Some(3));
        assert_eq!(CycNum::from_rat(4, rat(1, 5)).reduce_mod(5, 2), None);
    }

    fn arb_cyc(m: u64) -> impl Strategy<Value = CycNum> {
        let d = field(m).degree();
        proptest::collection::vec((-9i64..10, 1i64..5), d).prop_map(move |v| {
            CycNum::from_coeffs(m, v.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 12, 15])
            .prop_flat_map(|m| (arb_cyc(m), arb_cyc(m), arb_cyc(m)))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn mixed_conductors_lift((a, b) in (arb_cyc(4), arb_cyc(6))) {
            let prod = &a * &b;
            prop_assert_eq!(prod.conductor(), 12);
            prop_assert_eq!(prod, &a.embed(12) * &b.embed(12));
        }

        #[test]
        fn inverse_round_trips(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
                               v in proptest::collection::vec((-9i64..10, 1i64..5), 12)) {
            let d = field(p).degree();
            let x = CycNum::from_coeffs(p, v[..d].iter().map(|&(a, b)| rat(a, b)).collect());
            prop_assume!(!x.is_zero());
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }
}
