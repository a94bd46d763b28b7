//! Hecke's functions `phi_x`, `x in (Q/Z)^2`, as formal combinations, and their
//! Fourier expansions at infinity:
//!
//! `phi_x + delta(x) nu = B_2(x_1)/2 - P_x - P_{-x}`,
//! `P_x = sum_{k > 0, k = x_1 mod 1} k sum_{m >= 1} e(m x_2) q^{m k}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::qexp::QExpansion;
use crate::arith::cyclotomic::{field, CycNum};
use crate::arith::matrix::{Mat2, Upper};
use crate::arith::nt;
use crate::arith::rat::{bernoulli2, den_u64, frac, frac_num_u64, rat, Rat};
use crate::error::{ArithError, SeriesError};

/// A point of `(Q/Z)^2`, stored with both coordinates in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhiPoint {
    pub x1: Rat,
    pub x2: Rat,
}

impl PhiPoint {
    pub fn new(x1: Rat, x2: Rat) -> Self {
        PhiPoint {
            x1: frac(&x1),
            x2: frac(&x2),
        }
    }

    pub fn from_fracs(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(rat(a, b), rat(c, d))
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    /// Row vector times matrix, reduced mod 1.
    pub fn act(&self, m: &Mat2) -> PhiPoint {
        let a = |k: i64| Rat::from_integer(BigInt::from(k));
        PhiPoint::new(
            &self.x1 * a(m.a) + &self.x2 * a(m.c),
            &self.x1 * a(m.b) + &self.x2 * a(m.d),
        )
    }

    pub fn denominator(&self) -> u64 {
        nt::lcm(den_u64(&self.x1), den_u64(&self.x2))
    }
}

/// `coef * phi_x | diag(scale, 1)`.
#[derive(Clone, Debug)]
pub struct PhiTerm {
    pub x: PhiPoint,
    pub scale: u64,
    pub coef: CycNum,
}

/// `prefactor * sum_terms coef * phi_x | diag(e, 1)` with like terms merged.
#[derive(Clone, Debug)]
pub struct PhiVector {
    level: u64,
    prefactor: CycNum,
    terms: BTreeMap<(PhiPoint, u64), CycNum>,
}

impl PhiVector {
    pub fn new(level: u64, prefactor: CycNum) -> Self {
        PhiVector {
            level,
            prefactor,
            terms: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn prefactor(&self) -> &CycNum {
        &self.prefactor
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, x: PhiPoint, scale: u64, coef: CycNum) {
        if coef.is_zero() {
            return;
        }
        let key = (x, scale);
        let merged = match self.terms.remove(&key) {
            Some(old) => &old + &coef,
            None => coef,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = PhiTerm> + '_ {
        self.terms.iter().map(|((x, e), c)| PhiTerm {
            x: x.clone(),
            scale: *e,
            coef: c.clone(),
        })
    }

    /// `self + c * (self | diag(p, 1))`, the shape of both `[p]^+` and `[p]^-`.
    pub fn add_dilated(&self, p: u64, c: &CycNum) -> PhiVector {
        let mut out = self.clone();
        out.level = self.level * p;
        for ((x, e), coef) in &self.terms {
            out.push(x.clone(), e * p, coef * c);
        }
        out
    }

    /// Coefficient of the non-holomorphic term `nu`.
    pub fn rider(&self) -> CycNum {
        let mut r = CycNum::zero(1);
        for ((x, _), c) in &self.terms {
            if x.is_zero() {
                r -= c;
            }
        }
        &r * &self.prefactor
    }

    pub fn expand(&self, precision: u64) -> Result<QExpansion, SeriesError> {
        let jobs: Vec<SlashedPhi> = self
            .terms
            .iter()
            .map(|((x, e), c)| SlashedPhi {
                y: x.clone(),
                alpha: Upper { a: *e, b: 0, d: 1 },
                coef: c.clone(),
            })
            .collect();
        let q = expand_slashed(&jobs, &self.prefactor, self.level, precision)?;
        q.to_integral().ok_or_else(|| {
            SeriesError::Incompatible(
                "fractional exponents survive in a level-N combination".into(),
            )
        })
    }
}

/// `coef * phi_y | alpha` with `alpha` upper triangular.
#[derive(Clone, Debug)]
pub struct SlashedPhi {
    pub y: PhiPoint,
    pub alpha: Upper,
    pub coef: CycNum,
}

struct JobPlan {
    dy: u64,
    s0: u64,
    e2: u64,
    t0: u64,
    coords: Vec<(u64, i128)>,
    ring: u64,
    wmul: i128,
}

fn to_i128(b: &BigInt) -> Result<i128, ArithError> {
    b.to_i128().ok_or(ArithError::Overflow)
}

/// Expands `prefactor * sum coef * phi_y | alpha` to `precision` in `q`.
///
/// The positive-exponent part is accumulated exactly in the integral group ring
/// `Z[x]/(x^R - 1)` over a common weight denominator, then reduced modulo
/// `Phi_R` once per exponent slot.
pub fn expand_slashed(
    jobs: &[SlashedPhi],
    prefactor: &CycNum,
    level: u64,
    precision: u64,
) -> Result<QExpansion, ArithError> {
    let mut k_den = 1u64;
    let mut root = 1u64;
    let mut weight = BigInt::one();
    let mut plans = Vec::with_capacity(jobs.len());
    for job in jobs {
        let dy = den_u64(&job.y.x1);
        let e2 = den_u64(&job.y.x2);
        let ring = job.coef.conductor();
        let den_c = job.coef.denominator();
        let base = dy * job.alpha.d;
        k_den = nt::lcm(k_den, base);
        root = nt::lcm(nt::lcm(root, ring), nt::lcm(e2, base));
        weight = weight.lcm(&(&den_c * BigInt::from(base)));
        let coords = job
            .coef
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                Ok((
                    i as u64,
                    to_i128(&(c * Rat::from_integer(den_c.clone())).to_integer())?,
                ))
            })
            .collect::<Result<Vec<_>, ArithError>>()?;
        plans.push(JobPlan {
            dy,
            s0: frac_num_u64(&job.y.x1),
            e2,
            t0: frac_num_u64(&job.y.x2),
            coords,
            ring,
            wmul: 0,
        });
    }
    let w = to_i128(&weight)?;
    for (plan, job) in plans.iter_mut().zip(jobs) {
        let den_c = to_i128(&job.coef.denominator())?;
        plan.wmul = w / (den_c * (plan.dy * job.alpha.d) as i128);
    }

    let slots = (precision * k_den) as usize + 1;
    let r = root as usize;
    let mut acc: Vec<Option<Vec<i128>>> = vec![None; slots];
    let mut constant = CycNum::zero(1);
    let mut rider = CycNum::zero(1);

    for (plan, job) in plans.iter().zip(jobs) {
        let Upper { a, b, d } = job.alpha;
        let ad = Rat::new(BigInt::from(a), BigInt::from(d));
        constant += &job
            .coef
            .scale(&(bernoulli2(&job.y.x1) * &ad / Rat::from_integer(2.into())));
        if job.y.is_zero() {
            rider -= &job.coef;
        }
        let base = plan.dy * d;
        let slot_mul = k_den / base;
        let ring_step = root / plan.ring;
        let limit = precision * base;
        for sign in [1i64, -1] {
            let r0 = if sign == 1 {
                plan.s0
            } else {
                (plan.dy - plan.s0) % plan.dy
            };
            let mut s = if r0 == 0 { plan.dy } else { r0 };
            while s * a <= limit {
                // root of unity advanced by one step of m
                let step = (sign * (plan.t0 * (root / plan.e2)) as i64).rem_euclid(root as i64)
                    as u64
                    + (s * b % base) * (root / base);
                let step = step % root;
                let w_s = -((a * s) as i128) * plan.wmul;
                let mut m = 1u64;
                while m * s * a <= limit {
                    let slot = (m * s * a * slot_mul) as usize;
                    let cell = acc[slot].get_or_insert_with(|| vec![0i128; r]);
                    let rm = (m % root) * step % root;
                    for &(i, num) in &plan.coords {
                        let idx = ((rm + i * ring_step) % root) as usize;
                        let add = w_s.checked_mul(num).ok_or(ArithError::Overflow)?;
                        cell[idx] = cell[idx].checked_add(add).ok_or(ArithError::Overflow)?;
                    }
                    m += 1;
                }
                s += plan.dy;
            }
        }
    }

    let f = field(root);
    let inv_w = Rat::new(BigInt::one(), weight.clone());
    let mut coeffs = Vec::with_capacity(slots);
    for (k, cell) in acc.into_iter().enumerate() {
        let mut c = match cell {
            None => CycNum::zero(1),
            Some(v) => {
                let reduced = f.reduce_i128(v)?;
                if reduced.iter().all(|&x| x == 0) {
                    CycNum::zero(1)
                } else {
                    let coords = reduced
                        .into_iter()
                        .map(|x| Rat::from_integer(BigInt::from(x)) * &inv_w)
                        .collect();
                    &CycNum::from_coeffs(root, coords) * prefactor
                }
            }
        };
        if k == 0 {
            c = &constant * prefactor;
        }
        coeffs.push(c);
    }
    Ok(QExpansion::new(
        level,
        k_den,
        precision,
        coeffs,
        &rider * prefactor,
    ))
}

/// Expansion of the single function `phi_x`.
pub fn phi_expansion(x: &PhiPoint, precision: u64) -> Result<QExpansion, ArithError> {
    let n = x.denominator();
    expand_slashed(
        &[SlashedPhi {
            y: x.clone(),
            alpha: Upper { a: 1, b: 0, d: 1 },
            coef: CycNum::one(1),
        }],
        &CycNum::one(1),
        n * n,
        precision,
    )
}

/// All `y in (Q/Z)^2` with `y * alpha = x`.
pub fn preimages(x: &PhiPoint, alpha: &Mat2) -> Vec<PhiPoint> {
    let det = alpha.det();
    assert!(det > 0);
    // y = (x + v) adj(alpha) / det for v in (Z/det)^2
    let adj = Mat2::new(alpha.d, -alpha.b, -alpha.c, alpha.a);
    let inv_det = Rat::new(BigInt::one(), BigInt::from(det));
    let mut out = std::collections::BTreeSet::new();
    for v1 in 0..det {
        for v2 in 0..det {
            out.insert(PhiPoint::new(
                shifted_raw(&x.x1, v1, &x.x2, v2, adj.a, adj.c) * &inv_det,
                shifted_raw(&x.x1, v1, &x.x2, v2, adj.b, adj.d) * &inv_det,
            ));
        }
    }
    debug_assert_eq!(out.len() as i64, det);
    out.into_iter().collect()
}

fn shifted_raw(x1: &Rat, v1: i64, x2: &Rat, v2: i64, m1: i64, m2: i64) -> Rat {
    (x1 + Rat::from_integer(v1.into())) * Rat::from_integer(m1.into())
        + (x2 + Rat::from_integer(v2.into())) * Rat::from_integer(m2.into())
}

/// `phi_y | alpha` for integral `alpha` of positive determinant, as an expansion job.
///
/// `alpha = gamma * U` with `gamma` in `SL_2(Z)` and `U` upper triangular; the factor
/// `gamma` moves `y` to `y gamma`. One extra unit translation is split off
/// (`alpha = (gamma T^{-1}) (T U)`) so the translation rule is exercised even when
/// `alpha` lies in `SL_2(Z)`.
pub fn slash_job(y: &PhiPoint, alpha: &Mat2, coef: CycNum) -> Result<SlashedPhi, SeriesError> {
    let (gamma, u) = alpha.hermite().ok_or(SeriesError::BadMatrix)?;
    let gamma = gamma.mul(&Mat2::new(1, -1, 0, 1));
    Ok(SlashedPhi {
        y: y.act(&gamma),
        alpha: Upper {
            a: u.a,
            b: u.b + u.d,
            d: u.d,
        },
        coef,
    })
}

/// Compares the two sides of `phi_x = sum_{y alpha = x} phi_y | alpha` to `precision`.
pub fn distribution_check(x: &PhiPoint, alpha: &Mat2, precision: u64) -> Result<bool, SeriesError> {
    if alpha.det() <= 0 {
        return Err(SeriesError::BadMatrix);
    }
    let lhs = phi_expansion(x, precision)?;
    let jobs = preimages(x, alpha)
        .iter()
        .map(|y| slash_job(y, alpha, CycNum::one(1)))
        .collect::<Result<Vec<_>, _>>()?;
    let rhs = expand_slashed(&jobs, &CycNum::one(1), lhs.level(), precision)?;
    Ok(lhs.agrees_with(&rhs))
}
