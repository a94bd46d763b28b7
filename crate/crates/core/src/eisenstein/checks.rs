//! Identity checks on built series: the Hecke eigenvalue table, the quadratic
//! relation on old forms, and the Euler factorization of the twisted L-series.

use serde::{Deserialize, Serialize};

use super::qexp::{degeneracy, hecke, u_operator, QExpansion};
use super::series::{EigenCase, EisensteinSeries};
use crate::arith::cyclotomic::CycNum;
use crate::arith::nt;
use crate::characters::DirichletCharacter;
use crate::error::SeriesError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub ell: u64,
    /// `None` if `ell` divides the level but neither `M` nor `L`.
    pub case: Option<EigenCase>,
    pub expected: Option<Vec<String>>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub level: u64,
    pub precision: u64,
    pub entries: Vec<EigenEntry>,
}

impl EigenReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|e| !e.passed)
            .map(|e| e.ell)
            .collect()
    }
}

/// Eigenvalue table for `E_{M,L,chi}` at its own level.
pub fn eigen_table_check(
    chi: &DirichletCharacter,
    mbar: u64,
    lbar: u64,
    ell_bound: u64,
    prec: u64,
) -> Result<EigenReport, SeriesError> {
    let s = EisensteinSeries::new(chi.clone(), mbar, lbar)?;
    let level = s.level();
    eigen_table_check_at(&s, level, ell_bound, prec)
}

/// Checks `T_ell E = lambda_ell E` to `prec` for every prime `ell <= ell_bound`,
/// with Hecke operators taken at `level` (a multiple of the series' level).
pub fn eigen_table_check_at(
    s: &EisensteinSeries,
    level: u64,
    ell_bound: u64,
    prec: u64,
) -> Result<EigenReport, SeriesError> {
    let top = nt::primes_up_to(ell_bound).last().copied().unwrap_or(1);
    let g = s.closed_form(prec * top)?;
    eigen_entries(s, level, ell_bound, &g, |_| prec).map(|entries| EigenReport {
        level,
        precision: prec,
        entries,
    })
}

/// As [`eigen_table_check_at`], but from a single expansion to `b`: each `T_ell` is
/// compared on its whole valid range `floor(b / ell)`.
pub fn eigen_table_check_within(
    s: &EisensteinSeries,
    level: u64,
    ell_bound: u64,
    b: u64,
) -> Result<EigenReport, SeriesError> {
    let g = s.closed_form(b)?;
    eigen_entries(s, level, ell_bound, &g, |ell| b / ell).map(|entries| EigenReport {
        level,
        precision: b,
        entries,
    })
}

fn eigen_entries(
    s: &EisensteinSeries,
    level: u64,
    ell_bound: u64,
    g: &QExpansion,
    prec_for: impl Fn(u64) -> u64,
) -> Result<Vec<EigenEntry>, SeriesError> {
    if !level.is_multiple_of(s.level()) {
        return Err(SeriesError::LevelMismatch {
            series: s.level(),
            target: level,
        });
    }
    let mut entries = Vec::new();
    for ell in nt::primes_up_to(ell_bound) {
        let entry = match s.expected_eigenvalue(level, ell) {
            None => EigenEntry {
                ell,
                case: None,
                expected: None,
                passed: false,
            },
            Some((case, lambda)) => {
                let prec = prec_for(ell);
                let t = hecke(level, ell, g)?.truncate(prec);
                let passed = t.agrees_with(&g.truncate(prec).scale(&lambda));
                EigenEntry {
                    ell,
                    case: Some(case),
                    expected: Some(lambda.to_strings()),
                    passed,
                }
            }
        };
        entries.push(entry);
    }
    Ok(entries)
}

/// `(U_p^2 - T_p U_p + p) h = 0` for `h = g(z)` and `h = g(pz)`, where `g` has level
/// `N/p` prime to `p` and `T_p` acts on old forms through each component.
/// Needs `g` to precision `prec * p^2`.
pub fn oldform_quadratic_check(g: &QExpansion, p: u64, prec: u64) -> Result<bool, SeriesError> {
    let m = g.level();
    if m.is_multiple_of(p) {
        return Err(SeriesError::Incompatible(format!(
            "{p} divides the level {m} of the old form"
        )));
    }
    let pr = &CycNum::from_int(1, p as i64);
    let t = |h: &QExpansion| hecke(m, p, h);
    let u = |h: &QExpansion| u_operator(p, h);

    let tg = t(g)?;
    // h = g(z): U_p h = iota(T g, -p g)
    let uu = u(&u(g)?)?;
    let tu = t(&tg)?.sub(&degeneracy(p, &tg).scale(pr));
    let first = uu.sub(&tu).add(&g.scale(pr));

    // h = g(pz): U_p h = iota(g, 0)
    let h = degeneracy(p, g);
    let second = u(&u(&h)?)?.sub(&tg).add(&h.scale(pr));

    Ok(vanishes(&first, prec)? && vanishes(&second, prec)?)
}

/// The `p^2 | N` shadow: `U_p(g(pz)) = g` and `U_p g` computed at level `N/p` equals `U_p g`.
pub fn oldform_square_check(g: &QExpansion, p: u64, prec: u64) -> Result<bool, SeriesError> {
    let m = g.level();
    if !m.is_multiple_of(p) {
        return Err(SeriesError::Incompatible(format!(
            "{p} does not divide the level {m} of the old form"
        )));
    }
    let back = u_operator(p, &degeneracy(p, g))?;
    let at_lower = hecke(m, p, g)?;
    let at_upper = hecke(m * p, p, &g.clone().with_level(m * p))?;
    Ok(vanishes(&back.sub(g), prec)? && vanishes(&at_lower.sub(&at_upper), prec)?)
}

fn vanishes(h: &QExpansion, prec: u64) -> Result<bool, SeriesError> {
    if h.precision() < prec {
        return Err(SeriesError::InsufficientPrecision {
            got: h.precision(),
            floor: prec,
        });
    }
    let h = h.truncate(prec);
    Ok(h.rider().is_zero() && h.coeffs().iter().all(|c| c.is_zero()))
}

/// Formal Dirichlet series `sum a_n n^{-s}`, `n = 1..=bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletSeries {
    ring: u64,
    /// `coeffs[n - 1] = a_n`.
    coeffs: Vec<CycNum>,
}

impl DirichletSeries {
    pub fn from_fn(ring: u64, bound: u64, f: impl Fn(u64) -> CycNum) -> Self {
        DirichletSeries {
            ring,
            coeffs: (1..=bound).map(|n| f(n).embed(ring)).collect(),
        }
    }

    /// `1 - c p^{-s}`.
    pub fn euler_factor(ring: u64, bound: u64, p: u64, c: &CycNum) -> Self {
        let minus = -c;
        Self::from_fn(ring, bound, |n| {
            if n == 1 {
                CycNum::one(ring)
            } else if n == p {
                minus.clone()
            } else {
                CycNum::zero(ring)
            }
        })
    }

    pub fn bound(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn coeff(&self, n: u64) -> &CycNum {
        &self.coeffs[n as usize - 1]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ring = nt::lcm(self.ring, other.ring);
        let bound = self.bound().min(other.bound()) as usize;
        let mut coeffs = vec![CycNum::zero(ring); bound];
        for i in 1..=bound {
            let a = &self.coeffs[i - 1];
            if a.is_zero() {
                continue;
            }
            for j in 1..=bound / i {
                let b = &other.coeffs[j - 1];
                if !b.is_zero() {
                    coeffs[i * j - 1] += &(a * b);
                }
            }
        }
        DirichletSeries { ring, coeffs }
    }
}

/// Compares `sum a_n(E) eta(n) n^{-s}` with the Euler factors times
/// `L(chi^{-1} eta, s) L(chi eta, s - 1)` up to `n_bound`.
pub fn dirichlet_factorization_check(
    chi: &DirichletCharacter,
    mbar: u64,
    lbar: u64,
    eta: &DirichletCharacter,
    n_bound: u64,
) -> Result<bool, SeriesError> {
    let s = EisensteinSeries::new(chi.clone(), mbar, lbar)?;
    let f_eta = eta.modulus();
    if nt::gcd(f_eta, s.level()) != 1 {
        return Err(SeriesError::TwistNotCoprime {
            f_eta,
            level: s.level(),
        });
    }
    let ring = nt::lcm(chi.order(), eta.order());
    let e = s.closed_form(n_bound)?;
    let eta_at = |n: u64| eta.value(n as i64, ring);
    let lhs = DirichletSeries::from_fn(ring, n_bound, |n| e.coeff(n).embed(ring) * eta_at(n));

    let l1 = DirichletSeries::from_fn(ring, n_bound, |n| chi.value_inv(n as i64, ring) * eta_at(n));
    let l2 = DirichletSeries::from_fn(ring, n_bound, |n| {
        (chi.value(n as i64, ring) * eta_at(n)).scale_int(n as i64)
    });
    let mut rhs = l1.mul(&l2);
    for p in nt::prime_divisors(lbar) {
        let c = chi.value_inv(p as i64, ring) * eta_at(p);
        rhs = rhs.mul(&DirichletSeries::euler_factor(ring, n_bound, p, &c));
    }
    for p in nt::prime_divisors(mbar) {
        let c = (chi.value(p as i64, ring) * eta_at(p)).scale_int(p as i64);
        rhs = rhs.mul(&DirichletSeries::euler_factor(ring, n_bound, p, &c));
    }
    Ok(lhs == rhs)
}
