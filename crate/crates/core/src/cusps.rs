//! Cusps of `X_0(N)`.
//!
//! A cusp is labelled `(d, x)` with `d | N` and `x` a unit modulo
//! `g = gcd(d, N/d)`; its point is `dx/N = x/(N/d)`. The completing matrix
//! `sigma = (x u; N/d v)` sends infinity to the cusp.

use serde::{Deserialize, Serialize};

use crate::arith::matrix::Mat2;
use crate::arith::nt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    pub level: u64,
    pub d: u64,
    /// Representative of the residue class: the least positive integer in
    /// the class that is coprime to the level.
    pub x: u64,
    sigma: Mat2,
}

impl Cusp {
    fn new(level: u64, d: u64, x: u64) -> Self {
        let c = (level / d) as i64;
        let (g, s, _) = nt::ext_gcd(x as i64, c);
        debug_assert_eq!(g, 1);
        let v = s.rem_euclid(c);
        let u = (x as i64 * v - 1) / c;
        let sigma = Mat2::new(x as i64, u, c, v);
        debug_assert_eq!(sigma.det(), 1);
        Cusp { level, d, x, sigma }
    }

    pub fn sigma(&self) -> Mat2 {
        self.sigma
    }

    /// Reduced denominator `N/d` of the cusp point.
    pub fn denominator(&self) -> u64 {
        self.level / self.d
    }

    /// `gcd(d, N/d)`; the cusp is defined over `Q(zeta_g)`.
    pub fn field_conductor(&self) -> u64 {
        nt::gcd(self.d, self.level / self.d)
    }

    pub fn residue(&self) -> u64 {
        self.x % self.field_conductor()
    }

    pub fn width(&self) -> u64 {
        width(self)
    }

    pub fn is_rational(&self) -> bool {
        self.field_conductor() == 1
    }

    pub fn is_infinity(&self) -> bool {
        self.d == 1
    }

    pub fn record(&self) -> CuspRecord {
        CuspRecord {
            d: self.d,
            x: self.x,
            width: self.width(),
            field_conductor: self.field_conductor(),
            sigma: self.sigma.to_rows(),
        }
    }
}

/// The `(d, x)` cusp of level `n` whose representative is `x0 mod gcd(d, n/d)`.
pub fn cusp_for(n: u64, d: u64, x0: u64) -> Option<Cusp> {
    if !n.is_multiple_of(d) {
        return None;
    }
    let g = nt::gcd(d, n / d);
    let r = x0 % g;
    if nt::gcd(r, g) != 1 && g > 1 {
        return None;
    }
    let x = (0..)
        .map(|k| if g == 1 { 1 + k } else { r + k * g })
        .find(|&x| x > 0 && nt::gcd(x, n) == 1)?;
    Some(Cusp::new(n, d, x))
}

/// All cusps of `X_0(N)`, by increasing `d`, then increasing residue.
pub fn enumerate_cusps(n: u64) -> Vec<Cusp> {
    let mut out = Vec::new();
    for d in nt::divisors(n) {
        let g = nt::gcd(d, n / d);
        for r in 1..=g {
            if nt::gcd(r, g) == 1 {
                out.push(cusp_for(n, d, r).expect("unit residue"));
            }
        }
    }
    out
}

/// `N / gcd((N/d)^2, N)`.
pub fn width(c: &Cusp) -> u64 {
    let cden = c.level / c.d;
    c.level / nt::gcd(cden * cden, c.level)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRecord {
    pub d: u64,
    pub x: u64,
    pub width: u64,
    pub field_conductor: u64,
    pub sigma: [[i64; 2]; 2],
}

/// Orbits of `(c : d) -> (c : c + d)` on `P^1(Z/N)`, counted by brute force.
#[derive(Clone, Debug)]
pub struct OrbitOracle {
    level: u64,
    /// Projective-point id of each pair `(c, d)`, `u32::MAX` off `P^1`.
    point_id: Vec<u32>,
    /// Orbit of each projective point.
    point_orbit: Vec<usize>,
    /// Smallest pair in each orbit, and the orbit size.
    pub orbits: Vec<((u64, u64), u64)>,
}

impl OrbitOracle {
    pub fn new(n: u64) -> Self {
        let nn = n as usize;
        let units: Vec<u64> = (1..=n)
            .filter(|&u| nt::gcd(u, n) == 1)
            .map(|u| u % n.max(1))
            .collect();
        let mut point_id = vec![u32::MAX; nn * nn];
        let mut reps: Vec<(u64, u64)> = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if nt::gcd(nt::gcd(c, d), n) != 1 || point_id[(c * n + d) as usize] != u32::MAX {
                    continue;
                }
                let id = reps.len() as u32;
                reps.push((c, d));
                for &u in &units {
                    let (uc, ud) = (u * c % n, u * d % n);
                    point_id[(uc * n + ud) as usize] = id;
                }
            }
        }
        let mut point_orbit = vec![usize::MAX; reps.len()];
        let mut orbits = Vec::new();
        for start in 0..reps.len() {
            if point_orbit[start] != usize::MAX {
                continue;
            }
            let orbit = orbits.len();
            let mut size = 0;
            let mut cur = start;
            while point_orbit[cur] == usize::MAX {
                point_orbit[cur] = orbit;
                size += 1;
                let (c, d) = reps[cur];
                cur = point_id[(c * n + (c + d) % n) as usize] as usize;
            }
            orbits.push((reps[start], size));
        }
        OrbitOracle {
            level: n,
            point_id,
            point_orbit,
            orbits,
        }
    }

    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    pub fn points(&self) -> usize {
        self.point_orbit.len()
    }

    /// Orbit index of the projective point `(c : d)`.
    pub fn orbit_of(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.level as i64;
        let (c, d) = (c.rem_euclid(n), d.rem_euclid(n));
        let id = self.point_id[(c * n + d) as usize];
        (id != u32::MAX).then(|| self.point_orbit[id as usize])
    }

    /// Orbit containing the coset of the bottom row of `sigma`.
    pub fn orbit_of_cusp(&self, cusp: &Cusp) -> Option<usize> {
        let s = cusp.sigma();
        self.orbit_of(s.c, s.d)
    }
}

/// Number of cusps of `X_0(N)` and the orbit labels, computed without the `(d, x)` parametrization.
pub fn orbit_oracle(n: u64) -> OrbitOracle {
    OrbitOracle::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        assert_eq!(enumerate_cusps(1).len(), 1);
        let c11 = enumerate_cusps(11);
        assert_eq!(c11.iter().map(|c| c.d).collect::<Vec<_>>(), vec![1, 11]);
        assert_eq!(
            c11.iter().map(|c| c.width()).collect::<Vec<_>>(),
            vec![1, 11]
        );
        let c9 = enumerate_cusps(9);
        assert_eq!(
            c9.iter().map(|c| (c.d, c.x)).collect::<Vec<_>>(),
            vec![(1, 1), (3, 1), (3, 2), (9, 1)]
        );
        assert!(c9.iter().filter(|c| c.d == 3).all(|c| c.width() == 1));
    }

    #[test]
    fn representative_may_exceed_g() {
        // residue 3 mod 5 is not coprime to 75 until 8
        let c = cusp_for(75, 5, 3).unwrap();
        assert_eq!(c.x, 8);
        assert_eq!(c.residue(), 3);
        assert_eq!(c.sigma().det(), 1);
    }

    #[test]
    fn sigma_maps_infinity_to_cusp() {
        for n in 1..120u64 {
            for c in enumerate_cusps(n) {
                let s = c.sigma();
                assert_eq!(s.det(), 1);
                assert_eq!(s.c as u64, n / c.d);
                assert_eq!(s.a as u64, c.x);
                assert!(s.d >= 0 && (s.d as u64) < n / c.d || n / c.d == 1);
            }
        }
    }

    #[test]
    fn oracle_small() {
        assert_eq!(orbit_oracle(1).count(), 1);
        assert_eq!(orbit_oracle(11).count(), 2);
        assert_eq!(orbit_oracle(11).points(), 12);
        assert_eq!(orbit_oracle(45).count(), enumerate_cusps(45).len());
    }

    #[test]
    fn rational_flags() {
        for c in enumerate_cusps(45) {
            assert_eq!(c.is_rational(), nt::gcd(c.d, 45 / c.d) == 1);
        }
    }
}
