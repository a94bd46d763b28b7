//! 2x2 integer matrices and the Hermite factorization `M = gamma * (A B; 0 D)`.

use serde::{Deserialize, Serialize};

use super::nt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub const fn diag(e: i64, f: i64) -> Self {
        Mat2::new(e, 0, 0, f)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv_sl2(&self) -> Mat2 {
        debug_assert_eq!(self.det(), 1);
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn to_rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// Factors a matrix of positive determinant as `gamma * (A B; 0 D)` with
    /// `gamma` in `SL_2(Z)`, `A, D > 0` and `0 <= B < D`.
    pub fn hermite(&self) -> Option<(Mat2, Upper)> {
        let det = self.det();
        if det <= 0 {
            return None;
        }
        let (g, s, t) = nt::ext_gcd(self.a, self.c);
        // s*a + t*c = g, so (a/g, -t; c/g, s) has determinant 1
        let gamma = Mat2::new(self.a / g, -t, self.c / g, s);
        let u = gamma.inv_sl2().mul(self);
        debug_assert_eq!(u.c, 0);
        let (big_a, big_d) = (u.a, u.d);
        debug_assert!(big_a > 0 && big_d > 0);
        let k = u.b.div_euclid(big_d);
        let gamma = gamma.mul(&Mat2::new(1, k, 0, 1));
        let upper = Upper {
            a: big_a as u64,
            b: u.b.rem_euclid(big_d) as u64,
            d: big_d as u64,
        };
        debug_assert_eq!(gamma.mul(&upper.as_mat()), *self);
        Some((gamma, upper))
    }
}

/// `(a b; 0 d)` with `a, d > 0`, `0 <= b < d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Upper {
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl Upper {
    pub fn as_mat(&self) -> Mat2 {
        Mat2::new(self.a as i64, self.b as i64, 0, self.d as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn hermite_reconstructs(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let m = Mat2::new(a, b, c, d);
            prop_assume!(m.det() > 0);
            let (g, u) = m.hermite().unwrap();
            prop_assert_eq!(g.det(), 1);
            prop_assert!(u.b < u.d);
            prop_assert_eq!(u.a * u.d, m.det() as u64);
            prop_assert_eq!(g.mul(&u.as_mat()), m);
        }
    }

    #[test]
    fn diagonal_is_fixed() {
        let (g, u) = Mat2::diag(5, 1).hermite().unwrap();
        assert_eq!(g, Mat2::identity());
        assert_eq!(u, Upper { a: 5, b: 0, d: 1 });
        assert!(Mat2::new(0, 1, 1, 0).hermite().is_none());
    }
}
