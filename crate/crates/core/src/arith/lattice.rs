//! Integer lattices, Smith normal form and prime-to-S indices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{strip_primes, Rat};
use crate::error::ArithError;

/// A finitely generated subgroup of `Q^r`, compared against `Z^r` after inverting `inverted`.
#[derive(Clone, Debug)]
pub struct Lattice {
    rank: usize,
    generators: Vec<Vec<Rat>>,
    inverted: Vec<u64>,
}

impl Lattice {
    pub fn new(rank: usize, inverted: &[u64]) -> Self {
        let mut inverted = inverted.to_vec();
        inverted.sort_unstable();
        inverted.dedup();
        Lattice {
            rank,
            generators: Vec::new(),
            inverted,
        }
    }

    pub fn with_generators(rank: usize, inverted: &[u64], generators: Vec<Vec<Rat>>) -> Self {
        let mut l = Self::new(rank, inverted);
        for g in generators {
            l.push(g);
        }
        l
    }

    pub fn push(&mut self, v: Vec<Rat>) {
        assert_eq!(
            v.len(),
            self.rank,
            "generator length must equal the ambient rank"
        );
        if v.iter().any(|c| !c.is_zero()) {
            self.generators.push(v);
        }
    }

    pub fn push_int(&mut self, v: &[i64]) {
        self.push(
            v.iter()
                .map(|&x| Rat::from_integer(BigInt::from(x)))
                .collect(),
        );
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn inverted(&self) -> &[u64] {
        &self.inverted
    }

    /// `[Z^r : L]` with every factor of an inverted prime removed.
    pub fn index(&self) -> Result<BigInt, ArithError> {
        lattice_index(self, self.rank)
    }
}

/// Nonzero elementary divisors of an integer matrix, in divisibility order.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match bad_row {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

/// Prime-to-S index of the span of `sub` in `Z^r`.
///
/// Generators are scaled by a common denominator `D`, the Smith form of the
/// resulting integer matrix gives `[Z^r : D*L]`, and the index of `L` is that
/// product divided by `D^r`. Factors of the inverted primes are then discarded.
pub fn lattice_index(sub: &Lattice, ambient_rank: usize) -> Result<BigInt, ArithError> {
    assert_eq!(sub.rank, ambient_rank, "lattice rank mismatch");
    prime_to_part(&rational_index(sub)?, &sub.inverted)
}

/// `[Z^r : L]` as a rational number, for a full-rank `L` in `Q^r`.
pub fn rational_index(sub: &Lattice) -> Result<Rat, ArithError> {
    let den = sub
        .generators
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let matrix: Vec<Vec<BigInt>> = sub
        .generators
        .iter()
        .map(|g| g.iter().map(|c| (c * &den).to_integer()).collect())
        .collect();
    let divisors = smith_diagonal(matrix);
    if divisors.len() < sub.rank {
        return Err(ArithError::InfiniteIndex {
            rank: divisors.len(),
            ambient: sub.rank,
        });
    }
    let num: BigInt = divisors.iter().product();
    Ok(Rat::new(num, num_traits::pow(den, sub.rank)))
}

/// `[sup : sub]` with inverted primes discarded; both lattices full rank.
pub fn relative_index(sup: &Lattice, sub: &Lattice) -> Result<BigInt, ArithError> {
    assert_eq!(sup.rank, sub.rank, "lattice rank mismatch");
    let ratio = rational_index(sub)? / rational_index(sup)?;
    prime_to_part(&ratio, &sub.inverted)
}

fn prime_to_part(index: &Rat, inverted: &[u64]) -> Result<BigInt, ArithError> {
    let residual = strip_primes(index.denom(), inverted);
    if !residual.is_one() {
        return Err(ArithError::NotIntegral(residual.to_string()));
    }
    Ok(strip_primes(index.numer(), inverted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let d = smith_diagonal(vec![
            big(&[2, 4, 4]),
            big(&[-6, 6, 12]),
            big(&[10, -4, -16]),
        ]);
        assert_eq!(d, big(&[2, 6, 12]));
        assert_eq!(smith_diagonal(vec![big(&[0, 0])]), vec![]);
    }

    #[test]
    fn relative_examples() {
        let sup = Lattice::with_generators(1, &[2], vec![vec![rat(1, 3)]]);
        let sub = Lattice::with_generators(1, &[2], vec![vec![rat(10, 1)]]);
        assert_eq!(relative_index(&sup, &sub).unwrap(), BigInt::from(15));
        assert!(relative_index(&sub, &sup).is_err());
        assert_eq!(rational_index(&sup).unwrap(), rat(1, 3));
    }

    #[test]
    fn index_examples() {
        let mut l = Lattice::new(2, &[]);
        l.push_int(&[1, 0]);
        l.push_int(&[0, 1]);
        assert_eq!(l.index().unwrap(), BigInt::from(1));

        let l = Lattice::with_generators(1, &[2, 3, 11], vec![vec![rat(5, 12)]]);
        assert_eq!(l.index().unwrap(), BigInt::from(5));

        let mut l = Lattice::new(2, &[2, 3]);
        l.push_int(&[2, 0]);
        l.push_int(&[0, 3]);
        assert_eq!(l.index().unwrap(), BigInt::from(1));

        let mut l = Lattice::new(2, &[]);
        l.push_int(&[1, 1]);
        l.push_int(&[2, 2]);
        assert!(matches!(
            l.index(),
            Err(ArithError::InfiniteIndex {
                rank: 1,
                ambient: 2
            })
        ));

        let l = Lattice::with_generators(1, &[2], vec![vec![rat(1, 5)]]);
        assert!(matches!(l.index(), Err(ArithError::NotIntegral(_))));
    }

    fn arb_gens() -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-30i64..30, 3), 3..6)
    }

    proptest! {
        #[test]
        fn index_invariant_under_reordering_and_combination(
            gens in arb_gens(),
            perm_seed in any::<u64>(),
            coeffs in proptest::collection::vec(-5i64..5, 6),
        ) {
            let base = Lattice::with_generators(
                3, &[2],
                gens.iter().map(|g| g.iter().map(|&x| rat(x, 1)).collect()).collect(),
            );
            let reference = base.index();

            let mut shuffled = gens.clone();
            let n = shuffled.len();
            let mut s = perm_seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let extra: Vec<i64> = (0..3)
                .map(|j| gens.iter().zip(&coeffs).map(|(g, c)| g[j] * c).sum())
                .collect();
            shuffled.push(extra);
            let other = Lattice::with_generators(
                3, &[2],
                shuffled.iter().map(|g| g.iter().map(|&x| rat(x, 1)).collect()).collect(),
            );
            prop_assert_eq!(reference, other.index());
        }
    }
}
