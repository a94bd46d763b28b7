//! Eigenvalue tables from outside (cusp-form side) and their congruences modulo a
//! prime above `q` with the Eisenstein eigenvalues.
//!
//! Table format: CSV with header `ell,coeff0,coeff1,...,minpoly`. Each eigenvalue is
//! `sum coeff_i w^i` for a generator `w`; `minpoly` lists the integer coefficients of
//! its minimal polynomial, lowest degree first, separated by spaces. Lines starting
//! with `#` are comments; `# source: ...` and `# generator: ...` are kept as labels.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::cyclotomic::cyclotomic_polynomial;
use crate::arith::nt;
use crate::characters::DirichletCharacter;
use crate::eisenstein::{hecke, EisensteinSeries};
use crate::error::ScanError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenRow {
    pub line: usize,
    pub ell: u64,
    pub coeffs: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenTable {
    pub source: String,
    pub generator: String,
    pub minpoly: Vec<i64>,
    pub rows: Vec<EigenRow>,
}

fn table_err(line: usize, msg: impl Into<String>) -> ScanError {
    ScanError::Table {
        line,
        msg: msg.into(),
    }
}

impl EigenTable {
    pub fn from_path(path: &Path) -> Result<Self, ScanError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScanError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut t = Self::parse(&text)?;
        if t.source.is_empty() {
            t.source = path.display().to_string();
        }
        Ok(t)
    }

    pub fn parse(text: &str) -> Result<Self, ScanError> {
        let mut source = String::new();
        let mut generator = "w".to_string();
        for line in text.lines() {
            if let Some(meta) = line.trim().strip_prefix('#') {
                if let Some((k, v)) = meta.split_once(':') {
                    match k.trim() {
                        "source" => source = v.trim().to_string(),
                        "generator" => generator = v.trim().to_string(),
                        _ => {}
                    }
                }
            }
        }

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| table_err(1, e.to_string()))?
            .clone();
        let cols: Vec<&str> = header.iter().collect();
        let width = cols.len();
        let header_ok = width >= 3
            && cols[0] == "ell"
            && cols[width - 1] == "minpoly"
            && cols[1..width - 1]
                .iter()
                .enumerate()
                .all(|(i, c)| *c == format!("coeff{i}"));
        if !header_ok {
            return Err(table_err(1, "header must be ell,coeff0,...,minpoly"));
        }

        let mut minpoly: Option<Vec<i64>> = None;
        let mut rows = Vec::new();
        let mut seen = BTreeSet::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                table_err(line, e.to_string())
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.len() != width {
                return Err(table_err(
                    line,
                    format!("expected {width} fields, found {}", rec.len()),
                ));
            }
            let ell: u64 = rec[0]
                .parse()
                .map_err(|_| table_err(line, format!("bad prime {:?}", &rec[0])))?;
            if !nt::is_prime(ell) {
                return Err(table_err(line, format!("{ell} is not prime")));
            }
            if !seen.insert(ell) {
                return Err(table_err(line, format!("prime {ell} listed twice")));
            }
            let coeffs = (1..width - 1)
                .map(|i| {
                    rec[i]
                        .parse::<i64>()
                        .map_err(|_| table_err(line, format!("bad coefficient {:?}", &rec[i])))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let poly = rec[width - 1]
                .split_whitespace()
                .map(|s| {
                    s.parse::<i64>()
                        .map_err(|_| table_err(line, format!("bad minpoly entry {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if poly.len() < 2 || *poly.last().unwrap() == 0 {
                return Err(table_err(
                    line,
                    "minimal polynomial must have degree at least 1",
                ));
            }
            if coeffs.len() > poly.len() - 1 {
                return Err(table_err(
                    line,
                    "eigenvalue degree must be below the minimal polynomial degree",
                ));
            }
            match &minpoly {
                Some(m) if *m != poly => {
                    return Err(table_err(
                        line,
                        "minimal polynomial differs from earlier rows",
                    ))
                }
                Some(_) => {}
                None => minpoly = Some(poly),
            }
            rows.push(EigenRow { line, ell, coeffs });
        }
        Ok(EigenTable {
            source,
            generator,
            minpoly: minpoly.unwrap_or_else(|| vec![0, 1]),
            rows,
        })
    }

    /// Table of the `T_ell` eigenvalues of `E_{M,L,chi}` at level `n`, in the generator
    /// `zeta_ord(chi)`, read off the `q`-coefficient of `T_ell E`. Line numbers match
    /// [`EigenTable::to_csv`].
    pub fn from_series(s: &EisensteinSeries, n: u64, bound: u64) -> Result<Self, ScanError> {
        let ord = s.coefficient_ring();
        let g = s.closed_form(bound.max(2))?;
        let mut rows = Vec::new();
        for (i, ell) in nt::primes_up_to(bound).into_iter().enumerate() {
            let t = hecke(n, ell, &g)?;
            let coeffs = t
                .coeff(1)
                .embed(ord)
                .coeffs()
                .iter()
                .map(|c| {
                    if c.is_integer() {
                        c.to_integer()
                            .try_into()
                            .map_err(|_| table_err(i + 4, "overflow"))
                    } else {
                        Err(table_err(i + 4, "non-integral eigenvalue"))
                    }
                })
                .collect::<Result<Vec<i64>, _>>()?;
            rows.push(EigenRow {
                line: i + 4,
                ell,
                coeffs,
            });
        }
        let minpoly = if ord == 1 {
            vec![0, 1]
        } else {
            cyclotomic_polynomial(ord)
        };
        Ok(EigenTable {
            source: format!("E(M={}, L={}) at level {n}", s.m(), s.l()),
            generator: "zeta".into(),
            minpoly,
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let k = self.minpoly.len() - 1;
        let mut out = format!(
            "# source: {}\n# generator: {}\nell",
            self.source, self.generator
        );
        for i in 0..k {
            out.push_str(&format!(",coeff{i}"));
        }
        out.push_str(",minpoly\n");
        let poly: Vec<String> = self.minpoly.iter().map(i64::to_string).collect();
        for r in &self.rows {
            out.push_str(&r.ell.to_string());
            for i in 0..k {
                out.push_str(&format!(",{}", r.coeffs.get(i).copied().unwrap_or(0)));
            }
            out.push_str(&format!(",{}\n", poly.join(" ")));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allowed {
    pub branch: String,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRow {
    pub line: usize,
    pub ell: u64,
    pub value: u64,
    pub allowed: Vec<Allowed>,
    pub matched: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub q: u64,
    pub level: u64,
    /// Image of the table generator in `F_q`.
    pub generator_root: u64,
    /// Image of `zeta_ord(chi)` in `F_q`.
    pub zeta_root: u64,
    pub rows: Vec<CongruenceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failed_lines(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.line)
            .collect()
    }
}

fn eval_mod(poly: &[i64], x: u64, q: u64) -> u64 {
    let q = q as i128;
    let mut acc = 0i128;
    for &c in poly.iter().rev() {
        acc = (acc * x as i128 + c as i128).rem_euclid(q);
    }
    acc as u64
}

fn allowed_values(chi: &DirichletCharacter, zeta: u64, ell: u64, q: u64, n: u64) -> Vec<Allowed> {
    let val = |a: u64| -> Option<u64> { chi.value_exp(a as i64).map(|k| nt::mod_pow(zeta, k, q)) };
    let inv = |x: u64| nt::mod_inverse(x as i64, q as i64).unwrap() as u64;
    let entry = |branch: &str, value: u64| Allowed {
        branch: branch.to_string(),
        value: value % q,
    };
    let e = ell % q;
    if ell == q {
        let v = val(ell).expect("q is prime to the conductor");
        return vec![entry("at_q", inv(v))];
    }
    if !n.is_multiple_of(ell) {
        let v = val(ell).expect("ell is prime to the level");
        return vec![entry("unramified", inv(v) + e * v % q)];
    }
    match val(ell) {
        None => vec![entry("zero", 0)],
        Some(v) => {
            let mut out = vec![entry("chi_inv", inv(v)), entry("ell_chi", e * v % q)];
            if n.is_multiple_of(ell * ell) {
                out.insert(0, entry("zero", 0));
            }
            out
        }
    }
}

/// Checks each row against the Eisenstein values modulo a degree-one prime above `q`.
///
/// Every root of the minimal polynomial mod `q` and every image of `zeta_ord(chi)` is
/// tried; the pair matching the most rows is reported.
pub fn congruence_check(
    table: &EigenTable,
    chi: &DirichletCharacter,
    q: u64,
    n: u64,
) -> Result<CongruenceReport, ScanError> {
    if q < 5 || !nt::is_prime(q) || (6 * n).is_multiple_of(q) {
        return Err(ScanError::BadResidueCharacteristic { q, six_n: 6 * n });
    }
    let ord = chi.order();
    if !(q - 1).is_multiple_of(ord) {
        return Err(ScanError::Config(format!(
            "character of order {ord} has no values in F_{q}"
        )));
    }
    let roots: Vec<u64> = (0..q)
        .filter(|&r| eval_mod(&table.minpoly, r, q) == 0)
        .collect();
    if roots.is_empty() {
        return Err(table_err(
            0,
            format!("minimal polynomial has no root mod {q}"),
        ));
    }
    let zetas: Vec<u64> = (1..q).filter(|&z| nt::mult_order(z, q) == ord).collect();

    let mut best: Option<CongruenceReport> = None;
    for &root in &roots {
        for &zeta in &zetas {
            let rows: Vec<CongruenceRow> = table
                .rows
                .iter()
                .map(|r| {
                    let value = eval_mod(&r.coeffs, root, q);
                    let allowed = allowed_values(chi, zeta, r.ell, q, n);
                    let matched = allowed
                        .iter()
                        .find(|a| a.value == value)
                        .map(|a| a.branch.clone());
                    CongruenceRow {
                        line: r.line,
                        ell: r.ell,
                        value,
                        passed: matched.is_some(),
                        allowed,
                        matched,
                    }
                })
                .collect();
            let report = CongruenceReport {
                q,
                level: n,
                generator_root: root,
                zeta_root: zeta,
                rows,
                warning: table.rows.is_empty().then(|| "empty table".to_string()),
            };
            let score = |r: &CongruenceReport| r.rows.iter().filter(|x| x.passed).count();
            if best.as_ref().is_none_or(|b| score(&report) > score(b)) {
                best = Some(report);
            }
        }
    }
    Ok(best.expect("at least one root and one zeta"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::primitive_characters;

    const SMALL: &str = "# source: test\nell,coeff0,minpoly\n2,-2,0 1\n3,-1,0 1\n5,1,0 1\n7,-2,0 1\n11,1,0 1\n13,4,0 1\n";

    #[test]
    fn parse_and_check() {
        let t = EigenTable::parse(SMALL).unwrap();
        assert_eq!(t.source, "test");
        assert_eq!(t.rows.len(), 6);
        assert_eq!(t.rows[0].line, 3);
        let triv = DirichletCharacter::trivial(1);
        let r = congruence_check(&t, &triv, 5, 11).unwrap();
        assert!(r.passed(), "{:?}", r.failed_lines());
        assert_eq!(r.rows[4].matched.as_deref(), Some("chi_inv"));
        assert_eq!(r.rows[2].matched.as_deref(), Some("at_q"));
    }

    #[test]
    fn corrupted_row_is_isolated() {
        let bad = SMALL.replace("7,-2,", "7,-1,");
        let t = EigenTable::parse(&bad).unwrap();
        let r = congruence_check(&t, &DirichletCharacter::trivial(1), 5, 11).unwrap();
        assert_eq!(r.failed_lines(), vec![6]);
    }

    #[test]
    fn malformed_rows() {
        let cases = [
            ("ell,coeff0,minpoly\n4,1,0 1\n", 2),
            ("ell,coeff0,minpoly\n2,x,0 1\n", 2),
            ("ell,coeff0,minpoly\n2,1,0 1\n2,1,0 1\n", 3),
            ("ell,coeff0,coeff1,minpoly\n2,1,1,0 1\n", 2),
            ("ell,coeff0,minpoly\n2,1,0 1\n3,1,1 1\n", 3),
            ("ell,c0,minpoly\n", 1),
        ];
        for (text, line) in cases {
            match EigenTable::parse(text) {
                Err(ScanError::Table { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_table_passes_with_warning() {
        let t = EigenTable::parse("ell,coeff0,minpoly\n").unwrap();
        let r = congruence_check(&t, &DirichletCharacter::trivial(1), 5, 11).unwrap();
        assert!(r.passed());
        assert!(r.warning.is_some());
    }

    #[test]
    fn rejects_bad_q() {
        let t = EigenTable::parse(SMALL).unwrap();
        let triv = DirichletCharacter::trivial(1);
        for q in [3, 11, 9] {
            assert!(congruence_check(&t, &triv, q, 11).is_err());
        }
    }

    #[test]
    fn self_test_tables() {
        let chi = primitive_characters(5)[0].clone();
        assert_eq!(chi.order(), 4);
        let s = EisensteinSeries::new(chi.clone(), 1, 1).unwrap();
        let t = EigenTable::from_series(&s, 25, 40).unwrap();
        let reparsed = EigenTable::parse(&t.to_csv()).unwrap();
        assert_eq!(reparsed.rows, t.rows);
        let r = congruence_check(&reparsed, &chi, 13, 25).unwrap();
        assert!(r.passed(), "{:?}", r.failed_lines());
        let s = EisensteinSeries::new(DirichletCharacter::trivial(1), 3, 5).unwrap();
        let t = EigenTable::from_series(&s, 45, 30).unwrap();
        let r = congruence_check(&t, &DirichletCharacter::trivial(1), 7, 45).unwrap();
        assert!(r.passed());
    }
}
