use std::path::PathBuf;

use eisenlab_core::scanner::EigenTable;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Coefficients of `q prod (1 - q^n)^2 (1 - q^{11n})^2` up to `q^bound`.
fn level_eleven_newform(bound: usize) -> Vec<i64> {
    let mut f = vec![0i64; bound + 1];
    f[1] = 1;
    let mut mul = |step: usize| {
        for i in (step..=bound).rev() {
            f[i] -= f[i - step];
        }
    };
    for n in 1..=bound {
        mul(n);
        mul(n);
        if 11 * n <= bound {
            mul(11 * n);
            mul(11 * n);
        }
    }
    f
}

#[test]
fn level_eleven_table_matches_eta_product() {
    let a = level_eleven_newform(100);
    assert_eq!(&a[1..6], &[1, -2, -1, 2, 1]);
    let table = EigenTable::from_path(&fixture("level11.csv")).unwrap();
    assert_eq!(table.rows.len(), 25);
    for row in &table.rows {
        assert_eq!(row.coeffs, vec![a[row.ell as usize]], "ell = {}", row.ell);
    }
}

#[test]
fn corrupted_table_differs_in_one_row() {
    let good = EigenTable::from_path(&fixture("level11.csv")).unwrap();
    let bad = EigenTable::from_path(&fixture("level11_corrupted.csv")).unwrap();
    let diff: Vec<u64> = good
        .rows
        .iter()
        .zip(&bad.rows)
        .filter(|(g, b)| g.coeffs != b.coeffs)
        .map(|(g, _)| g.ell)
        .collect();
    assert_eq!(diff, vec![17]);
}
