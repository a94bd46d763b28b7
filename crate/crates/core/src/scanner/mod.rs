//! Level scans: enumerate admissible `(chi, Mbar, Lbar)`, run the checks and the
//! order computations for each, and write the results.

pub mod congruence;

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::cyclotomic::CycNum;
use crate::arith::nt;
use crate::characters::{primitive_characters, CharacterRecord, DirichletCharacter};
use crate::cuspidal::{cuspidal_order, delta_divisor, eisenstein_primes, period_order};
use crate::eisenstein::{eigen_table_check_within, EigenEntry, EisensteinSeries, QExpansion};
use crate::error::ScanError;

pub use congruence::{congruence_check, CongruenceReport, CongruenceRow, EigenRow, EigenTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub level: u64,
    pub precision: u64,
    pub prime_bound: u64,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// `(conductor, index)` into the primitive characters of that conductor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_filter: Option<(u64, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub timing: bool,
}

impl ScanConfig {
    pub fn new(level: u64, precision: u64, prime_bound: u64) -> Self {
        ScanConfig {
            level,
            precision,
            prime_bound,
            format: OutputFormat::Json,
            out: None,
            chi_filter: None,
            jobs: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if self.level == 0 {
            return Err(ScanError::Config("level must be positive".into()));
        }
        if self.level.is_multiple_of(2) {
            return Err(ScanError::EvenLevel(self.level));
        }
        if self.prime_bound < 2 {
            return Err(ScanError::Config("prime bound must be at least 2".into()));
        }
        if self.precision < 2 * self.prime_bound {
            return Err(ScanError::Config(format!(
                "precision {} is below twice the prime bound {}",
                self.precision, self.prime_bound
            )));
        }
        if self.jobs == Some(0) {
            return Err(ScanError::Config("jobs must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibleConfig {
    pub chi: DirichletCharacter,
    /// Position among the primitive characters of conductor `f`.
    pub chi_index: usize,
    pub mbar: u64,
    pub lbar: u64,
}

impl AdmissibleConfig {
    pub fn conductor(&self) -> u64 {
        self.chi.modulus()
    }

    pub fn m(&self) -> u64 {
        self.conductor() * self.mbar
    }

    pub fn l(&self) -> u64 {
        self.conductor() * self.lbar
    }

    pub fn series(&self) -> EisensteinSeries {
        EisensteinSeries::new(self.chi.clone(), self.mbar, self.lbar)
            .expect("admissible configurations are valid")
    }
}

/// All admissible configurations at odd level `n`, ordered by conductor,
/// character index, `Mbar`, `Lbar`.
///
/// Besides `f^2 Mbar Lbar | n`, squarefreeness, coprimality to `f` and `M > 1`,
/// every prime of `n` must divide `f Mbar Lbar`.
pub fn enumerate_admissible(n: u64) -> Result<Vec<AdmissibleConfig>, ScanError> {
    if n.is_multiple_of(2) {
        return Err(ScanError::EvenLevel(n));
    }
    let rad = nt::radical(n);
    let mut out = Vec::new();
    for f in nt::divisors(n) {
        if !n.is_multiple_of(f * f) {
            continue;
        }
        let rest = n / (f * f);
        for (chi_index, chi) in primitive_characters(f).into_iter().enumerate() {
            for mbar in nt::divisors(rest) {
                for lbar in nt::divisors(rest / mbar) {
                    let ok = nt::is_squarefree(mbar)
                        && nt::is_squarefree(lbar)
                        && nt::gcd(mbar * lbar, f) == 1
                        && f * mbar > 1
                        && (f * mbar * lbar) % rad == 0;
                    if ok {
                        out.push(AdmissibleConfig {
                            chi: chi.clone(),
                            chi_index,
                            mbar,
                            lbar,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Admissible configurations whose character has order dividing `q - 1`.
pub fn enumerate_admissible_for_q(n: u64, q: u64) -> Result<Vec<AdmissibleConfig>, ScanError> {
    Ok(enumerate_admissible(n)?
        .into_iter()
        .filter(|c| (q - 1).is_multiple_of(c.chi.order()))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub conductor: u64,
    pub chi_index: usize,
    pub chi: CharacterRecord,
    pub mbar: u64,
    pub lbar: u64,
    pub m: u64,
    pub l: u64,
    pub series_level: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspEntry {
    pub d: u64,
    pub x: u64,
    pub width: u64,
    /// `m` with `delta` in `Q(zeta_m)`.
    pub conductor: u64,
    /// `e_x a_0(E; x)` in the power basis.
    pub delta: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspidalReport {
    pub config: ConfigEcho,
    pub cusps: Vec<CuspEntry>,
    pub residue_sum_zero: bool,
    pub ideal_ring: u64,
    pub ideal_generators: Vec<Vec<String>>,
    pub cuspidal_order: Option<String>,
    pub period_order: Option<String>,
    pub orders_agree: bool,
    pub eisenstein_primes: Vec<u64>,
    pub eigen_checks: Vec<EigenEntry>,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CuspidalReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty()
            && self.orders_agree
            && self.residue_sum_zero
            && self.eigen_checks.iter().all(|e| e.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    pub version: String,
    pub config: ScanConfig,
    pub reports: Vec<CuspidalReport>,
}

impl ScanDocument {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

/// Runs every check for one configuration; failures become report entries.
pub fn evaluate(config: &ScanConfig, c: &AdmissibleConfig) -> CuspidalReport {
    let start = Instant::now();
    let n = config.level;
    let s = c.series();
    let mut report = CuspidalReport {
        config: ConfigEcho {
            conductor: c.conductor(),
            chi_index: c.chi_index,
            chi: c.chi.record(),
            mbar: c.mbar,
            lbar: c.lbar,
            m: c.m(),
            l: c.l(),
            series_level: s.level(),
        },
        cusps: Vec::new(),
        residue_sum_zero: false,
        ideal_ring: s.coefficient_ring(),
        ideal_generators: Vec::new(),
        cuspidal_order: None,
        period_order: None,
        orders_agree: false,
        eisenstein_primes: Vec::new(),
        eigen_checks: Vec::new(),
        errors: Vec::new(),
        timing_ms: None,
    };

    match eigen_table_check_within(&s, n, config.prime_bound, config.precision) {
        Ok(r) => report.eigen_checks = r.entries,
        Err(e) => report.errors.push(format!("eigenvalue check: {e}")),
    }
    match s
        .phi_vector()
        .map_err(Into::into)
        .and_then(|v| delta_divisor(&v, n))
    {
        Ok(div) => {
            report.residue_sum_zero = div.degree().is_zero();
            report.cusps = div
                .entries
                .iter()
                .map(|(cusp, v)| CuspEntry {
                    d: cusp.d,
                    x: cusp.x,
                    width: cusp.width(),
                    conductor: v.conductor(),
                    delta: v.to_strings(),
                })
                .collect();
        }
        Err(e) => report.errors.push(format!("residue divisor: {e}")),
    }
    let order = match cuspidal_order(&s, n) {
        Ok(data) => {
            report.ideal_generators = data.generators.iter().map(CycNum::to_strings).collect();
            report.eisenstein_primes = eisenstein_primes(&data.order, n);
            report.cuspidal_order = Some(data.order.to_string());
            Some(data.order)
        }
        Err(e) => {
            report.errors.push(format!("cuspidal order: {e}"));
            None
        }
    };
    match period_order(&s, n) {
        Ok(p) => {
            report.orders_agree = order.as_ref() == Some(&p);
            report.period_order = Some(p.to_string());
        }
        Err(e) => report.errors.push(format!("period order: {e}")),
    }
    if config.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

pub fn scan(config: &ScanConfig) -> Result<ScanDocument, ScanError> {
    config.validate()?;
    let mut configs = enumerate_admissible(config.level)?;
    if let Some((f, index)) = config.chi_filter {
        configs.retain(|c| c.conductor() == f && c.chi_index == index);
    }
    let run =
        || -> Vec<CuspidalReport> { configs.par_iter().map(|c| evaluate(config, c)).collect() };
    let reports = match config.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| ScanError::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    Ok(ScanDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        reports,
    })
}

pub fn to_json(doc: &ScanDocument) -> Result<String, ScanError> {
    serde_json::to_string_pretty(doc).map_err(|e| ScanError::Serialize(e.to_string()))
}

const CSV_HEADER: [&str; 14] = [
    "row",
    "conductor",
    "chi_index",
    "mbar",
    "lbar",
    "cusp_d",
    "cusp_x",
    "width",
    "delta",
    "cuspidal_order",
    "period_order",
    "eisenstein_primes",
    "eigen_failures",
    "status",
];

/// One `cusp` row per (config, cusp), then one `summary` row per config.
pub fn to_csv(doc: &ScanDocument) -> Result<String, ScanError> {
    let ser = |e: csv::Error| ScanError::Serialize(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(ser)?;
    for r in &doc.reports {
        let c = &r.config;
        let head = [
            c.conductor.to_string(),
            c.chi_index.to_string(),
            c.mbar.to_string(),
            c.lbar.to_string(),
        ];
        for cusp in &r.cusps {
            let mut row = vec!["cusp".to_string()];
            row.extend(head.iter().cloned());
            row.extend([
                cusp.d.to_string(),
                cusp.x.to_string(),
                cusp.width.to_string(),
                cusp.delta.join(" "),
            ]);
            row.extend(std::iter::repeat_n(String::new(), 5));
            w.write_record(&row).map_err(ser)?;
        }
        let failures: Vec<String> = r
            .eigen_checks
            .iter()
            .filter(|e| !e.passed)
            .map(|e| e.ell.to_string())
            .collect();
        let primes: Vec<String> = r.eisenstein_primes.iter().map(u64::to_string).collect();
        let mut row = vec!["summary".to_string()];
        row.extend(head.iter().cloned());
        row.extend(std::iter::repeat_n(String::new(), 4));
        row.extend([
            r.cuspidal_order.clone().unwrap_or_default(),
            r.period_order.clone().unwrap_or_default(),
            primes.join(" "),
            failures.join(" "),
            if r.passed() { "pass" } else { "fail" }.to_string(),
        ]);
        w.write_record(&row).map_err(ser)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ScanError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ScanError::Serialize(e.to_string()))
}

pub fn render(doc: &ScanDocument, format: OutputFormat) -> Result<String, ScanError> {
    match format {
        OutputFormat::Json => to_json(doc),
        OutputFormat::Csv => to_csv(doc),
    }
}

pub fn emit(doc: &ScanDocument, format: OutputFormat, path: &Path) -> Result<(), ScanError> {
    let text = render(doc, format)?;
    std::fs::write(path, text).map_err(|source| ScanError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `{level, denominator, precision, coefficients: [[num, den, c_0, c_1, ...], ...]}`,
/// listing nonzero coefficients only.
pub fn expansion_json(q: &QExpansion) -> serde_json::Value {
    let d = q.denom();
    let m = q
        .coeffs()
        .iter()
        .fold(1, |acc, c| nt::lcm(acc, c.conductor()));
    let coefficients: Vec<serde_json::Value> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let g = nt::gcd(k as u64, d).max(1);
            let mut row = vec![
                serde_json::Value::from(k as u64 / g),
                serde_json::Value::from(d / g),
            ];
            row.extend(
                c.embed(m)
                    .to_strings()
                    .into_iter()
                    .map(serde_json::Value::from),
            );
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::json!({
        "level": q.level(),
        "denominator": d,
        "precision": q.precision(),
        "field_conductor": m,
        "coefficients": coefficients,
    })
}
