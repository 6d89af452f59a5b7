//! Experiment harness: generate data, train each learner, score it on the
//! held-out split, and write CSV tables plus SVG charts.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::datagen::{self, GenConfig};
use crate::dp::compute_lpl;
use crate::error::{Error, Result};
use crate::ga::{self, GaConfig};
use crate::greedy::greedy_lpl;
use crate::model::{Example, LpList, Schema};
use crate::rng::{derive_seed, tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dpa,
    Ga,
    Greedy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Dpa, Algorithm::Ga, Algorithm::Greedy];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dpa => "dpa",
            Algorithm::Ga => "ga",
            Algorithm::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dpa" => Ok(Algorithm::Dpa),
            "ga" => Ok(Algorithm::Ga),
            "greedy" => Ok(Algorithm::Greedy),
            other => Err(Error::UnknownName {
                kind: "algorithm",
                name: other.to_string(),
            }),
        }
    }
}

/// Trains one learner on `examples`.
pub fn learn(
    algo: Algorithm,
    schema: &Schema,
    examples: &[Example],
    ga_cfg: &GaConfig,
) -> Result<LpList> {
    match algo {
        Algorithm::Dpa => Ok(compute_lpl(schema, examples)?.model),
        Algorithm::Ga => Ok(ga::evolve(examples, schema, ga_cfg)?.best),
        Algorithm::Greedy => greedy_lpl(schema, examples),
    }
}

/// Fraction of `test` the model satisfies.
pub fn evaluate(model: &LpList, test: &[Example]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::invalid("cannot evaluate on an empty test set"));
    }
    Ok(model.count_satisfied(test)? as f64 / test.len() as f64)
}

pub const FULL_SCALE_SIZE: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Example counts, strictly ascending.
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub n: usize,
    pub x: usize,
    pub noise: f64,
    pub train_fraction: f64,
    /// GA parameters; the seed is replaced per run.
    pub ga: GaConfig,
    /// Appends the one-million-example point to `sizes`.
    pub full_scale: bool,
    /// When false, time columns are written as zero so the output depends on
    /// the seed alone.
    pub record_timing: bool,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let gen = GenConfig::default();
        ExperimentConfig {
            sizes: vec![1_000, 10_000, 100_000],
            algorithms: Algorithm::ALL.to_vec(),
            repetitions: 5,
            base_seed: 0,
            n: gen.n,
            x: gen.x,
            noise: gen.noise,
            train_fraction: gen.train_fraction,
            ga: GaConfig::default(),
            full_scale: false,
            record_timing: true,
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = self.sizes.clone();
        if self.full_scale && sizes.last().is_none_or(|&s| s < FULL_SCALE_SIZE) {
            sizes.push(FULL_SCALE_SIZE);
        }
        sizes
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::invalid("repetitions must be at least 1"));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::invalid(
                "sizes must be a nonempty list of positive counts",
            ));
        }
        if !self.sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("sizes must be strictly ascending"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("no algorithms selected"));
        }
        self.ga.validate()?;
        self.gen_config(self.sizes[0], 0).validate()
    }

    /// Data generation settings of one (size, repetition) instance.
    pub fn gen_config(&self, m: usize, rep: usize) -> GenConfig {
        GenConfig {
            n: self.n,
            x: self.x,
            m,
            noise: self.noise,
            train_fraction: self.train_fraction,
            seed: derive_seed(self.base_seed, &[tag::REPETITION, m as u64, rep as u64]),
        }
    }

    /// GA settings of one instance.
    pub fn ga_config(&self, m: usize, rep: usize) -> GaConfig {
        GaConfig {
            seed: derive_seed(self.gen_config(m, rep).seed, &[tag::LEARNER]),
            ..self.ga.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algo: Algorithm,
    pub m: usize,
    pub rep: usize,
    pub train_acc: f64,
    pub test_acc: f64,
    pub train_s: f64,
    pub test_s: f64,
}

impl RunRecord {
    pub fn total_s(&self) -> f64 {
        self.train_s + self.test_s
    }
}

/// Runs every (size, repetition, algorithm) combination. Instances run one
/// after another; the learners parallelize internally. Records come back
/// sorted by algorithm, size and repetition.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for m in cfg.sizes() {
        for rep in 0..cfg.repetitions {
            let data = datagen::generate(&cfg.gen_config(m, rep))?;
            if data.test.is_empty() {
                return Err(Error::invalid(format!("m={m}: test split is empty")));
            }
            for &algo in &cfg.algorithms {
                let context = |e: Error| Error::invalid(format!("{algo} at m={m}, rep={rep}: {e}"));
                let start = Instant::now();
                let model = learn(algo, &data.schema, &data.train, &cfg.ga_config(m, rep))
                    .map_err(context)?;
                let train_s = start.elapsed().as_secs_f64();
                let train_acc = evaluate(&model, &data.train).map_err(context)?;
                let start = Instant::now();
                let test_acc = evaluate(&model, &data.test).map_err(context)?;
                let test_s = start.elapsed().as_secs_f64();
                let (train_s, test_s) = if cfg.record_timing {
                    (train_s, test_s)
                } else {
                    (0.0, 0.0)
                };
                log::info!("{algo} m={m} rep={rep}: test accuracy {test_acc:.4}, {train_s:.3}s");
                records.push(RunRecord {
                    algo,
                    m,
                    rep,
                    train_acc,
                    test_acc,
                    train_s,
                    test_s,
                });
            }
        }
    }
    records.sort_by_key(|r| (r.algo, r.m, r.rep));
    Ok(records)
}

pub const RESULTS_HEADER: [&str; 8] = [
    "algo",
    "m",
    "rep",
    "train_acc",
    "test_acc",
    "train_s",
    "test_s",
    "total_s",
];

pub const SUMMARY_HEADER: [&str; 13] = [
    "algo",
    "m",
    "reps",
    "train_acc_mean",
    "train_acc_sd",
    "test_acc_mean",
    "test_acc_sd",
    "train_s_mean",
    "train_s_sd",
    "test_s_mean",
    "test_s_sd",
    "total_s_mean",
    "total_s_sd",
];

pub fn results_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER)?;
    for r in records {
        w.write_record([
            r.algo.to_string(),
            r.m.to_string(),
            r.rep.to_string(),
            r.train_acc.to_string(),
            r.test_acc.to_string(),
            r.train_s.to_string(),
            r.test_s.to_string(),
            r.total_s().to_string(),
        ])?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_results_csv(text: &str) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != RESULTS_HEADER {
        return Err(Error::invalid(format!(
            "unexpected results header `{}`",
            header.join(",")
        )));
    }
    let num = |s: &str, what: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::invalid(format!("bad {what} value `{s}`")))
    };
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        out.push(RunRecord {
            algo: row[0].parse()?,
            m: row[1]
                .parse()
                .map_err(|_| Error::invalid(format!("bad m `{}`", &row[1])))?,
            rep: row[2]
                .parse()
                .map_err(|_| Error::invalid(format!("bad rep `{}`", &row[2])))?,
            train_acc: num(&row[3], "train_acc")?,
            test_acc: num(&row[4], "test_acc")?,
            train_s: num(&row[5], "train_s")?,
            test_s: num(&row[6], "test_s")?,
        });
    }
    Ok(out)
}

/// Mean and sample standard deviation; a single value has deviation 0.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algo: Algorithm,
    pub m: usize,
    pub reps: usize,
    pub train_acc: (f64, f64),
    pub test_acc: (f64, f64),
    pub train_s: (f64, f64),
    pub test_s: (f64, f64),
    pub total_s: (f64, f64),
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(Algorithm, usize)> = records.iter().map(|r| (r.algo, r.m)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(algo, m)| {
            let group: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.algo == algo && r.m == m)
                .collect();
            let col =
                |f: fn(&RunRecord) -> f64| mean_sd(&group.iter().map(|r| f(r)).collect::<Vec<_>>());
            SummaryRow {
                algo,
                m,
                reps: group.len(),
                train_acc: col(|r| r.train_acc),
                test_acc: col(|r| r.test_acc),
                train_s: col(|r| r.train_s),
                test_s: col(|r| r.test_s),
                total_s: col(|r| r.total_s()),
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    for s in rows {
        let mut cells = vec![s.algo.to_string(), s.m.to_string(), s.reps.to_string()];
        for (mean, sd) in [s.train_acc, s.test_acc, s.train_s, s.test_s, s.total_s] {
            cells.push(mean.to_string());
            cells.push(sd.to_string());
        }
        w.write_record(cells)?;
    }
    finish(w)
}

#[derive(Debug, Clone, Default)]
pub struct ReportFiles {
    pub results: PathBuf,
    pub summary: PathBuf,
    pub charts: Vec<PathBuf>,
}

/// Writes `results.csv`, `summary.csv` and, when there is anything to plot,
/// `accuracy.svg` and `time.svg`.
pub fn emit_report(records: &[RunRecord], dir: &Path) -> Result<ReportFiles> {
    fs::create_dir_all(dir)?;
    let results = dir.join("results.csv");
    let summary = dir.join("summary.csv");
    fs::write(&results, results_csv(records)?)?;
    let rows = summarize(records);
    fs::write(&summary, summary_csv(&rows)?)?;
    let mut charts = Vec::new();
    if !rows.is_empty() {
        let series = |f: fn(&SummaryRow) -> f64| -> Vec<(String, Vec<(f64, f64)>)> {
            let mut algos: Vec<Algorithm> = rows.iter().map(|r| r.algo).collect();
            algos.dedup();
            algos
                .into_iter()
                .map(|a| {
                    let pts = rows
                        .iter()
                        .filter(|r| r.algo == a)
                        .map(|r| (r.m as f64, f(r)))
                        .collect();
                    (a.name().to_uppercase(), pts)
                })
                .collect()
        };
        let acc = svg::line_chart(
            "Testing accuracy",
            "examples (m)",
            "accuracy",
            &series(|r| r.test_acc.0),
            false,
        );
        let time = svg::line_chart(
            "Computational time",
            "examples (m)",
            "seconds",
            &series(|r| r.total_s.0),
            true,
        );
        for (name, body) in [("accuracy.svg", acc), ("time.svg", time)] {
            let path = dir.join(name);
            fs::write(&path, body)?;
            charts.push(path);
        }
    }
    Ok(ReportFiles {
        results,
        summary,
        charts,
    })
}

mod svg {
    use std::fmt::Write;

    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 130.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 55.0;
    const COLORS: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    ];

    struct Axis {
        lo: f64,
        hi: f64,
        log: bool,
    }

    impl Axis {
        fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if !lo.is_finite() {
                return Axis {
                    lo: 0.0,
                    hi: 1.0,
                    log: false,
                };
            }
            if log {
                let (lo, hi) = (lo.log10().floor(), hi.log10().ceil());
                return Axis {
                    lo,
                    hi: if hi > lo { hi } else { lo + 1.0 },
                    log,
                };
            }
            let pad = ((hi - lo) * 0.1).max(1e-3);
            Axis {
                lo: lo - pad,
                hi: hi + pad,
                log,
            }
        }

        fn unit(&self, v: f64) -> f64 {
            let v = if self.log {
                v.max(f64::MIN_POSITIVE).log10()
            } else {
                v
            };
            (v - self.lo) / (self.hi - self.lo)
        }

        fn ticks(&self) -> Vec<(f64, String)> {
            if self.log {
                (self.lo as i32..=self.hi as i32)
                    .map(|e| (10f64.powi(e), format!("1e{e}")))
                    .collect()
            } else {
                (0..=5)
                    .map(|k| {
                        let v = self.lo + (self.hi - self.lo) * k as f64 / 5.0;
                        (v, format!("{v:.3}"))
                    })
                    .collect()
            }
        }
    }

    /// Static line chart; the x axis is logarithmic.
    pub fn line_chart(
        title: &str,
        x_label: &str,
        y_label: &str,
        series: &[(String, Vec<(f64, f64)>)],
        log_y: bool,
    ) -> String {
        let xs = Axis::fit(series.iter().flat_map(|s| s.1.iter().map(|p| p.0)), true);
        let log_y = log_y && series.iter().flat_map(|s| &s.1).all(|p| p.1 > 0.0);
        let ys = Axis::fit(series.iter().flat_map(|s| s.1.iter().map(|p| p.1)), log_y);
        let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
        let px = |v: f64| LEFT + xs.unit(v) * pw;
        let py = |v: f64| TOP + (1.0 - ys.unit(v)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{title}</text>"#,
            W / 2.0
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for (v, label) in xs.ticks() {
            let x = px(v);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{}" stroke="#ddd"/>"##,
                TOP + ph
            );
            let _ = writeln!(
                s,
                r#"<text x="{x:.1}" y="{}" text-anchor="middle">{label}</text>"#,
                TOP + ph + 16.0
            );
        }
        for (v, label) in ys.ticks() {
            let y = py(v);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/>"##,
                LEFT + pw
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.1}" text-anchor="end">{label}</text>"#,
                LEFT - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
            LEFT + pw / 2.0,
            H - 12.0
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{y_label}</text>"#,
            TOP + ph / 2.0
        );
        for (k, (name, pts)) in series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                path.join(" ")
            );
            for &(x, y) in pts {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                    px(x),
                    py(y)
                );
            }
            let ly = TOP + 14.0 + 18.0 * k as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                lx + 20.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}">{name}</text>"#,
                lx + 26.0,
                ly + 4.0
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(algo: Algorithm, m: usize, rep: usize, acc: f64) -> RunRecord {
        RunRecord {
            algo,
            m,
            rep,
            train_acc: acc,
            test_acc: acc - 0.01,
            train_s: 0.5 + rep as f64,
            test_s: 0.01,
        }
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sa".parse::<Algorithm>().is_err());
    }

    #[test]
    fn evaluate_extremes() {
        let cfg = GenConfig {
            m: 500,
            noise: 0.0,
            seed: 1,
            ..GenConfig::default()
        };
        let d = datagen::generate(&cfg).unwrap();
        assert_eq!(evaluate(&d.hidden, &d.test).unwrap(), 1.0);
        assert_eq!(
            evaluate(&d.hidden.with_reversed_orders(), &d.test).unwrap(),
            0.0
        );
        assert!(evaluate(&d.hidden, &[]).is_err());
    }

    #[test]
    fn evaluate_counts_flips_in_test() {
        let cfg = GenConfig {
            m: 2000,
            seed: 2,
            ..GenConfig::default()
        };
        let d = datagen::generate(&cfg).unwrap();
        let expected = 1.0 - d.test_flips() as f64 / d.test.len() as f64;
        assert_eq!(evaluate(&d.hidden, &d.test).unwrap(), expected);
    }

    #[test]
    fn record_cardinality() {
        let cfg = ExperimentConfig {
            sizes: vec![200],
            algorithms: vec![Algorithm::Greedy],
            n: 4,
            x: 3,
            record_timing: false,
            ..ExperimentConfig::default()
        };
        let records = run_experiment(&cfg).unwrap();
        assert_eq!(records.len(), 5);
        assert_eq!(
            records.iter().map(|r| r.rep).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4]
        );
        assert!(records.iter().all(|r| r.train_s == 0.0));
    }

    #[test]
    fn same_seed_same_csv() {
        let cfg = ExperimentConfig {
            sizes: vec![100, 300],
            repetitions: 2,
            n: 4,
            x: 3,
            ga: GaConfig {
                generations: 5,
                population_size: 20,
                parent_count: 10,
                ..GaConfig::default()
            },
            record_timing: false,
            ..ExperimentConfig::default()
        };
        let a = results_csv(&run_experiment(&cfg).unwrap()).unwrap();
        let b = results_csv(&run_experiment(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        let other = ExperimentConfig {
            base_seed: 1,
            ..cfg
        };
        assert_ne!(a, results_csv(&run_experiment(&other).unwrap()).unwrap());
    }

    #[test]
    fn config_validation_and_sizes() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = [
            ExperimentConfig {
                repetitions: 0,
                ..Default::default()
            },
            ExperimentConfig {
                sizes: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                sizes: vec![100, 10],
                ..Default::default()
            },
            ExperimentConfig {
                algorithms: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                noise: 2.0,
                ..Default::default()
            },
        ];
        for b in bad {
            assert!(b.validate().is_err());
        }
        let full = ExperimentConfig {
            full_scale: true,
            ..Default::default()
        };
        assert_eq!(full.sizes(), vec![1_000, 10_000, 100_000, 1_000_000]);
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"sizes":[50],"algorithms":["dpa"]}"#).unwrap();
        assert_eq!(cfg.repetitions, 5);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"size":[50]}"#).is_err());
    }

    #[test]
    fn empty_report_has_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&[], dir.path()).unwrap();
        assert!(files.charts.is_empty());
        assert_eq!(
            fs::read_to_string(files.results).unwrap(),
            RESULTS_HEADER.join(",") + "\n"
        );
        assert_eq!(
            fs::read_to_string(files.summary).unwrap(),
            SUMMARY_HEADER.join(",") + "\n"
        );
        assert!(!dir.path().join("accuracy.svg").exists());
    }

    #[test]
    fn identical_records_have_zero_sd() {
        let r = record(Algorithm::Dpa, 1000, 0, 0.9);
        let records: Vec<RunRecord> = (0..5).map(|_| r.clone()).collect();
        let rows = summarize(&records);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].reps, 5);
        assert_eq!(rows[0].test_acc.1, 0.0);
        assert_eq!(rows[0].train_s.1, 0.0);
        assert_eq!(mean_sd(&[2.0]), (2.0, 0.0));
        assert_eq!(mean_sd(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
    }

    #[test]
    fn summary_matches_recomputed_means() {
        let mut records = Vec::new();
        for algo in Algorithm::ALL {
            for m in [100, 1000] {
                for rep in 0..5 {
                    records.push(record(
                        algo,
                        m,
                        rep,
                        0.7 + 0.013 * rep as f64 + m as f64 * 1e-5,
                    ));
                }
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&records, dir.path()).unwrap();
        assert_eq!(files.charts.len(), 2);
        let svg = fs::read_to_string(&files.charts[0]).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

        let parsed = parse_results_csv(&fs::read_to_string(&files.results).unwrap()).unwrap();
        let mut summary = csv::Reader::from_path(&files.summary).unwrap();
        for row in summary.records() {
            let row = row.unwrap();
            let algo: Algorithm = row[0].parse().unwrap();
            let m: usize = row[1].parse().unwrap();
            let group: Vec<&RunRecord> = parsed
                .iter()
                .filter(|r| r.algo == algo && r.m == m)
                .collect();
            let mean = |f: &dyn Fn(&RunRecord) -> f64| {
                group.iter().map(|r| f(r)).sum::<f64>() / group.len() as f64
            };
            let cols = [
                (3, mean(&|r| r.train_acc)),
                (5, mean(&|r| r.test_acc)),
                (7, mean(&|r| r.train_s)),
                (9, mean(&|r| r.test_s)),
                (11, mean(&|r| r.train_s + r.test_s)),
            ];
            for (col, expected) in cols {
                let got: f64 = row[col].parse().unwrap();
                assert!(
                    (got - expected).abs() <= 1e-12,
                    "col {col}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn results_round_trip_bytes() {
        let records = vec![
            record(Algorithm::Dpa, 1000, 0, 0.8512),
            RunRecord {
                train_s: 1.0 / 3.0,
                test_s: 2e-7,
                ..record(Algorithm::Ga, 1000, 1, 0.1)
            },
        ];
        let text = results_csv(&records).unwrap();
        let parsed = parse_results_csv(&text).unwrap();
        assert_eq!(parsed, records);
        assert_eq!(results_csv(&parsed).unwrap(), text);
        assert!(parse_results_csv("a,b\n1,2\n").is_err());
    }
}
