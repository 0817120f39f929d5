//! The three subcommands as library calls.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use levelstat_core::{
    histogram, infer_sectors_with, lowest_billiard_levels,
    missing_levels_experiment, poisson_hosr_pdf, sample_composite, sample_poisson_levels,
    spin_chain_spectrum, superpose, BetaScanner, EnsembleKind, EnsembleSpec, Inference,
    MissingLevelsRow, RngStream, ScanGrid, Spectrum, TheoryDist, Verdict, VerdictRule,
};
use serde::Serialize;

use crate::config::{AnalyzeConfig, GenerateConfig, MissingLevelsConfig, RunConfig, Source};
use crate::error::Result;
use crate::io::{format_levels, parse_level_file, write_json, write_text};

pub const TOOL: &str = "levelstat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative width below which spin-chain eigenvalues count as one level.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Generated {
    pub spectrum: Spectrum,
    pub degenerate_removed: usize,
}

pub fn generate_spectrum(source: &Source) -> Result<Generated> {
    let (spectrum, degenerate_removed) = match *source {
        Source::Goe { blocks, dim, seed, tridiagonal } => {
            let kind = if tridiagonal {
                EnsembleKind::GoeTridiagonal
            } else {
                EnsembleKind::GoeDense
            };
            (sample_composite(&EnsembleSpec::new(kind, dim, blocks, seed)?)?, 0)
        }
        Source::Poisson { n, blocks, seed } => {
            let base = RngStream::new(seed);
            let parts = (0..blocks)
                .map(|i| sample_poisson_levels(n, &base.substream(i as u64)))
                .collect::<levelstat_core::Result<Vec<_>>>()?;
            (superpose(&parts)?, 0)
        }
        Source::SpinChain { params, keep_degenerate } => {
            let s = spin_chain_spectrum(&params)?;
            if keep_degenerate {
                (s, 0)
            } else {
                s.collapse_degenerate(DEGENERACY_TOLERANCE)
            }
        }
        Source::CircleBilliard { n, policy } => (lowest_billiard_levels(n, policy)?, 0),
    };
    Ok(Generated { spectrum, degenerate_removed })
}

#[derive(Debug, Serialize)]
struct GenerateRecord<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    label: &'a str,
    n_levels: usize,
    degenerate_removed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateOutputs {
    pub levels: PathBuf,
    pub metadata: PathBuf,
    pub n_levels: usize,
}

pub fn cmd_generate(cfg: &GenerateConfig) -> Result<GenerateOutputs> {
    let run = RunConfig::Generate(cfg.clone());
    run.validate()?;
    let g = generate_spectrum(&cfg.source)?;
    let stem = cfg.stem();
    let levels = cfg.outdir.join(format!("{stem}.txt"));
    let metadata = cfg.outdir.join(format!("{stem}.meta.json"));
    let header = vec![
        format!("{TOOL} {VERSION} generate {}", cfg.source.name()),
        g.spectrum.label().to_string(),
    ];
    write_text(&levels, &format_levels(g.spectrum.levels(), &header))?;
    write_json(
        &metadata,
        &GenerateRecord {
            tool: TOOL,
            version: VERSION,
            config: &run,
            label: g.spectrum.label(),
            n_levels: g.spectrum.len(),
            degenerate_removed: g.degenerate_removed,
        },
    )?;
    Ok(GenerateOutputs { levels, metadata, n_levels: g.spectrum.len() })
}

/// Per-order summary written to the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSummary {
    pub k: usize,
    pub n_ratios: usize,
    pub dropped: usize,
    pub beta_hat: f64,
    pub beta_hat_at_grid_edge: bool,
    pub d_min: f64,
    pub d_min_mean: f64,
    pub ks_d: f64,
    pub ks_p: f64,
    pub poisson_ks_d: f64,
    pub poisson_ks_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub n_levels: usize,
    pub grid: ScanGrid,
    pub rule: VerdictRule,
    /// KS p-values assume independent samples, which overlapping ratio
    /// windows are not.
    pub p_values: &'static str,
    pub per_k: Vec<OrderSummary>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub inference: Inference,
    pub report: AnalysisReport,
    /// `(k, csv)` pairs.
    pub histograms: Vec<(usize, String)>,
    pub d_curves: Vec<(usize, String)>,
}

fn histogram_csv(s: &Spectrum, k: usize, beta_hat: f64, cfg: &AnalyzeConfig) -> Result<String> {
    let r = s.ratios(k)?;
    let h = histogram(&r, cfg.bins, cfg.cut_for(k))?;
    let wigner = TheoryDist::wigner_ratio(beta_hat)?;
    let mut out = String::from("bin_center,empirical_density,wigner_pdf_at_beta_hat,poisson_hosr_pdf\n");
    for (x, d) in h.bins() {
        let _ = writeln!(out, "{x},{d},{},{}", wigner.pdf(x), poisson_hosr_pdf(x, k));
    }
    Ok(out)
}

/// Runs the estimator on an in-memory spectrum.
pub fn analyze_spectrum(s: &Spectrum, cfg: &AnalyzeConfig) -> Result<Analysis> {
    let run = RunConfig::Analyze(cfg.clone());
    run.validate()?;
    let scanner = BetaScanner::new(cfg.grid)?;
    let rule = VerdictRule::default();
    let inference = infer_sectors_with(s, cfg.k_max, &scanner, &rule)?;
    let per_k = inference
        .reports
        .iter()
        .map(|r| OrderSummary {
            k: r.k,
            n_ratios: r.n_ratios,
            dropped: r.dropped,
            beta_hat: r.beta_hat,
            beta_hat_at_grid_edge: r.beta_hat_at_grid_edge,
            d_min: r.d_min,
            d_min_mean: r.d_min_mean,
            ks_d: r.ks_d,
            ks_p: r.ks_p,
            poisson_ks_d: r.poisson_ks_d,
            poisson_ks_p: r.poisson_ks_p,
        })
        .collect();
    let mut histograms = Vec::new();
    let mut d_curves = Vec::new();
    for r in &inference.reports {
        histograms.push((r.k, histogram_csv(s, r.k, r.beta_hat, cfg)?));
        let mut curve = String::from("beta,d\n");
        for (b, d) in &r.d_curve {
            let _ = writeln!(curve, "{b},{d}");
        }
        d_curves.push((r.k, curve));
    }
    let report = AnalysisReport {
        tool: TOOL,
        version: VERSION,
        config: run,
        n_levels: s.len(),
        grid: cfg.grid,
        rule,
        p_values: "nominal",
        per_k,
        verdict: inference.verdict,
    };
    Ok(Analysis { inference, report, histograms, d_curves })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutputs {
    pub report: PathBuf,
    pub tables: Vec<PathBuf>,
    pub verdict: Verdict,
}

pub fn report_path(outdir: &Path) -> PathBuf {
    outdir.join("report.json")
}

pub fn cmd_analyze(cfg: &AnalyzeConfig) -> Result<AnalyzeOutputs> {
    RunConfig::Analyze(cfg.clone()).validate()?;
    let s = parse_level_file(&cfg.input)?.spectrum()?;
    let a = analyze_spectrum(&s, cfg)?;
    let report = report_path(&cfg.outdir);
    write_json(&report, &a.report)?;
    let mut tables = Vec::new();
    for (k, csv) in &a.histograms {
        let p = cfg.outdir.join(format!("histogram_k{k}.csv"));
        write_text(&p, csv)?;
        tables.push(p);
    }
    for (k, csv) in &a.d_curves {
        let p = cfg.outdir.join(format!("d_curve_k{k}.csv"));
        write_text(&p, csv)?;
        tables.push(p);
    }
    Ok(AnalyzeOutputs { report, tables, verdict: a.report.verdict })
}

#[derive(Debug, Serialize)]
struct MissingLevelsRecord<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    n_levels: usize,
    rows: &'a [MissingLevelsRow],
}

pub fn missing_levels_rows(s: &Spectrum, cfg: &MissingLevelsConfig) -> Result<Vec<MissingLevelsRow>> {
    RunConfig::MissingLevels(cfg.clone()).validate()?;
    let scanner = BetaScanner::new(cfg.grid)?;
    Ok(missing_levels_experiment(
        s,
        &cfg.fractions,
        cfg.trials,
        cfg.k,
        &scanner,
        &RngStream::new(cfg.seed),
    )?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissingLevelsOutputs {
    pub table: PathBuf,
    pub record: PathBuf,
    pub rows: Vec<MissingLevelsRow>,
}

pub fn cmd_missing_levels(cfg: &MissingLevelsConfig) -> Result<MissingLevelsOutputs> {
    let run = RunConfig::MissingLevels(cfg.clone());
    run.validate()?;
    let s = parse_level_file(&cfg.input)?.spectrum()?;
    let rows = missing_levels_rows(&s, cfg)?;
    let mut csv = String::from("fraction,mean_beta_hat,stddev_beta_hat\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{}", r.fraction, r.mean_beta_hat, r.std_beta_hat);
    }
    let table = cfg.outdir.join("missing_levels.csv");
    let record = cfg.outdir.join("missing_levels.json");
    write_text(&table, &csv)?;
    write_json(
        &record,
        &MissingLevelsRecord {
            tool: TOOL,
            version: VERSION,
            config: &run,
            n_levels: s.len(),
            rows: &rows,
        },
    )?;
    Ok(MissingLevelsOutputs { table, record, rows })
}

pub fn run(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    Ok(match cfg {
        RunConfig::Generate(g) => {
            let out = cmd_generate(g)?;
            format!(
                "wrote {} levels to {} (metadata {})",
                out.n_levels,
                out.levels.display(),
                out.metadata.display()
            )
        }
        RunConfig::Analyze(a) => {
            let out = cmd_analyze(a)?;
            format!(
                "verdict {}; report {} and {} tables",
                out.verdict,
                out.report.display(),
                out.tables.len()
            )
        }
        RunConfig::MissingLevels(m) => {
            let out = cmd_missing_levels(m)?;
            let mut s = format!("wrote {}", out.table.display());
            for r in &out.rows {
                let _ = write!(s, "\n{:>5.2}  {:.3} +- {:.3}", r.fraction, r.mean_beta_hat, r.std_beta_hat);
            }
            s
        }
    })
}
