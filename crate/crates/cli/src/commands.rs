use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use dbf_core::constructions::{
    helleseth_gong_with_reading, lin_function, product_function, trace_function,
};
use dbf_core::designs::{
    character_spectrum, find_function_multipliers, function_multiplier_report, graph_set,
    multiplier_check, preimage_rds, project, singer_projection, verify_function_gds, DesignParams,
    PreimageKind, ProductGroup,
};
use dbf_core::properties::{
    balanced_shift, homogeneity_degree, is_balanced, is_difference_balanced, is_two_tuple_balanced,
};
use dbf_core::search::{enumerate_db, SearchConfig, SearchMode, DEFAULT_BUDGET, DEFAULT_CHECKPOINT_EVERY};
use dbf_core::sequences::{autocorrelation, integer_value, is_ideal_two_level, to_sequence};
use dbf_core::{Elem, Field, FunctionTable};

use crate::manifest::RunManifest;
use crate::output::{
    read_table, write_json, AutocorrEntry, AutocorrOutput, NamedReport, OutputKind, ReportOutput,
    SearchOutput, TableOutput,
};

fn path_string(path: &Path) -> String {
    path.display().to_string()
}

fn element_label(e: Elem) -> String {
    match e.exp() {
        None => "0".to_string(),
        Some(x) => format!("θ^{x}"),
    }
}

fn exit_code(verdict: bool) -> u8 {
    if verdict {
        0
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Trace,
    Hg,
    Lin,
    Product,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    /// Helleseth-Gong: n = (2ℓ+1)k
    #[arg(long)]
    pub k: Option<u32>,
    /// Helleseth-Gong ℓ, or the intermediate field degree for `product`
    #[arg(long)]
    pub ell: Option<u32>,
    /// Helleseth-Gong b-sequence reading multiplier
    #[arg(long, default_value_t = 1)]
    pub reading: u32,
    /// Modulus coefficients, constant term first, comma separated
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

pub fn construct(args: &ConstructArgs) -> Result<u8> {
    let field = Arc::new(Field::build(args.p, args.m, args.n, args.modulus.as_deref())?);
    let table = match args.family {
        Family::Trace => trace_function(&field),
        Family::Lin => lin_function(&field)?,
        Family::Hg => {
            let (k, ell) = match (args.k, args.ell) {
                (Some(k), Some(ell)) => (k, ell),
                (Some(k), None) if k > 0 && args.n.is_multiple_of(k) && (args.n / k) % 2 == 1 => {
                    (k, (args.n / k - 1) / 2)
                }
                (None, Some(ell)) if args.n.is_multiple_of(2 * ell + 1) => (args.n / (2 * ell + 1), ell),
                (None, None) if args.n.is_multiple_of(3) => (args.n / 3, 1),
                _ => bail!("cannot write n = {} as (2ℓ+1)k from the given --k/--ell", args.n),
            };
            helleseth_gong_with_reading(&field, k, ell, args.reading)?
        }
        Family::Product => {
            let ell = args.ell.context("--ell is required for the product family")?;
            product_function(&field, ell)?
        }
    };
    let manifest = RunManifest::new(
        "construct",
        args,
        Vec::new(),
        args.out.as_deref().map(path_string),
        &field,
    );
    let out = TableOutput {
        kind: OutputKind::FunctionTable,
        manifest: Some(manifest),
        table: table.to_file(),
    };
    write_json(&out, args.out.as_deref())?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckProp {
    Balance,
    Db,
    Hom,
    Ttb,
    Shift,
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CheckProp::Balance, CheckProp::Db, CheckProp::Hom, CheckProp::Ttb])]
    pub props: Vec<CheckProp>,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

pub fn check(args: &CheckArgs) -> Result<u8> {
    let f = read_table(&args.input)?;
    let reports: Vec<NamedReport> = args
        .props
        .iter()
        .map(|prop| match prop {
            CheckProp::Balance => NamedReport::new("balance", is_balanced(&f)),
            CheckProp::Db => NamedReport::new("db", is_difference_balanced(&f)),
            CheckProp::Hom => NamedReport::new("hom", homogeneity_degree(&f)),
            CheckProp::Ttb => {
                let (report, profile) = is_two_tuple_balanced(&f);
                let mut named = NamedReport::new("ttb", report);
                if named.report.verdict {
                    named = named.details(json!({ "mu": profile.mu_map }));
                }
                named
            }
            CheckProp::Shift => NamedReport::new("shift", balanced_shift(&f)),
        })
        .collect();
    emit_reports(OutputKind::CheckReport, "check", args, &args.input, args.out.as_deref(), f.field(), reports)
}

fn emit_reports<A: Serialize>(
    kind: OutputKind,
    subcommand: &str,
    args: &A,
    input: &Path,
    out: Option<&Path>,
    field: &Field,
    reports: Vec<NamedReport>,
) -> Result<u8> {
    let verdict = reports.iter().all(|r| r.report.verdict);
    let manifest = RunManifest::new(
        subcommand,
        args,
        vec![path_string(input)],
        out.map(path_string),
        field,
    );
    write_json(
        &ReportOutput {
            kind,
            manifest,
            verdict,
            reports,
        },
        out,
    )?;
    Ok(exit_code(verdict))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignCheck {
    Gds,
    Rds,
    Dds,
    Singer,
    Chars,
    Multipliers,
    Project,
}

#[derive(Args, Debug, Serialize)]
pub struct DesignArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [DesignCheck::Gds])]
    pub verify: Vec<DesignCheck>,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

fn design_reports(f: &FunctionTable, check: DesignCheck) -> Result<Vec<NamedReport>> {
    let field = f.field();
    let nonzero = || field.subfield_elements().into_iter().skip(1);
    Ok(match check {
        DesignCheck::Gds => vec![NamedReport::new("gds", verify_function_gds(f))],
        DesignCheck::Rds => nonzero()
            .map(|b| Ok(NamedReport::new("rds", preimage_rds(f, b)?.1).at(element_label(b))))
            .collect::<Result<_>>()?,
        DesignCheck::Dds => vec![NamedReport::new("dds", preimage_rds(f, Elem::ZERO)?.1).at("0".into())],
        DesignCheck::Singer => {
            let mut out = Vec::new();
            for (b, kind) in [(Elem::ONE, PreimageKind::NonZero), (Elem::ZERO, PreimageKind::Zero)] {
                let (set, _) = preimage_rds(f, b)?;
                let (image, report) = singer_projection(field, &set, kind);
                out.push(
                    NamedReport::new("singer", report)
                        .at(element_label(b))
                        .details(json!({ "image": image })),
                );
            }
            out
        }
        DesignCheck::Chars => {
            let spectrum = character_spectrum(field, &graph_set(f))?;
            vec![NamedReport::new("chars", spectrum.report).details(json!({ "regions": spectrum.regions }))]
        }
        DesignCheck::Multipliers => {
            let set = graph_set(f);
            let mut out: Vec<NamedReport> = nonzero()
                .map(|t| {
                    Ok(NamedReport::new("multiplier", multiplier_check(field, &set, 1, t)?)
                        .at(format!("(1, {})", element_label(t))))
                })
                .collect::<Result<_>>()?;
            if field.m() == 1 {
                let found = find_function_multipliers(field, &set)?;
                out.push(
                    NamedReport::new("function_multipliers", function_multiplier_report(field, &set)?)
                        .details(json!({ "multipliers": found })),
                );
            }
            out
        }
        DesignCheck::Project => {
            let group = ProductGroup::from_field(field);
            let h: Vec<u16> = field
                .prime_subfield_elements()
                .into_iter()
                .map(|e| field.subfield_index(e).expect("GF(p) ⊂ GF(q)") as u16)
                .collect();
            let projection = project(&group, &graph_set(f), &DesignParams::for_function(field), &h)?;
            vec![NamedReport::new("project", projection.report)
                .at(format!("H = GF({})", field.p()))
                .details(json!({ "params": projection.params }))]
        }
    })
}

pub fn design(args: &DesignArgs) -> Result<u8> {
    let f = read_table(&args.input)?;
    let mut reports = Vec::new();
    for &check in &args.verify {
        reports.extend(design_reports(&f, check)?);
    }
    emit_reports(OutputKind::DesignReport, "design", args, &args.input, args.out.as_deref(), f.field(), reports)
}

#[derive(Args, Debug, Serialize)]
pub struct AutocorrArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, conflicts_with = "all")]
    pub tau: Option<usize>,
    /// Every shift 0..period (the default)
    #[arg(long)]
    pub all: bool,
    /// Print the full JSON document instead of "τ: value" lines
    #[arg(long, conflicts_with = "digits")]
    pub json: bool,
    /// Print the sequence, one digit per symbol
    #[arg(long)]
    pub digits: bool,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

fn format_value(counts: &[u64], re: f64, im: f64) -> String {
    match integer_value(counts) {
        Some(v) => v.to_string(),
        None => format!("{re:.6}{im:+.6}i"),
    }
}

pub fn autocorr(args: &AutocorrArgs) -> Result<u8> {
    let f = read_table(&args.input)?;
    let seq = to_sequence(&f)?;
    let taus: Vec<usize> = match args.tau {
        Some(t) => vec![t],
        None => (0..seq.period()).collect(),
    };
    let entries = taus
        .into_iter()
        .map(|tau| {
            let (counts, value) = autocorrelation(&seq, tau)?;
            Ok(AutocorrEntry {
                tau,
                value: integer_value(&counts),
                counts,
                re: value.re,
                im: value.im,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut text = String::new();
    if args.digits {
        text = seq.digits() + "\n";
    } else if !args.json {
        for e in &entries {
            text.push_str(&format!("{}: {}\n", e.tau, format_value(&e.counts, e.re, e.im)));
        }
    }
    if !args.json {
        match &args.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        return Ok(0);
    }
    let manifest = RunManifest::new(
        "autocorr",
        args,
        vec![path_string(&args.input)],
        args.out.as_deref().map(path_string),
        f.field(),
    );
    let out = AutocorrOutput {
        kind: OutputKind::Autocorrelation,
        manifest,
        p: seq.p,
        period: seq.period(),
        sequence: seq.digits(),
        ideal: is_ideal_two_level(&seq),
        autocorrelation: entries,
    };
    write_json(&out, args.out.as_deref())?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Full,
    Homogeneous,
    Relabel,
    Random,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    /// Required for `--mode random`
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// 0 uses every available core
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Write a resumable checkpoint here
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_EVERY)]
    pub checkpoint_every: u64,
    /// Resume from (and keep updating) this checkpoint
    #[arg(long, conflicts_with = "checkpoint")]
    pub resume: Option<PathBuf>,
    /// Stop after this many candidates in total, leaving a checkpoint
    #[arg(long)]
    pub stop_after: Option<u64>,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

pub fn search(args: &SearchArgs) -> Result<u8> {
    let field = Arc::new(Field::build(args.p, args.m, args.n, None)?);
    let mode = match args.mode {
        ModeArg::Full => SearchMode::Full,
        ModeArg::Homogeneous => SearchMode::HomogeneousOnly,
        ModeArg::Relabel => SearchMode::Relabel,
        ModeArg::Random => SearchMode::RandomSample {
            seed: args.seed.context("--mode random requires --seed")?,
            samples: args.samples,
        },
    };
    let mut config = SearchConfig::new(field.clone(), mode);
    config.workers = args.workers;
    config.budget = args.budget;
    config.checkpoint_every = args.checkpoint_every;
    config.stop_after = args.stop_after;
    config.checkpoint = args.checkpoint.clone().or_else(|| args.resume.clone());
    config.resume = args.resume.is_some();
    let report = enumerate_db(&config)?;
    eprintln!(
        "visited {} of {} candidates, {} difference balanced, {} flagged, {:.3?}",
        report.visited,
        report.total_candidates,
        report.db_count,
        report.counterexamples + report.no_balanced_shift,
        report.wall_time
    );
    let verdict = report.counterexamples == 0 && report.no_balanced_shift == 0;
    let manifest = RunManifest::new(
        "search",
        args,
        args.resume.iter().map(|p| path_string(p)).collect(),
        args.out.as_deref().map(path_string),
        &field,
    );
    write_json(
        &SearchOutput {
            kind: OutputKind::SearchReport,
            manifest,
            report,
        },
        args.out.as_deref(),
    )?;
    Ok(exit_code(verdict))
}
