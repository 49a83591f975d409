//! Corpus sweeps: every (inequality, interval, function, α) combination,
//! checked in parallel and written in a fixed order.

use rayon::prelude::*;

use fracineq::functions::{corpus, make_weight, CorpusKind, FunctionSpec, Shape, WeightSpec};
use fracineq::inequality::{check, CheckConfig, Companion, InequalityKind, Verdict};
use fracineq::{kernel_scale, Error, FracOrder, Interval};

use crate::config::{RunConfig, ShapeMode, DEFAULT_ALPHAS};
use crate::output::{num, opt_num, Table};

pub const SCHEMA: &str = "fracineq-sweep v1";
const HEADER: [&str; 16] = [
    "inequality",
    "seed",
    "family",
    "alpha",
    "A",
    "a",
    "b",
    "term0",
    "term1",
    "term2",
    "slack0",
    "slack1",
    "margin",
    "verdict",
    "panels_used",
    "detail",
];

/// Offset between a corpus seed and the seed of its Pachpatte partner.
const PARTNER_SEED_OFFSET: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Verdict(Verdict),
    ScreenFailed,
    Error,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Verdict(v) => v.as_str(),
            RowStatus::ScreenFailed => "screen_failed",
            RowStatus::Error => "error",
        }
    }
}

enum Partner {
    None,
    Weight(WeightSpec),
    Function(FunctionSpec),
}

impl Partner {
    fn companion(&self) -> Companion<'_> {
        match self {
            Partner::None => Companion::None,
            Partner::Weight(w) => Companion::Weight(w),
            Partner::Function(f) => Companion::Function(f),
        }
    }
}

struct Entry {
    seed: u64,
    family: &'static str,
    u: FunctionSpec,
    partner: Partner,
}

struct Row {
    key: (usize, usize, usize, usize),
    kind: InequalityKind,
    seed: u64,
    family: &'static str,
    alpha: f64,
    iv: Interval,
    terms: Vec<f64>,
    slacks: Vec<f64>,
    margin: Option<f64>,
    status: RowStatus,
    panels: Option<usize>,
    detail: String,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub rows: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub screen_failed: usize,
    pub errors: usize,
}

impl Summary {
    /// Violations dominate, then screen failures and errors, then inconclusive rows.
    pub fn exit_code(&self) -> i32 {
        if self.violated > 0 {
            2
        } else if self.screen_failed + self.errors > 0 {
            1
        } else if self.inconclusive > 0 {
            3
        } else {
            0
        }
    }
}

fn natural_corpus(kind: InequalityKind, mode: ShapeMode) -> CorpusKind {
    let concave = mode == ShapeMode::Concave;
    match kind {
        InequalityKind::DragomirAgarwal => CorpusKind::Smooth,
        InequalityKind::Pachpatte1 | InequalityKind::Pachpatte2 if concave => CorpusKind::ConcaveNonnegative,
        InequalityKind::Pachpatte1 | InequalityKind::Pachpatte2 => CorpusKind::Nonnegative,
        _ if concave => CorpusKind::Concave,
        _ => CorpusKind::Convex,
    }
}

fn entries(kind: InequalityKind, iv: Interval, cfg: &RunConfig) -> Result<Vec<Entry>, String> {
    let fixed_weight = cfg.weight(iv)?;
    let fixed_partner = cfg.function("v")?;
    let weight_for = |seed: u64| fixed_weight.unwrap_or_else(|| make_weight(seed, iv));
    if let Some(list) = cfg.functions()? {
        if kind.needs_partner() && fixed_partner.is_none() {
            return Err("an explicit Pachpatte corpus needs a partner 'v'".into());
        }
        return Ok(list
            .into_iter()
            .enumerate()
            .map(|(i, u)| {
                let seed = i as u64;
                let partner = match kind {
                    InequalityKind::Fejer => Partner::Weight(weight_for(seed)),
                    k if k.needs_partner() => Partner::Function(fixed_partner.clone().expect("checked above")),
                    _ => Partner::None,
                };
                Entry { seed, family: u.family_name(), u, partner }
            })
            .collect());
    }
    let mode = cfg.mode()?;
    let corpus_kind = cfg.corpus_kind()?.unwrap_or_else(|| natural_corpus(kind, mode));
    let (base, size) = (cfg.seed()?, cfg.size(200)?);
    let main = corpus(corpus_kind, base, size, iv);
    let partners = if kind.needs_partner() && fixed_partner.is_none() {
        corpus(corpus_kind, base.wrapping_add(PARTNER_SEED_OFFSET), size, iv)
    } else {
        Vec::new()
    };
    Ok(main
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let partner = match kind {
                InequalityKind::Fejer => Partner::Weight(weight_for(e.seed)),
                k if k.needs_partner() => {
                    Partner::Function(fixed_partner.clone().unwrap_or_else(|| partners[i].spec.clone()))
                }
                _ => Partner::None,
            };
            Entry { seed: e.seed, family: e.family.name(), u: e.spec, partner }
        })
        .collect())
}

/// Certificate mismatch under a fixed shape mode, if any.
fn mode_screen(kind: InequalityKind, entry: &Entry, mode: ShapeMode) -> Option<String> {
    let expected = match mode {
        ShapeMode::Auto => return None,
        ShapeMode::Convex => Shape::Convex,
        ShapeMode::Concave => Shape::Concave,
    };
    if kind == InequalityKind::DragomirAgarwal {
        return None;
    }
    let mut shapes = vec![entry.u.shape()];
    if let Partner::Function(v) = &entry.partner {
        shapes.push(v.shape());
    }
    shapes
        .into_iter()
        .find(|&s| s != expected)
        .map(|s| format!("certificate {} under {} mode", s.as_str(), expected.as_str()))
}

fn status_of_error(e: &Error) -> RowStatus {
    match e {
        Error::ShapeUnknown(_)
        | Error::NoDerivative(_)
        | Error::WeightInvalid(_)
        | Error::NegativeFunction(_)
        | Error::Hypothesis(_) => RowStatus::ScreenFailed,
        _ => RowStatus::Error,
    }
}

fn run_one(
    key: (usize, usize, usize, usize),
    kind: InequalityKind,
    entry: &Entry,
    alpha: f64,
    iv: Interval,
    mode: ShapeMode,
    check_cfg: &CheckConfig,
) -> Row {
    let mut row = Row {
        key,
        kind,
        seed: entry.seed,
        family: entry.family,
        alpha,
        iv,
        terms: Vec::new(),
        slacks: Vec::new(),
        margin: None,
        status: RowStatus::Error,
        panels: None,
        detail: String::new(),
    };
    if let Some(msg) = mode_screen(kind, entry, mode) {
        row.status = RowStatus::ScreenFailed;
        row.detail = msg;
        return row;
    }
    let order = match FracOrder::new(alpha) {
        Ok(o) => o,
        Err(e) => {
            row.detail = e.to_string();
            return row;
        }
    };
    match check(kind, &entry.u, entry.partner.companion(), order, iv, check_cfg) {
        Ok(r) => {
            row.terms = r.term_values();
            row.slacks = r.slacks.clone();
            row.margin = Some(r.margin);
            row.status = RowStatus::Verdict(r.verdict);
            row.panels = Some(r.panels_used);
        }
        Err(e) => {
            row.status = status_of_error(&e);
            row.detail = e.to_string();
        }
    }
    row
}

pub fn run(cfg: &RunConfig) -> Result<(Table, Summary), String> {
    let kinds = cfg.inequalities()?;
    let intervals = cfg.intervals()?;
    let alphas = cfg.alphas(&DEFAULT_ALPHAS)?;
    for &a in &alphas {
        FracOrder::new(a).map_err(|e| e.to_string())?;
    }
    let mode = cfg.mode()?;
    let check_cfg = cfg.check_config()?;

    let mut jobs = Vec::new();
    for (ki, &kind) in kinds.iter().enumerate() {
        for (ii, &iv) in intervals.iter().enumerate() {
            jobs.push((ki, kind, ii, iv, entries(kind, iv, cfg)?));
        }
    }
    let mut tasks = Vec::new();
    for (ki, kind, ii, iv, list) in &jobs {
        for (ei, e) in list.iter().enumerate() {
            for (ai, &a) in alphas.iter().enumerate() {
                tasks.push(((*ki, *ii, ei, ai), *kind, e, a, *iv));
            }
        }
    }
    let mut rows: Vec<Row> = tasks
        .into_par_iter()
        .map(|(key, kind, e, a, iv)| run_one(key, kind, e, a, iv, mode, &check_cfg))
        .collect();
    rows.sort_by_key(|r| r.key);

    let mut summary = Summary::default();
    let mut table = Table::new(SCHEMA, &HEADER);
    for r in rows {
        summary.rows += 1;
        match r.status {
            RowStatus::Verdict(Verdict::Holds) => summary.holds += 1,
            RowStatus::Verdict(Verdict::Violated) => summary.violated += 1,
            RowStatus::Verdict(Verdict::Inconclusive) => summary.inconclusive += 1,
            RowStatus::ScreenFailed => summary.screen_failed += 1,
            RowStatus::Error => summary.errors += 1,
        }
        let big_a = FracOrder::new(r.alpha).map(|o| kernel_scale(o, r.iv).get()).ok();
        table.push(vec![
            r.kind.as_str().to_string(),
            r.seed.to_string(),
            r.family.to_string(),
            num(r.alpha),
            opt_num(big_a),
            num(r.iv.a()),
            num(r.iv.b()),
            opt_num(r.terms.first().copied()),
            opt_num(r.terms.get(1).copied()),
            opt_num(r.terms.get(2).copied()),
            opt_num(r.slacks.first().copied()),
            opt_num(r.slacks.get(1).copied()),
            opt_num(r.margin),
            r.status.as_str().to_string(),
            r.panels.map(|p| p.to_string()).unwrap_or_default(),
            r.detail,
        ]);
    }
    Ok((table, summary))
}
