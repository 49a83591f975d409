//! Flat `key = value` run configuration.
//!
//! A config file holds one assignment per line; `#` starts a comment. Command
//! line `key=value` pairs override file entries. Unknown keys are rejected so a
//! typo never silently falls back to a default.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use fracineq::functions::{CorpusKind, FunctionSpec, WeightProfile, WeightSpec};
use fracineq::inequality::{CheckConfig, InequalityKind};
use fracineq::{FracOrder, Interval, KernelScale, QuadratureConfig};

const KEYS: &[&str] = &[
    "inequality",
    "u",
    "v",
    "weight",
    "functions",
    "alpha",
    "alphas",
    "interval",
    "intervals",
    "a_grid",
    "kernel_scale",
    "seed",
    "size",
    "corpus",
    "mode",
    "abs_tol",
    "rel_tol",
    "max_subdivisions",
    "strict",
    "lax",
    "screen_grid",
    "out",
];

pub const DEFAULT_ALPHAS: [f64; 8] = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeMode {
    Convex,
    Concave,
    Auto,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

type Res<T> = Result<T, String>;

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Res<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            cfg.merge_text(&text)?;
        }
        for o in overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| format!("override '{o}' is not key=value"))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    fn merge_text(&mut self, text: &str) -> Res<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value, got '{line}'", n + 1))?;
            self.set(k, v).map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Res<()> {
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(format!("unknown config key '{key}'"));
        }
        self.entries.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    pub fn has(&self, key: &str) -> bool {
        self.raw(key).is_some()
    }

    fn number(&self, key: &str) -> Res<Option<f64>> {
        self.raw(key).map(|v| parse_num(key, v)).transpose()
    }

    fn flag(&self, key: &str) -> Res<bool> {
        match self.raw(key) {
            None | Some("false") | Some("0") | Some("no") => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some(v) => Err(format!("'{key}' expects true or false, got '{v}'")),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.raw("out").map(PathBuf::from)
    }

    pub fn inequalities(&self) -> Res<Vec<InequalityKind>> {
        match self.raw("inequality") {
            None => Ok(vec![InequalityKind::HermiteHadamard]),
            Some(v) => v.split(',').map(|s| s.parse().map_err(|e| format!("{e}"))).collect(),
        }
    }

    pub fn inequality(&self) -> Res<InequalityKind> {
        let all = self.inequalities()?;
        match all.as_slice() {
            [one] => Ok(*one),
            _ => Err("this command takes exactly one inequality".into()),
        }
    }

    pub fn function(&self, key: &str) -> Res<Option<FunctionSpec>> {
        self.raw(key).map(|v| v.parse().map_err(|e| format!("{key}: {e}"))).transpose()
    }

    pub fn require_function(&self, key: &str) -> Res<FunctionSpec> {
        self.function(key)?.ok_or_else(|| format!("missing '{key}'"))
    }

    /// Explicit corpus, `;`-separated.
    pub fn functions(&self) -> Res<Option<Vec<FunctionSpec>>> {
        let Some(v) = self.raw("functions") else { return Ok(None) };
        v.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|e| format!("functions: {e}")))
            .collect::<Res<Vec<_>>>()
            .map(Some)
    }

    pub fn weight(&self, iv: Interval) -> Res<Option<WeightSpec>> {
        let Some(v) = self.raw("weight") else { return Ok(None) };
        let profile: WeightProfile = v.parse().map_err(|e| format!("weight: {e}"))?;
        WeightSpec::new(profile, iv).map(Some).map_err(|e| format!("weight: {e}"))
    }

    pub fn alpha(&self) -> Res<FracOrder> {
        let a = self.number("alpha")?.unwrap_or(0.5);
        FracOrder::new(a).map_err(|e| e.to_string())
    }

    /// `alphas`, falling back to a single `alpha`, then to `default`.
    pub fn alphas(&self, default: &[f64]) -> Res<Vec<f64>> {
        if let Some(v) = self.raw("alphas") {
            return parse_list("alphas", v);
        }
        if let Some(a) = self.number("alpha")? {
            return Ok(vec![a]);
        }
        Ok(default.to_vec())
    }

    pub fn interval(&self) -> Res<Interval> {
        match self.raw("interval") {
            None => Ok(Interval::new(0.0, 1.0).expect("unit interval")),
            Some(v) => parse_interval(v),
        }
    }

    pub fn intervals(&self) -> Res<Vec<Interval>> {
        match self.raw("intervals") {
            None => Ok(vec![self.interval()?]),
            Some(v) => v.split(';').filter(|s| !s.trim().is_empty()).map(parse_interval).collect(),
        }
    }

    /// Kernel scales for the constant table: a list, or `log:lo:hi:n`.
    pub fn a_grid(&self) -> Res<Vec<f64>> {
        let spec = self.raw("a_grid").unwrap_or("0,log:1e-8:1e3:12");
        let mut out = Vec::new();
        for part in spec.split(',') {
            let part = part.trim();
            if let Some(log) = part.strip_prefix("log:") {
                let f: Vec<&str> = log.split(':').collect();
                let [lo, hi, n] = f.as_slice() else {
                    return Err(format!("a_grid: expected log:lo:hi:n, got '{part}'"));
                };
                let (lo, hi) = (parse_num("a_grid", lo)?, parse_num("a_grid", hi)?);
                let n: usize = n.parse().map_err(|_| format!("a_grid: bad count '{n}'"))?;
                if !(lo > 0.0 && hi >= lo) || n < 2 {
                    return Err(format!("a_grid: bad log range '{part}'"));
                }
                let step = (hi / lo).ln() / (n - 1) as f64;
                out.extend((0..n).map(|i| lo * (step * i as f64).exp()));
            } else {
                out.push(parse_num("a_grid", part)?);
            }
        }
        for &a in &out {
            KernelScale::new(a).map_err(|e| format!("a_grid: {e}"))?;
        }
        Ok(out)
    }

    pub fn kernel_scale(&self) -> Res<Option<KernelScale>> {
        self.number("kernel_scale")?
            .map(|a| KernelScale::new(a).map_err(|e| e.to_string()))
            .transpose()
    }

    pub fn seed(&self) -> Res<u64> {
        self.raw("seed").map_or(Ok(1), |v| v.parse().map_err(|_| format!("seed: bad value '{v}'")))
    }

    pub fn size(&self, default: usize) -> Res<usize> {
        self.raw("size").map_or(Ok(default), |v| v.parse().map_err(|_| format!("size: bad value '{v}'")))
    }

    pub fn corpus_kind(&self) -> Res<Option<CorpusKind>> {
        let Some(v) = self.raw("corpus") else { return Ok(None) };
        let kind = match v {
            "convex" => CorpusKind::Convex,
            "smooth" => CorpusKind::Smooth,
            "nonnegative" => CorpusKind::Nonnegative,
            "concave" => CorpusKind::Concave,
            "concave_nonnegative" => CorpusKind::ConcaveNonnegative,
            _ => return Err(format!("unknown corpus '{v}'")),
        };
        Ok(Some(kind))
    }

    pub fn mode(&self) -> Res<ShapeMode> {
        match self.raw("mode").unwrap_or("convex") {
            "convex" => Ok(ShapeMode::Convex),
            "concave" => Ok(ShapeMode::Concave),
            "auto" => Ok(ShapeMode::Auto),
            v => Err(format!("unknown mode '{v}'")),
        }
    }

    pub fn check_config(&self) -> Res<CheckConfig> {
        let d = QuadratureConfig::default();
        let max = match self.raw("max_subdivisions") {
            None => d.max_subdivisions,
            Some(v) => v.parse().map_err(|_| format!("max_subdivisions: bad value '{v}'"))?,
        };
        let quad = QuadratureConfig::new(
            self.number("abs_tol")?.unwrap_or(d.abs_tol),
            self.number("rel_tol")?.unwrap_or(d.rel_tol),
            max,
        )
        .map_err(|e| e.to_string())?;
        let mut cfg = CheckConfig::with_quad(quad);
        cfg.strict = self.flag("strict")?;
        cfg.lax = self.flag("lax")?;
        if let Some(v) = self.raw("screen_grid") {
            cfg.screen_grid = v.parse().map_err(|_| format!("screen_grid: bad value '{v}'"))?;
        }
        Ok(cfg)
    }
}

fn parse_num(key: &str, v: &str) -> Res<f64> {
    v.trim().parse().map_err(|_| format!("'{key}' expects a number, got '{v}'"))
}

fn parse_list(key: &str, v: &str) -> Res<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect()
}

fn parse_interval(v: &str) -> Res<Interval> {
    let body = v.trim().trim_start_matches('[').trim_end_matches(']');
    let ends = parse_list("interval", body)?;
    let [a, b] = ends.as_slice() else {
        return Err(format!("interval expects 'a,b', got '{v}'"));
    };
    Interval::new(*a, *b).map_err(|e| e.to_string())
}
