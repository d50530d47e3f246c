//! Multi-run orchestration: extraction artifacts, comparison reports and DOT
//! export.
//!
//! Run `i` uses seed `base_seed + i` and depends on nothing else, so runs are
//! executed in parallel and collected back in run order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::backbone::{
    disparity_filter, ego_backbone, hubs_backbone, tune_alpha, Backbone, DegreeSource, ExtractOptions, Method,
    PrunePolicy,
};
use crate::community::{detect_communities, CommunityCover, CoverFile, SlpaParams};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::io::{read_edge_list, write_edge_list_file};
use crate::metrics::{compare_backbones, effectiveness_summary, top_preservation, RBO_P_GRID};

/// Share of the network's nodes used for top-node preservation.
pub const TOP_FRACTION: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub methods: Vec<Method>,
    pub s: f64,
    pub runs: usize,
    pub base_seed: u64,
    /// Community detection settings; the seed field is replaced per run.
    pub slpa: SlpaParams,
    pub policy: PrunePolicy,
    pub degree_source: DegreeSource,
    /// Fixed disparity threshold instead of matching the ego backbone size.
    pub alpha: Option<f64>,
    /// Precomputed cover shared by every run.
    pub cover: Option<PathBuf>,
    pub out: PathBuf,
    /// Weight for edge-list lines that carry none.
    pub default_weight: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::new(),
            methods: Method::ALL.to_vec(),
            s: 0.3,
            runs: 10,
            base_seed: 0,
            slpa: SlpaParams::default(),
            policy: PrunePolicy::default(),
            degree_source: DegreeSource::default(),
            alpha: None,
            cover: None,
            out: PathBuf::from("output"),
            default_weight: 1.0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::param("runs must be at least 1"));
        }
        if !(self.s > 0.0 && self.s <= 1.0) {
            return Err(Error::param(format!("s must lie in (0,1], got {}", self.s)));
        }
        if self.methods.is_empty() {
            return Err(Error::param("no method selected"));
        }
        if let Some(alpha) = self.alpha {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::param(format!("alpha must lie in (0,1], got {alpha}")));
            }
        }
        if !(self.default_weight > 0.0 && self.default_weight.is_finite()) {
            return Err(Error::param("default weight must be positive"));
        }
        self.slpa.validate()
    }

    /// Requested methods in canonical order, without repeats.
    pub fn method_list(&self) -> Vec<Method> {
        Method::ALL.into_iter().filter(|m| self.methods.contains(m)).collect()
    }

    pub fn seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }

    fn extract_options(&self) -> ExtractOptions {
        ExtractOptions {
            s: self.s,
            policy: self.policy,
            degree_source: self.degree_source,
        }
    }
}

/// Maps an error to the process exit code: 1 for usage, 2 for bad data,
/// 3 when extraction failed.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parameter(_) => 1,
        Error::Io(_)
        | Error::Parse { .. }
        | Error::DuplicateEdge { .. }
        | Error::UnknownNode(_)
        | Error::UnknownEdge(..)
        | Error::Cover(_)
        | Error::Json(_) => 2,
        Error::EmptyOverlap | Error::Tuning { .. } | Error::Undefined(_) | Error::AllRunsFailed(_) => 3,
    }
}

/// A loaded input network.
#[derive(Clone, Debug)]
pub struct Network {
    pub name: String,
    pub graph: WeightedGraph,
    pub cover: Option<CommunityCover>,
}

impl Network {
    pub fn load(config: &RunConfig) -> Result<Network> {
        let (graph, report) = read_edge_list(&config.input, config.default_weight)?;
        if report.self_loops_dropped > 0 {
            log::info!("{} self-loops dropped", report.self_loops_dropped);
        }
        let cover = match &config.cover {
            Some(path) => Some(CommunityCover::from_file(&graph, &CoverFile::read(path)?)?),
            None => None,
        };
        let name = config
            .input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(Network { name, graph, cover })
    }
}

/// Backbones of one run, in canonical method order.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub run: usize,
    pub seed: u64,
    pub cover: CommunityCover,
    pub backbones: Vec<Backbone>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunFailure {
    pub run: usize,
    pub seed: u64,
    pub error: String,
}

/// Runs the pipeline once. Disparity is sized to this run's ego backbone
/// unless a fixed alpha is configured.
pub fn run_once(net: &Network, config: &RunConfig, run: usize) -> Result<RunArtifacts> {
    let seed = config.seed(run);
    let g = &net.graph;
    let cover = match &net.cover {
        Some(c) => c.clone(),
        None => detect_communities(g, config.slpa.with_seed(seed))?,
    };
    let methods = config.method_list();
    let opts = config.extract_options();
    let mut ego: Option<Backbone> = None;
    let mut backbones = Vec::with_capacity(methods.len());
    for method in methods {
        let b = match method {
            Method::Ego => {
                let b = ego_backbone(g, &cover, opts)?;
                ego = Some(b.clone());
                b
            }
            Method::Hubs => hubs_backbone(g, &cover, opts)?,
            Method::Disparity => match config.alpha {
                Some(alpha) => disparity_filter(g, alpha)?,
                None => {
                    let target = match &ego {
                        Some(b) => b.node_count(),
                        None => ego_backbone(g, &cover, opts)?.node_count(),
                    };
                    tune_alpha(g, target)?.backbone
                }
            },
        };
        backbones.push(b.with_seed(seed));
    }
    Ok(RunArtifacts {
        run,
        seed,
        cover,
        backbones,
    })
}

/// Every run, in run order.
pub fn run_all(net: &Network, config: &RunConfig) -> Vec<std::result::Result<RunArtifacts, RunFailure>> {
    (0..config.runs)
        .into_par_iter()
        .map(|run| {
            run_once(net, config, run).map_err(|e| {
                log::info!("run {run} failed: {e}");
                RunFailure {
                    run,
                    seed: config.seed(run),
                    error: e.to_string(),
                }
            })
        })
        .collect()
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractSummary {
    pub network: String,
    pub runs: usize,
    pub completed: usize,
    pub failures: Vec<RunFailure>,
}

/// Writes `<out>/<method>/run<i>/backbone.txt` and `provenance.json` for
/// every successful run, the run's cover as `<out>/covers/run<i>.json`, plus
/// `<out>/extract.json`. Fails only when no run
/// succeeds.
pub fn cmd_extract(config: &RunConfig) -> Result<ExtractSummary> {
    config.validate()?;
    let net = Network::load(config)?;
    let results = run_all(&net, config);
    let mut failures = Vec::new();
    let mut completed = 0;
    for result in &results {
        match result {
            Ok(run) => {
                completed += 1;
                let covers = config.out.join("covers");
                fs::create_dir_all(&covers)?;
                run.cover.to_file(&net.graph).write(covers.join(format!("run{}.json", run.run)))?;
                for b in &run.backbones {
                    let dir = config.out.join(b.method.name()).join(format!("run{}", run.run));
                    fs::create_dir_all(&dir)?;
                    write_edge_list_file(&b.graph, dir.join("backbone.txt"))?;
                    b.provenance(&net.name).write(dir.join("provenance.json"))?;
                }
            }
            Err(f) => failures.push(f.clone()),
        }
    }
    let summary = ExtractSummary {
        network: net.name.clone(),
        runs: config.runs,
        completed,
        failures,
    };
    fs::create_dir_all(&config.out)?;
    write_json(&config.out.join("extract.json"), &summary)?;
    if completed == 0 {
        return Err(Error::AllRunsFailed(config.runs));
    }
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodMetrics {
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub alpha: Option<f64>,
    /// Top-node preservation.
    pub a_t: f64,
    pub avg_betweenness: Option<f64>,
    pub avg_weighted_degree: Option<f64>,
    pub avg_link_weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    /// Proportion of common nodes.
    pub a_n: f64,
    /// Rank-biased overlap keyed by persistence.
    pub rbo: IndexMap<String, f64>,
    pub pearson: Option<f64>,
    pub kendall: Option<f64>,
    pub nodes_left: usize,
    pub nodes_right: usize,
}

/// Every metric of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunMetrics {
    pub run: usize,
    pub seed: u64,
    pub methods: IndexMap<String, MethodMetrics>,
    pub pairs: IndexMap<String, PairReport>,
}

/// Report key for the method pair, e.g. `OE-OH`.
pub fn pair_key(a: Method, b: Method) -> String {
    format!("{}-{}", a.tag(), b.tag())
}

fn p_key(p: f64) -> String {
    format!("{p}")
}

pub fn run_metrics(net: &Network, run: &RunArtifacts) -> Result<RunMetrics> {
    let g = &net.graph;
    let mut methods = IndexMap::new();
    for b in &run.backbones {
        let eff = effectiveness_summary(&b.graph).ok();
        methods.insert(
            b.method.tag().to_string(),
            MethodMetrics {
                nodes: b.node_count(),
                edges: b.edge_count(),
                components: b.component_count(),
                alpha: b.params.alpha,
                a_t: top_preservation(g, b, TOP_FRACTION)?.value,
                avg_betweenness: eff.map(|e| e.avg_betweenness),
                avg_weighted_degree: eff.map(|e| e.avg_weighted_degree),
                avg_link_weight: eff.map(|e| e.avg_link_weight),
            },
        );
    }
    let mut pairs = IndexMap::new();
    for (i, a) in run.backbones.iter().enumerate() {
        for b in &run.backbones[i + 1..] {
            let m = compare_backbones(g, a, b)?;
            let rbo = RBO_P_GRID.iter().zip(&m.rbo).map(|(&p, &v)| (p_key(p), v)).collect();
            pairs.insert(
                pair_key(a.method, b.method),
                PairReport {
                    a_n: m.common_nodes,
                    rbo,
                    pearson: m.pearson,
                    kendall: m.kendall,
                    nodes_left: m.sizes.0,
                    nodes_right: m.sizes.1,
                },
            );
        }
    }
    Ok(RunMetrics {
        run: run.run,
        seed: run.seed,
        methods,
        pairs,
    })
}

/// Mean and population standard deviation over the runs that define a value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Stat {
            mean,
            std: var.sqrt(),
            n: values.len(),
        })
    }
}

/// Averages JSON trees of identical shape leaf by leaf. Numeric leaves turn
/// into `{mean, std, n}`; nulls are skipped and a leaf that is null in every
/// tree stays null.
pub fn aggregate(trees: &[&Value]) -> Value {
    let Some(first) = trees.first() else {
        return Value::Null;
    };
    match first {
        Value::Object(map) => {
            let mut out = Map::new();
            for key in map.keys() {
                let children: Vec<&Value> = trees.iter().filter_map(|t| t.get(key)).collect();
                out.insert(key.clone(), aggregate(&children));
            }
            Value::Object(out)
        }
        _ => {
            let values: Vec<f64> = trees.iter().filter_map(|t| t.as_f64()).collect();
            match Stat::of(&values) {
                Some(stat) => serde_json::to_value(stat).unwrap_or(Value::Null),
                None => Value::Null,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub network: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "E")]
    pub e: usize,
    pub runs: usize,
    pub completed: usize,
    pub seeds: Vec<u64>,
    pub failures: Vec<RunFailure>,
    pub methods: Value,
    pub pairs: Value,
}

impl ComparisonReport {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    fn stat(&self, section: &Value, path: &[&str]) -> Option<Stat> {
        let mut v = section;
        for key in path {
            v = v.get(*key)?;
        }
        Some(Stat {
            mean: v.get("mean")?.as_f64()?,
            std: v.get("std")?.as_f64()?,
            n: v.get("n")?.as_u64()? as usize,
        })
    }

    pub fn method_stat(&self, method: Method, field: &str) -> Option<Stat> {
        self.stat(&self.methods, &[method.tag(), field])
    }

    pub fn pair_stat(&self, a: Method, b: Method, path: &[&str]) -> Option<Stat> {
        let key = pair_key(a, b);
        let mut full = vec![key.as_str()];
        full.extend_from_slice(path);
        self.stat(&self.pairs, &full)
    }

    /// Aligned text tables, one per metric family, two decimals.
    pub fn to_table(&self) -> String {
        let cell = |s: Option<Stat>| s.map_or("-".to_string(), |s| format!("{:.2}", s.mean));
        let method_keys: Vec<String> = keys(&self.methods);
        let pair_keys: Vec<String> = keys(&self.pairs);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} (N = {}, {} of {} runs)",
            self.network, self.n, self.completed, self.runs
        );

        let mut rows = vec![header("", &pair_keys, &method_keys)];
        let mut an = vec!["A_n".to_string()];
        an.extend(pair_keys.iter().map(|k| cell(self.stat(&self.pairs, &[k, "a_n"]))));
        an.extend(method_keys.iter().map(|_| String::new()));
        rows.push(an);
        let mut at = vec!["A_t".to_string()];
        at.extend(pair_keys.iter().map(|_| String::new()));
        at.extend(method_keys.iter().map(|k| cell(self.stat(&self.methods, &[k, "a_t"]))));
        rows.push(at);
        push_table(&mut out, "Node overlap", &rows);

        let mut rows = vec![header("p", &pair_keys, &[])];
        for p in RBO_P_GRID {
            let pk = p_key(p);
            let mut row = vec![pk.clone()];
            row.extend(pair_keys.iter().map(|k| cell(self.stat(&self.pairs, &[k, "rbo", &pk]))));
            rows.push(row);
        }
        push_table(&mut out, "Rank-biased overlap", &rows);

        let mut rows = vec![header("", &pair_keys, &[])];
        for (name, field) in [("rho", "pearson"), ("tau", "kendall")] {
            let mut row = vec![name.to_string()];
            row.extend(pair_keys.iter().map(|k| cell(self.stat(&self.pairs, &[k, field]))));
            rows.push(row);
        }
        push_table(&mut out, "Correlation", &rows);

        let fields = [
            ("<beta>", "avg_betweenness"),
            ("<k>", "avg_weighted_degree"),
            ("<w>", "avg_link_weight"),
            ("nodes", "nodes"),
            ("edges", "edges"),
            ("components", "components"),
        ];
        let mut rows = vec![header("", &[], &method_keys)];
        for (name, field) in fields {
            let mut row = vec![name.to_string()];
            row.extend(method_keys.iter().map(|k| cell(self.stat(&self.methods, &[k, field]))));
            rows.push(row);
        }
        push_table(&mut out, "Effectiveness", &rows);
        out
    }
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().map(|m| m.keys().cloned().collect()).unwrap_or_default()
}

fn header(first: &str, a: &[String], b: &[String]) -> Vec<String> {
    let mut row = vec![first.to_string()];
    row.extend(a.iter().cloned());
    row.extend(b.iter().cloned());
    row
}

fn push_table(out: &mut String, title: &str, rows: &[Vec<String>]) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let _ = writeln!(out, "\n{title}");
    for row in rows {
        let mut line = String::new();
        for (c, text) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{text:<w$}", w = widths[c]);
            } else {
                let _ = write!(line, "  {text:>w$}", w = widths[c]);
            }
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
}

/// Builds the report from per-run metrics already in run order.
pub fn build_report(net: &Network, config: &RunConfig, per_run: &[RunMetrics], failures: Vec<RunFailure>) -> Result<ComparisonReport> {
    if per_run.is_empty() {
        return Err(Error::AllRunsFailed(config.runs));
    }
    let trees: Vec<Value> = per_run.iter().map(serde_json::to_value).collect::<std::result::Result<_, _>>()?;
    let section = |name: &str| {
        let parts: Vec<&Value> = trees.iter().filter_map(|t| t.get(name)).collect();
        aggregate(&parts)
    };
    Ok(ComparisonReport {
        network: net.name.clone(),
        n: net.graph.node_count(),
        e: net.graph.edge_count(),
        runs: config.runs,
        completed: per_run.len(),
        seeds: per_run.iter().map(|r| r.seed).collect(),
        failures,
        methods: section("methods"),
        pairs: section("pairs"),
    })
}

/// Runs every seed, measures every backbone and pair, and returns the
/// aggregate report together with the per-run metrics.
pub fn compare(config: &RunConfig) -> Result<(ComparisonReport, Vec<RunMetrics>)> {
    config.validate()?;
    let net = Network::load(config)?;
    compare_network(&net, config)
}

pub fn compare_network(net: &Network, config: &RunConfig) -> Result<(ComparisonReport, Vec<RunMetrics>)> {
    let mut per_run = Vec::new();
    let mut failures = Vec::new();
    for result in run_all(net, config) {
        match result.and_then(|run| {
            run_metrics(net, &run).map_err(|e| RunFailure {
                run: run.run,
                seed: run.seed,
                error: e.to_string(),
            })
        }) {
            Ok(m) => per_run.push(m),
            Err(f) => failures.push(f),
        }
    }
    let report = build_report(net, config, &per_run, failures)?;
    Ok((report, per_run))
}

/// Writes `<out>/report.json`, `<out>/report.txt` and `<out>/runs/run<i>.json`.
pub fn cmd_compare(config: &RunConfig) -> Result<ComparisonReport> {
    let (report, per_run) = compare(config)?;
    let runs_dir = config.out.join("runs");
    fs::create_dir_all(&runs_dir)?;
    for m in &per_run {
        write_json(&runs_dir.join(format!("run{}.json", m.run)), m)?;
    }
    fs::write(config.out.join("report.json"), report.to_json()?)?;
    fs::write(config.out.join("report.txt"), report.to_table())?;
    Ok(report)
}

const PALETTE: [&str; 10] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#bc80bd", "#ccebc5",
];
const OVERLAP_COLOR: &str = "gray";
const MISSING_COLOR: &str = "white";

#[derive(Clone, Debug, PartialEq)]
pub struct DotExport {
    pub text: String,
    /// Backbone nodes absent from the cover.
    pub missing: usize,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of a backbone: fill color by community, gray for
/// overlapping nodes, node width proportional to weighted degree and edge
/// pen width proportional to weight.
pub fn to_dot(g: &WeightedGraph, cover: &CoverFile) -> DotExport {
    let order: BTreeMap<&str, usize> = cover
        .ordered_communities()
        .into_iter()
        .enumerate()
        .map(|(i, (k, _))| (k, i))
        .collect();
    let by_label = cover.memberships_by_label();
    let strengths = g.strengths();
    let max_strength = strengths.iter().copied().fold(0.0, f64::max);
    let max_weight = g.edges().iter().map(|e| e.weight).fold(0.0, f64::max);

    let mut missing = 0;
    let mut text = String::from("graph backbone {\n  node [shape=circle, style=filled, fixedsize=true, label=\"\"];\n");
    for v in g.nodes() {
        let label = g.label(v);
        let color = match by_label.get(label).map(Vec::as_slice) {
            None | Some([]) => {
                missing += 1;
                MISSING_COLOR
            }
            Some([single]) => PALETTE[order[single] % PALETTE.len()],
            Some(_) => OVERLAP_COLOR,
        };
        let width = if max_strength > 0.0 {
            (strengths[v.0] / max_strength).max(0.05)
        } else {
            0.5
        };
        let _ = writeln!(
            text,
            "  {} [xlabel={}, fillcolor=\"{color}\", width={width:.4}];",
            quote(label),
            quote(label)
        );
    }
    for e in g.edges() {
        let _ = writeln!(
            text,
            "  {} -- {} [penwidth={:.4}];",
            quote(g.label(e.src)),
            quote(g.label(e.dst)),
            5.0 * e.weight / max_weight
        );
    }
    text.push_str("}\n");
    DotExport { text, missing }
}

pub fn cmd_export_dot(backbone: &Path, cover: &Path) -> Result<DotExport> {
    let (g, _) = read_edge_list(backbone, 1.0)?;
    let cover = CoverFile::read(cover)?;
    let export = to_dot(&g, &cover);
    if export.missing > 0 {
        log::warn!("{} backbone nodes missing from the cover", export.missing);
    }
    Ok(export)
}
