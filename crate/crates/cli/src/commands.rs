use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use odd_ramsey::conflicts::{
    check_claims, hyper_pattern_catalogue, large_host_patterns, ClaimsConfig, ConflictEngine, PatternCatalogue,
};
use odd_ramsey::exact::{lower_bound_exhaust, r_odd_exact, ExhaustMode, OddRamseyValue, Pruning, DEFAULT_NODE_BUDGET};
use odd_ramsey::matcher::{run_matcher, MatchResult, MatcherConfig};
use odd_ramsey::odd::{find_bad_target, find_bad_target_partial};
use odd_ramsey::tiles::graph::h1_degree_formula;
use odd_ramsey::tiles::hyper::hyper_degree_formula;
use odd_ramsey::tiles::{degree_table, GraphTileConfig, HyperTileConfig, TileSystem, VertexKind};
use odd_ramsey::{BadCopy, Coloring, HostInstance};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Global, Kind, PruningArg};
use crate::error::{CliError, Result};

pub const DEFAULT_LOWER_BOUND_BUDGET: u64 = 100_000_000;

/// What a command produced, before it is wrapped in a report.
pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub csv: Option<String>,
    pub code: i32,
    pub system: Option<TileSystem>,
}

impl Outcome {
    fn new(result: Value, text: String, code: i32) -> Self {
        Outcome { result, text, csv: None, code, system: None }
    }
}

pub struct Context<'a> {
    pub global: &'a Global,
    pub seed: Option<u64>,
    pub threads: usize,
}

impl Context<'_> {
    fn seed(&self) -> u64 {
        self.seed.expect("randomized commands resolve a seed")
    }

    fn out_file(&self, name: &str) -> Result<Option<PathBuf>> {
        let Some(dir) = &self.global.out else { return Ok(None) };
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        Ok(Some(dir.join(name)))
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(CliError::io(path))
}

pub fn tile_system(g: &Global) -> Result<TileSystem> {
    let sys = match g.kind {
        Kind::Graph => {
            let mut c = GraphTileConfig::with_parameters(g.n, g.t, g.eps, g.delta)?;
            if g.n1.is_some() || g.n2.is_some() {
                let (n1, n2) = (g.n1.unwrap_or(c.palette.n1), g.n2.unwrap_or(c.palette.n2));
                c = c.with_palette(n1, n2);
            }
            if let Some(guard) = g.guard {
                c = c.with_guard(guard as u128);
            }
            TileSystem::Graph(c)
        }
        Kind::Hyper => {
            let mut c = HyperTileConfig::with_parameters(g.n, g.k, g.eps, g.delta)?;
            if g.n1.is_some() || g.n2.is_some() {
                let (n1, n2) = (g.n1.unwrap_or(c.palette.n1), g.n2.unwrap_or(c.palette.n2));
                c = c.with_palette(n1, n2);
            }
            if let Some(guard) = g.guard {
                c = c.with_guard(guard as u128);
            }
            TileSystem::Hyper(c)
        }
    };
    let p = sys.palette();
    if p.n1 == 0 || p.size() > 1 << 20 {
        return Err(CliError::Usage(format!("palette n1={} n2={} out of range", p.n1, p.n2)));
    }
    Ok(sys)
}

fn host(g: &Global) -> Result<HostInstance> {
    Ok(match g.kind {
        Kind::Graph => HostInstance::bipartite(g.n, g.t)?,
        Kind::Hyper => HostInstance::hypergraph(g.n, g.k)?,
    })
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<Outcome> {
    match cmd {
        Command::Verify { file } => verify(file),
        Command::Tiles { dump } => tiles(ctx, *dump),
        Command::Conditions => conditions(ctx),
        Command::Conflicts { samples, matchings, dump } => conflicts(ctx, *samples, *matchings, *dump),
        Command::Color { runs, restarts } => color(ctx, *runs, *restarts),
        Command::Exact { qmax, pruning } => exact(ctx, *qmax, *pruning),
        Command::Lowerbound { samples } => lowerbound(ctx, *samples),
    }
}

fn bad_copy_json(bad: &BadCopy) -> Value {
    json!({
        "copy": bad.copy.to_string(),
        "edges": bad.copy.edges,
        "profile": bad.profile.to_string(),
        "irreducible": bad.is_irreducible(),
    })
}

fn verify(file: &Path) -> Result<Outcome> {
    let text = fs::read_to_string(file).map_err(CliError::io(file))?;
    let coloring = Coloring::from_text(&text)?;
    let uncolored = coloring.as_slice().iter().filter(|c| c.is_none()).count();
    let bad = if uncolored == 0 { find_bad_target(&coloring)? } else { find_bad_target_partial(&coloring) };
    let clean = uncolored == 0 && bad.is_none();
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} with {} edges, {} colors used", file.display(), coloring.host, coloring.host.edge_count(), coloring.colors_used().len());
    if uncolored > 0 {
        let _ = writeln!(out, "incomplete: {uncolored} uncolored edges");
    }
    match &bad {
        Some(b) => {
            let _ = writeln!(out, "bad copy: {b}");
        }
        None if clean => {
            let _ = writeln!(out, "clean: every target copy has an odd color class");
        }
        None => {}
    }
    let result = json!({
        "file": file.display().to_string(),
        "host": coloring.host.to_string(),
        "edges": coloring.host.edge_count(),
        "uncolored": uncolored,
        "colors_used": coloring.colors_used().len(),
        "clean": clean,
        "witness": bad.as_ref().map(bad_copy_json),
    });
    Ok(Outcome::new(result, out, if clean { 0 } else { 1 }))
}

fn formula(sys: &TileSystem, kind: VertexKind) -> u128 {
    match sys {
        TileSystem::Graph(c) => h1_degree_formula(kind, c),
        TileSystem::Hyper(c) => hyper_degree_formula(kind, c),
    }
}

#[derive(Serialize)]
struct KindDegrees {
    kind: VertexKind,
    vertices: usize,
    min: u64,
    max: u64,
    formula: String,
    exact: bool,
}

fn tiles(ctx: &Context, dump: bool) -> Result<Outcome> {
    let sys = tile_system(ctx.global)?;
    let host = sys.host();
    let palette = sys.palette();
    let tiles = sys.enumerate_h1()?;
    let table = degree_table(&tiles);
    let mut by_kind: BTreeMap<VertexKind, (usize, u64, u64)> = BTreeMap::new();
    for (v, &deg) in &table {
        let e = by_kind.entry(v.kind(&host, &palette)).or_insert((0, u64::MAX, 0));
        e.0 += 1;
        e.1 = e.1.min(deg);
        e.2 = e.2.max(deg);
    }
    let degrees: Vec<KindDegrees> = by_kind
        .into_iter()
        .map(|(kind, (vertices, min, max))| {
            let f = formula(&sys, kind);
            KindDegrees { kind, vertices, min, max, formula: f.to_string(), exact: min as u128 == f && max as u128 == f }
        })
        .collect();
    let uniformity: Vec<usize> = {
        let mut u: Vec<usize> = tiles.iter().map(|t| t.uniformity()).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    let h2 = sys.h2_stats();

    let mut dump_file = None;
    let mut out = String::new();
    if dump {
        let lines: String = tiles.iter().map(|t| sys.dump_tile(t) + "\n").collect();
        match ctx.out_file("tiles.txt")? {
            Some(path) => {
                write(&path, &lines)?;
                dump_file = Some(path.display().to_string());
            }
            None => out.push_str(&lines),
        }
    }
    let _ = writeln!(out, "{}: {} H1 tiles, {} H2 tiles, uniformity {:?}", sys.describe(), tiles.len(), h2.tiles, uniformity);
    for d in &degrees {
        let _ = writeln!(
            out,
            "  {:<15} {:>6} vertices  degree {}..{}  formula {}  [{}]",
            format!("{:?}", d.kind),
            d.vertices,
            d.min,
            d.max,
            d.formula,
            if d.exact { "exact" } else { "mismatch" }
        );
    }
    let result = json!({
        "system": sys.describe(),
        "host": host.to_string(),
        "h1_tiles": tiles.len(),
        "h2_tiles": h2.tiles,
        "uniformity": uniformity,
        "degrees": degrees,
        "h2": h2,
        "dump_file": dump_file,
    });
    let code = if degrees.iter().all(|d| d.exact) { 0 } else { 1 };
    Ok(Outcome { system: Some(sys), ..Outcome::new(result, out, code) })
}

fn conditions(ctx: &Context) -> Result<Outcome> {
    let sys = tile_system(ctx.global)?;
    let report = sys.condition_report()?;
    let text = report.to_string();
    Ok(Outcome { system: Some(sys), ..Outcome::new(serde_json::to_value(&report)?, text, 0) })
}

fn patterns_json(cat: &PatternCatalogue) -> Value {
    let classes: Vec<Value> = cat
        .bad
        .iter()
        .map(|class| {
            let used = cat.realized.get(class);
            json!({
                "pattern": class.pattern,
                "palettes": class.palettes,
                "realized": used.is_some(),
                "witnesses": used.map_or(0, |u| u.witnesses),
                "signatures": used.map(|u| u.signatures.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>()).unwrap_or_default(),
            })
        })
        .collect();
    Value::Array(classes)
}

fn conflicts(ctx: &Context, samples: usize, matchings: usize, dump: bool) -> Result<Outcome> {
    let sys = tile_system(ctx.global)?;
    let engine = match ctx.global.guard {
        Some(limit) => ConflictEngine::with_limit(&sys, limit as u128)?,
        None => ConflictEngine::new(&sys)?,
    };
    let catalogue = engine.catalogue();
    let codegrees = engine.codegree_report(&catalogue);
    let claims = check_claims(&engine, ClaimsConfig { random_conflicts: samples, random_matchings: matchings, seed: ctx.seed() });

    let mut out = String::new();
    let _ = writeln!(out, "{}: {} tiles ({} H1), {} conflicts", sys.describe(), engine.tiles().len(), engine.h1_count(), catalogue.conflicts.len());
    let mut sizes = Vec::new();
    for ((system, j1, j2), count) in catalogue.sizes() {
        let _ = writeln!(out, "  {system} ({j1},{j2}): {count} minimal");
        sizes.push(json!({ "system": system.to_string(), "j1": j1, "j2": j2, "count": count }));
    }
    let _ = write!(out, "{codegrees}");
    for c in &claims.claims {
        let _ = writeln!(out, "claim {:<40} {:>8} checked  [{}]", c.name, c.checked, if c.pass { "pass" } else { "FAIL" });
        if let Some(ce) = &c.counterexample {
            let _ = writeln!(out, "  counterexample: {ce}");
        }
    }

    let mut patterns = Value::Null;
    if let TileSystem::Hyper(c) = &sys {
        let small = hyper_pattern_catalogue(&engine)?;
        let large = if c.k <= 3 { Some(large_host_patterns(c.k)?) } else { None };
        let agree = large.as_ref().map(|l| l.realized_classes() == small.realized_classes());
        let _ = writeln!(out, "bad grid patterns realized here: {}", small.realized_classes().len());
        if let Some(l) = &large {
            let _ = writeln!(out, "realized on large hosts: {} (agree: {})", l.realized_classes().len(), agree.unwrap_or(false));
        }
        patterns = json!({
            "instance": patterns_json(&small),
            "large_host": large.as_ref().map(patterns_json),
            "agree": agree,
        });
    }

    let mut dump_file = None;
    if dump {
        let mut lines = String::new();
        for c in &catalogue.conflicts {
            lines.push_str(&serde_json::to_string(&engine.dump(c))?);
            lines.push('\n');
        }
        match ctx.out_file("conflicts.jsonl")? {
            Some(path) => {
                write(&path, &lines)?;
                dump_file = Some(path.display().to_string());
            }
            None => out.insert_str(0, &lines),
        }
    }

    let result = json!({
        "system": sys.describe(),
        "tiles": engine.tiles().len(),
        "h1_tiles": engine.h1_count(),
        "conflicts": catalogue.conflicts.len(),
        "minimal": catalogue.conflicts.iter().filter(|c| c.minimal).count(),
        "sizes": sizes,
        "codegrees": codegrees,
        "claims": claims,
        "patterns": patterns,
        "dump_file": dump_file,
    });
    let code = if claims.all_pass() { 0 } else { 1 };
    Ok(Outcome { system: Some(sys), ..Outcome::new(result, out, code) })
}

fn run_json(r: &MatchResult, file: Option<&Path>) -> Result<Value> {
    let mut v = serde_json::to_value(r)?;
    if let Value::Object(map) = &mut v {
        map.remove("coloring");
        map.insert("coloring_file".into(), json!(file.map(|f| f.display().to_string())));
    }
    Ok(v)
}

fn color(ctx: &Context, runs: u64, restarts: usize) -> Result<Outcome> {
    let sys = tile_system(ctx.global)?;
    if runs == 0 {
        return Err(CliError::Usage("--runs must be positive".into()));
    }
    let base = ctx.seed();
    let seeds: Vec<u64> = (0..runs).map(|i| base.wrapping_add(i)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<odd_ramsey::Result<MatchResult>> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_matcher(&sys, MatcherConfig { seed, restarts, ..MatcherConfig::default() }))
            .collect()
    });

    let mut out = String::new();
    let mut rows = Vec::new();
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record([
        "seed", "success", "attempt", "h1_tiles", "h2_tiles", "fallback_edges", "uncolored", "colors_used", "palette_size",
        "residue_fraction", "wall_time_ms", "coloring_file",
    ])?;
    let mut successes = 0;
    for r in results {
        let r = r?;
        let file = match ctx.out_file(&format!("coloring-{}.txt", r.seed))? {
            Some(path) => {
                write(&path, &r.coloring.to_text())?;
                Some(path)
            }
            None => None,
        };
        successes += r.success as usize;
        let _ = writeln!(
            out,
            "seed {:<20} {}  H1 {:>5}  H2 {:>5}  direct {:>3}  colors {}/{}  residue {:.3}  {} ms",
            r.seed,
            if r.success { "success" } else { "failed " },
            r.h1_tiles,
            r.h2_tiles,
            r.fallback_edges,
            r.colors_used,
            r.palette_size,
            r.residue.fraction,
            r.wall_time_ms
        );
        let file_s = file.as_ref().map(|f| f.display().to_string()).unwrap_or_default();
        csv.write_record([
            r.seed.to_string(),
            r.success.to_string(),
            r.attempt.to_string(),
            r.h1_tiles.to_string(),
            r.h2_tiles.to_string(),
            r.fallback_edges.to_string(),
            r.uncolored.to_string(),
            r.colors_used.to_string(),
            r.palette_size.to_string(),
            format!("{:.6}", r.residue.fraction),
            r.wall_time_ms.to_string(),
            file_s,
        ])?;
        rows.push(run_json(&r, file.as_deref())?);
    }
    let _ = writeln!(out, "{} of {} runs succeeded on {}", successes, runs, sys.describe());
    let csv = String::from_utf8(csv.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf-8");
    let result = json!({
        "system": sys.describe(),
        "palette_size": sys.palette().size(),
        "runs": rows,
        "successes": successes,
        "total": runs,
    });
    Ok(Outcome { csv: Some(csv), system: Some(sys), ..Outcome::new(result, out, 0) })
}

fn exact(ctx: &Context, qmax: u32, pruning: Option<PruningArg>) -> Result<Outcome> {
    let host = host(ctx.global)?;
    let pruning = match (pruning, ctx.global.kind) {
        (Some(PruningArg::None), _) => Pruning::None,
        (Some(PruningArg::Canonical), _) | (None, Kind::Hyper) => Pruning::ColorCanonical,
        (Some(PruningArg::Full), _) | (None, Kind::Graph) => Pruning::Full,
    };
    if qmax == 0 {
        return Err(CliError::Usage("--qmax must be positive".into()));
    }
    let report = r_odd_exact(host, qmax, pruning, ctx.global.budget.unwrap_or(DEFAULT_NODE_BUDGET))?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["host", "target", "q", "result", "nodes", "time_ms", "certificate_file"])?;
    let mut rows = Vec::new();
    let mut out = String::new();
    for row in &report.rows {
        let mut file = None;
        if let Some(cert) = &row.certificate {
            if let Some(path) = ctx.out_file(&format!("certificate-q{}.txt", row.q))? {
                write(&path, cert)?;
                file = Some(path.display().to_string());
            }
        }
        csv.write_record([
            row.host.clone(),
            row.target.clone(),
            row.q.to_string(),
            row.result.clone(),
            row.nodes.to_string(),
            row.time_ms.to_string(),
            file.clone().unwrap_or_default(),
        ])?;
        let _ = writeln!(out, "{} {} q={} {} ({} nodes, {} ms)", row.host, row.target, row.q, row.result, row.nodes, row.time_ms);
        rows.push(json!({
            "host": row.host,
            "target": row.target,
            "q": row.q,
            "result": row.result,
            "nodes": row.nodes,
            "time_ms": row.time_ms,
            "certificate_file": file,
        }));
    }
    let _ = writeln!(out, "r_odd = {}", report.value);
    let exact = match report.value {
        OddRamseyValue::Exact(v) => Some(v),
        _ => None,
    };
    let code = if matches!(report.value, OddRamseyValue::Unknown { .. }) { 3 } else { 0 };
    let result = json!({
        "host": host.to_string(),
        "target": odd_ramsey::exact::target_label(&host),
        "pruning": format!("{pruning:?}"),
        "value": report.value.to_string(),
        "exact": exact,
        "rows": rows,
        "certificate": report.certificate.as_ref().map(|c| c.to_text()),
    });
    let csv = String::from_utf8(csv.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf-8");
    Ok(Outcome { csv: Some(csv), ..Outcome::new(result, out, code) })
}

fn lowerbound(ctx: &Context, samples: Option<u64>) -> Result<Outcome> {
    let g = ctx.global;
    if g.kind != Kind::Graph {
        return Err(CliError::Usage("lowerbound needs --kind graph".into()));
    }
    let mode = match samples {
        Some(samples) => ExhaustMode::Sampled { samples, seed: ctx.seed() },
        None => ExhaustMode::Exhaustive,
    };
    let report = lower_bound_exhaust(g.n, g.t, mode, g.budget.unwrap_or(DEFAULT_LOWER_BOUND_BUDGET))?;
    let mut out = format!(
        "K_{{{n},{n}}} with {} colors: {} colorings checked, every one has a bad K_{{2,{}}}: {}\n",
        report.colors,
        report.checked,
        g.t,
        if report.pass { "yes" } else { "NO" },
        n = g.n
    );
    if let Some(c) = &report.counterexample {
        out.push_str(&c.to_text());
    }
    let result = json!({
        "n": report.n,
        "t": report.t,
        "colors": report.colors,
        "mode": match mode { ExhaustMode::Exhaustive => "exhaustive", ExhaustMode::Sampled { .. } => "sampled" },
        "checked": report.checked,
        "pass": report.pass,
        "counterexample": report.counterexample.as_ref().map(|c| c.to_text()),
    });
    Ok(Outcome::new(result, out, if report.pass { 0 } else { 1 }))
}
