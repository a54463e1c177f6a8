use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use hrgen_core::hypergraph::to_dot;
use hrgen_core::oracle::{census_with_cap, check_n_ambiguity_with_cap, default_cap};
use hrgen_core::{
    is_cnf, to_cnf, validate_grammar, CountTables, Grammar, Hypergraph, RandomSource, SampleReport, Sampler,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Failure;
use crate::{Format, DEFAULT_SEED};

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::input(format!("cannot write stdout: {e}")))
        }
    }
}

/// Parses and validates; returns the raw bytes too, for cache keys.
fn load_grammar(path: &Path) -> Result<(Vec<u8>, Grammar), Failure> {
    let bytes = read_bytes(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| Failure::input(format!("{} is not UTF-8", path.display())))?;
    let g = Grammar::from_json_str(text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let violations = validate_grammar(&g);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(Failure::input(format!("{} is not a valid grammar:\n{}", path.display(), list.join("\n"))));
    }
    Ok((bytes, g))
}

/// The grammar itself if in normal form, otherwise its normalization.
fn normal_form(g: Grammar) -> Result<Grammar, Failure> {
    if is_cnf(&g).is_empty() {
        return Ok(g);
    }
    eprintln!("note: grammar is not in normal form; normalizing before use");
    let out = to_cnf(&g)?;
    if !is_cnf(&out.grammar).is_empty() {
        return Err(Failure::input(format!("cannot normalize: {}", out.diagnostics.join("; "))));
    }
    Ok(out.grammar)
}

fn start_symbol(g: &Grammar, start: Option<&str>) -> Result<String, Failure> {
    let s = start.unwrap_or(g.start.as_str());
    if !g.is_nonterminal(s) {
        return Err(Failure::input(format!("`{s}` is not a nonterminal of the (normalized) grammar")));
    }
    Ok(s.to_string())
}

fn parse_seed(seed: Option<&str>) -> Result<u64, Failure> {
    match seed {
        None => Ok(DEFAULT_SEED),
        Some("random") => {
            let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
            let seed = nanos as u64 ^ (nanos >> 64) as u64;
            eprintln!("seed: {seed}");
            Ok(seed)
        }
        Some(s) => s
            .parse()
            .map_err(|_| Failure::input(format!("seed must be an unsigned integer or `random`, got `{s}`"))),
    }
}

pub fn normalize(grammar: &Path, output: Option<&Path>, trace: bool) -> Result<(), Failure> {
    let (_, g) = load_grammar(grammar)?;
    let out = to_cnf(&g)?;
    for d in &out.diagnostics {
        eprintln!("diagnostic: {d}");
    }
    if !is_cnf(&out.grammar).is_empty() {
        return Err(Failure::input("grammar cannot be brought into normal form"));
    }
    if out.already_cnf {
        eprintln!("already CNF");
    }
    if trace {
        for line in &out.trace {
            eprintln!("{line}");
        }
    }
    write_output(output, &out.grammar.to_json_string())
}

pub fn count(grammar: &Path, output: Option<&Path>, size: usize) -> Result<(), Failure> {
    let (_, g) = load_grammar(grammar)?;
    let g = normal_form(g)?;
    let tables = CountTables::build(&g, size)?;
    write_output(output, &tables.to_json_string())
}

fn tables_for(g: &Grammar, grammar_bytes: &[u8], n_max: usize, cache: Option<&Path>) -> Result<CountTables, Failure> {
    let Some(path) = cache else {
        return Ok(CountTables::build(g, n_max)?);
    };
    let key = hex::encode(Sha256::digest(grammar_bytes));
    if let Ok(text) = fs::read_to_string(path) {
        let cached = serde_json::from_str::<Value>(&text).ok().and_then(|v| {
            let fresh = v["grammar_sha256"] == key.as_str() && v["n_max"].as_u64()? >= n_max as u64;
            fresh.then(|| CountTables::from_json_str(&v["tables"].to_string()).ok()).flatten()
        });
        if let Some(t) = cached {
            return Ok(t);
        }
    }
    let tables = CountTables::build(g, n_max)?;
    let tables_value: Value = serde_json::from_str(&tables.to_json_string()).expect("tables serialize to JSON");
    let doc = json!({ "grammar_sha256": key, "n_max": n_max, "tables": tables_value });
    let text = serde_json::to_string(&doc).expect("cache document serializes") + "\n";
    fs::write(path, text).map_err(|e| Failure::input(format!("cannot write cache {}: {e}", path.display())))?;
    Ok(tables)
}

pub struct SampleRun<'a> {
    pub grammar: &'a Path,
    pub output: Option<&'a Path>,
    pub start: Option<&'a str>,
    pub size: usize,
    pub count: usize,
    pub seed: Option<&'a str>,
    pub format: Format,
    pub with_tree: bool,
    pub cache: Option<&'a Path>,
}

pub fn sample(run: SampleRun) -> Result<(), Failure> {
    let seed = parse_seed(run.seed)?;
    let (bytes, g) = load_grammar(run.grammar)?;
    let g = normal_form(g)?;
    let start = start_symbol(&g, run.start)?;
    let arity = g.arity(&start).unwrap_or(0);
    let tables = tables_for(&g, &bytes, run.size.saturating_sub(arity), run.cache)?;
    let sampler = Sampler::new(&g, &tables)?;
    let reports: Vec<SampleReport> = (0..run.count as u64)
        .into_par_iter()
        .map(|i| sampler.gen(&start, run.size, &mut RandomSource::substream(seed, i)))
        .collect::<Result<_, _>>()?;
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        match run.format {
            Format::Json if run.with_tree => out += &serde_json::to_string(r).expect("report serializes"),
            Format::Json => out += &serde_json::to_string(&r.graph).expect("graph serializes"),
            Format::Dot => out += &to_dot(&r.graph, &format!("sample{i}")),
        }
        if run.format == Format::Json {
            out.push('\n');
        }
    }
    write_output(run.output, &out)
}

pub fn enumerate(
    grammar: &Path,
    output: Option<&Path>,
    start: Option<&str>,
    size: usize,
    cap: Option<usize>,
) -> Result<(), Failure> {
    let (_, g) = load_grammar(grammar)?;
    let g = normal_form(g)?;
    let start = start_symbol(&g, start)?;
    let census = census_with_cap(&g, &start, size, cap.unwrap_or_else(default_cap))?;
    write_output(output, &census.to_json_string())
}

pub fn check_ambiguity(grammar: &Path, output: Option<&Path>, size: usize, cap: Option<usize>) -> Result<(), Failure> {
    let (_, g) = load_grammar(grammar)?;
    let g = normal_form(g)?;
    let verdict = check_n_ambiguity_with_cap(&g, size, cap.unwrap_or_else(default_cap))?;
    write_output(output, &(serde_json::to_string_pretty(&verdict).expect("verdict serializes") + "\n"))
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

pub fn bench(
    grammar: &Path,
    output: Option<&Path>,
    start: Option<&str>,
    sizes: &[usize],
    count: usize,
    seed: Option<&str>,
) -> Result<(), Failure> {
    if count == 0 || sizes.is_empty() {
        return Err(Failure::input("bench needs at least one size and a positive count"));
    }
    let seed = parse_seed(seed)?;
    let (_, g) = load_grammar(grammar)?;
    let g = normal_form(g)?;
    let start = start_symbol(&g, start)?;
    let arity = g.arity(&start).unwrap_or(0);
    let largest = *sizes.iter().max().unwrap();
    let clock = Instant::now();
    let tables = CountTables::build(&g, largest.saturating_sub(arity))?;
    let pre = clock.elapsed();
    let sampler = Sampler::new(&g, &tables)?;
    let mut out = format!(
        "# tables to offset {} built in {:.3} ms (not included below)\n# n\tmedian_ms\tratio\n",
        tables.n_max(),
        pre.as_secs_f64() * 1e3
    );
    let mut previous: Option<Duration> = None;
    for &n in sizes {
        let mut times = Vec::with_capacity(count);
        for i in 0..count as u64 {
            let mut rng = RandomSource::substream(seed, i);
            let clock = Instant::now();
            let r = sampler.gen(&start, n, &mut rng)?;
            times.push(clock.elapsed());
            drop(r);
        }
        let m = median(times);
        let ratio = previous.map_or("-".to_string(), |p| format!("{:.2}", m.as_secs_f64() / p.as_secs_f64()));
        out += &format!("{n}\t{:.4}\t{ratio}\n", m.as_secs_f64() * 1e3);
        previous = Some(m);
    }
    write_output(output, &out)
}

fn graph_of(v: Value) -> Result<Hypergraph, String> {
    let v = match v {
        Value::Object(mut m) if m.contains_key("graph") => m.remove("graph").unwrap(),
        v => v,
    };
    serde_json::from_value(v).map_err(|e| e.to_string())
}

pub fn render(input: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let bytes = read_bytes(input)?;
    let text = String::from_utf8(bytes).map_err(|_| Failure::input("input is not UTF-8"))?;
    let docs: Vec<Value> = match serde_json::from_str::<Value>(&text) {
        Ok(v) => vec![v],
        Err(_) => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Failure::input(format!("line {}: {e}", i + 1))))
            .collect::<Result<_, _>>()?,
    };
    let mut out = String::new();
    for (i, v) in docs.into_iter().enumerate() {
        let h = graph_of(v).map_err(|e| Failure::input(format!("graph {}: {e}", i + 1)))?;
        out += &to_dot(&h, &format!("g{i}"));
    }
    write_output(output, &out)
}
