use std::fs;
use std::path::Path;

use cutbench_core::qaoa::FixedAngleSet;
use cutbench_core::{Error, RegularGraph, Result};

pub const EVALUATE: &[&str] = &[
    "instance",
    "n",
    "m",
    "p",
    "expectation",
    "cut_fraction",
    "classes",
    "dominant_share",
    "oracle_expectation",
    "oracle_abs_error",
];
pub const PROFILE: &[&str] = &["instance", "n", "m", "seed", "t_seconds", "cut"];
pub const ZERO_TIME: &[&str] = &[
    "instance",
    "n",
    "m",
    "t0_seconds",
    "zero_time_quality",
    "best_cut",
];
pub const THRESHOLD: &[&str] = &["n", "p", "t_seconds", "delta", "k", "nu_hz", "region"];
pub const BOUNDS: &[&str] = &[
    "n",
    "d",
    "p",
    "m_tree_lower",
    "cut_lower",
    "cut_upper",
    "degenerate",
];
pub const TABLE: &[&str] = &["key", "p", "f", "width"];
pub const TRIALS: &[&str] = &["trial", "k", "best_cut", "best_fraction"];

/// In-memory CSV assembly. Writes cannot fail short of a formatter bug,
/// so the builder panics instead of threading io errors through callers.
pub struct CsvDoc {
    w: csv::Writer<Vec<u8>>,
}

impl CsvDoc {
    pub fn new(header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory csv");
        CsvDoc { w }
    }

    pub fn row<I>(&mut self, fields: I)
    where
        I: IntoIterator,
        I::Item: AsRef<[u8]>,
    {
        self.w.write_record(fields).expect("in-memory csv");
    }

    pub fn finish(self) -> String {
        let bytes = self.w.into_inner().expect("in-memory csv");
        String::from_utf8(bytes).expect("csv output is utf-8")
    }
}

/// Read a CSV whose header must match `header` exactly; returns the data
/// rows as plain strings for the caller to type-check.
pub fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let text = fs::read_to_string(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let got = reader
        .headers()
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::Parse(format!(
            "{}: header {:?} does not match {:?}",
            path.display(),
            got,
            header
        )));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        rows.push(record.iter().map(String::from).collect());
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Graph,
    Angles,
    Manifest,
    Bitstrings,
    Evaluate,
    Profile,
    ZeroTime,
    Threshold,
    Bounds,
    Table,
    Trials,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Graph => "graph edge list",
            Kind::Angles => "angle set",
            Kind::Manifest => "run manifest",
            Kind::Bitstrings => "bitstring dump",
            Kind::Evaluate => "evaluation table",
            Kind::Profile => "solver profile",
            Kind::ZeroTime => "zero-time summary",
            Kind::Threshold => "threshold sweep",
            Kind::Bounds => "ensemble bounds",
            Kind::Table => "class expectations",
            Kind::Trials => "sampling trials",
        }
    }
}

fn bad(path: &Path, what: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {what}", path.display()))
}

/// Decide what a file claims to be from its extension and first line.
fn infer(path: &Path, text: &str) -> Result<Kind> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "json" => {
            if text.contains("\"command\"") {
                Ok(Kind::Manifest)
            } else {
                Ok(Kind::Angles)
            }
        }
        "csv" => {
            let first = text.lines().next().unwrap_or("");
            let header: Vec<&str> = first.split(',').collect();
            for (h, kind) in [
                (EVALUATE, Kind::Evaluate),
                (PROFILE, Kind::Profile),
                (ZERO_TIME, Kind::ZeroTime),
                (THRESHOLD, Kind::Threshold),
                (BOUNDS, Kind::Bounds),
                (TABLE, Kind::Table),
                (TRIALS, Kind::Trials),
            ] {
                if header == h {
                    return Ok(kind);
                }
            }
            Err(bad(path, format!("unrecognised csv header {first:?}")))
        }
        _ => {
            let first = text.lines().next().unwrap_or("");
            if first.split_whitespace().count() == 2 {
                Ok(Kind::Graph)
            } else if !first.is_empty() && first.chars().all(|c| c == '0' || c == '1') {
                Ok(Kind::Bitstrings)
            } else {
                Err(bad(path, "cannot infer the file kind; pass --kind"))
            }
        }
    }
}

/// Validate one file; returns its kind and how many records it holds.
pub fn validate(path: &Path, forced: Option<Kind>) -> Result<(Kind, usize)> {
    let text = fs::read_to_string(path)?;
    let kind = match forced {
        Some(k) => k,
        None => infer(path, &text)?,
    };
    let records = match kind {
        Kind::Graph => RegularGraph::parse_edge_list(&text)?.num_edges(),
        Kind::Angles => FixedAngleSet::from_json(&text)?.p as usize,
        Kind::Manifest => check_manifest(path, &text)?,
        Kind::Bitstrings => check_bitstrings(path, &text)?,
        Kind::Evaluate => check_evaluate(path)?,
        Kind::Profile => check_profile(path)?,
        Kind::ZeroTime => check_zero_time(path)?,
        Kind::Threshold => check_threshold(path)?,
        Kind::Bounds => check_bounds(path)?,
        Kind::Table => check_table(path)?,
        Kind::Trials => check_trials(path)?,
    };
    Ok((kind, records))
}

fn check_manifest(path: &Path, text: &str) -> Result<usize> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| bad(path, format!("not json: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| bad(path, "manifest must be an object"))?;
    for key in ["command", "version"] {
        if !obj.get(key).is_some_and(|v| v.is_string()) {
            return Err(bad(path, format!("missing string field {key:?}")));
        }
    }
    if !obj.get("seed").is_some_and(|v| v.is_u64()) {
        return Err(bad(path, "missing integer field \"seed\""));
    }
    if !obj.get("parameters").is_some_and(|v| v.is_object()) {
        return Err(bad(path, "missing object field \"parameters\""));
    }
    let outputs = obj
        .get("outputs")
        .and_then(|v| v.as_array())
        .ok_or_else(|| bad(path, "missing array field \"outputs\""))?;
    if !outputs.iter().all(|v| v.is_string()) {
        return Err(bad(path, "outputs must all be strings"));
    }
    Ok(outputs.len())
}

fn check_bitstrings(path: &Path, text: &str) -> Result<usize> {
    let mut width = None;
    let mut count = 0usize;
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() || !line.chars().all(|c| c == '0' || c == '1') {
            return Err(bad(path, format!("line {} is not a 0/1 string", i + 1)));
        }
        if *width.get_or_insert(line.len()) != line.len() {
            return Err(bad(path, format!("line {} changes the width", i + 1)));
        }
        count += 1;
    }
    if count == 0 {
        return Err(bad(path, "no bitstrings"));
    }
    Ok(count)
}

fn req_u64(path: &Path, field: &str, s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| bad(path, format!("{field} must be an unsigned integer, got {s:?}")))
}

fn req_finite(path: &Path, field: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| bad(path, format!("{field} must be a number, got {s:?}")))?;
    if !v.is_finite() {
        return Err(bad(path, format!("{field} must be finite, got {s:?}")));
    }
    Ok(v)
}

fn req_fraction(path: &Path, field: &str, s: &str) -> Result<f64> {
    let v = req_finite(path, field, s)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(bad(path, format!("{field} must lie in [0, 1], got {s:?}")));
    }
    Ok(v)
}

fn check_evaluate(path: &Path) -> Result<usize> {
    let rows = read_rows(path, EVALUATE)?;
    for row in &rows {
        req_u64(path, "n", &row[1])?;
        req_u64(path, "m", &row[2])?;
        req_u64(path, "p", &row[3])?;
        req_finite(path, "expectation", &row[4])?;
        req_fraction(path, "cut_fraction", &row[5])?;
        if req_u64(path, "classes", &row[6])? == 0 {
            return Err(bad(path, "classes must be positive"));
        }
        req_fraction(path, "dominant_share", &row[7])?;
        // Oracle columns are either both present or both empty.
        match (row[8].is_empty(), row[9].is_empty()) {
            (true, true) => {}
            (false, false) => {
                req_finite(path, "oracle_expectation", &row[8])?;
                req_finite(path, "oracle_abs_error", &row[9])?;
            }
            _ => return Err(bad(path, "oracle columns must be filled together")),
        }
    }
    Ok(rows.len())
}

fn check_profile(path: &Path) -> Result<usize> {
    let rows = read_rows(path, PROFILE)?;
    // (instance, last seconds, last cut) of the group being scanned.
    let mut current: Option<(String, f64, u64)> = None;
    for row in &rows {
        let m = req_u64(path, "m", &row[2])?;
        let t = req_finite(path, "t_seconds", &row[4])?;
        let cut = req_u64(path, "cut", &row[5])?;
        if t < 0.0 {
            return Err(bad(path, format!("t_seconds must be nonnegative, got {t}")));
        }
        if cut > m {
            return Err(bad(path, format!("cut {cut} exceeds the edge count {m}")));
        }
        match &mut current {
            Some((name, last_t, last_cut)) if *name == row[0] => {
                if t <= *last_t {
                    return Err(bad(path, format!("{name}: timestamps must increase")));
                }
                if cut < *last_cut {
                    return Err(bad(path, format!("{name}: cuts must not regress")));
                }
                (*last_t, *last_cut) = (t, cut);
            }
            _ => current = Some((row[0].clone(), t, cut)),
        }
    }
    Ok(rows.len())
}

fn check_zero_time(path: &Path) -> Result<usize> {
    let rows = read_rows(path, ZERO_TIME)?;
    for row in &rows {
        let m = req_u64(path, "m", &row[2])?;
        let empties = [&row[3], &row[4], &row[5]]
            .iter()
            .filter(|s| s.is_empty())
            .count();
        match empties {
            3 => continue,
            0 => {
                let t0 = req_finite(path, "t0_seconds", &row[3])?;
                if t0 < 0.0 {
                    return Err(bad(path, "t0_seconds must be nonnegative"));
                }
                req_fraction(path, "zero_time_quality", &row[4])?;
                if req_u64(path, "best_cut", &row[5])? > m {
                    return Err(bad(path, "best_cut exceeds the edge count"));
                }
            }
            _ => return Err(bad(path, "summary columns must be filled together")),
        }
    }
    Ok(rows.len())
}

fn check_threshold(path: &Path) -> Result<usize> {
    let rows = read_rows(path, THRESHOLD)?;
    for row in &rows {
        req_u64(path, "n", &row[0])?;
        req_u64(path, "p", &row[1])?;
        let t = req_finite(path, "t_seconds", &row[2])?;
        if t <= 0.0 {
            return Err(bad(path, "t_seconds must be positive"));
        }
        req_finite(path, "delta", &row[3])?;
        if req_u64(path, "k", &row[4])? == 0 {
            return Err(bad(path, "k must be at least 1"));
        }
        let nu = req_finite(path, "nu_hz", &row[5])?;
        if nu <= 0.0 {
            return Err(bad(path, "nu_hz must be positive"));
        }
        let regions = ["better-faster", "better-slower", "worse-faster", "worse-slower"];
        if !regions.contains(&row[6].as_str()) {
            return Err(bad(path, format!("unknown region {:?}", row[6])));
        }
    }
    Ok(rows.len())
}

fn check_bounds(path: &Path) -> Result<usize> {
    let rows = read_rows(path, BOUNDS)?;
    for row in &rows {
        req_u64(path, "n", &row[0])?;
        req_u64(path, "d", &row[1])?;
        req_u64(path, "p", &row[2])?;
        let tree = req_finite(path, "m_tree_lower", &row[3])?;
        if tree < 0.0 {
            return Err(bad(path, "m_tree_lower must be nonnegative"));
        }
        let lo = req_fraction(path, "cut_lower", &row[4])?;
        let hi = req_fraction(path, "cut_upper", &row[5])?;
        if lo > hi {
            return Err(bad(path, format!("bounds cross: {lo} > {hi}")));
        }
        if row[6] != "true" && row[6] != "false" {
            return Err(bad(path, format!("degenerate must be a bool, got {:?}", row[6])));
        }
    }
    Ok(rows.len())
}

fn check_table(path: &Path) -> Result<usize> {
    let rows = read_rows(path, TABLE)?;
    let mut depth = None;
    for row in &rows {
        if row[0].is_empty() || !row[0].chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad(path, format!("key must be hex, got {:?}", row[0])));
        }
        let p = req_u64(path, "p", &row[1])?;
        if *depth.get_or_insert(p) != p {
            return Err(bad(path, "rows mix depths"));
        }
        req_fraction(path, "f", &row[2])?;
        req_u64(path, "width", &row[3])?;
    }
    Ok(rows.len())
}

fn check_trials(path: &Path) -> Result<usize> {
    let rows = read_rows(path, TRIALS)?;
    for row in &rows {
        req_u64(path, "trial", &row[0])?;
        if req_u64(path, "k", &row[1])? == 0 {
            return Err(bad(path, "k must be at least 1"));
        }
        req_u64(path, "best_cut", &row[2])?;
        req_fraction(path, "best_fraction", &row[3])?;
    }
    Ok(rows.len())
}
