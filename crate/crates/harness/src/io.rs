//! Graph and signal files. Graphs are JSON (`{"n", "directed", "edges": [[src, dst, w], …]}`)
//! or CSV edge lists (`src,dst[,weight]`, optional header). Signals are JSON arrays of
//! numbers or `[re, im]` pairs, `{"values": …}`, or CSV with one `re[,im]` row per node.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use graphseed_core::{Complex64, Graph, Signal64};
use serde::Serialize;
use serde_json::Value;

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// `n` and `directed` apply to CSV input only; `n` defaults to the largest index + 1.
pub fn load_graph(path: &Path, n: Option<usize>, directed: bool) -> Result<Graph> {
    let text = read_text(path)?;
    if is_json(path) {
        let g: Graph = serde_json::from_str(&text).with_context(|| format!("{} is not a graph", path.display()))?;
        g.validate()?;
        return Ok(g);
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut edges = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) || rec.get(0).is_some_and(|f| f.starts_with('#')) {
            continue;
        }
        let parsed: Option<(usize, usize)> = match (rec.get(0), rec.get(1)) {
            (Some(a), Some(b)) => a.parse().ok().zip(b.parse().ok()),
            _ => None,
        };
        let Some((a, b)) = parsed else {
            if line == 0 {
                continue;
            }
            bail!("{}:{}: expected src,dst[,weight]", path.display(), line + 1);
        };
        let w = match rec.get(2) {
            Some(f) if !f.is_empty() => {
                f.parse::<f64>().with_context(|| format!("{}:{}: bad weight", path.display(), line + 1))?
            }
            _ => 1.0,
        };
        edges.push((a, b, w));
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0));
    Ok(Graph::new(n, edges, directed)?)
}

fn complex_of(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(x) => Some(Complex64::new(x.as_f64()?, 0.0)),
        Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
        _ => None,
    }
}

pub fn load_signal(path: &Path) -> Result<Signal64> {
    let text = read_text(path)?;
    if is_json(path) {
        let v: Value = serde_json::from_str(&text)?;
        let arr = match &v {
            Value::Array(a) => a,
            Value::Object(o) => match o.get("values") {
                Some(Value::Array(a)) => a,
                _ => bail!("{}: expected a \"values\" array", path.display()),
            },
            _ => bail!("{}: expected an array of values", path.display()),
        };
        let values: Option<Vec<Complex64>> = arr.iter().map(complex_of).collect();
        let values = values.with_context(|| format!("{}: entries must be numbers or [re, im]", path.display()))?;
        return Ok(Signal64::new(values));
    }
    let mut values = Vec::new();
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let Some(Ok(re)) = rec.get(0).map(str::parse::<f64>) else {
            if line == 0 {
                continue;
            }
            bail!("{}:{}: expected re[,im]", path.display(), line + 1);
        };
        let im = rec.get(1).and_then(|f| f.parse().ok()).unwrap_or(0.0);
        values.push(Complex64::new(re, im));
    }
    Ok(Signal64::new(values))
}

/// Pretty JSON to `path`, or stdout when `None`.
pub fn emit_json<T: Serialize + ?Sized>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    match path {
        Some(p) => fs::write(p, s).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(s.as_bytes())?;
            Ok(())
        }
    }
}

/// CSV rows to `path`, or stdout when `None`.
pub fn emit_csv<R: Serialize>(rows: &[R], path: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
