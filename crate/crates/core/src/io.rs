//! Plain-text CSV formats for instances, matchings, type assignments and
//! sweep tables.
//!
//! Files start with `# key=value` metadata lines, then a header row, then one
//! record per line. Numbers are written in Rust's shortest round-trip form,
//! so reading a file back reproduces the values bit for bit.

use std::io::{BufRead, Write};

use crate::analysis::SweepRow;
use crate::error::{Error, Result};
use crate::geometry::{BoxSpec, PointSet};
use crate::matching::Matching;
use crate::process::MarkedPointSet;
use crate::scalar::Real;

pub const SWEEP_HEADER: &str =
    "param,mu,d,L,seed,n_points,largest_fraction,mean_comp_size,leftover_fraction,runtime_ms";

/// Ordered `key=value` metadata.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    entries: Vec<(String, String)>,
}

impl Meta {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing an earlier value in place.
    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|e| e.0 == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.0 == key).map(|e| e.1.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    fn require<V: std::str::FromStr>(&self, key: &str) -> Result<V> {
        let raw = self.get(key).ok_or_else(|| Error::Format { line: 0, message: format!("missing `# {key}=` line") })?;
        raw.parse().map_err(|_| Error::Format { line: 0, message: format!("bad value `{raw}` for {key}") })
    }

    fn write(&self, w: &mut impl Write) -> Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }
}

/// Metadata lines, the header and the data rows of one file, with 1-based
/// line numbers.
struct Table {
    meta: Meta,
    header: Vec<String>,
    header_line: usize,
    rows: Vec<(usize, Vec<String>)>,
}

fn read_table(r: impl BufRead) -> Result<Table> {
    let mut meta = Meta::new();
    let mut header: Option<(usize, Vec<String>)> = None;
    let mut rows = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            if header.is_some() {
                continue;
            }
            if let Some((key, value)) = rest.trim().split_once('=') {
                meta.set(key.trim(), value.trim());
            }
            continue;
        }
        let fields: Vec<String> = text.split(',').map(|f| f.trim().to_string()).collect();
        if header.is_none() {
            header = Some((lineno, fields));
        } else {
            rows.push((lineno, fields));
        }
    }
    let (header_line, header) = header.ok_or_else(|| Error::Format { line: 0, message: "no header row".into() })?;
    Ok(Table { meta, header, header_line, rows })
}

fn field<V: std::str::FromStr>(line: usize, what: &str, raw: &str) -> Result<V> {
    raw.parse().map_err(|_| Error::Format { line, message: format!("bad {what} `{raw}`") })
}

fn box_meta<T: Real>(bbox: &BoxSpec<T>, meta: &Meta) -> Meta {
    let mut out = Meta::new();
    out.set("d", bbox.dim).set("L", bbox.side).set("periodic", bbox.periodic);
    for (k, v) in meta.entries() {
        if !matches!(k.as_str(), "d" | "L" | "periodic") {
            out.set(k, v);
        }
    }
    out
}

/// Writes an instance: box metadata, any extra metadata, then
/// `x0,...,x{d-1},degree` rows.
pub fn write_points<T: Real>(w: &mut impl Write, m: &MarkedPointSet<T>, meta: &Meta) -> Result<()> {
    let bbox = m.points().bbox();
    box_meta(bbox, meta).write(w)?;
    let header: Vec<String> = (0..bbox.dim).map(|a| format!("x{a}")).chain(["degree".to_string()]).collect();
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for (p, k) in m.points().iter().zip(m.degrees()) {
        line.clear();
        for x in p {
            line.push_str(&x.to_string());
            line.push(',');
        }
        line.push_str(&k.to_string());
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_points<T: Real>(r: impl BufRead) -> Result<(MarkedPointSet<T>, Meta)> {
    let table = read_table(r)?;
    let dim: usize = table.meta.require("d")?;
    let side: T = table.meta.require("L")?;
    let periodic: bool = table.meta.require("periodic")?;
    let bbox = BoxSpec::new(dim, side, periodic)?;
    if table.header.len() != dim + 1 || table.header.last().map(String::as_str) != Some("degree") {
        return Err(Error::Format {
            line: table.header_line,
            message: format!("expected {dim} coordinate columns and `degree`, found `{}`", table.header.join(",")),
        });
    }
    let mut coords = Vec::with_capacity(table.rows.len() * dim);
    let mut degrees = Vec::with_capacity(table.rows.len());
    for (line, fields) in &table.rows {
        if fields.len() != dim + 1 {
            return Err(Error::Format { line: *line, message: format!("expected {} fields, found {}", dim + 1, fields.len()) });
        }
        for raw in &fields[..dim] {
            let x: T = field(*line, "coordinate", raw)?;
            if !(x >= T::zero() && x < side) {
                return Err(Error::Format { line: *line, message: format!("coordinate {raw} outside [0, {side})") });
            }
            coords.push(x);
        }
        let k: u32 = field(*line, "degree", &fields[dim])?;
        if k == 0 {
            return Err(Error::Format { line: *line, message: "degree must be at least 1".into() });
        }
        degrees.push(k);
    }
    let points = PointSet::new(bbox, coords)?;
    Ok((MarkedPointSet::new(points, degrees)?, table.meta))
}

/// Writes a matching with its point count in the `n` metadata key, then
/// `i,j,length` rows.
pub fn write_matching<T: Real>(w: &mut impl Write, matching: &Matching<T>, meta: &Meta) -> Result<()> {
    let mut out = meta.clone();
    out.set("n", matching.point_count());
    out.write(w)?;
    writeln!(w, "i,j,length")?;
    for e in matching.edges() {
        writeln!(w, "{},{},{}", e.i, e.j, e.length)?;
    }
    Ok(())
}

pub fn read_matching<T: Real>(r: impl BufRead) -> Result<(Matching<T>, Meta)> {
    let table = read_table(r)?;
    let n: usize = table.meta.require("n")?;
    if table.header != ["i", "j", "length"] {
        return Err(Error::Format { line: table.header_line, message: "expected header `i,j,length`".into() });
    }
    let mut edges = Vec::with_capacity(table.rows.len());
    for (line, fields) in &table.rows {
        if fields.len() != 3 {
            return Err(Error::Format { line: *line, message: format!("expected 3 fields, found {}", fields.len()) });
        }
        edges.push((
            field::<usize>(*line, "index", &fields[0])?,
            field::<usize>(*line, "index", &fields[1])?,
            field::<T>(*line, "length", &fields[2])?,
        ));
    }
    Ok((Matching::from_edges(n, edges)?, table.meta))
}

/// `index,degree,type` rows; the type column is empty for untyped points.
pub fn write_types(w: &mut impl Write, degrees: &[u32], types: &[Option<u32>]) -> Result<()> {
    writeln!(w, "index,degree,type")?;
    for (i, (k, t)) in degrees.iter().zip(types).enumerate() {
        match t {
            Some(t) => writeln!(w, "{i},{k},{t}")?,
            None => writeln!(w, "{i},{k},")?,
        }
    }
    Ok(())
}

pub fn write_sweep_csv(w: &mut impl Write, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{:.3}",
            quote(&r.param),
            quote(&r.mu),
            r.dim,
            r.side,
            r.seed,
            r.n_points,
            r.largest_fraction,
            r.mean_comp_size,
            r.leftover_fraction,
            r.runtime_ms
        )?;
    }
    Ok(())
}

/// Quotes a field that contains a comma or a quote.
fn quote(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
