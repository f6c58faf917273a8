//! CSV ingestion and export of host graphs.
//!
//! Edge lists have columns `src,dst` followed by any number of named edge
//! attributes. The header row is optional and recognised by its first two
//! cells reading `src` and `dst`; without a header, extra columns are named
//! `col2`, `col3`, .... Vertex attribute files have columns `id` followed by
//! attributes, with the same header rule on `id`.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use csv::{ReaderBuilder, StringRecord, WriterBuilder};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::attr::{infer_column, parse_cell, AttributeValue};
use crate::graph::{GraphBuilder, GraphError, PropertyDigraph};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("I/O error reading {}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: malformed row at line {line}: {reason}", .path.display())]
    MalformedRow {
        path: PathBuf,
        line: u64,
        reason: String,
    },
    #[error("{}: self-loop at line {line}", .path.display())]
    SelfLoop { path: PathBuf, line: u64 },
    #[error("attribute for unknown vertex {0:?}")]
    AttributeForUnknownVertex(String),
    #[error("attribute for unknown edge {0:?} -> {1:?}")]
    AttributeForUnknownEdge(String, String),
    #[error("--min-weight requires an integer or float `weight` edge column")]
    MissingWeightColumn,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl LoadError {
    /// Line number for row-level errors.
    pub fn line(&self) -> Option<u64> {
        match self {
            LoadError::MalformedRow { line, .. } | LoadError::SelfLoop { line, .. } => Some(*line),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Drop edge rows whose `weight` attribute is below this value.
    pub min_weight: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: PropertyDigraph,
    /// Edge rows collapsed because the same directed edge appeared earlier.
    pub duplicate_rows: usize,
    /// Edge rows removed by the weight filter.
    pub filtered_rows: usize,
}

struct Table {
    path: PathBuf,
    columns: Vec<String>,
    rows: Vec<(u64, StringRecord)>,
}

fn read_table(
    path: &Path,
    min_cols: usize,
    is_header: impl Fn(&StringRecord) -> bool,
    default_names: &[&str],
) -> Result<Table, LoadError> {
    let mut file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => LoadError::FileNotFound(path.to_path_buf()),
        _ => LoadError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    let mut first = true;
    for rec in reader.records() {
        let rec = rec.map_err(|e| LoadError::MalformedRow {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if first {
            first = false;
            if is_header(&rec) {
                columns = Some(rec.iter().map(|c| c.trim().to_string()).collect());
                continue;
            }
        }
        rows.push((line, rec));
    }
    let columns = columns.unwrap_or_else(|| {
        let width = rows.iter().map(|(_, r)| r.len()).max().unwrap_or(min_cols);
        (0..width.max(min_cols))
            .map(|i| {
                default_names
                    .get(i)
                    .map_or_else(|| format!("col{i}"), |s| s.to_string())
            })
            .collect()
    });
    for (line, rec) in &rows {
        if rec.len() != columns.len() || rec.len() < min_cols {
            return Err(LoadError::MalformedRow {
                path: path.to_path_buf(),
                line: *line,
                reason: format!("expected {} fields, found {}", columns.len(), rec.len()),
            });
        }
        for (i, cell) in rec.iter().take(min_cols).enumerate() {
            if cell.trim().is_empty() {
                return Err(LoadError::MalformedRow {
                    path: path.to_path_buf(),
                    line: *line,
                    reason: format!("empty `{}` field", columns[i]),
                });
            }
        }
    }
    Ok(Table {
        path: path.to_path_buf(),
        columns,
        rows,
    })
}

fn edge_header(rec: &StringRecord) -> bool {
    rec.len() >= 2
        && rec[0].trim().eq_ignore_ascii_case("src")
        && rec[1].trim().eq_ignore_ascii_case("dst")
}

fn vertex_header(rec: &StringRecord) -> bool {
    !rec.is_empty() && rec[0].trim().eq_ignore_ascii_case("id")
}

/// Typed values of the attribute columns `first..` of a table.
fn typed_columns(table: &Table, first: usize) -> Vec<(String, Vec<Option<AttributeValue>>)> {
    (first..table.columns.len())
        .map(|c| {
            let cells = table.rows.iter().map(|(_, r)| r[c].trim());
            let ty = infer_column(cells.clone());
            let values = cells.map(|cell| parse_cell(cell, ty)).collect();
            (table.columns[c].clone(), values)
        })
        .collect()
}

/// Loads a host graph from an edge-list CSV and optional attribute files.
pub fn load_graph(
    edge_file: &Path,
    vertex_attr_file: Option<&Path>,
    edge_attr_file: Option<&Path>,
    options: &LoadOptions,
) -> Result<LoadedGraph, LoadError> {
    let edges = read_table(edge_file, 2, edge_header, &["src", "dst"])?;
    let edge_cols = typed_columns(&edges, 2);

    let keep: Vec<bool> = match options.min_weight {
        None => vec![true; edges.rows.len()],
        Some(w) => {
            let (_, weights) = edge_cols
                .iter()
                .find(|(k, _)| k == "weight")
                .ok_or(LoadError::MissingWeightColumn)?;
            weights
                .iter()
                .map(|v| match v {
                    Some(AttributeValue::Int(i)) => (*i as f64) >= w,
                    Some(AttributeValue::Float(x)) => *x >= w,
                    None => false,
                    Some(_) => true,
                })
                .collect()
        }
    };
    if options.min_weight.is_some()
        && edge_cols
            .iter()
            .any(|(k, v)| k == "weight" && v.iter().flatten().any(|x| !x.attr_type().is_numeric()))
    {
        return Err(LoadError::MissingWeightColumn);
    }

    let mut b = GraphBuilder::new();
    for (key, values) in &edge_cols {
        if let Some(ty) = values.iter().flatten().next().map(AttributeValue::attr_type) {
            b.declare_edge_attr(key, ty);
        }
    }
    let mut filtered_rows = 0;
    for (row, (line, rec)) in edges.rows.iter().enumerate() {
        if !keep[row] {
            filtered_rows += 1;
            continue;
        }
        let (src, dst) = (rec[0].trim(), rec[1].trim());
        let fresh = b.add_edge(src, dst).map_err(|e| match e {
            GraphError::SelfLoop(_) => LoadError::SelfLoop {
                path: edges.path.clone(),
                line: *line,
            },
            other => other.into(),
        })?;
        if fresh {
            for (key, values) in &edge_cols {
                if let Some(v) = &values[row] {
                    b.set_edge_attr(src, dst, key, v.clone())?;
                }
            }
        }
    }
    let duplicate_rows = b.duplicate_count();

    if let Some(path) = vertex_attr_file {
        let table = read_table(path, 1, vertex_header, &["id"])?;
        for (key, values) in typed_columns(&table, 1) {
            if let Some(ty) = values.iter().flatten().next().map(AttributeValue::attr_type) {
                b.declare_vertex_attr(&key, ty);
            }
            for ((_, rec), value) in table.rows.iter().zip(values) {
                if let Some(value) = value {
                    b.set_vertex_attr(rec[0].trim(), &key, value)
                        .map_err(|e| match e {
                            GraphError::AttributeForUnknownVertex(id) => {
                                LoadError::AttributeForUnknownVertex(id)
                            }
                            other => other.into(),
                        })?;
                }
            }
        }
        // Rows with no attribute values still have to name known vertices.
        for (_, rec) in &table.rows {
            let id = rec[0].trim();
            if !b.has_vertex(id) {
                return Err(LoadError::AttributeForUnknownVertex(id.to_string()));
            }
        }
    }

    if let Some(path) = edge_attr_file {
        let table = read_table(path, 2, edge_header, &["src", "dst"])?;
        for (key, values) in typed_columns(&table, 2) {
            for ((_, rec), value) in table.rows.iter().zip(values) {
                let (src, dst) = (rec[0].trim(), rec[1].trim());
                if let Some(value) = value {
                    b.set_edge_attr(src, dst, &key, value).map_err(|e| match e {
                        GraphError::AttributeForUnknownEdge(s, d) => {
                            LoadError::AttributeForUnknownEdge(s, d)
                        }
                        other => other.into(),
                    })?;
                }
            }
        }
    }

    Ok(LoadedGraph {
        graph: b.build()?,
        duplicate_rows,
        filtered_rows,
    })
}

/// Writes the edge list with a header, rows sorted by (src, dst).
pub fn write_edge_csv<W: Write>(g: &PropertyDigraph, out: W) -> io::Result<()> {
    let mut w = WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let keys: Vec<&String> = g.edge_attrs().keys().collect();
    let mut header = vec!["src", "dst"];
    header.extend(keys.iter().map(|k| k.as_str()));
    w.write_record(&header)?;
    for (i, &(s, d)) in g.edges().iter().enumerate() {
        let mut row = vec![g.id(s).to_string(), g.id(d).to_string()];
        row.extend(
            keys.iter()
                .map(|k| g.edge_attr(i, k).map(AttributeValue::to_csv_field).unwrap_or_default()),
        );
        w.write_record(&row)?;
    }
    w.flush()
}

/// Writes vertex attributes with a header, one row per vertex in id order.
pub fn write_vertex_csv<W: Write>(g: &PropertyDigraph, out: W) -> io::Result<()> {
    let mut w = WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let keys: Vec<&String> = g.vertex_attrs().keys().collect();
    let mut header = vec!["id"];
    header.extend(keys.iter().map(|k| k.as_str()));
    w.write_record(&header)?;
    for v in g.vertices() {
        let mut row = vec![g.id(v).to_string()];
        row.extend(keys.iter().map(|k| {
            g.vertex_attr(v, k)
                .map(AttributeValue::to_csv_field)
                .unwrap_or_default()
        }));
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn edge_csv_string(g: &PropertyDigraph) -> String {
    let mut buf = Vec::new();
    write_edge_csv(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// SHA-256 over the exported edge list and vertex attributes, hex encoded.
pub fn graph_digest(g: &PropertyDigraph) -> String {
    let mut hasher = Sha256::new();
    write_edge_csv(g, HashWriter(&mut hasher)).expect("hashing");
    hasher.update(b"\x00vertices\x00");
    write_vertex_csv(g, HashWriter(&mut hasher)).expect("hashing");
    hex(&hasher.finalize())
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

struct HashWriter<'a>(&'a mut Sha256);

impl Write for HashWriter<'_> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0.update(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}
