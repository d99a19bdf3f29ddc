//! Delimited-file ingestion: outcomes and edge lists.
//!
//! External data identifies vertices by arbitrary string IDs. Ingestion maps
//! them to dense indices `0..n` in file order; results are reported back
//! under the original IDs by the CLI. Two file shapes are understood:
//!
//! * outcomes: header `id,x,d` with one row per sampled vertex; `x` is the
//!   real outcome, `d` the reported degree. The `d` column may be omitted
//!   entirely, in which case the caller must supply a global degree bound.
//! * edges: header `id_i,id_j`; rows reference IDs from the outcomes file.
//!
//! Unknown IDs, self-loops, and malformed values are errors carrying the
//! offending line number. Duplicate edges are deduplicated with a warning,
//! matching the simple-graph reading of the data.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::data::{DataError, ObservedData};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Malformed {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: missing required column '{column}'")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}:{line}: cannot parse {column} value '{value}'")]
    ParseValue {
        path: PathBuf,
        line: u64,
        column: String,
        value: String,
    },
    #[error("{path}:{line}: unknown id '{id}' (not present in the outcomes file)")]
    UnknownId {
        path: PathBuf,
        line: u64,
        id: String,
    },
    #[error("{path}:{line}: duplicate id '{id}'")]
    DuplicateId {
        path: PathBuf,
        line: u64,
        id: String,
    },
    #[error("{path}:{line}: edge joins '{id}' to itself")]
    SelfLoopEdge {
        path: PathBuf,
        line: u64,
        id: String,
    },
    #[error("{path}: no data rows")]
    Empty { path: PathBuf },
    #[error("outcomes file has no degree column and no global degree bound was supplied")]
    MissingDegrees,
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Parsed outcomes file. `degrees` is `None` when the file has no `d`
/// column; vertex order matches file order.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    pub ids: Vec<String>,
    pub outcomes: Vec<f64>,
    pub degrees: Option<Vec<u32>>,
}

impl OutcomeTable {
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    /// Index of each ID, for resolving edge rows.
    pub fn id_index(&self) -> HashMap<&str, usize> {
        self.ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect()
    }
}

/// Edge rows resolved to dense indices, plus dedup warnings.
#[derive(Clone, Debug, Default)]
pub struct EdgeList {
    pub edges: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

fn reader_for(path: &Path) -> Result<csv::Reader<std::fs::File>, IngestError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => IngestError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => IngestError::Malformed {
                path: path.to_path_buf(),
                line: 1,
                message: format!("{other:?}"),
            },
        })
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn column_position(
    headers: &csv::StringRecord,
    name: &str,
) -> Option<usize> {
    headers.iter().position(|h| h.eq_ignore_ascii_case(name))
}

/// Reads an outcomes file (`id,x[,d]`).
pub fn read_outcomes(path: &Path) -> Result<OutcomeTable, IngestError> {
    let mut reader = reader_for(path)?;
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Malformed {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let id_col = column_position(&headers, "id").ok_or_else(|| IngestError::MissingColumn {
        path: path.to_path_buf(),
        column: "id".into(),
    })?;
    let x_col = column_position(&headers, "x").ok_or_else(|| IngestError::MissingColumn {
        path: path.to_path_buf(),
        column: "x".into(),
    })?;
    let d_col = column_position(&headers, "d");

    let mut ids = Vec::new();
    let mut outcomes = Vec::new();
    let mut degrees = d_col.map(|_| Vec::new());
    let mut seen = HashMap::new();

    for record in reader.records() {
        let record = record.map_err(|e| IngestError::Malformed {
            path: path.to_path_buf(),
            line: e
                .position()
                .map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record_line(&record);
        let field = |col: usize, name: &str| -> Result<&str, IngestError> {
            record.get(col).ok_or_else(|| IngestError::Malformed {
                path: path.to_path_buf(),
                line,
                message: format!("missing {name} field"),
            })
        };

        let id = field(id_col, "id")?.to_string();
        if seen.insert(id.clone(), line).is_some() {
            return Err(IngestError::DuplicateId {
                path: path.to_path_buf(),
                line,
                id,
            });
        }

        let x_raw = field(x_col, "x")?;
        let x: f64 = x_raw.parse().map_err(|_| IngestError::ParseValue {
            path: path.to_path_buf(),
            line,
            column: "x".into(),
            value: x_raw.to_string(),
        })?;
        if !x.is_finite() {
            return Err(IngestError::ParseValue {
                path: path.to_path_buf(),
                line,
                column: "x".into(),
                value: x_raw.to_string(),
            });
        }

        if let (Some(col), Some(out)) = (d_col, degrees.as_mut()) {
            let d_raw = field(col, "d")?;
            let d: u32 = d_raw.parse().map_err(|_| IngestError::ParseValue {
                path: path.to_path_buf(),
                line,
                column: "d".into(),
                value: d_raw.to_string(),
            })?;
            out.push(d);
        }

        ids.push(id);
        outcomes.push(x);
    }

    if ids.is_empty() {
        return Err(IngestError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(OutcomeTable {
        ids,
        outcomes,
        degrees,
    })
}

/// Reads an edges file (`id_i,id_j`) against the IDs of `table`. Duplicate
/// rows (in either orientation) are dropped with a warning.
pub fn read_edges(path: &Path, table: &OutcomeTable) -> Result<EdgeList, IngestError> {
    let index = table.id_index();
    let mut reader = reader_for(path)?;
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Malformed {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let i_col = column_position(&headers, "id_i").ok_or_else(|| IngestError::MissingColumn {
        path: path.to_path_buf(),
        column: "id_i".into(),
    })?;
    let j_col = column_position(&headers, "id_j").ok_or_else(|| IngestError::MissingColumn {
        path: path.to_path_buf(),
        column: "id_j".into(),
    })?;

    let mut out = EdgeList::default();
    let mut seen = std::collections::HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::Malformed {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record_line(&record);
        let resolve = |col: usize, name: &str| -> Result<usize, IngestError> {
            let raw = record.get(col).ok_or_else(|| IngestError::Malformed {
                path: path.to_path_buf(),
                line,
                message: format!("missing {name} field"),
            })?;
            index
                .get(raw)
                .copied()
                .ok_or_else(|| IngestError::UnknownId {
                    path: path.to_path_buf(),
                    line,
                    id: raw.to_string(),
                })
        };
        let a = resolve(i_col, "id_i")?;
        let b = resolve(j_col, "id_j")?;
        if a == b {
            return Err(IngestError::SelfLoopEdge {
                path: path.to_path_buf(),
                line,
                id: table.ids[a].clone(),
            });
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            out.edges.push(key);
        } else {
            out.warnings.push(format!(
                "{}:{line}: duplicate edge ({}, {}) ignored",
                path.display(),
                table.ids[key.0],
                table.ids[key.1]
            ));
        }
    }
    Ok(out)
}

/// Assembles [`ObservedData`] from a parsed table and resolved edges.
/// `degree_fill` replaces the degree column entirely when given; when the
/// file had no degree column it is required.
pub fn build_observed_data(
    table: &OutcomeTable,
    edges: &[(usize, usize)],
    degree_fill: Option<u32>,
) -> Result<ObservedData, IngestError> {
    let degrees = match (degree_fill, table.degrees.as_ref()) {
        (Some(fill), _) => vec![fill; table.n()],
        (None, Some(d)) => d.clone(),
        (None, None) => return Err(IngestError::MissingDegrees),
    };
    Ok(ObservedData::new(
        table.outcomes.clone(),
        degrees,
        edges.iter().copied(),
    )?)
}
