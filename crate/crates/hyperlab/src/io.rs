//! On-disk formats: distance-table CSV, permutation-system JSON and set
//! families.

use std::fs;
use std::path::{Path, PathBuf};

use hyperlab_core::{DistanceTable, FiniteSet, MetricError, System, SystemError};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {message}")]
    Layout { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Table { path: PathBuf, source: MetricError },
    #[error("{path}: {source}")]
    System { path: PathBuf, source: SystemError },
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses a square distance matrix. The header row lists the ids `0..n`; a
/// body row may be prefixed by its id, in which case the header starts with
/// one extra (ignored) cell.
pub fn parse_distance_table(text: &str, tolerance: f64, path: &Path) -> Result<DistanceTable, FormatError> {
    let layout = |message: String| FormatError::Layout {
        path: path.to_owned(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|source| FormatError::Csv {
            path: path.to_owned(),
            source,
        })?;
        rows.push(record.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    let (header, body) = rows.split_first().ok_or_else(|| layout("empty file".into()))?;
    let n = body.len();
    let prefixed = match header.len() {
        h if h == n => false,
        h if h == n + 1 => true,
        h => return Err(layout(format!("header has {h} cells for {n} body rows"))),
    };
    let ids = if prefixed { &header[1..] } else { &header[..] };
    for (k, id) in ids.iter().enumerate() {
        if id.parse::<usize>().ok() != Some(k) {
            return Err(layout(format!("header cell {k} is {id:?}, expected {k}")));
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in body.iter().enumerate() {
        let cells = if prefixed {
            if row.first().and_then(|c| c.parse::<usize>().ok()) != Some(i) {
                return Err(layout(format!("row {i} does not start with its id")));
            }
            &row[1..]
        } else {
            &row[..]
        };
        if cells.len() != n {
            return Err(layout(format!("row {i} has {} entries, expected {n}", cells.len())));
        }
        for (j, c) in cells.iter().enumerate() {
            let v = c
                .parse::<f64>()
                .map_err(|_| layout(format!("entry ({i}, {j}) is not a number: {c:?}")))?;
            entries.push(v);
        }
    }
    DistanceTable::with_tolerance(n, entries, tolerance).map_err(|source| FormatError::Table {
        path: path.to_owned(),
        source,
    })
}

pub fn read_distance_table(path: &Path, tolerance: f64) -> Result<DistanceTable, FormatError> {
    parse_distance_table(&read(path)?, tolerance, path)
}

/// CSV text of a distance table: header of ids, no row prefix.
pub fn distance_table_csv(table: &DistanceTable) -> String {
    let n = table.size();
    let mut out = String::new();
    out.push_str(&(0..n).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| table.get(i, j).unwrap_or(f64::NAN).to_string())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `{n, images, metric}`; `metric` is a CSV path relative to the JSON file.
/// Without it the discrete metric is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermutationFile {
    pub n: usize,
    pub images: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<PathBuf>,
}

pub fn read_permutation(path: &Path, tolerance: f64) -> Result<System, FormatError> {
    let file: PermutationFile = serde_json::from_str(&read(path)?).map_err(|source| FormatError::Json {
        path: path.to_owned(),
        source,
    })?;
    let table = match &file.metric {
        Some(rel) => {
            let csv_path = path.parent().unwrap_or(Path::new(".")).join(rel);
            let t = read_distance_table(&csv_path, tolerance)?;
            if t.size() != file.n {
                return Err(FormatError::Layout {
                    path: csv_path,
                    message: format!("metric has {} points, system has {}", t.size(), file.n),
                });
            }
            t
        }
        None => DistanceTable::discrete(file.n),
    };
    let name = path
        .file_name()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    System::from_permutation(file.n, file.images, table)
        .map(|s| s.with_descriptor(name))
        .map_err(|source| FormatError::System {
            path: path.to_owned(),
            source,
        })
}

/// A family of sets as JSON: one array of points per member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub members: Vec<FiniteSet>,
    #[serde(default)]
    pub times: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperlab_core::Point;

    #[test]
    fn tables_with_and_without_row_ids() {
        let p = Path::new("t.csv");
        let plain = parse_distance_table("0,1\n0,1\n1,0\n", 1e-9, p).unwrap();
        let prefixed = parse_distance_table("id,0,1\n0,0,1\n1,1,0\n", 1e-9, p).unwrap();
        assert_eq!(plain, prefixed);
        assert_eq!(distance_table_csv(&plain), "0,1\n0,1\n1,0\n");
    }

    #[test]
    fn bad_tables_are_rejected() {
        let p = Path::new("t.csv");
        assert!(parse_distance_table("0,1\n0,1\n2,0\n", 1e-9, p).is_err());
        assert!(parse_distance_table("0,2\n0,1\n1,0\n", 1e-9, p).is_err());
        assert!(parse_distance_table("0,1\n0,1\n", 1e-9, p).is_err());
        assert!(parse_distance_table("0,1\n0,x\n1,0\n", 1e-9, p).is_err());
        assert!(parse_distance_table("", 1e-9, p).is_err());
    }

    #[test]
    fn points_round_trip_through_json() {
        let pts = vec![Point::house(65536, 257), Point::on_circle(3, 4), Point::Abstract(7)];
        let text = serde_json::to_string(&pts).unwrap();
        assert_eq!(text, "[[257,65536,1,65536],[3,4,0,1],7]");
        let back: Vec<Point> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, pts);
        assert!(serde_json::from_str::<Point>("[1,0,1,2]").is_err());
        assert!(serde_json::from_str::<Point>("[1,2,1]").is_err());
        assert!(serde_json::from_str::<Point>("[1,2,-1,2]").is_err());
        let fam: FamilyFile = serde_json::from_str(r#"{"members": [[[0,1,0,1], [1,2,0,1]]]}"#).unwrap();
        assert_eq!(fam.members[0].len(), 2);
    }
}
