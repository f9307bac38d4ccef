//! The texmex `fvecs` / `ivecs` layouts: each record is a little-endian
//! `i32` dimension followed by that many 4-byte values.

use std::fs;
use std::path::Path;

use crate::distance::l2;
use crate::error::{NhqError, Result};
use crate::oracle::{GroundTruth, TruthFlavor};
use crate::types::{Neighbor, NodeId, ObjectSet, Query};

fn parse<T>(bytes: &[u8], path: &Path, decode: impl Fn([u8; 4]) -> T) -> Result<Vec<Vec<T>>> {
    let err = |offset: usize, message: String| NhqError::Format {
        path: path.to_path_buf(),
        offset: offset as u64,
        message,
    };
    let mut out = Vec::new();
    let mut dim: Option<usize> = None;
    let mut pos = 0;
    while pos < bytes.len() {
        let Some(head) = bytes.get(pos..pos + 4) else {
            return Err(err(pos, "truncated dimension header".into()));
        };
        let d = i32::from_le_bytes(head.try_into().unwrap());
        if d <= 0 {
            return Err(err(pos, format!("non-positive dimension {d}")));
        }
        let d = d as usize;
        match dim {
            Some(first) if first != d => {
                return Err(err(pos, format!("dimension {d} differs from first record's {first}")));
            }
            _ => dim = Some(d),
        }
        let body = pos + 4;
        let Some(raw) = bytes.get(body..body + 4 * d) else {
            return Err(err(body, format!("truncated record, expected {d} values")));
        };
        out.push(raw.chunks_exact(4).map(|c| decode(c.try_into().unwrap())).collect());
        pos = body + 4 * d;
    }
    Ok(out)
}

pub fn parse_fvecs(bytes: &[u8], path: &Path) -> Result<Vec<Vec<f32>>> {
    parse(bytes, path, f32::from_le_bytes)
}

pub fn parse_ivecs(bytes: &[u8], path: &Path) -> Result<Vec<Vec<i32>>> {
    parse(bytes, path, i32::from_le_bytes)
}

pub fn read_fvecs(path: impl AsRef<Path>) -> Result<Vec<Vec<f32>>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| NhqError::io(path, e))?;
    parse_fvecs(&bytes, path)
}

pub fn read_ivecs(path: impl AsRef<Path>) -> Result<Vec<Vec<i32>>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| NhqError::io(path, e))?;
    parse_ivecs(&bytes, path)
}

fn encode<T: Copy>(rows: &[Vec<T>], to_bytes: impl Fn(T) -> [u8; 4]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if let Some(first) = rows.first() {
        for r in rows {
            if r.len() != first.len() || r.is_empty() {
                return Err(NhqError::usage("vecs records must share one positive dimension"));
            }
        }
    }
    for r in rows {
        buf.extend_from_slice(&(r.len() as i32).to_le_bytes());
        for &v in r {
            buf.extend_from_slice(&to_bytes(v));
        }
    }
    Ok(buf)
}

pub fn write_fvecs(path: impl AsRef<Path>, rows: &[Vec<f32>]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(rows, f32::to_le_bytes)?).map_err(|e| NhqError::io(path, e))
}

pub fn write_ivecs(path: impl AsRef<Path>, rows: &[Vec<i32>]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(rows, i32::to_le_bytes)?).map_err(|e| NhqError::io(path, e))
}

/// Row-major concatenation; returns the shared dimension (0 when empty).
pub fn flatten(rows: &[Vec<f32>]) -> (usize, Vec<f32>) {
    (rows.first().map_or(0, Vec::len), rows.concat())
}

/// Stores ground-truth ids as `ivecs`, one record of width `k` per query;
/// short hybrid entries are padded with `-1`.
pub fn write_ground_truth(path: impl AsRef<Path>, gt: &GroundTruth) -> Result<()> {
    if gt.k == 0 {
        return Err(NhqError::usage("ground truth depth must be positive"));
    }
    let rows: Vec<Vec<i32>> = gt
        .entries
        .iter()
        .map(|e| {
            let mut r: Vec<i32> = e.iter().map(|n| n.id as i32).collect();
            r.resize(gt.k, -1);
            r
        })
        .collect();
    write_ivecs(path, &rows)
}

/// Reads ground truth written by [`write_ground_truth`]. Distances are not
/// stored, so they are recomputed from the object set and queries.
pub fn read_ground_truth(
    path: impl AsRef<Path>,
    flavor: TruthFlavor,
    s: &ObjectSet,
    queries: &[Query],
) -> Result<GroundTruth> {
    let path = path.as_ref();
    let rows = read_ivecs(path)?;
    if rows.len() != queries.len() {
        return Err(NhqError::Data(format!(
            "{} holds {} ground-truth records for {} queries",
            path.display(),
            rows.len(),
            queries.len()
        )));
    }
    let k = rows.first().map_or(0, Vec::len);
    let mut entries = Vec::with_capacity(rows.len());
    for (q, row) in queries.iter().zip(&rows) {
        s.check_query(q)?;
        let mut e = Vec::new();
        for &id in row {
            if id == -1 {
                continue;
            }
            if id < 0 || id as usize >= s.len() {
                return Err(NhqError::Data(format!("ground-truth id {id} out of range")));
            }
            e.push(Neighbor::new(id as NodeId, l2(&q.vector, s.vector(id as usize))));
        }
        if flavor == TruthFlavor::Vector && e.len() != k {
            return Err(NhqError::Data("vector ground truth cannot contain padding".into()));
        }
        entries.push(e);
    }
    Ok(GroundTruth { flavor, k, entries })
}
