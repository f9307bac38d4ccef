//! Binary index archive. All integers and floats are little-endian.
//!
//! ```text
//! magic            8 bytes  "NHQINDEX"
//! version          u32
//! builder          u8       0 threshold, 1 npg-nsw, 2 npg-kgraph, 3 manual
//! k, l             u32, u32
//! quality_thr      f64
//! theta_prime      f64
//! seed             u64
//! degree_bounded   u8
//! rounds           u32
//! est_quality      f64
//! mode             u8       0 euclidean, 1 fusion recommended, 2 fusion fixed
//! w_vector, w_attr f64, f64 (zero unless mode = 2)
//! columns          u32, then per column: name, u32 value count, values
//!                  (strings are u32 byte length + UTF-8)
//! n                u64
//! dim, attr_dim    u32, u32
//! degree_bound     u32
//! adjacency        per vertex: u32 degree, degree x u32 ids
//! checksum         32 bytes, SHA-256 of everything above
//! ```

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::attributes::{AttributeColumn, AttributeSchema};
use crate::error::{NhqError, Result};
use crate::graph::{BuildMeta, BuilderKind, CompositeGraph};
use crate::types::{DistanceMode, FusionWeights, NodeId, ObjectSet};

pub const ARCHIVE_MAGIC: [u8; 8] = *b"NHQINDEX";
pub const ARCHIVE_VERSION: u32 = 1;
const CHECKSUM_LEN: usize = 32;

/// A graph together with what is needed to check it against a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexArchive {
    pub graph: CompositeGraph,
    pub schema: AttributeSchema,
    pub dim: usize,
    pub attr_dim: usize,
}

impl IndexArchive {
    pub fn new(graph: CompositeGraph, set: &ObjectSet, schema: AttributeSchema) -> Result<Self> {
        graph.check_aligned(set)?;
        if !schema.is_empty() && schema.len() != set.attr_dim() {
            return Err(NhqError::DimensionMismatch {
                expected: set.attr_dim(),
                found: schema.len(),
            });
        }
        Ok(Self {
            graph,
            schema,
            dim: set.dim(),
            attr_dim: set.attr_dim(),
        })
    }

    /// Confirms that `set` has the shape the index was built over.
    pub fn check_set(&self, set: &ObjectSet) -> Result<()> {
        if set.dim() != self.dim {
            return Err(NhqError::DimensionMismatch {
                expected: self.dim,
                found: set.dim(),
            });
        }
        if set.attr_dim() != self.attr_dim {
            return Err(NhqError::DimensionMismatch {
                expected: self.attr_dim,
                found: set.attr_dim(),
            });
        }
        self.graph.check_aligned(set)
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.0.extend_from_slice(s.as_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn err(&self, message: impl Into<String>) -> NhqError {
        NhqError::Format {
            path: self.path.to_path_buf(),
            offset: self.pos as u64,
            message: message.into(),
        }
    }
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| self.err("archive body ends early"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| self.err("string is not UTF-8"))
    }
}

fn builder_code(b: BuilderKind) -> u8 {
    match b {
        BuilderKind::Threshold => 0,
        BuilderKind::NpgNsw => 1,
        BuilderKind::NpgKgraph => 2,
        BuilderKind::Manual => 3,
    }
}

pub fn encode_index(a: &IndexArchive) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(&ARCHIVE_MAGIC);
    w.u32(ARCHIVE_VERSION);
    let m = a.graph.meta();
    w.u8(builder_code(m.builder));
    w.u32(m.k);
    w.u32(m.l);
    w.f64(m.quality_threshold);
    w.f64(m.theta_prime);
    w.u64(m.seed);
    w.u8(u8::from(m.degree_bounded));
    w.u32(m.rounds);
    w.f64(m.estimated_quality);
    let (tag, wv, wa) = match a.graph.mode() {
        DistanceMode::Euclidean => (0, 0.0, 0.0),
        DistanceMode::Fusion(FusionWeights::Recommended) => (1, 0.0, 0.0),
        DistanceMode::Fusion(FusionWeights::Fixed { vector, attribute }) => (2, vector, attribute),
    };
    w.u8(tag);
    w.f64(wv);
    w.f64(wa);
    w.u32(a.schema.columns.len() as u32);
    for c in &a.schema.columns {
        w.str(&c.name);
        w.u32(c.values.len() as u32);
        for v in &c.values {
            w.str(v);
        }
    }
    w.u64(a.graph.len() as u64);
    w.u32(a.dim as u32);
    w.u32(a.attr_dim as u32);
    w.u32(a.graph.degree_bound() as u32);
    for list in a.graph.adjacency() {
        w.u32(list.len() as u32);
        for &v in list {
            w.u32(v);
        }
    }
    let digest = Sha256::digest(&w.0);
    w.0.extend_from_slice(&digest);
    w.0
}

/// Validates magic, version and checksum before parsing anything else.
pub fn decode_index(bytes: &[u8], path: &Path) -> Result<IndexArchive> {
    if bytes.len() < ARCHIVE_MAGIC.len() || bytes[..8] != ARCHIVE_MAGIC {
        return Err(NhqError::BadMagic);
    }
    if bytes.len() < 12 {
        return Err(NhqError::Format {
            path: path.to_path_buf(),
            offset: 8,
            message: "archive ends before the version field".into(),
        });
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != ARCHIVE_VERSION {
        return Err(NhqError::VersionMismatch {
            found: version,
            expected: ARCHIVE_VERSION,
        });
    }
    if bytes.len() < 12 + CHECKSUM_LEN {
        return Err(NhqError::ChecksumMismatch);
    }
    let (body, sum) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    if Sha256::digest(body).as_slice() != sum {
        return Err(NhqError::ChecksumMismatch);
    }

    let mut r = Reader { buf: body, pos: 12, path };
    let builder = match r.u8()? {
        0 => BuilderKind::Threshold,
        1 => BuilderKind::NpgNsw,
        2 => BuilderKind::NpgKgraph,
        3 => BuilderKind::Manual,
        b => return Err(r.err(format!("unknown builder code {b}"))),
    };
    let meta = BuildMeta {
        builder,
        k: r.u32()?,
        l: r.u32()?,
        quality_threshold: r.f64()?,
        theta_prime: r.f64()?,
        seed: r.u64()?,
        degree_bounded: r.u8()? != 0,
        rounds: r.u32()?,
        estimated_quality: r.f64()?,
    };
    let tag = r.u8()?;
    let (wv, wa) = (r.f64()?, r.f64()?);
    let mode = match tag {
        0 => DistanceMode::Euclidean,
        1 => DistanceMode::Fusion(FusionWeights::Recommended),
        2 => DistanceMode::Fusion(FusionWeights::Fixed { vector: wv, attribute: wa }),
        t => return Err(r.err(format!("unknown distance mode {t}"))),
    };
    let ncols = r.u32()? as usize;
    let mut columns = Vec::new();
    for _ in 0..ncols {
        let name = r.str()?;
        let nv = r.u32()? as usize;
        let values = (0..nv).map(|_| r.str()).collect::<Result<_>>()?;
        columns.push(AttributeColumn { name, values });
    }
    let n = r.u64()? as usize;
    let dim = r.u32()? as usize;
    let attr_dim = r.u32()? as usize;
    let degree_bound = r.u32()? as usize;
    let mut adjacency = Vec::new();
    for _ in 0..n {
        let deg = r.u32()? as usize;
        let raw = r.take(deg.checked_mul(4).ok_or_else(|| r.err("degree overflow"))?)?;
        adjacency.push(
            raw.chunks_exact(4)
                .map(|c| NodeId::from_le_bytes(c.try_into().unwrap()))
                .collect::<Vec<_>>(),
        );
    }
    if r.pos != body.len() {
        return Err(r.err("trailing bytes after adjacency"));
    }
    let graph = CompositeGraph::new(adjacency, degree_bound, mode, meta)?;
    Ok(IndexArchive {
        graph,
        schema: AttributeSchema { columns },
        dim,
        attr_dim,
    })
}

pub fn save_index(path: impl AsRef<Path>, a: &IndexArchive) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_index(a)).map_err(|e| NhqError::io(path, e))
}

pub fn load_index(path: impl AsRef<Path>) -> Result<IndexArchive> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| NhqError::io(path, e))?;
    decode_index(&bytes, path)
}
