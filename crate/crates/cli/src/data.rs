use std::path::Path;

use anyhow::Result;
use nhq::io::{flatten, read_attributes, read_fvecs};
use nhq::{AttributeSchema, CompositeGraph, DistanceMode, IndexArchive, NhqError, ObjectSet, Query};

/// Reads object vectors and, when given, their attribute table. With a
/// schema the table must use exactly its columns and values.
pub fn load_objects(
    vectors: &Path,
    attributes: Option<&Path>,
    schema: Option<&AttributeSchema>,
) -> Result<(ObjectSet, AttributeSchema)> {
    let rows = read_fvecs(vectors)?;
    if rows.is_empty() {
        return Err(NhqError::Data(format!("{} holds no vectors", vectors.display())).into());
    }
    let (dim, flat) = flatten(&rows);
    let Some(path) = attributes else {
        return Ok((ObjectSet::from_vectors(dim, flat)?, AttributeSchema::default()));
    };
    let (attrs, schema) = read_attributes(path, schema)?;
    if attrs.len() != rows.len() {
        return Err(NhqError::Data(format!(
            "{} has {} rows but {} has {} vectors",
            path.display(),
            attrs.len(),
            vectors.display(),
            rows.len()
        ))
        .into());
    }
    let set = ObjectSet::new(dim, flat, attrs.concat(), schema.cardinalities())?;
    Ok((set, schema))
}

/// Reads query vectors, plus attributes encoded with the objects' schema
/// when the object set has attributes.
pub fn load_queries(vectors: &Path, attributes: Option<&Path>, set: &ObjectSet, schema: &AttributeSchema) -> Result<Vec<Query>> {
    let rows = read_fvecs(vectors)?;
    let (dim, flat) = flatten(&rows);
    if !rows.is_empty() && dim != set.dim() {
        return Err(NhqError::DimensionMismatch {
            expected: set.dim(),
            found: dim,
        }
        .into());
    }
    if set.attr_dim() == 0 {
        if attributes.is_some() {
            log::warn!("ignoring --query-attributes: the objects carry no attributes");
        }
        return Ok(rows.into_iter().map(Query::vector_only).collect());
    }
    let Some(path) = attributes else {
        return Err(NhqError::Usage("--query-attributes is required when the objects carry attributes".into()).into());
    };
    let (attrs, _) = read_attributes(path, Some(schema))?;
    if attrs.len() != rows.len() {
        return Err(NhqError::Data(format!(
            "{} has {} rows for {} query vectors",
            path.display(),
            attrs.len(),
            rows.len()
        ))
        .into());
    }
    Ok(Query::batch(set.dim(), &flat, set.attr_dim(), &attrs.concat())?)
}

/// Checks that an archive was built over `set`. Euclidean graphs only
/// constrain the vectors, so they may be searched with or without the
/// attribute table loaded.
pub fn check_index(archive: &IndexArchive, set: &ObjectSet) -> Result<()> {
    archive.graph.check_aligned(set)?;
    match archive.graph.mode() {
        DistanceMode::Fusion(_) => archive.check_set(set)?,
        DistanceMode::Euclidean if archive.dim != set.dim() => {
            return Err(NhqError::DimensionMismatch {
                expected: archive.dim,
                found: set.dim(),
            }
            .into())
        }
        DistanceMode::Euclidean => {}
    }
    Ok(())
}

/// The attribute schema shared by a set of archives, if any has one.
pub fn common_schema<'a>(archives: impl IntoIterator<Item = &'a IndexArchive>) -> Result<Option<AttributeSchema>> {
    let mut found: Option<&AttributeSchema> = None;
    for a in archives {
        if a.schema.is_empty() {
            continue;
        }
        match found {
            Some(s) if s != &a.schema => {
                return Err(NhqError::Data("the given indexes were built with different attribute dictionaries".into()).into())
            }
            _ => found = Some(&a.schema),
        }
    }
    Ok(found.cloned())
}

pub fn builder_name(g: &CompositeGraph) -> &'static str {
    g.meta().builder.name()
}
