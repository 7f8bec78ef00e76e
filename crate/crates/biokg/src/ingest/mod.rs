//! Structured-source ingestion: descriptors, canonicalizers and record
//! normalization.

pub mod concept;
pub mod descriptor;
pub mod record;

pub use concept::{normalize_ec, ConceptKey, ConceptKind};
pub use descriptor::{
    load_descriptor, ConceptExtractor, RelationField, ResolveBy, SourceDescriptor,
};
pub use record::{
    ingest_source, normalize_record, EntityDocument, IngestReport, NormalizeWarnings, RawRecord,
    RecordReader, Relation, RelationTarget,
};
