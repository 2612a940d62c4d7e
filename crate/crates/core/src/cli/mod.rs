//! Front-end plumbing: the algebra document format, reports and DOT export.

pub mod document;
pub mod dot;
pub mod report;

pub use document::{
    parse_algebra, parse_document, serialize_algebra, AlgebraDocument, DocumentError,
};
pub use dot::export_dot;
pub use report::{build_report, from_json, render_text, to_json, Report, SCHEMA};

#[cfg(test)]
mod tests;
