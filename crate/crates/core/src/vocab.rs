//! Namespace IRIs shared by the parser, the reasoner and the planner.

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const MATH: &str = "http://www.w3.org/2000/10/swap/math#";

pub const CARE: &str = "http://example.org/care#";
pub const DATA: &str = "http://example.org/data#";
pub const ACTION: &str = "http://example.org/action#";
pub const WST: &str = "http://example.org/wst#";

/// Synthesized provider for paths that contract nobody.
pub const NOT_NEEDED: &str = "http://example.org/care#Not_Needed";

/// Predicates whose facts make up the mutable situation of a workspace.
pub const DYNAMIC_PREDICATES: [&str; 4] = [
    "http://example.org/care#status",
    "http://example.org/care#needs",
    "http://example.org/care#resolution",
    "http://example.org/care#maxAssistanceDistance",
];

pub fn wst(local: &str) -> String {
    format!("{WST}{local}")
}
