use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("surface has no faces")]
    EmptySurface,

    #[error("vertex index {vertex} out of range (surface has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("edge {edge} is used by {slots} face sides (expected 2)")]
    NonManifoldEdge { edge: String, slots: usize },

    #[error("edge {edge} is traversed in the same direction by both adjacent faces")]
    OrientationMismatch { edge: String },

    #[error("edge {edge} endpoints disagree with its face sides")]
    EdgeEndpointMismatch { edge: usize },

    #[error("vertex {vertex} does not have a single disk neighbourhood ({cycles} corner cycles)")]
    NonManifoldVertex { vertex: usize, cycles: usize },

    #[error("triangulation is not connected")]
    Disconnected,

    #[error("edge {edge} cannot be flipped: both sides lie in the same face")]
    DegenerateFlip { edge: usize },

    #[error("edge index {edge} out of range (surface has {count} edges)")]
    EdgeOutOfRange { edge: usize, count: usize },

    #[error("expected {expected} {what}, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },

    #[error("non-positive or non-finite length {value} on edge {edge}")]
    InvalidLength { edge: usize, value: f64 },

    #[error("triangle inequality violated on face {face} (lengths {lengths:?})")]
    TriangleInequality { face: usize, lengths: [f64; 3] },

    #[error("triangle inequality violated for lengths ({0}, {1}, {2})")]
    InvalidTriangle(f64, f64, f64),

    #[error("edge {edge} is not Delaunay (cotangent sum {cot_sum:e})")]
    NotDelaunay { edge: usize, cot_sum: f64 },

    #[error("flip limit of {limit} exceeded while restoring the Delaunay property")]
    FlipLimit { limit: usize },

    #[error("total area {0:e} underflows")]
    AreaUnderflow(f64),

    #[error("Newton iteration limit {iterations} reached (gradient norm {grad_norm:e})")]
    IterationLimit { iterations: usize, grad_norm: f64 },

    #[error("line search failed at iteration {iteration}")]
    LineSearch { iteration: usize },

    #[error("conformal factor left the bound {bound} (|u| = {norm})")]
    Divergence { bound: f64, norm: f64 },

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid scan: {0}")]
    InvalidScan(String),
}
