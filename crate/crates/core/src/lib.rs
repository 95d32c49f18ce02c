//! Numerical workbench for the canonical linear connections of Finsler geometry.
pub mod connections;
pub mod curvature;
pub mod geometry;
pub mod identities;
pub mod jets;
pub mod linalg;
pub mod metric;
pub mod scalar;
pub mod tensor;

pub use connections::{ConnectionData, ConnectionKind, Direction};
pub use geometry::{ChartPoint, FrameData, FrameJets, GeometryError, Sampler};
pub use identities::{
    catalog, check_all, check_identity, coverage_manifest, find, CheckError, CheckOptions, CheckReport,
    IdentityDescriptor, IdentityResult, Status,
};
pub use jets::{seed_variables, Jet, JetError, Layout, MultiIndex};
pub use metric::{builtin_metric, parse_expr, parse_metric, ExprNode, Family, MetricError, MetricSpec};
pub use scalar::Scalar;
pub use tensor::{PiTensor, Slot, TensorField};

pub type Jet64 = Jet<f64>;
pub type Jet32 = Jet<f32>;
pub type ChartPoint64 = ChartPoint<f64>;
pub type FrameJets64 = FrameJets<f64>;
