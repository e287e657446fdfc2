//! Kumaraswamy-G minima and numerical checks of stochastic orderings.

pub mod error;
pub mod figures;
pub mod kwg;
pub mod majorization;
pub mod montecarlo;
pub mod numeric;
pub mod order_stats;
pub mod ordering;
pub mod parent;
pub mod scenario;
pub mod theorems;

pub use error::{Error, Result};
pub use kwg::KwGShape;
pub use majorization::{compare, in_d_plus, in_e_plus, MajorizationResult, ShapeVector};
pub use order_stats::{HeterogeneousSeries, MultipleOutlierSeries};
pub use parent::{
    make_exponential, make_uniform01, make_weibull, Parent, ParentDistribution, ParentSpec,
};
