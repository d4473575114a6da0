//! Tidy missing-data profiling.
//!
//! Tables whose cells are either present or missing, the shadow matrix and
//! nabular tables built from them, verbs to scan, replace, flag and impute
//! missing values while tracking where imputations happened, numerical
//! missingness summaries, and plot-data builders with SVG / text renderers.

pub mod augment;
pub mod cli;
pub mod error;
pub mod frame;
pub mod impute;
pub mod mechanisms;
pub mod plots;
pub mod replace;
pub mod shadow;
pub mod summaries;
pub mod table;

pub use error::{Error, Result};
pub use frame::Frame;
pub use shadow::{nabular, NabularTable, ShadowMatrix};
pub use table::{Column, NaTokenConfig, Table};
