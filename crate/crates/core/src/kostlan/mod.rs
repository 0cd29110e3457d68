//! The Gaussian ensemble of real sections on products of projective spaces.

mod basis;
mod grid;
mod jet;
mod norm;
mod point;
mod poly;
mod rng;
mod section;
mod serial;

pub use basis::{BasisSet, MonomialBasis, BASIS_ORDERING};
pub use grid::{compass_minimize, grid_minimize, search_grid, SearchParams, MIN_RESOLUTION};
pub use jet::{
    bergman_diagonal, eval_component, eval_grad_component, evaluate, first_order_peak_coeffs, first_order_peak_section,
    frame_constant, jet_evaluate, peak_coordinates, peak_section, peak_section_coeffs, pointwise_c1_sq,
    pointwise_scale, Jet, JetFrame,
};
pub use norm::{c1_norm, C1Norm};
pub use point::{RealPoint, TangentVector};
pub use poly::RawPoly;
pub use rng::{sample, sample_with, RngSeed, COEFF_STD};
pub use section::SectionSystem;
pub use serial::{read_binary_records, read_records, read_text_records, SectionRecord};
