//! Classification data for abelian contraction groups and contractivity
//! tests for their linear blocks.

mod abelian;
mod poly;
mod spec;

pub use abelian::{
    composition_data, element_order, iso_test, primary_decompose, stable_subgroup_locate, theta_x,
    CompositionData, NuEntry, NuTable,
};
pub use poly::{omega_p_contractive, rational_valuation, schur_cohn, RationalPoly, POLY_GRAMMAR};
pub use spec::{
    canonicalize_spec, is_contractive, spec_iso_test, test_name, Block, ContractionSpec, Place,
};
