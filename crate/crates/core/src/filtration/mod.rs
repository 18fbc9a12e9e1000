//! Filtered vector spaces: degree and slope, induced, dual and tensor
//! filtrations, one-parameter subgroups and their limits, semistability,
//! Harder–Narasimhan filtrations and a non-archimedean metric on flags.

mod metric;
mod one_param;
mod semistability;
mod space;

pub use metric::{flag_distance, FlagDistance};
pub use one_param::{filtration_from_1ps, is_fixed_by, ps_limit, Direction, OneParamSubgroup};
pub use semistability::{
    enumerate_subisocrystals, hm_candidates, hm_invariant, hm_semistable, hn_filtration, hn_filtration_with,
    is_semistable, is_semistable_with, SemistabilityVerdict, SubobjectList,
};
pub use space::{degree_and_slope, direct_sum, dual, filtration_pairing, tensor, FilteredSpace};
