//! Structural analysis: Jordan types, the essentially-conformally-symmetric
//! predicate, Ricci recurrence, nilpotency and soliton residuals.

mod jordan;
mod soliton;
mod structure;

pub use jordan::{jordan_type, to_matrix, JordanTag, JordanType};
pub use soliton::{
    soliton_residual, walker_ricci_soliton_pde, RicciAnsatz, SolitonField, SolitonKind,
    SolitonSpec,
};
pub use structure::{
    ecs_from_pack, ecs_predicate, nilpotency_index, norm_squared, ricci_recurrence,
    riemann_derivatives, two_symmetric_check, EcsClass,
};
