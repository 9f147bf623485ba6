//! Cartan matrices, finite Weyl groups and parabolic coset machinery.

pub mod cartan;
pub mod nodes;
pub mod weyl;

pub use cartan::{cartan_matrix, CartanMatrix, RootType};
pub use nodes::{NodeSet, MAX_RANK};
pub use weyl::{
    generate_weyl_group, ElementId, ParabolicSubgroup, RootSystem, WeylElement, WeylGroup, DEFAULT_ORDER_CAP,
    ORDER_CAP_ENV,
};

/// Length of `w`.
pub fn length(group: &WeylGroup, w: ElementId) -> usize {
    group.length(w)
}

/// Minimal-length representative of `w W_S`.
pub fn min_coset_rep(group: &WeylGroup, w: ElementId, subset: NodeSet) -> ElementId {
    group.min_coset_rep(w, subset)
}
