//! Exact computations for Nichols algebras of Fomin–Kirillov type.
//!
//! * [`cyclotomic`]: roots of unity, `Q(ζ_N)` arithmetic and ranks.
//! * [`diagonal`]: diagonal braidings, Weyl groupoids, root systems, PBW data.
//! * [`cyclic_fk`]: the braidings `q_ij = ξ^i` of cyclic groups.
//! * [`reflection_groups`]: the groups `G(m,p,n)` and their Yetter–Drinfeld modules.
//! * [`symmetrizer`]: graded dimensions of Nichols algebras and quadratic covers.

pub mod cyclotomic;
pub mod diagonal;
pub mod cyclic_fk;
pub mod reflection_groups;
pub mod symmetrizer;
