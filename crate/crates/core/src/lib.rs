//! Finite-group combinatorics laboratory.
//!
//! Groups live as dense Cayley tables with the identity pinned at index 0;
//! subsets of a group are bit-vectors. On top of that sit the set-algebra
//! kernel (products, translates, covers), product-free set search and
//! constructions, irreducible character degrees over a prime field, and the
//! structure reports and audits that the CLI exposes.
//!
//! Every routine that consumes randomness takes an explicit 64-bit seed and
//! is reproducible bit-for-bit at any thread count.

// index loops mirror the (row, column) conventions of the table algebra
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod chartab;
pub mod classes;
pub mod group;
pub mod modp;
pub mod pfree;
pub mod ratio;
pub mod rng;
pub mod sets;
pub mod structure;
pub mod subgroup;

pub use catalog::{Catalog, CatalogError, DEFAULT_ORDER_CAP};
pub use chartab::{quasirandom_degree, ChartabError, DegreeTable};
pub use classes::{conjugacy_classes, ClassData};
pub use group::{Elem, Group, NotAGroup, Validation};
pub use pfree::{is_product_free, PfreeCertificate, PfreeMethod};
pub use ratio::Ratio;
pub use sets::ElementSet;
pub use subgroup::{SubgroupDescriptor, SubgroupLattice};
