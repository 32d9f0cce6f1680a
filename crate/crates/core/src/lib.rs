//! Exact polynomial algebra, universal Gröbner bases of graph toric ideals,
//! and a key-establishment protocol built on them.

pub mod digest;
pub mod error;
pub mod feasibility;
pub mod field;
pub mod groebner;
pub mod keys;
pub mod monomial;
pub mod monoset;
pub mod poly;
pub mod protocol;
pub mod ring;
pub mod toric;
pub mod ugb;

pub use error::{Error, ErrorClass, Result};
pub use field::{Field, FieldElement, DEFAULT_PRIME};
pub use groebner::{buchberger, is_groebner_basis, normal_form, s_polynomial, GroebnerConfig};
pub use monomial::{cmp_monomials, Exponent, MonomialOrder};
pub use monoset::{in_mk, min_mono_gens, MonomialSet};
pub use poly::{Polynomial, Term};
pub use ring::RingContext;
pub use keys::{canonical_key, GrobnerKey, KeyList};
pub use ugb::{
    enumerate_keys, selection_feasible, trim, verify_gb_under_order, EnumerationConfig,
    EnumerationMode, TermSelection, UniversalBasis,
};
