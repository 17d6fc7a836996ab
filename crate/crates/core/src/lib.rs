//! Divisor classes on blow-ups of projective space at general points:
//! Cremona action, `(-1)` class recognition, Weyl orbit census, expected
//! dimensions of linear systems and a finite-field `h⁰` oracle.

pub mod classify;
pub mod cremona;
pub mod dimension;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod oracle;
pub mod orbit;

pub use classify::{
    base_locus_peel, classify_minus_one, cremona_reduce, dolgachev_shape_check, numeric_minus_one,
    pairing_obstruction, ClassificationResult, Obstruction, ObstructionSearch, PeelResult,
    ReduceOutcome, ReduceStatus, Verdict,
};
pub use cremona::{
    apply_word, cremona_apply, invert_word, noether_indices, simple_reflection, IndexSet, WeylWord,
};
pub use dimension::{ghh_expected_dim, rnc_expected_dim, rnc_strata, stratum_data, ConeStratum};
pub use error::{binom, Error, Result};
pub use lattice::{
    adeg, chi, cone, degree, mukai_pairing, parse_divisor, planar_conditions, planar_genus,
    DivisorClass, PlanarConditions,
};
pub use oracle::{cremona_h0_check, h0_dimension, h0_dimension_with, H0Result, OracleOptions};
pub use orbit::{
    enumerate, enumerate_with_budget, verify_table, CanonicalForm, OrbitEntry, OrbitTable,
};
