//! Finite orders, finite lattices and their congruences, plus a construction
//! that realizes any finite bounded order `P` as the order of principal
//! congruences of a lattice `K`.
//!
//! ```
//! use princ::{verify_theorem, BoundedPoset, Poset, Templates};
//!
//! let p = Poset::from_covers(&["0", "p", "q", "1"], &[("0", "p"), ("p", "q"), ("q", "1")]).unwrap();
//! let p = BoundedPoset::new(p).unwrap();
//! let report = verify_theorem(&p, &Templates::builtin().unwrap());
//! assert!(report.passed());
//! ```

pub mod congruence;
pub mod construction;
pub mod dot;
pub mod enumerate;
pub mod error;
pub mod fuzz;
pub mod io;
pub mod lattice;
pub mod order;
pub mod random;

pub use congruence::{
    all_congruences, generated_congruence, is_i_congruence, join_congruences, princ_order,
    principal_congruence, valuation, ConOrder, Congruence, PrincOrder, Valuation,
};
pub use construction::{
    assemble_k, base, beta_h, phi, verify_theorem, Construction, IsoCorrespondence, Report,
    TemplateKind, Templates,
};
pub use error::{Error, Result};
pub use lattice::{lattice_iso, FiniteLattice, IntervalEdge};
pub use order::{order_iso, BoundedPoset, DownSet, Poset};
