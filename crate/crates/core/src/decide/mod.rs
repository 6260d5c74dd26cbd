//! Window oracle, Baur–Monk invariants, sentence evaluation and universal forms.

mod invariant;
mod oracle;
mod sentence;
mod universal;
mod window;

pub use window::{atom_specs, window_matrix, AtomSpec, VarMode, Window, WindowSystem};
pub use oracle::{
    oracle_estimate, oracle_member, oracle_projection_basis, oracle_projection_dim, oracle_quotient, oracle_quotient_with, theta_invariant,
    Invariant, Membership, DEFAULT_SLACK,
};
pub use invariant::{
    formula_image, formula_signature, formulas_m_immediate, invariant, invariant_alpha, invariant_report, psi_matrix, InvariantReport,
};
pub use sentence::{evaluate_sentence, parse_sentence, CmpOp, Sentence};
pub use universal::{universalize, RohwerChecks, RohwerConfiguration};
