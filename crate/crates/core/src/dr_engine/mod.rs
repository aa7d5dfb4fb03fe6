//! Distance-rationalizable rules, direct rule implementations used as
//! oracles, identity checks, tie-region estimation and consensus diagnostics.

mod boundary;
mod diagnostics;
mod grammar;
mod identity;
mod oracles;
mod outcome;
mod rule;

pub use boundary::{
    boundary_fraction, boundary_membership, chunk_rng, sample_profile, BoundaryEstimate, Sampler,
    BOUNDARY_CHUNK,
};
pub use diagnostics::{
    consensus_diagnostics, half_half, Check, CheckResult, DiagnosticBounds, DiagnosticsReport,
    Witness,
};
pub use grammar::{parse_consensus, parse_rule, parse_rule_with};
pub use identity::{
    check_identity, check_identity_sampled, IdentityReport, Mismatch, CLASSICAL_IDENTITIES,
};
pub use oracles::{oracle_rule, OracleKind};
pub use outcome::{Objective, RuleOutcome};
pub use rule::{
    corner_distance, dr_outcome, simplex_lp_closed_form, simplex_lp_rule, tournament_score,
    DistanceSpec, DrRule, Rule, RuleSpec,
};
