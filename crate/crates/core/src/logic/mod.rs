//! Independent verification machinery: first-order formulas and a
//! brute-force model checker, Ehrenfeucht–Fraïssé games, the rewritings
//! between circular and linear successors, and the per-property verifier.

pub mod ef;
pub mod eval;
pub mod formula;
pub mod rewrite;
pub mod successor;
pub mod verify;

pub use ef::{ef_equivalent, ef_equivalent_with, EfOptions};
pub use eval::{model_check, model_check_with};
pub use formula::Formula;
pub use rewrite::{linsucc_to_succ, succ_to_linsucc};
pub use verify::{verify_certificate, verify_weave, Check, Status, VerificationReport, WeaveCertificate};
pub use successor::is_circular_successor;
