//! Internals of the `hoqmc` binary: test integrands with closed-form
//! integrals, convergence/precision sweep drivers, slope fitting, and
//! deterministic CSV/JSON emission.

pub mod experiment;
pub mod functions;
pub mod output;
