//! Bounded fitting of EL queries (ELQs) with a SAT back-end, together with
//! refinement-operator baselines, simulation duals and PAC experiments.

pub mod bench;
pub mod duals;
pub mod encode;
pub mod fitloop;
pub mod model;
pub mod pac;
pub mod par;
pub mod refine;
pub mod saturate;
pub mod sim;
pub mod solver;
