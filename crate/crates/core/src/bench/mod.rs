//! Verification harness: seeded ensembles, bound ratios under refinement
//! and hypothesis checks, written out as JSON and CSV.

pub mod commands;
mod config;
mod ensemble;
mod experiments;
mod functionals;
mod report;

pub use config::{
    quadratic_phase, AmplitudeSpec, Cont2Variant, ExperimentConfig, ExperimentKind, Reference, WeightSpecs,
};
pub use ensemble::{member_rng, AmplitudeFn, Packet, PacketSum, RawAtom, SparseCoefficients};
pub use experiments::{
    verify, verify_cont1, verify_cont2, verify_gabor_synthesis, verify_kernel_cont, verify_schatten_fio, DET_FLOOR,
};
pub use functionals::{amplitude_functionals, AmplitudeStft, Functional};
pub use report::{BoundReport, ChainCheck, Check, DetCheck, Flags, Hypothesis, MemberRatio, Series, Stats};
