//! Constellation design and evaluation toolkit.
//!
//! Generates classical and spiral constellations, measures their geometry,
//! estimates symbol error rates by seeded Monte Carlo over AWGN and flat
//! Rayleigh fading, scores designs under a power-amplifier energy model, and
//! searches for new point sets with particle swarm and genetic algorithms.

pub mod channel;
pub mod constellation;
pub mod energy;
pub mod error;
pub mod info;
pub mod io;
pub mod metrics;
pub mod optim;
pub mod rng;
pub mod schemes;
pub mod simulate;
pub mod special;

pub use channel::{apply_channel, ml_detect, sample_symbols, ChannelModel, Received};
pub use constellation::{make_constellation, normalize_energy, ComplexPoint, Constellation};
pub use energy::{
    composite_score, consumed_power, energy_per_success, pa_efficiency, power_efficiency_score, rank_designs,
    DesignEntry, EnergyReport, PaModel, RankedDesign, ScoreWeights,
};
pub use error::{Error, Result};
pub use info::{mutual_information, MiEstimate};
pub use metrics::{
    analytic_ser, distance_spectrum, mean_distance, min_distance, papr_db, papr_linear, union_bound_ser,
    AnalyticScheme, DistanceSpectrum, SnrSpec,
};
pub use optim::{
    energy_aware_fitness, fitness, ga_optimize, pso_optimize, FitnessWeights, GaConfig, OptimizerTrace, PsoConfig,
};
pub use rng::{derive_stream, RngStream};
pub use schemes::{generate, simulated_catalog, Scheme, SchemeSpec};
pub use simulate::{
    confidence_interval, estimate_ser, rayleigh_penalty, run_sweep, SerPoint, SnrGrid, SweepConfig, SweepResult,
    SweepRow,
};
