//! Coxeter tournaments on complete signed graphs and their interchange
//! multigraphs.
//!
//! The library models orientations ("tournaments") of the complete signed
//! graphs of types `B_n`, `C_n`, `D_n` (plus classical `A`), enumerates the
//! fibers of tournaments with a fixed score sequence, builds the interchange
//! multigraph whose edges are neutral-generator reversals, and verifies the
//! structural facts that make lazy random walks on those graphs rapidly
//! mixing: degree regularity, connectivity with an explicit reversing
//! procedure, the diamond/crystal classification of two-step networks, and
//! exact one-step contraction of the coupled walks under a crystal-aware
//! reweighted metric. Everything runs in exact integer or rational
//! arithmetic at desk scale (n up to 4 or 5), so each claim is either
//! confirmed bit-for-bit or reported as falsified.
//!
//! Entry points:
//! - [`signed`]: complete signed graphs, tournaments, scores (half-units).
//! - [`generators`]: the generator catalog and copy enumeration.
//! - [`zframe`]: Z-frame encoding, neutral-trail decomposition, and the
//!   constructive reversing procedure.
//! - [`interchange`]: fibers, interchange graphs, networks and crystals.
//! - [`dynamics`]: lazy walks, exact total-variation mixing, couplings.
//! - [`verify`]: the batch check-suite behind `coxeter verify`.
//!
//! The `examples/` directory has one runnable program per capability; the
//! thin `coxeter` binary exposes the same functionality as subcommands.
//!
//! ```
//! use std::sync::Arc;
//! use coxeter_interchange::{CompleteSignedGraph, RootType, ScoreVector};
//! use coxeter_interchange::interchange::{enumerate_fiber, build_interchange_graph};
//! use coxeter_interchange::dynamics::{mixing_time_exact, WalkKernel};
//!
//! let graph = Arc::new(CompleteSignedGraph::new(RootType::C, 3)?);
//! assert_eq!(graph.standard_score().halves(), &[2, 4, 6]); // half-units
//!
//! let fiber = enumerate_fiber(&graph, &ScoreVector::zero(3), None)?;
//! assert_eq!(fiber.len(), 16);
//!
//! let ig = build_interchange_graph(&fiber)?;
//! assert_eq!(ig.degree, 7); // (|2s_std|^2 - 0) / 8
//!
//! let report = mixing_time_exact(&WalkKernel::new(Arc::new(ig)))?;
//! assert_eq!(report.t_mix, 5);
//! # Ok::<(), coxeter_interchange::Error>(())
//! ```

pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod interchange;
pub mod iso;
pub mod networks;
pub mod rng;
pub mod signed;
pub mod verify;
pub mod zframe;

pub use error::{Error, Result};
pub use signed::{
    degree_formula, CompleteSignedGraph, Game, GameId, GameKind, RootType, ScoreVector,
    SubTournament, Tournament,
};
