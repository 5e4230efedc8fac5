//! Weisfeiler-Leman feature kernels for numeric planning tasks.
//!
//! A lifted task ([`Domain`] + [`Problem`]) and a [`State`] become a
//! node-featured, edge-labelled graph through [`IlgGenerator`]. A [`Kernel`]
//! refines node colours over that graph, and a [`FeatureModel`] turns the
//! refined colours into fixed-size embeddings for a whole [`Dataset`].
//!
//! ```
//! use wlkit::{pddl, FeatureModel, Kernel, KernelKind};
//!
//! let domain = pddl::parse_domain(
//!     "(define (domain d) (:predicates (on ?x ?y)) (:functions (load ?x)))",
//! )?;
//! let problem = pddl::parse_problem(
//!     "(define (problem p) (:domain d) (:objects a b)
//!        (:init (on a b) (= (load a) 1))
//!        (:goal (and (on b a) (>= (load a) 2))))",
//!     &domain,
//! )?;
//! let mut dataset = wlkit::Dataset::new(domain.clone());
//! dataset.entries.push(wlkit::DatasetEntry {
//!     states: vec![problem.initial_state().clone()],
//!     problem,
//!     labels: None,
//! });
//! let mut model = FeatureModel::new(domain, Kernel::new(KernelKind::Wl, 2));
//! model.collect(&dataset)?;
//! let rows = model.embed_dataset(&dataset)?;
//! assert_eq!(rows[0].len(), model.dimension());
//! # Ok::<(), wlkit::Error>(())
//! ```

pub mod error;
pub mod features;
pub mod graph;
pub mod ilg;
pub mod kernels;
pub mod pddl;
pub mod synth;
pub mod task_json;
pub mod task_model;

pub use error::{Error, Result, SourceSpan};
pub use features::{Dataset, DatasetEntry, DistinguishReport, Execution, FeatureModel, StateRef};
pub use graph::{Colour, EdgeLabel, Graph};
pub use ilg::{ColourTable, IlgGenerator, NodeColour, PropositionStatus, DEFAULT_NODE_BUDGET};
pub use kernels::{Aggregator, ColourMultiset, ColourRegistry, Kernel, KernelKind, KernelOutput};
pub use task_model::{
    BinaryOp, Comparator, Domain, Expr, GoalLiteral, GroundAtom, NumericCondition, Problem,
    ProblemBuilder, State, Symbol,
};
