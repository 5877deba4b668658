//! An interpreter for RFuzzy, a Prolog-flavoured fuzzy logic programming
//! language.
//!
//! Programs declare typed predicates whose truth values in `[0,1]` come from
//! fuzzy facts, piecewise-linear truth functions, rules combining other
//! predicates through aggregation operators, and default values. Queries
//! return concrete individuals together with their truth values.
//!
//! ```
//! use rfuzzy::{cli::parse_query, engine::Engine, parser::{load, SourceUnit}};
//!
//! let src = SourceUnit::new("cars.rfz", "
//!     :- set_prop expensive_car/1 => car/1.
//!     :- default(expensive_car/1, 0.5).
//!     car(vw_caddy). car(alfa_romeo_gt).
//!     expensive_car(alfa_romeo_gt) value 0.6 .
//! ");
//! let (program, _warnings) = load(&[src]).unwrap();
//! let engine = Engine::new(&program).unwrap();
//! let query = parse_query("expensive_car(X, V), V > 0.55").unwrap();
//! let answers: Vec<_> = engine.solve(&query).unwrap().collect::<Result<_, _>>().unwrap();
//! assert_eq!(answers.len(), 1);
//! assert_eq!(answers[0].tv.value(), 0.6);
//! ```

pub mod aggregation;
pub mod cli;
pub mod engine;
pub mod model;
pub mod parser;

pub use engine::{Answer, Engine, EngineError, Query, Tier};
pub use model::{Constant, PredicateKey, Program, TruthValue};
pub use parser::{format_program, load, parse_program, validate, Diagnostic, SourceUnit};
