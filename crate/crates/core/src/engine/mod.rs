//! Query answering.
//!
//! Every ground atom is resolved by a fixed precedence: the argument types
//! must hold first, then the first tier that yields a value wins:
//!
//! 1. fuzzy fact
//! 2. truth function (arity 1, numeric argument inside the function span)
//! 3. rules, in declaration order
//! 4. conditioned defaults, in declaration order
//! 5. general default
//!
//! A lower tier is only consulted when every higher tier produced nothing
//! for that particular atom.

mod solve;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use solve::{Comparator, Constraint, Query, Solutions};

use crate::model::{Constant, FuzzyRule, PredicateKey, Program, Term, TruthValue};
use crate::parser::{validate, Diagnostic};

pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

/// Where an answer's truth value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Fact,
    Function,
    Rule,
    ConditionedDefault,
    GeneralDefault,
}

impl Tier {
    pub const ORDER: [Tier; 5] = [
        Tier::Fact,
        Tier::Function,
        Tier::Rule,
        Tier::ConditionedDefault,
        Tier::GeneralDefault,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Fact => "fact",
            Tier::Function => "function",
            Tier::Rule => "rule",
            Tier::ConditionedDefault => "conditionedDefault",
            Tier::GeneralDefault => "generalDefault",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub tv: TruthValue,
    pub source: Tier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Answer {
    /// Query variables in first-occurrence order.
    pub bindings: Vec<(String, Constant)>,
    pub tv: TruthValue,
    pub source: Tier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionTrace {
    pub key: PredicateKey,
    pub args: Vec<Constant>,
    pub tiers_tried: Vec<Tier>,
    pub outcome: Option<Resolved>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("{0} is not a declared fuzzy predicate")]
    NotFuzzy(PredicateKey),
    #[error("{key} expects {expected} arguments, got {got}")]
    Arity {
        key: PredicateKey,
        expected: usize,
        got: usize,
    },
    #[error("recursive rules loop on {0}")]
    Cycle(String),
    #[error("resolution depth limit of {0} exceeded")]
    DepthLimit(usize),
}

impl EngineError {
    /// Resource errors abort evaluation; the others reject the query.
    pub fn is_resource(&self) -> bool {
        matches!(self, EngineError::Cycle(_) | EngineError::DepthLimit(_))
    }
}

fn show_atom(key: &PredicateKey, args: &[Constant]) -> String {
    let parts: Vec<String> = args.iter().map(ToString::to_string).collect();
    format!("{}({})", key.name, parts.join(", "))
}

/// Evaluates queries against a validated program.
#[derive(Debug, Clone)]
pub struct Engine<'p> {
    program: &'p Program,
    depth_limit: usize,
}

/// Atoms currently being resolved on this call path.
#[derive(Default)]
struct Stack {
    active: HashSet<(PredicateKey, Vec<Constant>)>,
}

impl<'p> Engine<'p> {
    /// Validates `program` and wraps it for querying.
    pub fn new(program: &'p Program) -> Result<Self, Vec<Diagnostic>> {
        let errors: Vec<Diagnostic> = validate(program).into_iter().filter(Diagnostic::is_error).collect();
        if errors.is_empty() {
            Ok(Engine {
                program,
                depth_limit: DEFAULT_DEPTH_LIMIT,
            })
        } else {
            Err(errors)
        }
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = limit.max(1);
        self
    }

    pub fn program(&self) -> &'p Program {
        self.program
    }

    fn check_call(&self, key: &PredicateKey, args: &[Constant]) -> Result<(), EngineError> {
        if !self.program.is_fuzzy(key) {
            return Err(EngineError::NotFuzzy(key.clone()));
        }
        if args.len() != key.arity {
            return Err(EngineError::Arity {
                key: key.clone(),
                expected: key.arity,
                got: args.len(),
            });
        }
        Ok(())
    }

    /// Truth value of the ground atom `key(args)`, or `None` when no tier
    /// answers.
    pub fn truth_of(&self, key: &PredicateKey, args: &[Constant]) -> Result<Option<Resolved>, EngineError> {
        self.check_call(key, args)?;
        self.resolve(key, args, &mut Stack::default(), false, &mut None)
            .map(|r| r.into_iter().next())
    }

    /// Every answer for a ground atom: one per succeeding rule when the
    /// rule tier applies, otherwise at most one.
    pub(crate) fn all_answers(&self, key: &PredicateKey, args: &[Constant]) -> Result<Vec<Resolved>, EngineError> {
        self.resolve(key, args, &mut Stack::default(), true, &mut None)
    }

    /// The tiers consulted for `key(args)` and their outcome.
    pub fn explain(&self, key: &PredicateKey, args: &[Constant]) -> Result<ResolutionTrace, EngineError> {
        self.check_call(key, args)?;
        let mut tried = Some(Vec::new());
        let outcome = self
            .resolve(key, args, &mut Stack::default(), false, &mut tried)?
            .into_iter()
            .next();
        Ok(ResolutionTrace {
            key: key.clone(),
            args: args.to_vec(),
            tiers_tried: tried.unwrap_or_default(),
            outcome,
        })
    }

    fn type_guard(&self, key: &PredicateKey, args: &[Constant]) -> bool {
        let sig = self.program.signature(key).expect("caller checked the signature");
        sig.argument_types()
            .iter()
            .zip(args)
            .all(|(ty, arg)| self.program.holds(ty, std::slice::from_ref(arg)))
    }

    fn resolve(
        &self,
        key: &PredicateKey,
        args: &[Constant],
        stack: &mut Stack,
        every_rule: bool,
        tried: &mut Option<Vec<Tier>>,
    ) -> Result<Vec<Resolved>, EngineError> {
        if !self.type_guard(key, args) {
            return Ok(vec![]);
        }
        let mut mark = |tier| {
            if let Some(t) = tried.as_mut() {
                t.push(tier);
            }
        };
        let one = |tv, source| Ok(vec![Resolved { tv, source }]);

        mark(Tier::Fact);
        if let Some(tv) = self.program.fuzzy_fact(key, args) {
            return one(tv, Tier::Fact);
        }

        mark(Tier::Function);
        if let (Some(func), [arg]) = (self.program.function(key), args) {
            if let Some(tv) = arg.as_number().and_then(|x| func.eval(x).ok()) {
                return one(tv, Tier::Function);
            }
        }

        mark(Tier::Rule);
        let rules = self.program.rules_for(key);
        if !rules.is_empty() {
            let frame = (key.clone(), args.to_vec());
            if stack.active.contains(&frame) {
                return Err(EngineError::Cycle(show_atom(key, args)));
            }
            if stack.active.len() >= self.depth_limit {
                return Err(EngineError::DepthLimit(self.depth_limit));
            }
            stack.active.insert(frame.clone());
            let mut found = Vec::new();
            let mut outcome = Ok(());
            for rule in rules {
                match self.eval_rule_in(rule, args, stack) {
                    Ok(Some(tv)) => {
                        found.push(Resolved { tv, source: Tier::Rule });
                        if !every_rule {
                            break;
                        }
                    }
                    Ok(None) => {}
                    Err(e) => {
                        outcome = Err(e);
                        break;
                    }
                }
            }
            stack.active.remove(&frame);
            outcome?;
            if !found.is_empty() {
                return Ok(found);
            }
        }

        mark(Tier::ConditionedDefault);
        for def in self.program.conditioned_defaults_for(key) {
            if def.condition.as_ref().is_some_and(|c| self.program.holds(c, args)) {
                return one(def.tv, Tier::ConditionedDefault);
            }
        }

        mark(Tier::GeneralDefault);
        if let Some(tv) = self.program.general_default(key) {
            return one(tv, Tier::GeneralDefault);
        }
        Ok(vec![])
    }

    /// Truth value of `rule` with its head variables bound to `args`.
    pub fn eval_rule(&self, rule: &FuzzyRule, args: &[Constant]) -> Result<Option<TruthValue>, EngineError> {
        self.eval_rule_in(rule, args, &mut Stack::default())
    }

    fn eval_rule_in(&self, rule: &FuzzyRule, args: &[Constant], stack: &mut Stack) -> Result<Option<TruthValue>, EngineError> {
        if args.len() != rule.head_vars.len() {
            return Err(EngineError::Arity {
                key: rule.head.clone(),
                expected: rule.head_vars.len(),
                got: args.len(),
            });
        }
        let mut env: HashMap<&str, &Constant> = HashMap::new();
        for (var, val) in rule.head_vars.iter().zip(args) {
            if let Some(prev) = env.insert(var, val) {
                if prev != val {
                    return Ok(None);
                }
            }
        }

        let mut values = Vec::with_capacity(rule.body.len());
        for atom in &rule.body {
            let ground: Vec<Constant> = atom
                .args
                .iter()
                .map(|t| match t {
                    Term::Const(c) => c.clone(),
                    Term::Var(v) => (*env.get(v.as_str()).expect("validated: body variables are bound by the head")).clone(),
                })
                .collect();
            if self.program.is_fuzzy(&atom.key) {
                match self.resolve(&atom.key, &ground, stack, false, &mut None)?.first() {
                    Some(r) => values.push(r.tv.value()),
                    None => return Ok(None),
                }
            } else if self.program.holds(&atom.key, &ground) {
                values.push(1.0);
            } else {
                return Ok(None);
            }
        }

        let Ok(body) = rule.body_op.apply(&values) else {
            return Ok(None);
        };
        let result = match rule.credibility {
            Some(cred) => cred.op.apply(&[cred.value.value(), body.value()]).ok(),
            None => Some(body),
        };
        // mirrors the generated `_1 >= 0, _1 =< 1` guard: out of range fails
        Ok(result.and_then(|tv| TruthValue::new(tv.value()).ok()))
    }

    pub fn solve(&self, query: &Query) -> Result<Solutions<'_, 'p>, EngineError> {
        Solutions::new(self, query)
    }
}
