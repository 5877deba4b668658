use std::collections::VecDeque;
use std::fmt;

use super::{Answer, Engine, EngineError};
use crate::model::{BodyAtom, Constant, PredicateKey, Term, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Comparator {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Eq => lhs == rhs,
        }
    }

    /// The comparator with its operands swapped: `a op b` iff `b op.flip() a`.
    pub fn flip(self) -> Self {
        match self {
            Comparator::Lt => Comparator::Gt,
            Comparator::Le => Comparator::Ge,
            Comparator::Gt => Comparator::Lt,
            Comparator::Ge => Comparator::Le,
            Comparator::Eq => Comparator::Eq,
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparator::Lt => "<",
            Comparator::Le => "=<",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::Eq => "=",
        })
    }
}

/// A bound on the goal's truth value, compared exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub op: Comparator,
    pub bound: TruthValue,
}

impl Constraint {
    pub fn accepts(&self, tv: TruthValue) -> bool {
        self.op.holds(tv.value(), self.bound.value())
    }
}

/// A goal over subject arguments plus constraints on its truth value.
///
/// Variables named `_` are anonymous: each occurrence is independent and
/// none is reported in answers.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub goal: BodyAtom,
    /// Name of the truth-value variable, for display.
    pub truth_var: Option<String>,
    pub constraints: Vec<Constraint>,
}

impl Query {
    pub fn new(goal: BodyAtom) -> Self {
        Query {
            goal,
            truth_var: None,
            constraints: Vec::new(),
        }
    }

    pub fn with_constraint(mut self, op: Comparator, bound: TruthValue) -> Self {
        self.constraints.push(Constraint { op, bound });
        self
    }
}

struct Slot {
    name: Option<String>,
    positions: Vec<usize>,
    candidates: Vec<Constant>,
}

/// Lazily enumerated answers to a [`Query`].
///
/// Instantiations of the query variables are visited in type declaration
/// order with the leftmost variable varying slowest.
pub struct Solutions<'e, 'p> {
    engine: &'e Engine<'p>,
    key: PredicateKey,
    template: Vec<Option<Constant>>,
    slots: Vec<Slot>,
    odometer: Vec<usize>,
    constraints: Vec<Constraint>,
    pending: VecDeque<Answer>,
    done: bool,
}

impl<'e, 'p> Solutions<'e, 'p> {
    pub(super) fn new(engine: &'e Engine<'p>, query: &Query) -> Result<Self, EngineError> {
        let program = engine.program();
        let key = &query.goal.key;
        let sig = program.signature(key).ok_or_else(|| EngineError::NotFuzzy(key.clone()))?;

        let mut slots: Vec<Slot> = Vec::new();
        let mut template = Vec::with_capacity(key.arity);
        for (pos, term) in query.goal.args.iter().enumerate() {
            match term {
                Term::Const(c) => template.push(Some(c.clone())),
                Term::Var(v) => {
                    template.push(None);
                    let named = (v != "_").then(|| v.clone());
                    match slots.iter_mut().find(|s| named.is_some() && s.name == named) {
                        Some(slot) => slot.positions.push(pos),
                        None => slots.push(Slot {
                            name: named,
                            positions: vec![pos],
                            candidates: program
                                .individuals_of_type(&sig.argument_types()[pos])
                                .into_iter()
                                .cloned()
                                .collect(),
                        }),
                    }
                }
            }
        }
        let done = slots.iter().any(|s| s.candidates.is_empty());
        Ok(Solutions {
            engine,
            key: key.clone(),
            template,
            odometer: vec![0; slots.len()],
            slots,
            constraints: query.constraints.clone(),
            pending: VecDeque::new(),
            done,
        })
    }

    fn advance(&mut self) {
        for i in (0..self.odometer.len()).rev() {
            self.odometer[i] += 1;
            if self.odometer[i] < self.slots[i].candidates.len() {
                return;
            }
            self.odometer[i] = 0;
        }
        self.done = true;
    }

    fn step(&mut self) -> Result<(), EngineError> {
        let mut args = self.template.clone();
        for (slot, &i) in self.slots.iter().zip(&self.odometer) {
            for &pos in &slot.positions {
                args[pos] = Some(slot.candidates[i].clone());
            }
        }
        let args: Vec<Constant> = args.into_iter().map(|a| a.expect("every position filled")).collect();
        let bindings: Vec<(String, Constant)> = self
            .slots
            .iter()
            .zip(&self.odometer)
            .filter_map(|(slot, &i)| slot.name.clone().map(|n| (n, slot.candidates[i].clone())))
            .collect();
        self.advance();

        for r in self.engine.all_answers(&self.key, &args)? {
            if self.constraints.iter().all(|c| c.accepts(r.tv)) {
                self.pending.push_back(Answer {
                    bindings: bindings.clone(),
                    tv: r.tv,
                    source: r.source,
                });
            }
        }
        Ok(())
    }
}

impl Iterator for Solutions<'_, '_> {
    type Item = Result<Answer, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(a) = self.pending.pop_front() {
                return Some(Ok(a));
            }
            if self.done {
                return None;
            }
            if let Err(e) = self.step() {
                self.done = true;
                return Some(Err(e));
            }
        }
    }
}
