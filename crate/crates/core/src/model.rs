//! Domain types of the language and the in-memory program database.
//!
//! A [`Program`] is assembled declaration by declaration through
//! [`Program::insert`]. Structural invariants (truth values in `[0,1]`,
//! ordered function points, signature shapes) are enforced by the
//! constructors here; cross-declaration checks such as "every fuzzy
//! predicate has a type signature" live in [`crate::parser::validate`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

/// A degree of truth in the closed interval `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TruthValue(f64);

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("truth value {0} is outside [0, 1]")]
pub struct OutOfRange(pub f64);

impl TruthValue {
    pub const ZERO: TruthValue = TruthValue(0.0);
    pub const ONE: TruthValue = TruthValue(1.0);

    pub fn new(value: f64) -> Result<Self, OutOfRange> {
        if (0.0..=1.0).contains(&value) {
            Ok(TruthValue(value))
        } else {
            Err(OutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TruthValue {
    type Error = OutOfRange;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        TruthValue::new(value)
    }
}

impl From<TruthValue> for f64 {
    fn from(tv: TruthValue) -> f64 {
        tv.0
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A ground term: a symbolic atom or a number.
///
/// Numbers compare by the exact bit pattern of the parsed double.
#[derive(Debug, Clone)]
pub enum Constant {
    Symbol(String),
    Number(f64),
}

impl Constant {
    pub fn symbol(text: impl Into<String>) -> Self {
        Constant::Symbol(text.into())
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Constant::Number(n) => Some(*n),
            Constant::Symbol(_) => None,
        }
    }
}

impl PartialEq for Constant {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Constant::Symbol(a), Constant::Symbol(b)) => a == b,
            (Constant::Number(a), Constant::Number(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Constant {}

impl Hash for Constant {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Constant::Symbol(s) => {
                0u8.hash(state);
                s.hash(state);
            }
            Constant::Number(n) => {
                1u8.hash(state);
                n.to_bits().hash(state);
            }
        }
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::Symbol(s.to_owned())
    }
}

impl From<f64> for Constant {
    fn from(n: f64) -> Self {
        Constant::Number(n)
    }
}

/// True when `text` can be written without quotes as a Prolog atom.
pub(crate) fn is_plain_atom(text: &str) -> bool {
    let mut chars = text.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn write_atom(f: &mut impl fmt::Write, text: &str) -> fmt::Result {
    if is_plain_atom(text) {
        f.write_str(text)
    } else {
        f.write_char('\'')?;
        for c in text.chars() {
            match c {
                '\'' => f.write_str("\\'")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\t' => f.write_str("\\t")?,
                c => f.write_char(c)?,
            }
        }
        f.write_char('\'')
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Symbol(s) => write_atom(f, s),
            Constant::Number(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateKey {
    pub name: String,
    pub arity: usize,
}

impl PredicateKey {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateKey {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.name)?;
        write!(f, "/{}", self.arity)
    }
}

/// Errors raised when a declaration violates its own shape invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("{target} has arity {arity} but {given} argument types were given")]
    SignatureLength {
        target: PredicateKey,
        arity: usize,
        given: usize,
    },
    #[error("type predicate {0} must have arity 1")]
    TypeArity(PredicateKey),
    #[error("fuzzy predicate {0} must have at least one argument")]
    ZeroArity(PredicateKey),
    #[error("{key} expects {expected} arguments, got {got}")]
    ArgCount {
        key: PredicateKey,
        expected: usize,
        got: usize,
    },
    #[error("a truth function needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("truth function x-coordinates must be strictly increasing ({prev} then {next})")]
    NotIncreasing { prev: f64, next: f64 },
    #[error("truth function x-coordinate {0} is not a finite number")]
    NonFinite(f64),
}

/// `:- set_prop pred/N => t1/1, ..., tN/1.`
#[derive(Debug, Clone, PartialEq)]
pub struct TypeSignature {
    target: PredicateKey,
    argument_types: Vec<PredicateKey>,
}

impl TypeSignature {
    pub fn new(target: PredicateKey, argument_types: Vec<PredicateKey>) -> Result<Self, ShapeError> {
        if target.arity == 0 {
            return Err(ShapeError::ZeroArity(target));
        }
        if argument_types.len() != target.arity {
            return Err(ShapeError::SignatureLength {
                arity: target.arity,
                given: argument_types.len(),
                target,
            });
        }
        if let Some(bad) = argument_types.iter().find(|t| t.arity != 1) {
            return Err(ShapeError::TypeArity(bad.clone()));
        }
        Ok(TypeSignature {
            target,
            argument_types,
        })
    }

    pub fn target(&self) -> &PredicateKey {
        &self.target
    }

    pub fn argument_types(&self) -> &[PredicateKey] {
        &self.argument_types
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrispFact {
    pub key: PredicateKey,
    pub args: Vec<Constant>,
}

impl CrispFact {
    pub fn new(name: impl Into<String>, args: Vec<Constant>) -> Self {
        CrispFact {
            key: PredicateKey::new(name, args.len()),
            args,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyFact {
    pub key: PredicateKey,
    pub args: Vec<Constant>,
    pub tv: TruthValue,
}

impl FuzzyFact {
    pub fn new(name: impl Into<String>, args: Vec<Constant>, tv: TruthValue) -> Result<Self, ShapeError> {
        let key = PredicateKey::new(name, args.len());
        if key.arity == 0 {
            return Err(ShapeError::ZeroArity(key));
        }
        Ok(FuzzyFact { key, args, tv })
    }
}

/// A piecewise-linear map from numbers to truth values given by its
/// inflexion points.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthFunction {
    key: PredicateKey,
    points: Vec<(f64, TruthValue)>,
}

impl TruthFunction {
    pub fn new(name: impl Into<String>, points: Vec<(f64, TruthValue)>) -> Result<Self, ShapeError> {
        if points.len() < 2 {
            return Err(ShapeError::TooFewPoints(points.len()));
        }
        if let Some(&(x, _)) = points.iter().find(|(x, _)| !x.is_finite()) {
            return Err(ShapeError::NonFinite(x));
        }
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(ShapeError::NotIncreasing {
                prev: w[0].0,
                next: w[1].0,
            });
        }
        Ok(TruthFunction {
            key: PredicateKey::new(name, 1),
            points,
        })
    }

    pub fn key(&self) -> &PredicateKey {
        &self.key
    }

    pub fn points(&self) -> &[(f64, TruthValue)] {
        &self.points
    }
}

/// Aggregation operators available to rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    Min,
    Max,
    Prod,
    Luka,
    DProd,
    DLuka,
    Complement,
}

impl Connective {
    pub const ALL: [Connective; 7] = [
        Connective::Min,
        Connective::Max,
        Connective::Prod,
        Connective::Luka,
        Connective::DProd,
        Connective::DLuka,
        Connective::Complement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Connective::Min => "min",
            Connective::Max => "max",
            Connective::Prod => "prod",
            Connective::Luka => "luka",
            Connective::DProd => "dprod",
            Connective::DLuka => "dluka",
            Connective::Complement => "complement",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Connective::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Constant),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BodyAtom {
    pub key: PredicateKey,
    pub args: Vec<Term>,
}

impl BodyAtom {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> Self {
        BodyAtom {
            key: PredicateKey::new(name, args.len()),
            args,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for BodyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.key.name)?;
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            a.fmt(f)?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Credibility {
    pub op: Connective,
    pub value: TruthValue,
}

/// `head(X, ...) [cred (op1, v)] :~ op2 body1, body2, ...`
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub head: PredicateKey,
    pub head_vars: Vec<String>,
    pub credibility: Option<Credibility>,
    pub body_op: Connective,
    pub body: Vec<BodyAtom>,
}

impl FuzzyRule {
    pub fn new(
        name: impl Into<String>,
        head_vars: Vec<String>,
        credibility: Option<Credibility>,
        body_op: Connective,
        body: Vec<BodyAtom>,
    ) -> Self {
        FuzzyRule {
            head: PredicateKey::new(name, head_vars.len()),
            head_vars,
            credibility,
            body_op,
            body,
        }
    }
}

/// `:- default(pred/N, tv).` or `:- default(pred/N, tv) => cond/N.`
///
/// A condition of the wrong arity is representable so that validation can
/// report it with a position.
#[derive(Debug, Clone, PartialEq)]
pub struct DefaultDecl {
    pub target: PredicateKey,
    pub tv: TruthValue,
    pub condition: Option<PredicateKey>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Declaration {
    Signature(TypeSignature),
    Crisp(CrispFact),
    Fuzzy(FuzzyFact),
    Function(TruthFunction),
    Rule(FuzzyRule),
    Default(DefaultDecl),
}

macro_rules! impl_from_decl {
    ($($ty:ident => $variant:ident),*) => {
        $(impl From<$ty> for Declaration {
            fn from(d: $ty) -> Self {
                Declaration::$variant(d)
            }
        })*
    };
}

impl_from_decl!(
    TypeSignature => Signature,
    CrispFact => Crisp,
    FuzzyFact => Fuzzy,
    TruthFunction => Function,
    FuzzyRule => Rule,
    DefaultDecl => Default
);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConflictError {
    #[error("{key} is already typed differently")]
    Signature { key: PredicateKey },
    #[error("{key}{args} already has truth value {existing}, cannot also be {new}", args = fmt_args(.args))]
    FuzzyFact {
        key: PredicateKey,
        args: Vec<Constant>,
        existing: TruthValue,
        new: TruthValue,
    },
    #[error("{key} already has a different truth function")]
    Function { key: PredicateKey },
    #[error("{key} already has general default {existing}, cannot also be {new}")]
    GeneralDefault {
        key: PredicateKey,
        existing: TruthValue,
        new: TruthValue,
    },
}

fn fmt_args(args: &[Constant]) -> String {
    let parts: Vec<String> = args.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Where a declaration came from in its source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub file: Arc<str>,
    pub line: usize,
    pub column: usize,
}

/// Identifies one declaration inside a [`Program`] for origin lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum DeclRef {
    Signature(PredicateKey),
    Crisp(PredicateKey, usize),
    Fuzzy(PredicateKey, Vec<Constant>),
    Function(PredicateKey),
    Rule(PredicateKey, usize),
    GeneralDefault(PredicateKey),
    ConditionedDefault(PredicateKey, usize),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct CrispRelation {
    rows: Vec<Vec<Constant>>,
    index: HashSet<Vec<Constant>>,
}

impl PartialEq for CrispRelation {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

/// A typed fuzzy knowledge base.
///
/// Equality is structural and ignores source origins.
#[derive(Debug, Clone, Default)]
pub struct Program {
    signatures: IndexMap<PredicateKey, TypeSignature>,
    crisp: IndexMap<PredicateKey, CrispRelation>,
    fuzzy_facts: IndexMap<PredicateKey, IndexMap<Vec<Constant>, TruthValue>>,
    functions: IndexMap<PredicateKey, TruthFunction>,
    rules: IndexMap<PredicateKey, Vec<FuzzyRule>>,
    general_defaults: IndexMap<PredicateKey, TruthValue>,
    conditioned_defaults: IndexMap<PredicateKey, Vec<DefaultDecl>>,
    origins: HashMap<DeclRef, Origin>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.signatures == other.signatures
            && self.crisp == other.crisp
            && self.fuzzy_facts == other.fuzzy_facts
            && self.functions == other.functions
            && self.rules == other.rules
            && self.general_defaults == other.general_defaults
            && self.conditioned_defaults == other.conditioned_defaults
    }
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns this program extended with `decl`.
    ///
    /// Identical repeats are accepted without change (crisp facts excepted,
    /// which form a multiset); contradictory ones are rejected.
    pub fn insert(mut self, decl: impl Into<Declaration>) -> Result<Program, ConflictError> {
        self.insert_at(decl.into(), None)?;
        Ok(self)
    }

    /// In-place insertion used while building from source. Checks for
    /// conflicts before touching any state.
    pub(crate) fn insert_at(&mut self, decl: Declaration, origin: Option<Origin>) -> Result<(), ConflictError> {
        let slot = match decl {
            Declaration::Signature(sig) => match self.signatures.get(&sig.target) {
                Some(existing) if *existing == sig => return Ok(()),
                Some(_) => return Err(ConflictError::Signature { key: sig.target }),
                None => {
                    let key = sig.target.clone();
                    self.signatures.insert(key.clone(), sig);
                    DeclRef::Signature(key)
                }
            },
            Declaration::Crisp(fact) => {
                let rel = self.crisp.entry(fact.key.clone()).or_default();
                rel.index.insert(fact.args.clone());
                rel.rows.push(fact.args);
                DeclRef::Crisp(fact.key, rel.rows.len() - 1)
            }
            Declaration::Fuzzy(fact) => {
                let existing = self.fuzzy_facts.get(&fact.key).and_then(|m| m.get(&fact.args));
                match existing {
                    Some(tv) if *tv == fact.tv => return Ok(()),
                    Some(tv) => {
                        return Err(ConflictError::FuzzyFact {
                            existing: *tv,
                            new: fact.tv,
                            key: fact.key,
                            args: fact.args,
                        })
                    }
                    None => {
                        self.fuzzy_facts
                            .entry(fact.key.clone())
                            .or_default()
                            .insert(fact.args.clone(), fact.tv);
                        DeclRef::Fuzzy(fact.key, fact.args)
                    }
                }
            }
            Declaration::Function(func) => match self.functions.get(&func.key) {
                Some(existing) if *existing == func => return Ok(()),
                Some(_) => return Err(ConflictError::Function { key: func.key }),
                None => {
                    let key = func.key.clone();
                    self.functions.insert(key.clone(), func);
                    DeclRef::Function(key)
                }
            },
            Declaration::Rule(rule) => {
                let list = self.rules.entry(rule.head.clone()).or_default();
                if list.contains(&rule) {
                    return Ok(());
                }
                let key = rule.head.clone();
                list.push(rule);
                DeclRef::Rule(key, list.len() - 1)
            }
            Declaration::Default(def) => match def.condition {
                None => match self.general_defaults.get(&def.target) {
                    Some(tv) if *tv == def.tv => return Ok(()),
                    Some(tv) => {
                        return Err(ConflictError::GeneralDefault {
                            existing: *tv,
                            new: def.tv,
                            key: def.target,
                        })
                    }
                    None => {
                        self.general_defaults.insert(def.target.clone(), def.tv);
                        DeclRef::GeneralDefault(def.target)
                    }
                },
                Some(_) => {
                    let list = self.conditioned_defaults.entry(def.target.clone()).or_default();
                    if list.contains(&def) {
                        return Ok(());
                    }
                    let key = def.target.clone();
                    list.push(def);
                    DeclRef::ConditionedDefault(key, list.len() - 1)
                }
            },
        };
        if let Some(origin) = origin {
            self.origins.insert(slot, origin);
        }
        Ok(())
    }

    pub(crate) fn origin(&self, decl: &DeclRef) -> Option<&Origin> {
        self.origins.get(decl)
    }

    /// Individuals of a unary type predicate in declaration order, without
    /// duplicates.
    pub fn individuals_of_type(&self, ty: &PredicateKey) -> Vec<&Constant> {
        let Some(rel) = self.crisp.get(ty) else {
            return Vec::new();
        };
        if ty.arity != 1 {
            return Vec::new();
        }
        let mut seen = HashSet::new();
        rel.rows
            .iter()
            .map(|row| &row[0])
            .filter(|c| seen.insert(*c))
            .collect()
    }

    /// Whether the ground crisp fact `key(args)` was declared.
    pub fn holds(&self, key: &PredicateKey, args: &[Constant]) -> bool {
        self.crisp.get(key).is_some_and(|rel| rel.index.contains(args))
    }

    pub fn is_crisp(&self, key: &PredicateKey) -> bool {
        self.crisp.contains_key(key)
    }

    pub fn is_fuzzy(&self, key: &PredicateKey) -> bool {
        self.signatures.contains_key(key)
    }

    pub fn signature(&self, key: &PredicateKey) -> Option<&TypeSignature> {
        self.signatures.get(key)
    }

    pub fn signatures(&self) -> impl Iterator<Item = &TypeSignature> {
        self.signatures.values()
    }

    pub fn crisp_facts(&self) -> impl Iterator<Item = CrispFact> + '_ {
        self.crisp.iter().flat_map(|(key, rel)| {
            rel.rows.iter().map(move |args| CrispFact {
                key: key.clone(),
                args: args.clone(),
            })
        })
    }

    pub(crate) fn crisp_relations(&self) -> impl Iterator<Item = (&PredicateKey, &[Vec<Constant>])> {
        self.crisp.iter().map(|(k, rel)| (k, rel.rows.as_slice()))
    }

    pub fn fuzzy_fact(&self, key: &PredicateKey, args: &[Constant]) -> Option<TruthValue> {
        self.fuzzy_facts.get(key).and_then(|m| m.get(args)).copied()
    }

    pub fn fuzzy_facts(&self) -> impl Iterator<Item = FuzzyFact> + '_ {
        self.fuzzy_facts.iter().flat_map(|(key, m)| {
            m.iter().map(move |(args, tv)| FuzzyFact {
                key: key.clone(),
                args: args.clone(),
                tv: *tv,
            })
        })
    }

    pub fn function(&self, key: &PredicateKey) -> Option<&TruthFunction> {
        self.functions.get(key)
    }

    pub fn functions(&self) -> impl Iterator<Item = &TruthFunction> {
        self.functions.values()
    }

    pub fn rules_for(&self, key: &PredicateKey) -> &[FuzzyRule] {
        self.rules.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rules(&self) -> impl Iterator<Item = &FuzzyRule> {
        self.rules.values().flatten()
    }

    pub fn general_default(&self, key: &PredicateKey) -> Option<TruthValue> {
        self.general_defaults.get(key).copied()
    }

    pub fn conditioned_defaults_for(&self, key: &PredicateKey) -> &[DefaultDecl] {
        self.conditioned_defaults.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every default declaration: conditioned ones first, in source order
    /// per predicate, then general ones.
    pub fn defaults(&self) -> impl Iterator<Item = DefaultDecl> + '_ {
        let conditioned = self.conditioned_defaults.values().flatten().cloned();
        let general = self.general_defaults.iter().map(|(k, tv)| DefaultDecl {
            target: k.clone(),
            tv: *tv,
            condition: None,
        });
        conditioned.chain(general)
    }

    pub(crate) fn general_defaults_map(&self) -> &IndexMap<PredicateKey, TruthValue> {
        &self.general_defaults
    }

    pub(crate) fn conditioned_defaults_map(&self) -> &IndexMap<PredicateKey, Vec<DefaultDecl>> {
        &self.conditioned_defaults
    }

    pub(crate) fn rules_map(&self) -> &IndexMap<PredicateKey, Vec<FuzzyRule>> {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
            && self.crisp.is_empty()
            && self.fuzzy_facts.is_empty()
            && self.functions.is_empty()
            && self.rules.is_empty()
            && self.general_defaults.is_empty()
            && self.conditioned_defaults.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: f64) -> TruthValue {
        TruthValue::new(v).unwrap()
    }

    fn car_program() -> Program {
        let mut p = Program::new()
            .insert(TypeSignature::new(PredicateKey::new("expensive_car", 1), vec![PredicateKey::new("car", 1)]).unwrap())
            .unwrap();
        for c in ["vw_caddy", "alfa_romeo_gt", "aston_martin_bulldog", "lamborghini_urraco"] {
            p = p.insert(CrispFact::new("car", vec![c.into()])).unwrap();
        }
        p
    }

    #[test]
    fn truth_value_bounds() {
        assert!(TruthValue::new(0.0).is_ok());
        assert!(TruthValue::new(1.0).is_ok());
        assert_eq!(TruthValue::new(1.3), Err(OutOfRange(1.3)));
        assert!(TruthValue::new(-0.1).is_err());
        assert!(TruthValue::new(f64::NAN).is_err());
    }

    #[test]
    fn insert_fuzzy_fact() {
        let fact = FuzzyFact::new("expensive_car", vec!["alfa_romeo_gt".into()], tv(0.6)).unwrap();
        let p = car_program().insert(fact.clone()).unwrap();
        assert_eq!(p.fuzzy_facts().count(), 1);
        assert_eq!(p.fuzzy_fact(&fact.key, &fact.args), Some(tv(0.6)));

        let again = p.clone().insert(fact.clone()).unwrap();
        assert_eq!(again, p);

        let contradiction = FuzzyFact { tv: tv(0.7), ..fact };
        assert!(matches!(p.insert(contradiction), Err(ConflictError::FuzzyFact { .. })));
    }

    #[test]
    fn second_general_default_conflicts() {
        let key = PredicateKey::new("expensive_car", 1);
        let d = |v| DefaultDecl {
            target: key.clone(),
            tv: tv(v),
            condition: None,
        };
        let p = car_program().insert(d(0.5)).unwrap();
        assert!(p.clone().insert(d(0.5)).is_ok());
        assert!(matches!(p.insert(d(0.4)), Err(ConflictError::GeneralDefault { .. })));
    }

    #[test]
    fn second_function_conflicts() {
        let f1 = TruthFunction::new("teenager", vec![(9.0, tv(0.0)), (10.0, tv(1.0))]).unwrap();
        let f2 = TruthFunction::new("teenager", vec![(9.0, tv(0.0)), (11.0, tv(1.0))]).unwrap();
        let p = Program::new().insert(f1.clone()).unwrap();
        assert!(p.clone().insert(f1).is_ok());
        assert!(matches!(p.insert(f2), Err(ConflictError::Function { .. })));
    }

    #[test]
    fn individuals_in_declaration_order() {
        let p = car_program();
        let cars: Vec<String> = p
            .individuals_of_type(&PredicateKey::new("car", 1))
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(cars, ["vw_caddy", "alfa_romeo_gt", "aston_martin_bulldog", "lamborghini_urraco"]);
        assert!(p.individuals_of_type(&PredicateKey::new("pet", 1)).is_empty());
    }

    #[test]
    fn duplicate_individuals_collapse() {
        let p = Program::new()
            .insert(CrispFact::new("car", vec!["vw_caddy".into()]))
            .unwrap()
            .insert(CrispFact::new("car", vec!["vw_caddy".into()]))
            .unwrap();
        assert_eq!(p.individuals_of_type(&PredicateKey::new("car", 1)).len(), 1);
        assert_eq!(p.crisp_facts().count(), 2);
    }

    #[test]
    fn signature_shape() {
        let bad = TypeSignature::new(PredicateKey::new("p", 2), vec![PredicateKey::new("t", 1)]);
        assert!(matches!(bad, Err(ShapeError::SignatureLength { .. })));
        let bad = TypeSignature::new(PredicateKey::new("p", 1), vec![PredicateKey::new("t", 2)]);
        assert!(matches!(bad, Err(ShapeError::TypeArity(_))));
    }

    #[test]
    fn function_points_checked() {
        assert_eq!(
            TruthFunction::new("f", vec![(1.0, tv(0.0))]),
            Err(ShapeError::TooFewPoints(1))
        );
        assert!(matches!(
            TruthFunction::new("f", vec![(1.0, tv(0.0)), (1.0, tv(1.0))]),
            Err(ShapeError::NotIncreasing { .. })
        ));
    }

    #[test]
    fn numeric_constants_compare_by_bits() {
        assert_eq!(Constant::Number(15.0), Constant::Number(15.0));
        assert_ne!(Constant::Number(0.0), Constant::Number(-0.0));
        assert_ne!(Constant::Number(1.0), Constant::symbol("1"));
    }

    #[test]
    fn program_is_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Program>();
    }
}
