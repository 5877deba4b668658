use std::collections::HashSet;
use std::sync::Arc;

use super::{codes, Diagnostic, Severity};
use crate::model::{Connective, DeclRef, PredicateKey, Program};

struct Checker<'p> {
    program: &'p Program,
    memory: Arc<str>,
    diags: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, severity: Severity, at: &DeclRef, code: &'static str, message: String) {
        let (origin, line, column) = match self.program.origin(at) {
            Some(o) => (o.file.clone(), o.line, o.column),
            None => (self.memory.clone(), 0, 0),
        };
        self.diags.push(Diagnostic {
            severity,
            origin,
            line,
            column,
            code,
            message,
        });
    }

    fn require_signature(&mut self, key: &PredicateKey, at: DeclRef, what: &str) {
        if !self.program.is_fuzzy(key) {
            self.push(
                Severity::Error,
                &at,
                codes::UNDECLARED,
                format!("{what} for {key}, which has no `:- set_prop {key} => ...` declaration"),
            );
        }
    }
}

/// Checks cross-declaration consistency. An empty result (or warnings
/// only) means the program can be queried.
pub fn validate(program: &Program) -> Vec<Diagnostic> {
    let mut ck = Checker {
        program,
        memory: Arc::from("<memory>"),
        diags: Vec::new(),
    };

    let mut seen = HashSet::new();
    for fact in program.fuzzy_facts() {
        if seen.insert(fact.key.clone()) {
            ck.require_signature(&fact.key, DeclRef::Fuzzy(fact.key.clone(), fact.args), "fuzzy fact");
        }
    }
    for func in program.functions() {
        ck.require_signature(func.key(), DeclRef::Function(func.key().clone()), "truth function");
    }
    for key in program.general_defaults_map().keys() {
        ck.require_signature(key, DeclRef::GeneralDefault(key.clone()), "default");
    }
    for (key, list) in program.conditioned_defaults_map() {
        ck.require_signature(key, DeclRef::ConditionedDefault(key.clone(), 0), "conditioned default");
        for (i, def) in list.iter().enumerate() {
            let cond = def.condition.as_ref().expect("conditioned defaults carry a condition");
            if cond.arity != key.arity {
                ck.push(
                    Severity::Error,
                    &DeclRef::ConditionedDefault(key.clone(), i),
                    codes::DEFAULT_ARITY,
                    format!(
                        "condition {cond} must have the same arity as {key} ({} != {})",
                        cond.arity, key.arity
                    ),
                );
            }
        }
    }

    for (key, rules) in program.rules_map() {
        ck.require_signature(key, DeclRef::Rule(key.clone(), 0), "rule");
        for (i, rule) in rules.iter().enumerate() {
            let at = DeclRef::Rule(key.clone(), i);
            for atom in &rule.body {
                if !program.is_fuzzy(&atom.key) && !program.is_crisp(&atom.key) {
                    ck.push(
                        Severity::Error,
                        &at,
                        codes::UNKNOWN_PREDICATE,
                        format!("body atom {} is neither a declared fuzzy predicate nor a crisp fact", atom.key),
                    );
                }
            }
            let body_vars: HashSet<&str> = rule.body.iter().flat_map(|a| a.variables()).collect();
            let head_vars: HashSet<&str> = rule.head_vars.iter().map(String::as_str).collect();
            for v in &rule.head_vars {
                if !body_vars.contains(v.as_str()) {
                    ck.push(
                        Severity::Error,
                        &at,
                        codes::UNBOUND_HEAD_VAR,
                        format!("head variable `{v}` of {key} does not occur in the body"),
                    );
                }
            }
            let mut reported = HashSet::new();
            for v in rule.body.iter().flat_map(|a| a.variables()) {
                if !head_vars.contains(v) && reported.insert(v) {
                    ck.push(
                        Severity::Error,
                        &at,
                        codes::UNBOUND_BODY_VAR,
                        format!("body variable `{v}` of {key} is not bound by the head"),
                    );
                }
            }
            if rule.body_op == Connective::Complement && rule.body.len() != 1 {
                ck.push(
                    Severity::Error,
                    &at,
                    codes::COMPLEMENT_ARITY,
                    format!("complement takes exactly one body atom, {key} has {}", rule.body.len()),
                );
            }
            if rule.credibility.is_some_and(|c| c.op == Connective::Complement) {
                ck.push(
                    Severity::Error,
                    &at,
                    codes::COMPLEMENT_CREDIBILITY,
                    "complement cannot combine a credibility with a body value".into(),
                );
            }
        }
    }

    for (key, rows) in program.crisp_relations() {
        if program.is_fuzzy(key) && !rows.is_empty() {
            ck.push(
                Severity::Warning,
                &DeclRef::Crisp(key.clone(), 0),
                codes::CRISP_ON_FUZZY,
                format!("{key} is a fuzzy predicate; its crisp facts are ignored"),
            );
        }
    }

    ck.diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, SourceUnit};

    const CARS: &str = "\
:- set_prop has_lower_price/2 => car/1, car/1.
car(vw_caddy).
car(alfa_romeo_gt).
car(aston_martin_bulldog).
car(lamborghini_urraco).
expensive_car(alfa_romeo_gt) value 0.6 .
:- set_prop expensive_car/1 => car/1.
:- default(expensive_car/1, 0.9) => expensive_type/1.
:- default(expensive_car/1, 0.5).

expensive_type(lamborghini_urraco).
expensive_type(aston_martin_bulldog).
";

    fn check(text: &str) -> Vec<Diagnostic> {
        validate(&parse_program(&SourceUnit::new("t.rfz", text)).unwrap())
    }

    #[test]
    fn cars_program_is_clean() {
        assert_eq!(check(CARS), vec![]);
    }

    #[test]
    fn default_arity_mismatch() {
        let d = check(":- set_prop expensive_car/1 => car/1.\n:- default(expensive_car/1, 0.9) => expensive_type/2.");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, codes::DEFAULT_ARITY);
        assert_eq!((d[0].line, d[0].column), (2, 1));
    }

    #[test]
    fn undeclared_fuzzy_predicate() {
        let d = check("car(a).\nexpensive_car(a) value 0.3.");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, codes::UNDECLARED);
        assert_eq!((d[0].line, d[0].column), (2, 1));
    }

    #[test]
    fn complement_needs_one_body_atom() {
        let d = check(
            ":- set_prop p/1 => t/1.\n:- set_prop q/1 => t/1.\nt(a).\n\
             p(X) :~ complement q(X), q(X).",
        );
        assert_eq!(d.iter().map(|d| d.code).collect::<Vec<_>>(), [codes::COMPLEMENT_ARITY]);
    }

    #[test]
    fn rule_variable_checks() {
        let d = check(
            ":- set_prop p/2 => t/1, t/1.\n:- set_prop q/1 => t/1.\n\
             p(X, Y) :~ min q(X), q(Z).",
        );
        let codes: Vec<_> = d.iter().map(|d| d.code).collect();
        assert_eq!(codes, [codes::UNBOUND_HEAD_VAR, codes::UNBOUND_BODY_VAR]);
    }

    #[test]
    fn unknown_body_predicate() {
        let d = check(":- set_prop p/1 => t/1.\np(X) :~ min nowhere(X).");
        assert_eq!(d[0].code, codes::UNKNOWN_PREDICATE);
    }

    #[test]
    fn complement_as_credibility_operator() {
        let d = check(":- set_prop p/1 => t/1.\nt(a).\np(X) cred (complement, 0.5) :~ min t(X).");
        assert_eq!(d[0].code, codes::COMPLEMENT_CREDIBILITY);
    }

    #[test]
    fn crisp_facts_on_fuzzy_predicate_warn() {
        let d = check(":- set_prop p/1 => t/1.\np(a).");
        assert_eq!(d[0].severity, Severity::Warning);
    }
}
