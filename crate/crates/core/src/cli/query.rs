//! Query text such as `expensive_car(X, V), V > 0.8.`
//!
//! The last argument of the goal is the truth-value slot: a variable to
//! report, or a number meaning "exactly this truth value".

use std::sync::Arc;

use crate::engine::{Comparator, Constraint, Query};
use crate::model::{BodyAtom, Term, TruthValue};
use crate::parser::lexer::{tokenize, Tok};
use crate::parser::{codes, ClauseParser, Diagnostic};

pub fn parse_query(text: &str) -> Result<Query, Diagnostic> {
    let origin: Arc<str> = Arc::from("<query>");
    let (tokens, lex_errors) = tokenize(text);
    if let Some(e) = lex_errors.into_iter().next() {
        return Err(Diagnostic::error(&origin, e.line, e.column, codes::LEX, e.message));
    }
    if tokens.is_empty() {
        return Err(Diagnostic::error(&origin, 1, 1, codes::QUERY, "empty query"));
    }
    let mut cp = ClauseParser::new(&tokens, &origin);
    let query = query(&mut cp)?;
    match cp.diags.into_iter().next() {
        Some(d) => Err(d),
        None => Ok(query),
    }
}

fn query(cp: &mut ClauseParser<'_>) -> Result<Query, Diagnostic> {
    cp.eat(&Tok::QueryPrefix);
    let name = cp.atom()?;
    if cp.peek() != Some(&Tok::LParen) {
        return Err(cp.error_here(codes::QUERY, format!("`{name}` needs its arguments and a truth-value argument")));
    }
    let mut args = cp.args()?;
    let (slot, slot_tok) = args.pop().expect("args() yields at least one term");
    if args.is_empty() {
        return Err(Diagnostic::error(
            &Arc::from("<query>"),
            slot_tok.line,
            slot_tok.column,
            codes::QUERY,
            format!("`{name}` needs at least one subject argument before the truth-value argument"),
        ));
    }
    let subjects: Vec<Term> = args.into_iter().map(|(t, _)| t).collect();

    let mut query = Query::new(BodyAtom::new(name, subjects));
    match slot {
        Term::Var(v) => {
            if v != "_" {
                if query.goal.variables().any(|s| s == v) {
                    return Err(cp.error_here(
                        codes::QUERY,
                        format!("`{v}` is used both as a subject and as the truth value"),
                    ));
                }
                query.truth_var = Some(v);
            }
        }
        Term::Const(c) => {
            let bound = c
                .as_number()
                .ok_or_else(|| cp.error_here(codes::QUERY, format!("truth-value argument must be a variable or number, found `{c}`")))?;
            let bound = TruthValue::new(bound).map_err(|e| {
                Diagnostic::error(&Arc::from("<query>"), slot_tok.line, slot_tok.column, codes::TV_RANGE, e.to_string())
            })?;
            query.constraints.push(Constraint {
                op: Comparator::Eq,
                bound,
            });
        }
    }

    while cp.eat(&Tok::Comma) {
        let constraint = constraint(cp, query.truth_var.as_deref())?;
        query.constraints.push(constraint);
    }
    cp.eat(&Tok::End);
    if !cp.at_end() {
        return Err(cp.error_here(codes::QUERY, "unexpected text after the query"));
    }
    Ok(query)
}

fn comparator(tok: Option<&Tok>) -> Option<Comparator> {
    Some(match tok? {
        Tok::Lt => Comparator::Lt,
        Tok::Le => Comparator::Le,
        Tok::Gt => Comparator::Gt,
        Tok::Ge => Comparator::Ge,
        Tok::Eq => Comparator::Eq,
        _ => return None,
    })
}

/// `V op number` or `number op V`.
fn constraint(cp: &mut ClauseParser<'_>, truth_var: Option<&str>) -> Result<Constraint, Diagnostic> {
    let var_first = matches!(cp.peek(), Some(Tok::Var(_)));
    let check_var = |cp: &mut ClauseParser<'_>| -> Result<(), Diagnostic> {
        match cp.peek() {
            Some(Tok::Var(v)) if Some(v.as_str()) == truth_var => {
                cp.bump();
                Ok(())
            }
            Some(Tok::Var(v)) => Err(cp.error_here(
                codes::QUERY,
                format!("constraints may only mention the truth variable, found `{v}`"),
            )),
            _ => Err(cp.error_here(codes::QUERY, "expected the truth variable")),
        }
    };
    let read_op = |cp: &mut ClauseParser<'_>| {
        let op = comparator(cp.peek()).ok_or_else(|| cp.error_here(codes::QUERY, "expected a comparator (<, =<, >, >=, =)"))?;
        cp.bump();
        Ok::<_, Diagnostic>(op)
    };

    let (op, bound) = if var_first {
        check_var(cp)?;
        let op = read_op(cp)?;
        (op, cp.truth_value()?)
    } else {
        let bound = cp.truth_value()?;
        let op = read_op(cp)?;
        check_var(cp)?;
        (op.flip(), bound)
    };
    Ok(Constraint { op, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constant, PredicateKey};

    #[test]
    fn transcript_queries() {
        let q = parse_query("?- expensive_car(X,V), V > 0.8.").unwrap();
        assert_eq!(q.goal.key, PredicateKey::new("expensive_car", 1));
        assert_eq!(q.goal.args, [Term::Var("X".into())]);
        assert_eq!(q.truth_var.as_deref(), Some("V"));
        assert_eq!(q.constraints, [Constraint {
            op: Comparator::Gt,
            bound: TruthValue::new(0.8).unwrap()
        }]);

        let q = parse_query("teenager(15, V)").unwrap();
        assert_eq!(q.goal.args, [Term::Const(Constant::Number(15.0))]);
        assert!(q.constraints.is_empty());
    }

    #[test]
    fn literal_truth_slot() {
        let q = parse_query("expensive_car(X, 0.9)").unwrap();
        assert_eq!(q.truth_var, None);
        assert_eq!(q.constraints, [Constraint {
            op: Comparator::Eq,
            bound: TruthValue::new(0.9).unwrap()
        }]);
    }

    #[test]
    fn comparators() {
        let q = parse_query("p(X, V), V =< 0.3, 0.1 < V, V = 1").unwrap();
        let ops: Vec<_> = q.constraints.iter().map(|c| c.op).collect();
        assert_eq!(ops, [Comparator::Le, Comparator::Gt, Comparator::Eq]);
    }

    #[test]
    fn rejects_bad_queries() {
        let d = parse_query("p(X, V), X > 0.5").unwrap_err();
        assert_eq!(d.code, codes::QUERY);
        assert_eq!(d.column, 10);
        assert!(parse_query("p(X, V), V >> 0.5").is_err());
        assert!(parse_query("p(V)").is_err());
        assert!(parse_query("p(X, V), V > 1.5").is_err());
        assert!(parse_query("p(V, V)").is_err());
        assert!(parse_query("p(X, V) extra").is_err());
        assert!(parse_query("").is_err());
    }
}
