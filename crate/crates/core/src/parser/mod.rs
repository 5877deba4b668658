//! Source text to [`Program`].
//!
//! Parsing works clause by clause: the token stream is cut at every
//! terminating `.` and each clause is parsed on its own, so an error in one
//! clause never hides errors in the next.

mod format;
pub(crate) mod lexer;
mod validate;

use std::fmt;
use std::sync::Arc;

pub use format::format_program;
pub use validate::validate;

use crate::model::{
    BodyAtom, Connective, Constant, Credibility, CrispFact, Declaration, DefaultDecl, FuzzyFact,
    FuzzyRule, Origin, PredicateKey, Program, Term, TruthFunction, TruthValue, TypeSignature,
};
use lexer::{Tok, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A compile-time message anchored in the source.
///
/// `line` and `column` are 1-based; both are 0 when the offending item has
/// no source text (a program assembled in memory).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub origin: Arc<str>,
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn error(origin: &Arc<str>, line: usize, column: usize, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            origin: origin.clone(),
            line,
            column,
            code,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}[{}]: {}",
            self.origin, self.line, self.column, self.severity, self.code, self.message
        )
    }
}

/// Stable diagnostic codes.
pub mod codes {
    pub const LEX: &str = "lex";
    pub const SYNTAX: &str = "syntax";
    pub const UNTERMINATED: &str = "unterminated";
    pub const TV_RANGE: &str = "tv-range";
    pub const NON_GROUND: &str = "non-ground";
    pub const ZERO_ARITY: &str = "zero-arity";
    pub const UNKNOWN_CONNECTIVE: &str = "unknown-connective";
    pub const FUNCTION_ORDER: &str = "function-order";
    pub const FUNCTION_POINTS: &str = "function-points";
    pub const SIGNATURE: &str = "signature";
    pub const CRISP_RULE: &str = "crisp-rule";
    pub const CONFLICT: &str = "conflict";
    pub const DEFAULT_ARITY: &str = "default-arity";
    pub const UNDECLARED: &str = "undeclared";
    pub const UNKNOWN_PREDICATE: &str = "unknown-predicate";
    pub const UNBOUND_HEAD_VAR: &str = "unbound-head-var";
    pub const UNBOUND_BODY_VAR: &str = "unbound-body-var";
    pub const COMPLEMENT_ARITY: &str = "complement-arity";
    pub const COMPLEMENT_CREDIBILITY: &str = "complement-credibility";
    pub const CRISP_ON_FUZZY: &str = "crisp-on-fuzzy";
    pub const IO: &str = "io";
    pub const QUERY: &str = "query";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub text: String,
    pub origin: String,
}

impl SourceUnit {
    pub fn new(origin: impl Into<String>, text: impl Into<String>) -> Self {
        SourceUnit {
            text: text.into(),
            origin: origin.into(),
        }
    }
}

/// Parses one source unit. Validation is not run; see [`load`].
pub fn parse_program(src: &SourceUnit) -> Result<Program, Vec<Diagnostic>> {
    let mut program = Program::new();
    let diags = parse_into(&mut program, src);
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(program)
    }
}

/// Parses every unit into one program, in order, then validates it.
///
/// On success returns the program with any warnings.
pub fn load(sources: &[SourceUnit]) -> Result<(Program, Vec<Diagnostic>), Vec<Diagnostic>> {
    let mut program = Program::new();
    let mut diags = Vec::new();
    for src in sources {
        diags.extend(parse_into(&mut program, src));
    }
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    diags.extend(validate(&program));
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok((program, diags))
    }
}

fn parse_into(program: &mut Program, src: &SourceUnit) -> Vec<Diagnostic> {
    let origin: Arc<str> = Arc::from(src.origin.as_str());
    let (tokens, lex_errors) = lexer::tokenize(&src.text);
    let mut diags: Vec<Diagnostic> = lex_errors
        .into_iter()
        .map(|e| Diagnostic::error(&origin, e.line, e.column, codes::LEX, e.message))
        .collect();

    for clause in tokens.split_inclusive(|t| t.tok == Tok::End) {
        if clause.last().map(|t| &t.tok) != Some(&Tok::End) {
            let t = &clause[0];
            diags.push(Diagnostic::error(
                &origin,
                t.line,
                t.column,
                codes::UNTERMINATED,
                "clause is not terminated by `.`",
            ));
            break;
        }
        let first = &clause[0];
        let mut cp = ClauseParser::new(clause, &origin);
        let parsed = cp.clause();
        diags.append(&mut cp.diags);
        match parsed {
            Ok(decls) if !cp.failed => {
                let at = Origin {
                    file: origin.clone(),
                    line: first.line,
                    column: first.column,
                };
                for decl in decls {
                    if let Err(e) = program.insert_at(decl, Some(at.clone())) {
                        diags.push(Diagnostic::error(&origin, first.line, first.column, codes::CONFLICT, e.to_string()));
                    }
                }
            }
            Ok(_) => {}
            Err(d) => diags.push(d),
        }
    }
    diags
}

type PResult<T> = Result<T, Diagnostic>;

/// Parses the tokens of exactly one clause (including its final `.`).
pub(crate) struct ClauseParser<'t> {
    tokens: &'t [Token],
    pos: usize,
    origin: &'t Arc<str>,
    /// Non-fatal problems found while parsing; the clause is dropped if any.
    pub diags: Vec<Diagnostic>,
    pub failed: bool,
}

impl<'t> ClauseParser<'t> {
    pub(crate) fn new(tokens: &'t [Token], origin: &'t Arc<str>) -> Self {
        ClauseParser {
            tokens,
            pos: 0,
            origin,
            diags: Vec::new(),
            failed: false,
        }
    }

    pub(crate) fn peek(&self) -> Option<&'t Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        }
    }

    pub(crate) fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub(crate) fn error_here(&self, code: &'static str, message: impl Into<String>) -> Diagnostic {
        let (line, column) = self.here();
        Diagnostic::error(self.origin, line, column, code, message)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.error_here(codes::SYNTAX, format!("expected {wanted}, found {t}")),
            None => self.error_here(codes::SYNTAX, format!("expected {wanted}")),
        }
    }

    /// Records a non-fatal error at `token`.
    pub(crate) fn report(&mut self, token: &Token, code: &'static str, message: impl Into<String>) {
        self.failed = true;
        self.diags
            .push(Diagnostic::error(self.origin, token.line, token.column, code, message));
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> PResult<&'t Token> {
        if self.peek() == Some(tok) {
            Ok(self.bump().unwrap())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn atom(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(a.clone())
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    pub(crate) fn number(&mut self) -> PResult<(f64, &'t Token)> {
        match self.peek() {
            Some(Tok::Number(n)) => Ok((*n, self.bump().unwrap())),
            _ => Err(self.unexpected("a number")),
        }
    }

    /// A number that must lie in `[0,1]`. Out-of-range values are reported
    /// and replaced by 0 so parsing can continue.
    pub(crate) fn truth_value(&mut self) -> PResult<TruthValue> {
        let (n, tok) = self.number()?;
        Ok(TruthValue::new(n).unwrap_or_else(|e| {
            self.report(tok, codes::TV_RANGE, e.to_string());
            TruthValue::ZERO
        }))
    }

    fn key(&mut self) -> PResult<PredicateKey> {
        let name = self.atom()?;
        self.expect(&Tok::Slash)?;
        let (n, tok) = self.number()?;
        if n < 0.0 || n.fract() != 0.0 || n > u32::MAX as f64 {
            return Err(Diagnostic::error(
                self.origin,
                tok.line,
                tok.column,
                codes::SYNTAX,
                format!("arity must be a non-negative integer, found {n}"),
            ));
        }
        Ok(PredicateKey::new(name, n as usize))
    }

    pub(crate) fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Var(v.clone()))
            }
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(Term::Const(Constant::Symbol(a.clone())))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(Term::Const(Constant::Number(*n)))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// `( t1, ..., tN )` with the opening parenthesis already current.
    pub(crate) fn args(&mut self) -> PResult<Vec<(Term, &'t Token)>> {
        self.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        loop {
            let tok = self.tokens.get(self.pos);
            let term = self.term()?;
            out.push((term, tok.unwrap()));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(out)
    }

    fn ground_args(&mut self, args: Vec<(Term, &'t Token)>) -> Vec<Constant> {
        args.into_iter()
            .filter_map(|(term, tok)| match term {
                Term::Const(c) => Some(c),
                Term::Var(v) => {
                    self.report(tok, codes::NON_GROUND, format!("variable `{v}` in a fact; facts must be ground"));
                    None
                }
            })
            .collect()
    }

    fn connective(&mut self) -> PResult<Connective> {
        let tok = self.tokens.get(self.pos);
        let name = self.atom()?;
        Ok(Connective::from_name(&name).unwrap_or_else(|| {
            self.report(
                tok.unwrap(),
                codes::UNKNOWN_CONNECTIVE,
                format!("unknown aggregation operator `{name}` (expected one of min, max, prod, luka, dprod, dluka, complement)"),
            );
            Connective::Min
        }))
    }

    fn finish<T>(&mut self, value: T) -> PResult<T> {
        self.expect(&Tok::End)?;
        Ok(value)
    }

    fn clause(&mut self) -> PResult<Vec<Declaration>> {
        match self.peek() {
            Some(Tok::Neck) => {
                self.bump();
                self.directive()
            }
            Some(Tok::Atom(_)) => self.predicate_clause(),
            _ => Err(self.unexpected("a clause")),
        }
    }

    fn directive(&mut self) -> PResult<Vec<Declaration>> {
        let start = self.tokens.get(self.pos);
        match self.peek() {
            Some(Tok::Atom(a)) if a == "set_prop" => {
                self.bump();
                let target = self.key()?;
                self.expect(&Tok::Arrow)?;
                let mut types = vec![self.key()?];
                while self.eat(&Tok::Comma) {
                    types.push(self.key()?);
                }
                self.expect(&Tok::End)?;
                match TypeSignature::new(target, types) {
                    Ok(sig) => Ok(vec![sig.into()]),
                    Err(e) => {
                        self.report(start.unwrap(), codes::SIGNATURE, e.to_string());
                        Ok(vec![])
                    }
                }
            }
            Some(Tok::Atom(a)) if a == "default" => {
                self.bump();
                self.expect(&Tok::LParen)?;
                let target = self.key()?;
                self.expect(&Tok::Comma)?;
                let tv = self.truth_value()?;
                self.expect(&Tok::RParen)?;
                let condition = if self.eat(&Tok::Arrow) { Some(self.key()?) } else { None };
                self.expect(&Tok::End)?;
                if target.arity == 0 {
                    self.report(start.unwrap(), codes::ZERO_ARITY, "fuzzy predicates need at least one argument");
                }
                Ok(vec![DefaultDecl { target, tv, condition }.into()])
            }
            _ => Err(self.unexpected("`set_prop` or `default`")),
        }
    }

    fn predicate_clause(&mut self) -> PResult<Vec<Declaration>> {
        let name_tok = self.bump().unwrap();
        let Tok::Atom(name) = &name_tok.tok else { unreachable!() };

        if self.eat(&Tok::FunctionDef) {
            return self.function(name.clone());
        }
        if self.peek() != Some(&Tok::LParen) {
            return match self.peek() {
                Some(Tok::End | Tok::Atom(_) | Tok::FuzzyNeck) => Err(Diagnostic::error(
                    self.origin,
                    name_tok.line,
                    name_tok.column,
                    codes::ZERO_ARITY,
                    format!("`{name}` has no arguments; predicates need at least one"),
                )),
                _ => Err(self.unexpected("`(` or `:#`")),
            };
        }
        let args = self.args()?;

        match self.peek() {
            Some(Tok::Atom(a)) if a == "value" => {
                self.bump();
                let tv = self.truth_value()?;
                let args = self.ground_args(args);
                self.finish(())?;
                Ok(FuzzyFact::new(name.clone(), args, tv).map(Into::into).into_iter().collect())
            }
            Some(Tok::End) => {
                self.bump();
                let args = self.ground_args(args);
                Ok(vec![CrispFact::new(name.clone(), args).into()])
            }
            Some(Tok::Atom(a)) if a == "cred" => self.rule(name.clone(), args),
            Some(Tok::FuzzyNeck) => self.rule(name.clone(), args),
            Some(Tok::Neck) => Err(Diagnostic::error(
                self.origin,
                name_tok.line,
                name_tok.column,
                codes::CRISP_RULE,
                "crisp Prolog rules are not supported; use `:~` with an aggregation operator",
            )),
            _ => Err(self.unexpected("`value`, `cred`, `:~` or `.`")),
        }
    }

    fn rule(&mut self, name: String, args: Vec<(Term, &'t Token)>) -> PResult<Vec<Declaration>> {
        let mut head_vars = Vec::new();
        for (term, tok) in args {
            match term {
                Term::Var(v) => head_vars.push(v),
                Term::Const(c) => self.report(
                    tok,
                    codes::SYNTAX,
                    format!("rule heads take variables only, found constant `{c}`"),
                ),
            }
        }
        let credibility = if self.eat(&Tok::Atom("cred".into())) {
            self.expect(&Tok::LParen)?;
            let op = self.connective()?;
            self.expect(&Tok::Comma)?;
            let value = self.truth_value()?;
            self.expect(&Tok::RParen)?;
            Some(Credibility { op, value })
        } else {
            None
        };
        self.expect(&Tok::FuzzyNeck)?;
        if matches!(self.peek_at(1), Some(Tok::LParen)) {
            return Err(self.error_here(
                codes::SYNTAX,
                "missing aggregation operator after `:~`",
            ));
        }
        let body_op = self.connective()?;
        let mut body = vec![self.body_atom()?];
        while self.eat(&Tok::Comma) {
            body.push(self.body_atom()?);
        }
        self.finish(vec![FuzzyRule::new(name, head_vars, credibility, body_op, body).into()])
    }

    pub(crate) fn body_atom(&mut self) -> PResult<BodyAtom> {
        let name = self.atom()?;
        if self.peek() != Some(&Tok::LParen) {
            return Err(self.error_here(
                codes::ZERO_ARITY,
                format!("`{name}` has no arguments; body atoms need at least one"),
            ));
        }
        let args = self.args()?.into_iter().map(|(t, _)| t).collect();
        Ok(BodyAtom::new(name, args))
    }

    fn function(&mut self, name: String) -> PResult<Vec<Declaration>> {
        let start = self.tokens.get(self.pos.saturating_sub(2)).unwrap();
        let parenthesized = self.eat(&Tok::LParen);
        self.expect(&Tok::LBracket)?;
        let mut points: Vec<(f64, TruthValue)> = Vec::new();
        if self.peek() != Some(&Tok::RBracket) {
            loop {
                let open = self.expect(&Tok::LParen)?;
                let (x, _) = self.number()?;
                self.expect(&Tok::Comma)?;
                let tv = self.truth_value()?;
                self.expect(&Tok::RParen)?;
                if let Some(&(prev, _)) = points.last() {
                    if x <= prev {
                        self.report(
                            open,
                            codes::FUNCTION_ORDER,
                            format!("x-coordinates must be strictly increasing, {x} follows {prev}"),
                        );
                    }
                }
                points.push((x, tv));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::RBracket)?;
        if parenthesized {
            self.expect(&Tok::RParen)?;
        }
        self.expect(&Tok::End)?;
        if points.len() < 2 {
            self.report(
                start,
                codes::FUNCTION_POINTS,
                format!("a truth function needs at least 2 points, found {}", points.len()),
            );
            return Ok(vec![]);
        }
        if self.failed {
            return Ok(vec![]);
        }
        match TruthFunction::new(name, points) {
            Ok(f) => Ok(vec![f.into()]),
            Err(e) => {
                self.report(start, codes::FUNCTION_ORDER, e.to_string());
                Ok(vec![])
            }
        }
    }
}
