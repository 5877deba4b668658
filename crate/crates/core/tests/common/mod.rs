//! Random program generation and an independent brute-force evaluator.
//!
//! The oracle works from the generator's own description of a program, not
//! from the parsed `Program`, and recomputes every tier by direct formula.

#![allow(dead_code)]

use std::fmt::Write;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use rfuzzy::model::{Connective, Constant};
use rfuzzy::Tier;

#[derive(Debug, Clone)]
pub struct GenType {
    pub name: String,
    pub individuals: Vec<Constant>,
}

#[derive(Debug, Clone)]
pub enum Target {
    Fuzzy(usize),
    Crisp(usize),
}

#[derive(Debug, Clone)]
pub enum Arg {
    Var(usize),
    Const(Constant),
}

#[derive(Debug, Clone)]
pub struct GenAtom {
    pub target: Target,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone)]
pub struct GenRule {
    pub credibility: Option<(Connective, f64)>,
    pub op: Connective,
    pub body: Vec<GenAtom>,
}

#[derive(Debug, Clone)]
pub struct GenPred {
    pub name: String,
    pub arg_types: Vec<usize>,
    pub facts: Vec<(Vec<Constant>, f64)>,
    pub function: Option<Vec<(f64, f64)>>,
    pub rules: Vec<GenRule>,
    /// (truth value, crisp relation index)
    pub conditioned: Vec<(f64, usize)>,
    pub general: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GenCrisp {
    pub name: String,
    pub rows: Vec<Vec<Constant>>,
}

#[derive(Debug, Clone)]
pub struct GenProgram {
    pub types: Vec<GenType>,
    pub crisp: Vec<GenCrisp>,
    pub preds: Vec<GenPred>,
}

fn tv3(rng: &mut StdRng) -> f64 {
    (rng.gen_range(0..=1000) as f64) / 1000.0
}

const BINARY_OPS: [Connective; 6] = [
    Connective::Min,
    Connective::Max,
    Connective::Prod,
    Connective::Luka,
    Connective::DProd,
    Connective::DLuka,
];

impl GenProgram {
    /// A program with at most 20 individuals, at most 3 fuzzy predicates and
    /// at most 2 rules per predicate. Rules only call earlier predicates, so
    /// evaluation never recurses.
    pub fn random(rng: &mut StdRng) -> GenProgram {
        let n_sym = rng.gen_range(1..=10);
        let n_num = rng.gen_range(1..=10);
        let symbols: Vec<Constant> = (0..n_sym).map(|i| Constant::symbol(format!("a{i}"))).collect();
        let mut numbers: Vec<Constant> = Vec::new();
        let mut x = rng.gen_range(-5..5) as f64;
        for _ in 0..n_num {
            numbers.push(Constant::Number(x));
            x += [0.5, 1.0, 2.0, 3.0][rng.gen_range(0..4)];
        }
        let types = vec![
            GenType {
                name: "sym".into(),
                individuals: symbols,
            },
            GenType {
                name: "num".into(),
                individuals: numbers,
            },
        ];
        let everyone: Vec<Constant> = types.iter().flat_map(|t| t.individuals.clone()).collect();

        let mut crisp = Vec::new();
        let unary: Vec<Vec<Constant>> = everyone
            .iter()
            .filter(|_| rng.gen_bool(0.7))
            .map(|c| vec![c.clone()])
            .collect();
        crisp.push(GenCrisp {
            name: "c1".into(),
            rows: if unary.is_empty() { vec![vec![everyone[0].clone()]] } else { unary },
        });
        let mut binary = Vec::new();
        for a in &everyone {
            for b in &everyone {
                if rng.gen_bool(0.3) {
                    binary.push(vec![a.clone(), b.clone()]);
                }
            }
        }
        if binary.is_empty() {
            binary.push(vec![everyone[0].clone(), everyone[0].clone()]);
        }
        crisp.push(GenCrisp {
            name: "c2".into(),
            rows: binary,
        });
        let marked: Vec<Vec<Constant>> = everyone
            .iter()
            .filter(|_| rng.gen_bool(0.3))
            .map(|c| vec![c.clone()])
            .collect();
        if !marked.is_empty() {
            crisp.push(GenCrisp {
                name: "m1".into(),
                rows: marked,
            });
        }

        let n_preds = rng.gen_range(1..=3);
        let mut preds: Vec<GenPred> = Vec::new();
        for i in 0..n_preds {
            let arity = rng.gen_range(1..=2);
            let arg_types: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..types.len())).collect();

            let mut facts = Vec::new();
            for args in product(&arg_types.iter().map(|&t| types[t].individuals.clone()).collect::<Vec<_>>()) {
                if rng.gen_bool(0.25) {
                    facts.push((args, tv3(rng)));
                }
            }

            let function = (arity == 1 && arg_types[0] == 1 && rng.gen_bool(0.6)).then(|| {
                let n = rng.gen_range(2..=4);
                let mut x = rng.gen_range(-6..4) as f64;
                (0..n)
                    .map(|_| {
                        let p = (x, tv3(rng));
                        x += rng.gen_range(1..5) as f64;
                        p
                    })
                    .collect()
            });

            let mut rules = Vec::new();
            if i > 0 {
                for _ in 0..rng.gen_range(0..=2) {
                    let rule = random_rule(rng, arity, &preds, &crisp, &types);
                    // identical clauses collapse into one when loaded
                    if !rules.iter().any(|r: &GenRule| format!("{r:?}") == format!("{rule:?}")) {
                        rules.push(rule);
                    }
                }
            }

            let mut conditioned = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                let candidates: Vec<usize> = (0..crisp.len()).filter(|&c| crisp[c].rows[0].len() == arity).collect();
                if let Some(&c) = candidates.choose(rng) {
                    conditioned.push((tv3(rng), c));
                }
            }
            let general = rng.gen_bool(0.5).then(|| tv3(rng));

            preds.push(GenPred {
                name: format!("f{i}"),
                arg_types,
                facts,
                function,
                rules,
                conditioned,
                general,
            });
        }
        GenProgram { types, crisp, preds }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for t in &self.types {
            for c in &t.individuals {
                writeln!(s, "{}({c}).", t.name).unwrap();
            }
        }
        for c in &self.crisp {
            for row in &c.rows {
                writeln!(s, "{}({}).", c.name, join(row)).unwrap();
            }
        }
        for p in &self.preds {
            let types: Vec<String> = p.arg_types.iter().map(|&t| format!("{}/1", self.types[t].name)).collect();
            writeln!(s, ":- set_prop {}/{} => {}.", p.name, p.arg_types.len(), types.join(", ")).unwrap();
            for (args, tv) in &p.facts {
                writeln!(s, "{}({}) value {tv} .", p.name, join(args)).unwrap();
            }
            if let Some(points) = &p.function {
                let pts: Vec<String> = points.iter().map(|(x, y)| format!("({x}, {y})")).collect();
                writeln!(s, "{} :# ([{}]) .", p.name, pts.join(", ")).unwrap();
            }
            for r in &p.rules {
                let head: Vec<String> = (0..p.arg_types.len()).map(|i| format!("X{i}")).collect();
                write!(s, "{}({})", p.name, head.join(", ")).unwrap();
                if let Some((op, v)) = r.credibility {
                    write!(s, " cred ({}, {v})", op.name()).unwrap();
                }
                let body: Vec<String> = r.body.iter().map(|a| self.render_atom(a)).collect();
                writeln!(s, " :~ {} {}.", r.op.name(), body.join(", ")).unwrap();
            }
            for (tv, c) in &p.conditioned {
                writeln!(s, ":- default({}/{}, {tv}) => {}/{}.", p.name, p.arg_types.len(), self.crisp[*c].name, self.crisp[*c].rows[0].len()).unwrap();
            }
            if let Some(tv) = p.general {
                writeln!(s, ":- default({}/{}, {tv}).", p.name, p.arg_types.len()).unwrap();
            }
        }
        s
    }

    fn render_atom(&self, a: &GenAtom) -> String {
        let name = match a.target {
            Target::Fuzzy(i) => &self.preds[i].name,
            Target::Crisp(i) => &self.crisp[i].name,
        };
        let args: Vec<String> = a
            .args
            .iter()
            .map(|arg| match arg {
                Arg::Var(i) => format!("X{i}"),
                Arg::Const(c) => c.to_string(),
            })
            .collect();
        format!("{name}({})", args.join(", "))
    }
}

fn random_rule(rng: &mut StdRng, arity: usize, earlier: &[GenPred], crisp: &[GenCrisp], types: &[GenType]) -> GenRule {
    let mut body = Vec::new();
    let mut used = vec![false; arity];
    let n = rng.gen_range(1..=3);
    for _ in 0..n {
        let (target, atom_arity) = if rng.gen_bool(0.75) {
            let j = rng.gen_range(0..earlier.len());
            (Target::Fuzzy(j), earlier[j].arg_types.len())
        } else {
            let j = rng.gen_range(0..crisp.len());
            (Target::Crisp(j), crisp[j].rows[0].len())
        };
        let args = (0..atom_arity)
            .map(|_| {
                if rng.gen_bool(0.85) {
                    let v = rng.gen_range(0..arity);
                    used[v] = true;
                    Arg::Var(v)
                } else {
                    let t = &types[rng.gen_range(0..types.len())];
                    Arg::Const(t.individuals.choose(rng).unwrap().clone())
                }
            })
            .collect();
        body.push(GenAtom { target, args });
    }
    for (v, u) in used.iter().enumerate() {
        if !u {
            body.push(GenAtom {
                target: Target::Crisp(0),
                args: vec![Arg::Var(v)],
            });
        }
    }
    let op = if body.len() == 1 && rng.gen_bool(0.2) {
        Connective::Complement
    } else {
        *BINARY_OPS.choose(rng).unwrap()
    };
    let credibility = rng
        .gen_bool(0.5)
        .then(|| (*BINARY_OPS.choose(rng).unwrap(), tv3(rng)));
    GenRule { credibility, op, body }
}

pub fn join(args: &[Constant]) -> String {
    args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Cartesian product, leftmost component varying slowest.
pub fn product(lists: &[Vec<Constant>]) -> Vec<Vec<Constant>> {
    let mut out = vec![vec![]];
    for list in lists {
        let mut next = Vec::new();
        for prefix in &out {
            for c in list {
                let mut row = prefix.clone();
                row.push(c.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Textbook connective formulas, folded left.
pub fn combine(op: Connective, values: &[f64]) -> f64 {
    let pair = |x: f64, y: f64| match op {
        Connective::Min => x.min(y),
        Connective::Max => x.max(y),
        Connective::Prod => x * y,
        Connective::Luka => f64::max(0.0, x + y - 1.0),
        Connective::DProd => x + y - x * y,
        Connective::DLuka => f64::min(1.0, x + y),
        Connective::Complement => unreachable!(),
    };
    if op == Connective::Complement {
        assert_eq!(values.len(), 1);
        return 1.0 - values[0];
    }
    let mut acc = values[0];
    for &v in &values[1..] {
        acc = pair(acc, v).clamp(0.0, 1.0);
    }
    acc
}

pub struct Oracle<'g> {
    pub g: &'g GenProgram,
}

impl Oracle<'_> {
    fn in_type(&self, pred: usize, args: &[Constant]) -> bool {
        let p = &self.g.preds[pred];
        p.arg_types
            .iter()
            .zip(args)
            .all(|(&t, a)| self.g.types[t].individuals.contains(a))
    }

    fn crisp_holds(&self, rel: usize, args: &[Constant]) -> bool {
        self.g.crisp[rel].rows.iter().any(|r| r.as_slice() == args)
    }

    fn function_value(points: &[(f64, f64)], x: f64) -> Option<f64> {
        if x < points[0].0 || x > points[points.len() - 1].0 {
            return None;
        }
        if let Some(&(_, y)) = points.iter().find(|(px, _)| *px == x) {
            return Some(y);
        }
        let i = points.iter().position(|(px, _)| *px > x).unwrap();
        let ((x0, y0), (x1, y1)) = (points[i - 1], points[i]);
        Some((y0 * (x1 - x) + y1 * (x - x0)) / (x1 - x0))
    }

    fn rule_value(&self, rule: &GenRule, args: &[Constant]) -> Option<f64> {
        let mut values = Vec::new();
        for atom in &rule.body {
            let ground: Vec<Constant> = atom
                .args
                .iter()
                .map(|a| match a {
                    Arg::Var(i) => args[*i].clone(),
                    Arg::Const(c) => c.clone(),
                })
                .collect();
            match atom.target {
                Target::Fuzzy(j) => values.push(self.answers(j, &ground, false).first()?.0),
                Target::Crisp(j) => {
                    if !self.crisp_holds(j, &ground) {
                        return None;
                    }
                    values.push(1.0);
                }
            }
        }
        let body = combine(rule.op, &values);
        let v = match rule.credibility {
            Some((op, c)) => combine(op, &[c, body]),
            None => body,
        };
        (0.0..=1.0).contains(&v).then_some(v)
    }

    /// Answers for `pred(args)`: every succeeding rule when `all_rules`,
    /// otherwise the first answer only.
    pub fn answers(&self, pred: usize, args: &[Constant], all_rules: bool) -> Vec<(f64, Tier)> {
        if !self.in_type(pred, args) {
            return vec![];
        }
        let p = &self.g.preds[pred];
        if let Some((_, tv)) = p.facts.iter().find(|(a, _)| a.as_slice() == args) {
            return vec![(*tv, Tier::Fact)];
        }
        if let (Some(points), [Constant::Number(x)]) = (&p.function, args) {
            if let Some(v) = Self::function_value(points, *x) {
                return vec![(v, Tier::Function)];
            }
        }
        let mut from_rules = Vec::new();
        for r in &p.rules {
            if let Some(v) = self.rule_value(r, args) {
                from_rules.push((v, Tier::Rule));
                if !all_rules {
                    break;
                }
            }
        }
        if !from_rules.is_empty() {
            return from_rules;
        }
        if let Some((tv, _)) = p.conditioned.iter().find(|(_, c)| self.crisp_holds(*c, args)) {
            return vec![(*tv, Tier::ConditionedDefault)];
        }
        p.general.map(|tv| vec![(tv, Tier::GeneralDefault)]).unwrap_or_default()
    }

    /// Brute force over the full type product of `pred`.
    pub fn enumerate(&self, pred: usize) -> Vec<(Vec<Constant>, f64, Tier)> {
        let p = &self.g.preds[pred];
        let lists: Vec<Vec<Constant>> = p.arg_types.iter().map(|&t| self.g.types[t].individuals.clone()).collect();
        let mut out = Vec::new();
        for args in product(&lists) {
            for (tv, tier) in self.answers(pred, &args, true) {
                out.push((args.clone(), tv, tier));
            }
        }
        out
    }
}
