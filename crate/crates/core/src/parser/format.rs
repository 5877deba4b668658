use std::fmt::Write;

use crate::model::{write_atom, Program};

/// Renders `program` in canonical concrete syntax.
///
/// Re-parsing the output yields a program equal to `program`.
pub fn format_program(program: &Program) -> String {
    let mut out = String::new();
    // writing into a String cannot fail
    let _ = write_program(&mut out, program);
    out
}

fn write_program(out: &mut String, program: &Program) -> std::fmt::Result {
    for sig in program.signatures() {
        write!(out, ":- set_prop {} => ", sig.target())?;
        for (i, ty) in sig.argument_types().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write!(out, "{ty}")?;
        }
        out.push_str(".\n");
    }
    for fact in program.crisp_facts() {
        write_atom(out, &fact.key.name)?;
        write_args(out, fact.args.iter())?;
        out.push_str(".\n");
    }
    for fact in program.fuzzy_facts() {
        write_atom(out, &fact.key.name)?;
        write_args(out, fact.args.iter())?;
        writeln!(out, " value {}.", fact.tv)?;
    }
    for func in program.functions() {
        write_atom(out, &func.key().name)?;
        out.push_str(" :# ([");
        for (i, (x, tv)) in func.points().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write!(out, "({x}, {tv})")?;
        }
        out.push_str("]).\n");
    }
    for rule in program.rules() {
        write_atom(out, &rule.head.name)?;
        write_args(out, rule.head_vars.iter())?;
        if let Some(cred) = rule.credibility {
            write!(out, " cred ({}, {})", cred.op, cred.value)?;
        }
        write!(out, " :~ {} ", rule.body_op)?;
        for (i, atom) in rule.body.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write!(out, "{atom}")?;
        }
        out.push_str(".\n");
    }
    for def in program.defaults() {
        write!(out, ":- default({}, {})", def.target, def.tv)?;
        if let Some(cond) = &def.condition {
            write!(out, " => {cond}")?;
        }
        out.push_str(".\n");
    }
    Ok(())
}

fn write_args<T: std::fmt::Display>(out: &mut String, args: impl Iterator<Item = T>) -> std::fmt::Result {
    out.push('(');
    for (i, a) in args.enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{a}")?;
    }
    out.push(')');
    Ok(())
}
