use std::io::{self, Write};

use serde_json::{json, Map, Value};

use crate::engine::{Answer, EngineError, Query};
use crate::model::Constant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Json,
}

/// How a streamed answer set ended.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamEnd {
    pub count: usize,
    pub error: Option<EngineError>,
}

/// One answer in plain form: `V = 0.9, X = aston_martin_bulldog`, or
/// `yes` when the query binds nothing.
pub fn plain_answer(query: &Query, answer: &Answer) -> String {
    let mut parts = Vec::with_capacity(answer.bindings.len() + 1);
    if let Some(v) = &query.truth_var {
        parts.push(format!("{v} = {}", answer.tv));
    }
    parts.extend(answer.bindings.iter().map(|(name, c)| format!("{name} = {c}")));
    if parts.is_empty() {
        "yes".to_owned()
    } else {
        parts.join(", ")
    }
}

fn constant_json(c: &Constant) -> Value {
    match c {
        Constant::Symbol(s) => Value::String(s.clone()),
        Constant::Number(n) => json!(n),
    }
}

pub fn json_answer(query: &Query, answer: &Answer) -> Value {
    let mut bindings = Map::new();
    if let Some(v) = &query.truth_var {
        bindings.insert(v.clone(), json!(answer.tv.value()));
    }
    for (name, c) in &answer.bindings {
        bindings.insert(name.clone(), constant_json(c));
    }
    json!({
        "bindings": bindings,
        "tv": answer.tv.value(),
        "source": answer.source.as_str(),
    })
}

/// Writes answers as they arrive. Plain output is one line per answer and
/// `no` for an empty stream; JSON output is a single array on one line.
///
/// Evaluation errors stop the stream; the output written so far is closed
/// properly and the error is returned in [`StreamEnd`].
pub fn write_answers<W, I>(out: &mut W, query: &Query, answers: I, format: OutputFormat) -> io::Result<StreamEnd>
where
    W: Write,
    I: IntoIterator<Item = Result<Answer, EngineError>>,
{
    let mut count = 0;
    let mut error = None;
    if format == OutputFormat::Json {
        out.write_all(b"[")?;
    }
    for item in answers {
        let answer = match item {
            Ok(a) => a,
            Err(e) => {
                error = Some(e);
                break;
            }
        };
        match format {
            OutputFormat::Plain => writeln!(out, "{}", plain_answer(query, &answer))?,
            OutputFormat::Json => {
                if count > 0 {
                    out.write_all(b",")?;
                }
                write!(out, "{}", json_answer(query, &answer))?;
            }
        }
        count += 1;
    }
    match format {
        OutputFormat::Plain if count == 0 && error.is_none() => writeln!(out, "no")?,
        OutputFormat::Plain => {}
        OutputFormat::Json => out.write_all(b"]\n")?,
    }
    Ok(StreamEnd { count, error })
}

/// Formats a finished answer list.
pub fn format_answers(query: &Query, answers: &[Answer], format: OutputFormat) -> String {
    let mut buf = Vec::new();
    write_answers(&mut buf, query, answers.iter().cloned().map(Ok), format).expect("writing to memory");
    String::from_utf8(buf).expect("answers are UTF-8")
}
