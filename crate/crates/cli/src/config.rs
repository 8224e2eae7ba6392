//! `--config FILE` support: the JSON object is turned into flags placed
//! right after the subcommand, ahead of everything typed on the command
//! line, so explicit flags override it.

use std::ffi::OsString;
use std::fs;

use serde_json::Value;

use crate::report::Failure;

pub const SUBCOMMANDS: &[&str] = &[
    "simulate",
    "density-eval",
    "sample-env",
    "mixture-check",
    "bayes",
    "tree-check",
    "ladder",
    "z2",
];

fn config_path(tokens: &[String]) -> Option<String> {
    let mut it = tokens.iter();
    while let Some(t) = it.next() {
        if t == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = t.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn flag_tokens(key: &str, value: &Value) -> Result<Vec<String>, Failure> {
    let flag = format!("--{}", key.replace('_', "-"));
    let scalar = |v: &Value| -> Result<String, Failure> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(Failure::Usage(format!(
                "config key `{key}`: expected a string or a number"
            ))),
        }
    };
    Ok(match value {
        Value::Null | Value::Bool(false) => vec![],
        Value::Bool(true) => vec![flag],
        Value::Array(items) => {
            let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
            vec![flag, parts.join(",")]
        }
        Value::Object(_) => {
            return Err(Failure::Usage(format!(
                "config key `{key}`: nested objects are not supported"
            )))
        }
        v => vec![flag, scalar(v)?],
    })
}

/// Rewrites `argv` as `[bin, subcommand, config flags..., other flags...]`.
/// Without `--config` the arguments are returned unchanged.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let tokens: Vec<String> = argv
        .into_iter()
        .map(|a| {
            a.into_string()
                .map_err(|a| Failure::Usage(format!("argument {a:?} is not valid UTF-8")))
        })
        .collect::<Result<_, _>>()?;
    let Some(path) = config_path(&tokens) else {
        return Ok(tokens.into_iter().map(OsString::from).collect());
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read config `{path}`: {e}")))?;
    let json: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("config `{path}` is not valid JSON: {e}")))?;
    let Value::Object(map) = json else {
        return Err(Failure::Usage(format!(
            "config `{path}` must be a JSON object"
        )));
    };

    let mut command = None;
    let mut from_config = Vec::new();
    for (key, value) in &map {
        match key.as_str() {
            "command" => {
                command = Some(value.as_str().map(str::to_string).ok_or_else(|| {
                    Failure::Usage("config key `command` must be a string".into())
                })?)
            }
            "config" => return Err(Failure::Usage("config files cannot nest".into())),
            _ => from_config.extend(flag_tokens(key, value)?),
        }
    }

    let (bin, rest) = tokens.split_first().expect("argv has a program name");
    let mut out = vec![bin.clone()];
    match rest.iter().position(|t| SUBCOMMANDS.contains(&t.as_str())) {
        Some(i) => {
            out.push(rest[i].clone());
            out.extend(from_config);
            out.extend_from_slice(&rest[..i]);
            out.extend_from_slice(&rest[i + 1..]);
        }
        None => {
            if let Some(c) = command {
                out.push(c);
                out.extend(from_config);
            }
            out.extend_from_slice(rest);
        }
    }
    Ok(out.into_iter().map(OsString::from).collect())
}
