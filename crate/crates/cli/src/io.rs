use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use errw_core::exact::{parse_rational, to_f64};
use errw_core::{Error, Graph, InitialWeights, Rational};

use crate::args::GraphArgs;
use crate::report::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read `{}`: {e}", path.display())))
}

/// A builtin name or an edge-list file, with the file's weight column if any.
pub fn load_graph(input: &str) -> Result<(Graph, Option<Vec<Rational>>), Failure> {
    if let Ok(g) = Graph::builtin(input) {
        return Ok((g, None));
    }
    let path = Path::new(input);
    if !path.is_file() {
        return Err(Failure::Usage(format!(
            "graph `{input}` is neither a builtin name nor a readable file"
        )));
    }
    let list = Graph::parse_edge_list(&read_text(path)?)?;
    Ok((list.graph, list.weights))
}

/// Comma- or whitespace-separated rationals, or `@FILE` holding them
/// (`#` starts a comment).
pub fn parse_values(input: &str) -> Result<Vec<Rational>, Failure> {
    let text = match input.strip_prefix('@') {
        Some(path) => read_text(Path::new(path))?,
        None => input.to_string(),
    };
    let values = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(Failure::Usage(format!("no values in `{input}`")));
    }
    Ok(values)
}

/// Rationals where possible, otherwise any float literal (`1e-3`).
pub fn parse_floats(input: &str) -> Result<Vec<f64>, Failure> {
    input
        .split(',')
        .map(str::trim)
        .map(|t| match parse_rational(t) {
            Ok(r) => Ok(to_f64(&r)),
            Err(e) => t.parse::<f64>().map_err(|_| Failure::Domain(e)),
        })
        .collect()
}

pub fn parse_scalar(input: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(input)?)
}

/// One value broadcast to `n` entries, or exactly `n` values.
pub fn broadcast(values: Vec<Rational>, n: usize) -> Result<Vec<Rational>, Failure> {
    match values.len() {
        1 => Ok(vec![values[0].clone(); n]),
        k if k == n => Ok(values),
        k => Err(Error::LengthMismatch {
            expected: n,
            got: k,
        }
        .into()),
    }
}

/// A graph with validated exact initial weights and a start vertex.
pub struct Setup {
    pub graph: Graph,
    pub weights: InitialWeights,
    pub v0: usize,
}

impl Setup {
    pub fn load(args: &GraphArgs) -> Result<Setup, Failure> {
        let (graph, file_weights) = load_graph(&args.graph)?;
        let a = match (&args.a, file_weights) {
            (Some(input), _) => broadcast(parse_values(input)?, graph.edge_count())?,
            (None, Some(w)) => w,
            (None, None) => vec![Rational::from_integer(1.into()); graph.edge_count()],
        };
        let weights = InitialWeights::new(a)?.for_graph(&graph)?;
        let v0 = match &args.v0 {
            Some(name) => graph.vertex(name)?,
            None => 0,
        };
        Ok(Setup { graph, weights, v0 })
    }

    pub fn exact(&self) -> &[Rational] {
        self.weights.exact()
    }

    pub fn floats(&self) -> &[f64] {
        self.weights.as_f64()
    }

    pub fn describe(&self) -> Value {
        let g = &self.graph;
        json!({
            "vertices": g.names(),
            "edges": g.edges().iter().map(|&(u, v)| [g.name(u), g.name(v)]).collect::<Vec<_>>(),
            "a": self.exact().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "v0": g.name(self.v0),
        })
    }
}

/// The output directory, created on first use.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: &Path) -> Self {
        OutDir {
            root: root.to_path_buf(),
        }
    }

    /// Opens `name` for writing; returns the writer and the path for the
    /// summary.
    pub fn create(&self, name: &str) -> Result<(BufWriter<File>, String), Failure> {
        fs::create_dir_all(&self.root)?;
        let path = self.root.join(name);
        let f = File::create(&path)?;
        Ok((BufWriter::new(f), path.display().to_string()))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(Error::from(e))
    }
}
