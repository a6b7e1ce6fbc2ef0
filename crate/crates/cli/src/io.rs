use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use mbe_core::{load_konect, BipartiteGraph, GraphError, GraphSpec};

use crate::{CliError, OutputFormat};

/// Loads a graph from a path or a generator spec. Returns it with a label.
pub fn load_source(input: Option<&Path>, gen: Option<&str>) -> anyhow::Result<(String, BipartiteGraph)> {
    match (input, gen) {
        (Some(path), None) => Ok((path.display().to_string(), load_path(path)?)),
        (None, Some(spec)) => Ok((spec.to_string(), generate(spec)?)),
        _ => Err(CliError::Usage("exactly one of --input or --gen is required".into()).into()),
    }
}

pub fn load_path(path: &Path) -> anyhow::Result<BipartiteGraph> {
    let file = File::open(path).map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;
    load_konect(BufReader::new(file)).map_err(|e| match e {
        GraphError::Io(e) => CliError::Io(format!("cannot read {}: {e}", path.display())).into(),
        other => anyhow::Error::new(other).context(format!("parsing {}", path.display())),
    })
}

pub fn generate(spec: &str) -> anyhow::Result<BipartiteGraph> {
    let spec: GraphSpec = spec.parse().map_err(|e: GraphError| CliError::Usage(e.to_string()))?;
    spec.generate().map_err(|e| CliError::Usage(e.to_string()).into())
}

pub fn open_output(path: &str) -> anyhow::Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let f = File::create(path).map_err(|e| CliError::Io(format!("cannot create {path}: {e}")))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        .context("writing report")
}

/// One result in the documented line or JSON format.
pub fn format_result(buf: &mut String, format: OutputFormat, left: &[u64], right: &[u64]) {
    use std::fmt::Write as _;
    buf.clear();
    match format {
        OutputFormat::Lines => {
            buf.push_str("L:");
            for id in left {
                let _ = write!(buf, " {id}");
            }
            buf.push_str(" | R:");
            for id in right {
                let _ = write!(buf, " {id}");
            }
        }
        OutputFormat::Json => {
            let _ = write!(buf, "{}", serde_json::json!({ "left": left, "right": right }));
        }
    }
}
