use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Everything needed to replay a run. Embedded in every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub seed: Option<u64>,
    pub args: serde_json::Value,
}

impl RunConfig {
    pub fn new<A: Serialize>(
        subcommand: &'static str,
        seed: Option<u64>,
        args: &A,
    ) -> Result<Self> {
        Ok(Self {
            tool: "fdepth",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            seed,
            args: serde_json::to_value(args)?,
        })
    }

    /// `# run_config={...}` line for CSV files.
    pub fn comment(&self) -> String {
        format!(
            "# run_config={}\n",
            serde_json::to_string(self).expect("run config serializes")
        )
    }
}

/// Write CSV text preceded by the run configuration comment.
pub fn write_csv(path: &Path, config: &RunConfig, body: &str) -> Result<()> {
    let mut text = config.comment();
    text.push_str(body);
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    run_config: &'a RunConfig,
    #[serde(flatten)]
    body: &'a T,
}

/// Write pretty JSON with a top-level `run_config` field.
pub fn write_json<T: Serialize>(path: &Path, config: &RunConfig, body: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Wrapped {
        run_config: config,
        body,
    })?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Write SVG with the run configuration in a leading XML comment.
pub fn write_svg(path: &Path, config: &RunConfig, svg: &str) -> Result<()> {
    let json = serde_json::to_string(config)?.replace("--", "-\\u002d");
    let text = format!("<!-- run_config={json} -->\n{svg}");
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
