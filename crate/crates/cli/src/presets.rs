//! Named problem presets and spec-file loading.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use semicycle_core::{build, DdeSpec, PeriodicKind, PeriodicSolution};

/// Parse a preset name: `minus`, `plus`, `varpi:<tau>`, `varpi-tilde:<tau>`.
pub fn periodic_preset(name: &str) -> Result<PeriodicSolution> {
    let (kind, tau) = parse_kind(name)?;
    build(kind, tau).map_err(|e| anyhow!("{e}"))
}

pub fn parse_kind(name: &str) -> Result<(PeriodicKind, Option<f64>)> {
    if name == "minus" {
        return Ok((PeriodicKind::Minus, None));
    }
    if name == "plus" {
        return Ok((PeriodicKind::Plus, None));
    }
    if let Some(rest) = name.strip_prefix("varpi-tilde:") {
        let tau: f64 = rest.parse().context("tau in varpi-tilde:<tau>")?;
        return Ok((PeriodicKind::VarpiTilde, Some(tau)));
    }
    if let Some(rest) = name.strip_prefix("varpi:") {
        let tau: f64 = rest.parse().context("tau in varpi:<tau>")?;
        return Ok((PeriodicKind::Varpi, Some(tau)));
    }
    bail!("unknown preset '{name}' (expected minus, plus, varpi:<tau>, varpi-tilde:<tau>)")
}

/// Load a problem either from a JSON spec file or a named preset.
pub fn load_spec(spec: Option<&PathBuf>, preset: Option<&str>) -> Result<DdeSpec> {
    match (spec, preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let spec: DdeSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            Ok(spec)
        }
        (None, Some(name)) => Ok(periodic_preset(name)?.spec),
        (None, None) => bail!("provide either --spec FILE or --preset NAME"),
        (Some(_), Some(_)) => bail!("--spec and --preset are mutually exclusive"),
    }
}
