//! `key = value` run configuration; command-line flags take precedence.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use ellstab::rational::{parse_q, Q};
use ellstab::walls::QRange;
use ellstab::SearchBox;

use crate::Usage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    #[value(name = "svg+json")]
    SvgJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckLevel {
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub e: i64,
    pub format: Format,
    pub check: CheckLevel,
    pub search_box: SearchBox,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { e: 2, format: Format::Json, check: CheckLevel::Fast, search_box: SearchBox::symmetric(10, 10, 30) }
    }
}

/// `lo:hi` with integer ends.
pub fn parse_int_range(text: &str) -> std::result::Result<[i64; 2], String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("expected lo:hi, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| format!("not an integer: {s:?}"));
    let range = [parse(lo)?, parse(hi)?];
    if range[0] > range[1] {
        return Err(format!("empty range {text:?}"));
    }
    Ok(range)
}

/// `lo:hi` with rational ends.
pub fn parse_q_range(text: &str) -> std::result::Result<QRange, String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("expected lo:hi, got {text:?}"))?;
    let lo = parse_q(lo).map_err(|e| e.to_string())?;
    let hi = parse_q(hi).map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(QRange { lo, hi })
}

/// `N,D,C`: the symmetric box `|n| ≤ N, |d| ≤ D, |c| ≤ C`.
pub fn parse_box(text: &str) -> std::result::Result<[i64; 3], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, d, c] = parts.as_slice() else {
        return Err(format!("expected N,D,C, got {text:?}"));
    };
    let parse = |s: &str| match s.parse::<i64>() {
        Ok(x) if x >= 0 => Ok(x),
        _ => Err(format!("box half-widths must be non-negative integers, got {s:?}")),
    };
    Ok([parse(n)?, parse(d)?, parse(c)?])
}

pub fn parse_rational(text: &str) -> std::result::Result<Q, String> {
    parse_q(text).map_err(|e| e.to_string())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let Some((key, value)) = line.split_once('=') else {
                bail!(Usage(format!("line {lineno}: expected key = value, got {line:?}")));
            };
            let (key, value) = (key.trim(), value.trim().trim_matches('"'));
            let bad = |msg: String| Usage(format!("line {lineno}: {key}: {msg}"));
            match key {
                "e" => cfg.e = value.parse().map_err(|_| bad(format!("not an integer: {value:?}")))?,
                "format" => cfg.format = Format::from_str(value, false).map_err(bad)?,
                "check" => cfg.check = CheckLevel::from_str(value, false).map_err(bad)?,
                "box" => {
                    let [n, d, c] = parse_box(value).map_err(bad)?;
                    let SearchBox { s, include_boundary, .. } = cfg.search_box;
                    cfg.search_box = SearchBox { s, include_boundary, ..SearchBox::symmetric(n, d, c) };
                }
                "n_range" => cfg.search_box.n = parse_int_range(value).map_err(bad)?,
                "d_range" => cfg.search_box.d = parse_int_range(value).map_err(bad)?,
                "c_range" => cfg.search_box.c = parse_int_range(value).map_err(bad)?,
                "s_range" => cfg.search_box.s = Some(parse_q_range(value).map_err(bad)?),
                "include_boundary" => {
                    cfg.search_box.include_boundary =
                        value.parse().map_err(|_| bad(format!("expected true or false, got {value:?}")))?
                }
                _ => bail!(bad("unknown key".into())),
            }
        }
        Ok(cfg)
    }
}
