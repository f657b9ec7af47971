//! Line-oriented `key = value` experiment configuration.
//!
//! ```text
//! # comments run to end of line
//! arena.width  = 1800
//! arena.height = 1100        # or: arena = 1800 1100
//! nodes.count  = 200
//! nodes.radius = 150
//! seed   = 1
//! seeds  = 100               # run seeds seed, seed+1, ..
//! source.x = 100
//! source.y = 100
//! regions = "1500,900; 1650,250"
//! schemes = geometry_driven, global_minima, imin
//! grid.step = 1
//! hop_limit = 2000           # default: 10 x nodes.count
//! forwarding.rule = mfr      # or: nearest
//! energy.elec_nj_per_bit   = 50
//! energy.amp_pj_per_bit_m2 = 10
//! packet.bits = 1000
//! ```

use std::collections::HashSet;
use std::str::FromStr;

use crate::energy::RadioParams;
use crate::forwarding::{GreedyRule, Scheme};
use crate::geometry::Point2D;
use crate::topology::{Arena, GeocastRegion};

pub const KEYS: &[&str] = &[
    "arena",
    "arena.width",
    "arena.height",
    "nodes.count",
    "nodes.radius",
    "seed",
    "seeds",
    "source.x",
    "source.y",
    "regions",
    "schemes",
    "grid.step",
    "hop_limit",
    "forwarding.rule",
    "energy.elec_nj_per_bit",
    "energy.amp_pj_per_bit_m2",
    "packet.bits",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse {
        line: usize,
        key: Option<String>,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub arena: Arena,
    pub node_count: usize,
    pub radius: f64,
    pub seed: u64,
    /// Number of consecutive seeds to run, starting at `seed`.
    pub seeds: Option<u64>,
    /// The source is the deployed node nearest to this point.
    pub source: Point2D,
    pub regions: Vec<GeocastRegion>,
    pub schemes: Vec<Scheme>,
    pub grid_step: f64,
    /// Defaults to ten transitions per node.
    pub hop_limit: Option<usize>,
    pub rule: GreedyRule,
    pub radio: RadioParams,
}

impl ExperimentConfig {
    /// Defaults for everything except the regions.
    pub fn new(regions: Vec<GeocastRegion>) -> Self {
        Self {
            arena: Arena::default(),
            node_count: 200,
            radius: 150.0,
            seed: 1,
            seeds: None,
            source: Point2D::new(100.0, 100.0),
            regions,
            schemes: Scheme::ALL.to_vec(),
            grid_step: 1.0,
            hop_limit: None,
            rule: GreedyRule::default(),
            radio: RadioParams::default(),
        }
    }

    pub fn hop_limit(&self) -> usize {
        self.hop_limit.unwrap_or(10 * self.node_count)
    }

    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds.unwrap_or(1))
            .map(|k| self.seed.wrapping_add(k))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError::Validation(m));
        if Arena::new(self.arena.width, self.arena.height).is_err() {
            return fail(format!(
                "arena must be positive, got {} x {}",
                self.arena.width, self.arena.height
            ));
        }
        if self.node_count == 0 {
            return fail("nodes.count must be at least 1".into());
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return fail(format!(
                "nodes.radius must be positive, got {}",
                self.radius
            ));
        }
        if self.seeds == Some(0) {
            return fail("seeds must be at least 1".into());
        }
        if self.regions.is_empty() {
            return fail("`regions` is required and must list at least one center".into());
        }
        if !self.arena.contains(self.source) {
            return fail(format!(
                "source point {} lies outside the arena",
                self.source
            ));
        }
        for (i, r) in self.regions.iter().enumerate() {
            if !self.arena.contains(r.center) {
                return fail(format!(
                    "region {i} center {} lies outside the arena",
                    r.center
                ));
            }
        }
        if self.schemes.is_empty() {
            return fail("schemes must name at least one scheme".into());
        }
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return fail(format!(
                "grid.step must be positive, got {}",
                self.grid_step
            ));
        }
        if self.hop_limit == Some(0) {
            return fail("hop_limit must be at least 1".into());
        }
        self.radio
            .validate()
            .map_err(|e| ConfigError::Validation(e.to_string()))
    }
}

/// Strips a trailing `#` comment that is not inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
        .trim()
}

/// Parses `"x1,y1; x2,y2; ..."`.
pub fn parse_regions(v: &str) -> Result<Vec<GeocastRegion>, String> {
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let p = parse_point(pair)?;
            Ok(GeocastRegion { center: p })
        })
        .collect()
}

/// Parses `"x,y"`.
pub fn parse_point(v: &str) -> Result<Point2D, String> {
    let (x, y) = v
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{v}`"))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|f| f.is_finite())
            .ok_or_else(|| format!("bad coordinate `{}`", s.trim()))
    };
    Ok(Point2D::new(num(x)?, num(y)?))
}

fn number<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>()
        .map_err(|_| format!("expected a number, got `{v}`"))
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::new(Vec::new());
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let err = |key: Option<&str>, message: String| ConfigError::Parse {
            line,
            key: key.map(str::to_owned),
            message,
        };
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(None, format!("expected `key = value`, got `{body}`")))?;
        let key = key.trim();
        let value = unquote(value.trim());
        if !KEYS.contains(&key) {
            return Err(err(Some(key), format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_owned()) {
            return Err(err(Some(key), format!("duplicate key `{key}`")));
        }
        let bad = |m: String| err(Some(key), format!("{key}: {m}"));

        match key {
            "arena" => {
                let parts: Vec<&str> = value
                    .split(|c: char| c.is_whitespace() || c == 'x' || c == ',')
                    .filter(|s| !s.is_empty())
                    .collect();
                let [w, h] = parts[..] else {
                    return Err(bad(format!("expected `width height`, got `{value}`")));
                };
                cfg.arena.width = number(w).map_err(bad)?;
                cfg.arena.height = number(h).map_err(bad)?;
            }
            "arena.width" => cfg.arena.width = number(value).map_err(bad)?,
            "arena.height" => cfg.arena.height = number(value).map_err(bad)?,
            "nodes.count" => cfg.node_count = number(value).map_err(bad)?,
            "nodes.radius" => cfg.radius = number(value).map_err(bad)?,
            "seed" => cfg.seed = number(value).map_err(bad)?,
            "seeds" => cfg.seeds = Some(number(value).map_err(bad)?),
            "source.x" => cfg.source.x = number(value).map_err(bad)?,
            "source.y" => cfg.source.y = number(value).map_err(bad)?,
            "regions" => cfg.regions = parse_regions(value).map_err(bad)?,
            "schemes" => {
                cfg.schemes = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(Scheme::from_str)
                    .collect::<Result<_, _>>()
                    .map_err(bad)?;
            }
            "grid.step" => cfg.grid_step = number(value).map_err(bad)?,
            "hop_limit" => cfg.hop_limit = Some(number(value).map_err(bad)?),
            "forwarding.rule" => cfg.rule = value.parse().map_err(bad)?,
            "energy.elec_nj_per_bit" => cfg.radio.elec_nj_per_bit = number(value).map_err(bad)?,
            "energy.amp_pj_per_bit_m2" => {
                cfg.radio.amp_pj_per_bit_m2 = number(value).map_err(bad)?
            }
            "packet.bits" => cfg.radio.packet_bits = number(value).map_err(bad)?,
            _ => unreachable!("key list and match arms diverged"),
        }
    }

    if seen.contains("arena") && (seen.contains("arena.width") || seen.contains("arena.height")) {
        return Err(ConfigError::Validation(
            "`arena` conflicts with `arena.width`/`arena.height`".into(),
        ));
    }
    cfg.validate()?;
    Ok(cfg)
}
