//! Scenario configuration: a flat key-value file with dotted section keys,
//! plus command-line `--set key=value` overrides taking precedence.
//!
//! Mean SNRs and thresholds enter in dB and are converted to linear scale
//! once, here at the boundary; everything downstream is linear.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopConfig {
    pub m: f64,
    pub beta: f64,
    pub mean_snr_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelayMode {
    SemiBlind,
    FixedC(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Gamma1Db,
    GammaThDb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeId {
    Bdpsk,
    Bpsk,
    Bfsk,
    BfskMin,
}

impl SchemeId {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeId::Bdpsk => "bdpsk",
            SchemeId::Bpsk => "bpsk",
            SchemeId::Bfsk => "bfsk",
            SchemeId::BfskMin => "bfsk-min",
        }
    }

    /// MGF argument scale; 0 for the differential scheme (not applicable).
    pub fn psi(&self) -> f64 {
        match self {
            SchemeId::Bdpsk => 0.0,
            SchemeId::Bpsk => 1.0,
            SchemeId::Bfsk => 0.5,
            SchemeId::BfskMin => 0.715,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub hop1: HopConfig,
    pub hop2: HopConfig,
    pub relay_mode: RelayMode,
    pub pade_a: usize,
    pub trials: u64,
    pub seed: u64,
    pub shards: u32,
    pub axis: SweepAxis,
    pub points: Vec<f64>,
    pub gamma_th_db: f64,
    pub outage_n_start: usize,
    pub abep_balance: f64,
    pub series_m1: Vec<f64>,
    pub series_balance: Vec<f64>,
    pub series_schemes: Vec<SchemeId>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            hop1: HopConfig { m: 2.0, beta: 3.0, mean_snr_db: 10.0 },
            hop2: HopConfig { m: 2.0, beta: 3.0, mean_snr_db: 10.0 },
            relay_mode: RelayMode::SemiBlind,
            pade_a: 7,
            trials: 1_000_000,
            seed: 1,
            shards: 4,
            axis: SweepAxis::Gamma1Db,
            points: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            gamma_th_db: 0.0,
            outage_n_start: 25,
            abep_balance: 2.0,
            series_m1: vec![1.5, 2.5, 3.5],
            series_balance: vec![2.0, 0.5],
            series_schemes: vec![SchemeId::Bdpsk, SchemeId::Bpsk],
        }
    }
}

/// Key-value map with source line numbers for diagnostics.
struct RawConfig {
    entries: BTreeMap<String, (String, String)>, // key -> (value, origin)
}

impl RawConfig {
    fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "{origin}:{}: expected `key = value`, got `{line}`",
                    idx + 1
                )));
            };
            entries.insert(
                key.trim().to_ascii_lowercase(),
                (value.trim().to_string(), format!("{origin}:{}", idx + 1)),
            );
        }
        Ok(Self { entries })
    }

    fn apply_overrides(&mut self, sets: &[String]) -> Result<(), ConfigError> {
        for (i, s) in sets.iter().enumerate() {
            let Some((key, value)) = s.split_once('=') else {
                return Err(ConfigError(format!(
                    "--set #{}: expected `key=value`, got `{s}`",
                    i + 1
                )));
            };
            self.entries.insert(
                key.trim().to_ascii_lowercase(),
                (value.trim().to_string(), format!("--set #{}", i + 1)),
            );
        }
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<(String, String)> {
        self.entries.remove(key)
    }
}

fn parse_f64(key: &str, value: &str, origin: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError(format!("{origin}: field `{key}`: not a finite number: `{value}`")))
}

fn parse_list(key: &str, value: &str, origin: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Result<Vec<f64>, _> = value
        .split(',')
        .map(|p| parse_f64(key, p.trim(), origin))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(ConfigError(format!("{origin}: field `{key}`: empty list")));
    }
    Ok(items)
}

impl Config {
    /// Parse a config file body and apply `--set` overrides on top of the
    /// built-in defaults.
    pub fn from_text(text: &str, origin: &str, sets: &[String]) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::parse(text, origin)?;
        raw.apply_overrides(sets)?;
        let mut cfg = Config::default();

        let mut num = |key: &str, slot: &mut f64| -> Result<(), ConfigError> {
            if let Some((v, at)) = raw.take(key) {
                *slot = parse_f64(key, &v, &at)?;
            }
            Ok(())
        };
        num("hop1.m", &mut cfg.hop1.m)?;
        num("hop1.beta", &mut cfg.hop1.beta)?;
        num("hop1.mean_snr_db", &mut cfg.hop1.mean_snr_db)?;
        num("hop2.m", &mut cfg.hop2.m)?;
        num("hop2.beta", &mut cfg.hop2.beta)?;
        num("hop2.mean_snr_db", &mut cfg.hop2.mean_snr_db)?;
        num("outage.gamma_th_db", &mut cfg.gamma_th_db)?;
        num("abep.balance", &mut cfg.abep_balance)?;

        if let Some((v, at)) = raw.take("relay.mode") {
            cfg.relay_mode = match v.as_str() {
                "semi-blind" => RelayMode::SemiBlind,
                "fixed-c" => RelayMode::FixedC(f64::NAN), // filled below
                other => {
                    return Err(ConfigError(format!(
                        "{at}: field `relay.mode`: expected `semi-blind` or `fixed-c`, got `{other}`"
                    )))
                }
            };
        }
        if let Some((v, at)) = raw.take("relay.c") {
            let c = parse_f64("relay.c", &v, &at)?;
            if !(c > 0.0) {
                return Err(ConfigError(format!("{at}: field `relay.c`: must be > 0")));
            }
            if let RelayMode::FixedC(slot) = &mut cfg.relay_mode {
                *slot = c;
            } else {
                return Err(ConfigError(format!(
                    "{at}: field `relay.c` given but relay.mode is semi-blind"
                )));
            }
        }
        if let RelayMode::FixedC(c) = cfg.relay_mode {
            if c.is_nan() {
                return Err(ConfigError(
                    "relay.mode = fixed-c requires relay.c".to_string(),
                ));
            }
        }

        if let Some((v, at)) = raw.take("pade.a") {
            cfg.pade_a = v.parse::<usize>().map_err(|_| {
                ConfigError(format!("{at}: field `pade.a`: not an integer: `{v}`"))
            })?;
        }
        if let Some((v, at)) = raw.take("sim.trials") {
            cfg.trials = v.parse::<u64>().map_err(|_| {
                ConfigError(format!("{at}: field `sim.trials`: not an integer: `{v}`"))
            })?;
        }
        if let Some((v, at)) = raw.take("sim.seed") {
            cfg.seed = v.parse::<u64>().map_err(|_| {
                ConfigError(format!("{at}: field `sim.seed`: not an integer: `{v}`"))
            })?;
        }
        if let Some((v, at)) = raw.take("sim.shards") {
            cfg.shards = v.parse::<u32>().map_err(|_| {
                ConfigError(format!("{at}: field `sim.shards`: not an integer: `{v}`"))
            })?;
        }
        if let Some((v, at)) = raw.take("outage.n_start") {
            cfg.outage_n_start = v.parse::<usize>().map_err(|_| {
                ConfigError(format!("{at}: field `outage.n_start`: not an integer: `{v}`"))
            })?;
        }
        if let Some((v, at)) = raw.take("sweep.axis") {
            cfg.axis = match v.as_str() {
                "gamma1_db" => SweepAxis::Gamma1Db,
                "gamma_th_db" => SweepAxis::GammaThDb,
                "m" | "beta" => {
                    return Err(ConfigError(format!(
                        "{at}: field `sweep.axis`: axis `{v}` is not driven by any subcommand; \
                         vary m or beta via --set (e.g. --set hop1.m=3) across runs"
                    )))
                }
                other => {
                    return Err(ConfigError(format!(
                        "{at}: field `sweep.axis`: unknown axis `{other}`"
                    )))
                }
            };
        }
        if let Some((v, at)) = raw.take("sweep.points") {
            cfg.points = parse_list("sweep.points", &v, &at)?;
        }
        if let Some((v, at)) = raw.take("series.m1") {
            cfg.series_m1 = parse_list("series.m1", &v, &at)?;
        }
        if let Some((v, at)) = raw.take("series.balance") {
            cfg.series_balance = parse_list("series.balance", &v, &at)?;
        }
        if let Some((v, at)) = raw.take("series.schemes") {
            cfg.series_schemes = v
                .split(',')
                .map(|p| match p.trim() {
                    "bdpsk" => Ok(SchemeId::Bdpsk),
                    "bpsk" => Ok(SchemeId::Bpsk),
                    "bfsk" => Ok(SchemeId::Bfsk),
                    "bfsk-min" => Ok(SchemeId::BfskMin),
                    other => Err(ConfigError(format!(
                        "{at}: field `series.schemes`: unknown scheme `{other}`"
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
        }

        if let Some((key, (_, at))) = raw.entries.iter().next() {
            return Err(ConfigError(format!("{at}: unknown field `{key}`")));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (name, hop) in [("hop1", &self.hop1), ("hop2", &self.hop2)] {
            if !(hop.m > 0.5) {
                return Err(ConfigError(format!("field `{name}.m`: must be > 0.5")));
            }
            if !(hop.beta > 0.0) {
                return Err(ConfigError(format!("field `{name}.beta`: must be > 0")));
            }
        }
        if self.points.is_empty() {
            return Err(ConfigError("field `sweep.points`: empty".to_string()));
        }
        for w in self.points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ConfigError(
                    "field `sweep.points`: must be strictly increasing".to_string(),
                ));
            }
        }
        if self.trials < 1 {
            return Err(ConfigError("field `sim.trials`: must be >= 1".to_string()));
        }
        if self.shards < 1 {
            return Err(ConfigError("field `sim.shards`: must be >= 1".to_string()));
        }
        if !(self.abep_balance > 0.0) {
            return Err(ConfigError("field `abep.balance`: must be > 0".to_string()));
        }
        if self.series_balance.iter().any(|&b| !(b > 0.0)) {
            return Err(ConfigError(
                "field `series.balance`: entries must be > 0".to_string(),
            ));
        }
        if self.series_m1.iter().any(|&m| !(m > 0.5)) {
            return Err(ConfigError(
                "field `series.m1`: entries must be > 0.5".to_string(),
            ));
        }
        Ok(())
    }
}
