//! JSON sweep configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asym::{EdmondsLengths, Slot, SmallSpinMarking};
use crate::exact::{Pivot, DEFAULT_DIGITS};
use crate::geometry::DEFAULT_CAUSTIC_EPS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    #[serde(rename = "6j")]
    SixJ,
    #[serde(rename = "9j")]
    NineJ,
    #[serde(rename = "15j")]
    FifteenJ,
    #[serde(rename = "3nj")]
    ThreeNJ,
}

impl SymbolKind {
    /// Slot names in the order of the flat `spins` array.
    pub fn slot_names(self, len: usize) -> Vec<String> {
        match self {
            SymbolKind::SixJ => ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec(),
            SymbolKind::NineJ => {
                ["j1", "j2", "j12", "s", "j4", "j34", "j13", "j24", "j5"].map(String::from).to_vec()
            }
            SymbolKind::FifteenJ | SymbolKind::ThreeNJ => {
                let n = if self == SymbolKind::FifteenJ { 5 } else { len / 3 };
                ["j", "l", "k"].iter().flat_map(|r| (1..=n).map(move |i| format!("{r}{i}"))).collect()
            }
        }
    }

    fn expected_len(self, len: usize) -> Option<usize> {
        match self {
            SymbolKind::SixJ => Some(6),
            SymbolKind::NineJ => Some(9),
            SymbolKind::FifteenJ => Some(15),
            SymbolKind::ThreeNJ => (len.is_multiple_of(3) && len >= 9).then_some(len),
        }
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::SixJ => "6j",
            SymbolKind::NineJ => "9j",
            SymbolKind::FifteenJ => "15j",
            SymbolKind::ThreeNJ => "3nj",
        })
    }
}

impl FromStr for SymbolKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "6j" => Ok(SymbolKind::SixJ),
            "9j" => Ok(SymbolKind::NineJ),
            "15j" => Ok(SymbolKind::FifteenJ),
            "3nj" => Ok(SymbolKind::ThreeNJ),
            o => Err(format!("unknown symbol kind `{o}` (6j|9j|15j|3nj)")),
        }
    }
}

/// Which approximation goes into the `asym` column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    #[serde(rename = "exact")]
    ExactOnly,
    #[serde(rename = "pr")]
    PonzanoRegge,
    #[serde(rename = "edmonds")]
    Edmonds,
    #[serde(rename = "asym9j")]
    Asym9j,
    #[serde(rename = "asym3nj")]
    Asym3nj,
    #[serde(rename = "15j-1")]
    FifteenOne,
    #[serde(rename = "15j-2")]
    FifteenTwo,
    #[serde(rename = "15j-3")]
    FifteenThree,
    #[serde(rename = "15j-4")]
    FifteenFour,
}

impl Formula {
    fn fits(self, kind: SymbolKind) -> bool {
        use Formula::*;
        match self {
            ExactOnly => true,
            PonzanoRegge | Edmonds => kind == SymbolKind::SixJ,
            Asym9j => kind == SymbolKind::NineJ,
            Asym3nj => matches!(kind, SymbolKind::ThreeNJ | SymbolKind::FifteenJ),
            FifteenOne | FifteenTwo | FifteenThree | FifteenFour => kind == SymbolKind::FifteenJ,
        }
    }

    /// Small `l` indices implied by a 15j wrapper.
    pub(crate) fn fifteen_small(self) -> Option<&'static [usize]> {
        match self {
            Formula::FifteenOne => Some(&[]),
            Formula::FifteenTwo => Some(&[2]),
            Formula::FifteenThree => Some(&[2, 3]),
            Formula::FifteenFour => Some(&[2, 3, 4]),
            _ => None,
        }
    }
}

/// A slot that moves with the sweep variable: `value = sweep + offset` (twice-units).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub var: String,
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub var: String,
    /// inclusive, twice-units
    pub from: i64,
    pub to: i64,
    #[serde(default = "default_step")]
    pub step: i64,
    #[serde(default)]
    pub linked: Vec<Link>,
}

fn default_step() -> i64 {
    2
}

fn default_precision() -> u32 {
    DEFAULT_DIGITS
}

fn default_eps() -> f64 {
    DEFAULT_CAUSTIC_EPS
}

fn default_trim() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kind: SymbolKind,
    /// Twice-values in slot order; the swept and linked slots are overwritten.
    pub spins: Vec<i64>,
    pub sweep: SweepSpec,
    pub formula: Formula,
    /// Small spins for `asym3nj`; defaults to `j1` alone.
    #[serde(default)]
    pub small: Vec<Slot>,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default = "default_eps")]
    pub caustic_eps: f64,
    /// Fraction of the allowed range dropped at each end for the summary.
    #[serde(default = "default_trim")]
    pub trim: f64,
    #[serde(default)]
    pub pivot: Pivot,
    #[serde(default)]
    pub edmonds_lengths: EdmondsLengths,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<FieldError>),
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<SweepConfig, ConfigError> {
        let cfg: SweepConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<SweepConfig, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn slot_index(&self, name: &str) -> Option<usize> {
        let name = if self.kind == SymbolKind::NineJ && name == "j3" { "s" } else { name };
        self.kind.slot_names(self.spins.len()).iter().position(|s| s == name)
    }

    pub fn marking(&self) -> SmallSpinMarking {
        if let Some(ls) = self.formula.fifteen_small() {
            return SmallSpinMarking::j1_with_l(ls);
        }
        if self.small.is_empty() {
            SmallSpinMarking::j1_with_l(&[])
        } else {
            SmallSpinMarking::new(self.small.clone())
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errs = Vec::new();
        let mut err = |field: &str, message: String| errs.push(FieldError { field: field.into(), message });
        match self.kind.expected_len(self.spins.len()) {
            Some(n) if n == self.spins.len() => {}
            _ => err("spins", format!("{} entries do not fit a {} symbol", self.spins.len(), self.kind)),
        }
        if self.spins.iter().any(|&t| t < 0) {
            err("spins", "twice-values must be non-negative".into());
        }
        if !self.formula.fits(self.kind) {
            err("formula", format!("{:?} does not apply to a {} symbol", self.formula, self.kind));
        }
        let sw = &self.sweep;
        if self.slot_index(&sw.var).is_none() {
            err("sweep.var", format!("`{}` is not a slot of a {} symbol", sw.var, self.kind));
        }
        if sw.step <= 0 || sw.step % 2 != 0 {
            err("sweep.step", format!("step {} must be a positive even number of twice-units", sw.step));
        }
        if sw.from < 0 || sw.from > sw.to {
            err("sweep.from", format!("range {}..={} is empty or negative", sw.from, sw.to));
        }
        for (i, l) in sw.linked.iter().enumerate() {
            match self.slot_index(&l.var) {
                None => err(&format!("sweep.linked[{i}].var"), format!("`{}` is not a slot", l.var)),
                Some(_) if l.var == sw.var => {
                    err(&format!("sweep.linked[{i}].var"), "cannot link the sweep variable to itself".into())
                }
                Some(_) if sw.from + l.offset < 0 => {
                    err(&format!("sweep.linked[{i}].offset"), "linked slot goes negative".into())
                }
                _ => {}
            }
        }
        if self.precision == 0 {
            err("precision", "need at least one digit".into());
        }
        if !(self.caustic_eps >= 0.0 && self.caustic_eps.is_finite()) {
            err("caustic_eps", "must be a finite non-negative number".into());
        }
        if !(0.0..0.5).contains(&self.trim) {
            err("trim", "must lie in [0, 0.5)".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errs))
        }
    }

    /// Spins at one sweep value.
    pub fn spins_at(&self, x: i64) -> Vec<i64> {
        let mut s = self.spins.clone();
        if let Some(i) = self.slot_index(&self.sweep.var) {
            s[i] = x;
        }
        for l in &self.sweep.linked {
            if let Some(i) = self.slot_index(&l.var) {
                s[i] = x + l.offset;
            }
        }
        s
    }

    pub fn sweep_values(&self) -> Vec<i64> {
        (self.sweep.from..=self.sweep.to).step_by(self.sweep.step.max(1) as usize).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4A: &str = r#"{
        "kind": "9j",
        "spins": [860, 60, 860, 2, 120, 122, 862, 0, 860],
        "sweep": {"var": "j24", "from": 60, "to": 180},
        "formula": "asym9j"
    }"#;

    #[test]
    fn parses_with_defaults() {
        let c = SweepConfig::from_json(FIG4A).unwrap();
        assert_eq!(c.precision, 50);
        assert_eq!(c.sweep.step, 2);
        assert_eq!(c.slot_index("j24"), Some(7));
        assert_eq!(c.spins_at(100)[7], 100);
        assert_eq!(c.sweep_values().len(), 61);
    }

    #[test]
    fn field_level_errors() {
        let bad = FIG4A.replace("\"j24\"", "\"j99\"").replace("\"asym9j\"", "\"pr\"");
        match SweepConfig::from_json(&bad) {
            Err(ConfigError::Invalid(v)) => {
                let fields: Vec<&str> = v.iter().map(|e| e.field.as_str()).collect();
                assert_eq!(fields, ["formula", "sweep.var"]);
            }
            other => panic!("{other:?}"),
        }
        let odd = FIG4A.replace("\"to\": 180", "\"to\": 180, \"step\": 3");
        assert!(matches!(SweepConfig::from_json(&odd), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn fifteen_j_slot_names() {
        let names = SymbolKind::FifteenJ.slot_names(15);
        assert_eq!(names[0], "j1");
        assert_eq!(names[5], "l1");
        assert_eq!(names[14], "k5");
    }
}
