use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Position ratio of an intermediate curve between two curves, in `]0, 1[`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RatioK(f64);

impl RatioK {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(RatioK(value))
        } else {
            invalid(format!("K must lie in the open interval (0, 1), got {value}"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - K`, the same curve seen from the other side.
    pub fn complement(self) -> RatioK {
        RatioK(1.0 - self.0)
    }
}

impl TryFrom<f64> for RatioK {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        RatioK::new(v)
    }
}

impl From<RatioK> for f64 {
    fn from(k: RatioK) -> f64 {
        k.0
    }
}

/// A local station spacing on `[from, to]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOverride {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

/// Spacing `P` of the discretisation planes, with optional per-interval overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepDoc")]
pub struct StepP {
    value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<StepOverride>,
}

#[derive(Deserialize)]
struct StepDoc {
    value: f64,
    #[serde(default)]
    overrides: Vec<StepOverride>,
}

impl TryFrom<StepDoc> for StepP {
    type Error = Error;
    fn try_from(d: StepDoc) -> Result<Self> {
        StepP::with_overrides(d.value, d.overrides)
    }
}

impl StepP {
    pub fn new(value: f64) -> Result<Self> {
        Self::with_overrides(value, Vec::new())
    }

    pub fn with_overrides(value: f64, mut overrides: Vec<StepOverride>) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return invalid(format!("step P must be positive, got {value}"));
        }
        overrides.sort_by(|a, b| a.from.total_cmp(&b.from));
        for o in &overrides {
            if !(o.step > 0.0 && o.step.is_finite() && o.to > o.from) {
                return invalid(format!("bad step override {o:?}"));
            }
        }
        if overrides.windows(2).any(|w| w[1].from < w[0].to) {
            return invalid("step overrides overlap");
        }
        Ok(StepP { value, overrides })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn overrides(&self) -> &[StepOverride] {
        &self.overrides
    }

    /// Station positions on `[lo, hi]`: each interval starts at its lower end,
    /// advances by its step, and the last station is clamped to the upper end.
    pub fn stations(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut intervals: Vec<(f64, f64, f64)> = Vec::new();
        let mut cursor = lo;
        for o in &self.overrides {
            let (a, b) = (o.from.max(lo), o.to.min(hi));
            if b <= a {
                continue;
            }
            if a > cursor {
                intervals.push((cursor, a, self.value));
            }
            intervals.push((a, b, o.step));
            cursor = b;
        }
        if hi > cursor {
            intervals.push((cursor, hi, self.value));
        }
        let mut out = vec![lo];
        for (a, b, step) in intervals {
            let mut k = 1usize;
            loop {
                let s = a + k as f64 * step;
                if s >= b - 1e-9 * step.max(1.0) {
                    break;
                }
                out.push(s);
                k += 1;
            }
            out.push(b);
        }
        out
    }
}
