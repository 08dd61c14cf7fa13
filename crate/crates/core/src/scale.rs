//! Every size and constant of the construction, made explicit.
//!
//! Asymptotic quantities are written as `max(floor, ⌈mult · f(n, p)⌉)` where
//! `f` is the literal asymptotic expression. [`ScaleConfig::literal`] sets every
//! multiplier to 1; the default is tuned for n around 10³, where the literal
//! expressions either degenerate or exceed n.

use crate::error::{Error, Result};
use crate::pseudorandom::{guarded_ln, PseudoParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectStrategy {
    Greedy,
    Doubling,
    GreedyThenDoubling,
}

/// How the five parts are sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sizing {
    /// `|V_2|, |V_3|, |V_4|` at the midpoint of their windows.
    Literal,
    /// Each reservoir sized to what its connector workload consumes, times `reservoir_factor`.
    Reservoir,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleConfig {
    /// `k = max(k_floor, ⌈k_mult · 3⌈ln n⌉⌉)`.
    pub k_mult: f64,
    pub k_floor: usize,
    /// Chord length `max(chord_floor, ⌈chord_mult · 10⌈ln n⌉⌉)`.
    pub chord_mult: f64,
    pub chord_floor: usize,
    /// Backbone connector length, same shape as the chord length.
    pub backbone_mult: f64,
    pub backbone_floor: usize,
    /// Length of the final walks through `V_1`, same shape again.
    pub final_mult: f64,
    pub final_floor: usize,
    /// Extra final lengths tried after the first one fails.
    pub final_length_spread: usize,
    /// `|V_1| = max(⌈n / ln³ n⌉, ⌈n / v1_divisor⌉)`; `None` keeps the literal size.
    pub v1_divisor: Option<f64>,
    pub sizing: Sizing,
    /// Reservoir slack `c_K`: a connector with `t` pairs of length `l`
    /// needs `|K| ≥ c_K · t · (l - 1)`.
    pub reservoir_factor: f64,
    /// Segment size `max(segment_floor, ⌊n / ln⁵ n⌋, ⌈segment_mult · ln n / p⌉)`.
    pub segment_mult: f64,
    pub segment_floor: usize,
    /// Join path-cover pieces into few long paths before the final connection.
    pub merge_paths: bool,
    pub strategy: ConnectStrategy,
    pub greedy_restarts: usize,
    /// Level-set size in tree doubling: `max(h_floor, 2t, ⌈h_mult · 6 ln^{2.2} n / p⌉)`.
    pub h_mult: f64,
    pub h_floor: usize,
    pub partition_retries: usize,
    pub segment_retries: usize,
    pub pipeline_restarts: usize,
    pub final_attempts: usize,
    /// Node budget for one walk extraction.
    pub extraction_budget: usize,
    /// Bridge candidates tried per pair connection.
    pub bridge_attempts: usize,
    /// Treat hypothesis violations (degree bounds, reservoir sizes) as fatal.
    pub strict: bool,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            k_mult: 0.01,
            k_floor: 1,
            chord_mult: 0.01,
            chord_floor: 4,
            backbone_mult: 0.01,
            backbone_floor: 4,
            final_mult: 0.01,
            final_floor: 4,
            final_length_spread: 2,
            v1_divisor: Some(64.0),
            sizing: Sizing::Reservoir,
            reservoir_factor: 2.5,
            segment_mult: 1.5,
            segment_floor: 8,
            merge_paths: true,
            strategy: ConnectStrategy::GreedyThenDoubling,
            greedy_restarts: 3,
            h_mult: 0.01,
            h_floor: 4,
            partition_retries: 10,
            segment_retries: 4,
            pipeline_restarts: 3,
            final_attempts: 24,
            extraction_budget: 4000,
            bridge_attempts: 64,
            strict: false,
        }
    }
}

/// Concrete sizes for one digraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedScale {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    /// Absorber cycle length `4k + 3`.
    pub cycle_len: usize,
    pub chord_len: usize,
    pub backbone_len: usize,
    pub final_len: usize,
    /// `|V_1|, ..., |V_5|`.
    pub part_sizes: [usize; 5],
    pub segment_size: usize,
}

fn scaled(floor: usize, mult: f64, base: f64) -> usize {
    floor.max((mult * base).ceil() as usize)
}

impl ScaleConfig {
    /// Literal constants: `k = 3⌈ln n⌉`, `l = 10⌈ln n⌉`, `|V_1| = n / ln³ n`,
    /// middle parts at the window midpoints, segments of `n / ln⁵ n`.
    pub fn literal() -> Self {
        ScaleConfig {
            k_mult: 1.0,
            chord_mult: 1.0,
            backbone_mult: 1.0,
            final_mult: 1.0,
            v1_divisor: None,
            sizing: Sizing::Literal,
            segment_mult: 1e-9,
            segment_floor: 2,
            merge_paths: false,
            strategy: ConnectStrategy::Doubling,
            h_mult: 1.0,
            reservoir_factor: 4.0,
            ..ScaleConfig::default()
        }
    }

    /// Tight reservoirs and the shortest walks; for small dense inputs.
    pub fn permissive() -> Self {
        ScaleConfig {
            reservoir_factor: 1.0,
            segment_floor: 2,
            segment_mult: 0.5,
            chord_floor: 2,
            backbone_floor: 2,
            final_floor: 2,
            ..ScaleConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mults = [
            ("k_mult", self.k_mult),
            ("chord_mult", self.chord_mult),
            ("backbone_mult", self.backbone_mult),
            ("final_mult", self.final_mult),
            ("v1_divisor", self.v1_divisor.unwrap_or(1.0)),
            ("reservoir_factor", self.reservoir_factor),
            ("segment_mult", self.segment_mult),
            ("h_mult", self.h_mult),
        ];
        if let Some((name, v)) = mults.iter().find(|(_, v)| v.is_nan() || *v <= 0.0) {
            return Err(Error::InvalidParam(format!("{name} = {v} must be positive")));
        }
        if self.k_floor < 1 {
            return Err(Error::InvalidParam("k_floor must be at least 1".into()));
        }
        if self.chord_floor < 2 || self.backbone_floor < 2 || self.final_floor < 2 {
            return Err(Error::InvalidParam("walk length floors must be at least 2".into()));
        }
        if self.segment_floor < 2 {
            return Err(Error::InvalidParam("segment_floor must be at least 2".into()));
        }
        if self.greedy_restarts == 0 || self.partition_retries == 0 || self.pipeline_restarts == 0 {
            return Err(Error::InvalidParam("retry budgets must be positive".into()));
        }
        Ok(())
    }

    /// Sets one knob from its textual value, as in `--scale.k_floor=2`.
    pub fn set_knob(&mut self, name: &str, value: &str) -> Result<()> {
        let mut js = serde_json::to_value(&*self)?;
        let obj = js.as_object_mut().expect("config serializes as an object");
        let Some(slot) = obj.get(name) else {
            return Err(Error::InvalidParam(format!("unknown scale knob `{name}`")));
        };
        let parsed = match slot {
            serde_json::Value::String(_) => serde_json::Value::String(value.to_string()),
            _ => serde_json::from_str(value)
                .map_err(|e| Error::InvalidParam(format!("bad value `{value}` for {name}: {e}")))?,
        };
        obj.insert(name.to_string(), parsed);
        let next: ScaleConfig = serde_json::from_value(js)
            .map_err(|e| Error::InvalidParam(format!("bad value `{value}` for {name}: {e}")))?;
        next.validate()?;
        *self = next;
        Ok(())
    }

    pub fn k(&self, n: usize) -> usize {
        scaled(self.k_floor, self.k_mult, 3.0 * guarded_ln(n).ceil())
    }

    pub fn chord_len(&self, n: usize) -> usize {
        scaled(self.chord_floor, self.chord_mult, 10.0 * guarded_ln(n).ceil())
    }

    pub fn backbone_len(&self, n: usize) -> usize {
        scaled(self.backbone_floor, self.backbone_mult, 10.0 * guarded_ln(n).ceil())
    }

    pub fn final_len(&self, n: usize) -> usize {
        scaled(self.final_floor, self.final_mult, 10.0 * guarded_ln(n).ceil())
    }

    pub fn v1_size(&self, n: usize) -> usize {
        let lit = (n as f64 / guarded_ln(n).powi(3)).ceil() as usize;
        let floor = self.v1_divisor.map_or(0, |d| (n as f64 / d).ceil() as usize);
        lit.max(floor).max(1)
    }

    pub fn segment_size(&self, n: usize, p: f64) -> usize {
        let lit = (n as f64 / guarded_ln(n).powi(5)).floor() as usize;
        let dens = (self.segment_mult * guarded_ln(n) / p).ceil() as usize;
        self.segment_floor.max(lit).max(dens)
    }

    /// Smallest reservoir accepted for `t` walks of length `len`.
    pub fn reservoir_need(&self, t: usize, len: usize) -> usize {
        (self.reservoir_factor * t as f64 * len.saturating_sub(1) as f64).ceil() as usize
    }

    pub fn resolve(&self, params: &PseudoParams) -> Result<ResolvedScale> {
        self.validate()?;
        let n = params.n;
        let k = self.k(n);
        let cycle_len = 4 * k + 3;
        let chord_len = self.chord_len(n);
        let backbone_len = self.backbone_len(n);
        let s1 = self.v1_size(n);
        let (s2, s3, s4) = match self.sizing {
            Sizing::Literal => {
                let (lo, hi) = params.q2_middle_window();
                let mid = ((lo + hi) / 2.0).floor() as usize;
                (mid, mid, mid)
            }
            Sizing::Reservoir => (
                self.reservoir_need(s1, cycle_len),
                self.reservoir_need(2 * k * s1, chord_len),
                self.reservoir_need(s1.saturating_sub(1), backbone_len).max(1),
            ),
        };
        let used = s1 + s2 + s3 + s4;
        if used >= n {
            return Err(Error::InvalidParam(format!(
                "n = {n} too small for the scale: parts V1..V4 need {used} vertices"
            )));
        }
        Ok(ResolvedScale {
            n,
            p: params.p,
            k,
            cycle_len,
            chord_len,
            backbone_len,
            final_len: self.final_len(n),
            part_sizes: [s1, s2, s3, s4, n - used],
            segment_size: self.segment_size(n, params.p),
        })
    }
}
