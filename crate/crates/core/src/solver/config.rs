use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Crank–Nicolson in 1-D, Peaceman–Rachford splitting in 2-D.
    Trapezoidal,
    /// Backward Euler (Lie-split in 2-D).
    BackwardStep,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Trapezoidal => "trapezoidal",
            Scheme::BackwardStep => "backward-step",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trapezoidal" | "implicit-trapezoidal" | "cn" => Ok(Scheme::Trapezoidal),
            "backward-step" | "backward" | "be" => Ok(Scheme::BackwardStep),
            other => Err(invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub nr: usize,
    pub ntheta: usize,
    pub t_final: f64,
    /// Times at which snapshots are stored, in addition to `t = 0` and
    /// `t_final`.
    pub snapshot_times: Vec<f64>,
    /// Leading steps replaced by two backward half-steps each, to damp the
    /// mismatch between initial and boundary data.
    pub startup_steps: usize,
}

impl SolverConfig {
    pub fn new(dt: f64, nr: usize, ntheta: usize, t_final: f64) -> Self {
        SolverConfig {
            scheme: Scheme::Trapezoidal,
            dt,
            nr,
            ntheta,
            t_final,
            snapshot_times: Vec::new(),
            startup_steps: 2,
        }
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    /// `count` snapshots equally spaced up to `t_final`.
    pub fn with_uniform_snapshots(mut self, count: usize) -> Self {
        self.snapshot_times = (1..=count)
            .map(|k| self.t_final * k as f64 / count as f64)
            .collect();
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_startup(mut self, steps: usize) -> Self {
        self.startup_steps = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0) {
            return Err(invalid("t_final", format!("must be positive, got {}", self.t_final)));
        }
        if self.dt > self.t_final {
            return Err(invalid("dt", "dt exceeds t_final"));
        }
        if self.nr < 4 {
            return Err(invalid("nr", "need at least 4 radial cells"));
        }
        let mut prev = 0.0;
        for &t in &self.snapshot_times {
            if !(t > prev && t <= self.t_final) {
                return Err(invalid(
                    "snapshots",
                    format!("times must increase strictly within (0, t_final]; saw {t} after {prev}"),
                ));
            }
            prev = t;
        }
        Ok(())
    }

    /// Stored snapshot times after `t = 0`, always ending at `t_final`.
    pub fn targets(&self) -> Vec<f64> {
        let mut t = self.snapshot_times.clone();
        if t.last().map_or(true, |&l| l < self.t_final) {
            t.push(self.t_final);
        }
        t
    }

    /// Step sizes, landing exactly on every target; a step that ends on a
    /// target carries it. Each gap between targets is cut into equal steps
    /// no longer than `dt`.
    pub fn steps(&self) -> Vec<(f64, Option<f64>)> {
        let mut out = Vec::new();
        let mut now = 0.0;
        for target in self.targets() {
            let span = target - now;
            let k = ((span / self.dt) - 1e-9).ceil().max(1.0) as usize;
            let step = span / k as f64;
            out.extend((1..k).map(|_| (step, None)));
            out.push((step, Some(target)));
            now = target;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_hit_targets() {
        let c = SolverConfig::new(0.3, 8, 8, 1.0).with_snapshots(vec![0.5]);
        let steps = c.steps();
        let total: f64 = steps.iter().map(|s| s.0).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert_eq!(steps.iter().filter_map(|s| s.1).collect::<Vec<_>>(), vec![0.5, 1.0]);
    }

    #[test]
    fn rejects_unsorted_snapshots() {
        let c = SolverConfig::new(0.1, 8, 8, 1.0).with_snapshots(vec![0.5, 0.2]);
        assert!(c.validate().is_err());
    }
}
