use crate::initial_data::RadialProfile;
use crate::solver::RadialField;

pub const DECAY_SLACK: f64 = 1e-9;
const PRE_TOL: f64 = 1e-8;

/// `σ = (r₁ − r₀)/(2 + r₁ − 2r₀)`.
pub fn decay_sigma(r0: f64, r1: f64) -> f64 {
    (r1 - r0) / (2.0 + r1 - 2.0 * r0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecayOutcome {
    /// `slack = (1−σ)f(r₀) + 1e−9 − f(r₁) ≥ 0`.
    Pass { slack: f64 },
    Fail { slack: f64 },
    Inapplicable(String),
}

impl DecayOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, DecayOutcome::Pass { .. })
    }
}

/// Nodal samples of `f` on the closed annulus `[1, 2]`.
pub trait DecaySubject {
    fn nodes(&self) -> Vec<(f64, f64)>;
    fn at(&self, r: f64) -> f64;
    fn n(&self) -> usize;
}

impl DecaySubject for RadialField {
    fn nodes(&self) -> Vec<(f64, f64)> {
        (0..=self.nr()).map(|i| (self.radius(i), self.values[i])).collect()
    }
    fn at(&self, r: f64) -> f64 {
        self.eval(r)
    }
    fn n(&self) -> usize {
        self.domain.n
    }
}

impl DecaySubject for RadialProfile {
    fn nodes(&self) -> Vec<(f64, f64)> {
        self.nodes(4096).into_iter().map(|r| (r, self.value(r))).collect()
    }
    fn at(&self, r: f64) -> f64 {
        self.value(r)
    }
    fn n(&self) -> usize {
        self.domain.n
    }
}

/// Checks the lemma's hypotheses on the samples: boundary values 1 and 0,
/// `f_r ≤ 0` and `Δf ≥ 0` up to `1e−8`.
pub fn decay_preconditions<S: DecaySubject + ?Sized>(f: &S) -> Result<(), String> {
    let nodes = f.nodes();
    let m = nodes.len() - 1;
    let (r_first, f_first) = nodes[0];
    let (r_last, f_last) = nodes[m];
    if (r_first - 1.0).abs() > 1e-12 || (r_last - 2.0).abs() > 1e-12 {
        return Err(format!("domain is [{r_first}, {r_last}], not [1, 2]"));
    }
    if (f_first - 1.0).abs() > 1e-10 || f_last.abs() > 1e-10 {
        return Err(format!("boundary values {f_first}, {f_last}"));
    }
    let k = f.n() as f64 - 1.0;
    for i in 1..m {
        let (r, u) = nodes[i];
        let h = nodes[i + 1].0 - r;
        let (ul, ur) = (nodes[i - 1].1, nodes[i + 1].1);
        let slope = (ur - ul) / (2.0 * h);
        if slope > PRE_TOL {
            return Err(format!("f_r = {slope:e} > 0 at r = {r}"));
        }
        let lap = (ur - 2.0 * u + ul) / (h * h) + k * slope / r;
        if lap < -PRE_TOL {
            return Err(format!("Laplacian {lap:e} < 0 at r = {r}"));
        }
    }
    Ok(())
}

/// Verifies `f(r₁) ≤ (1−σ) f(r₀) + 1e−9` after checking the hypotheses.
pub fn radial_decay_check<S: DecaySubject + ?Sized>(f: &S, r0: f64, r1: f64) -> DecayOutcome {
    if !(1.0 < r0 && r0 < r1 && r1 < 2.0) {
        return DecayOutcome::Inapplicable(format!("need 1 < r0 < r1 < 2, got ({r0}, {r1})"));
    }
    if let Err(e) = decay_preconditions(f) {
        return DecayOutcome::Inapplicable(e);
    }
    decay_inequality(f, r0, r1)
}

fn decay_inequality<S: DecaySubject + ?Sized>(f: &S, r0: f64, r1: f64) -> DecayOutcome {
    let sigma = decay_sigma(r0, r1);
    let slack = (1.0 - sigma) * f.at(r0) + DECAY_SLACK - f.at(r1);
    if slack >= 0.0 {
        DecayOutcome::Pass { slack }
    } else {
        DecayOutcome::Fail { slack }
    }
}

/// The radii `1.05, 1.15, …, 1.95`.
pub fn decay_lattice() -> Vec<f64> {
    (0..10).map(|k| 1.05 + 0.1 * k as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecaySuiteReport {
    pub checks: usize,
    pub failures: usize,
    pub inapplicable: usize,
    pub worst_slack: f64,
    /// `(t, r0, r1, slack)` of each failure.
    pub failed: Vec<(f64, f64, f64, f64)>,
}

/// Runs every lattice pair `r₀ < r₁` on every `(t, f)` given.
pub fn decay_suite<'a, S, I>(snapshots: I) -> DecaySuiteReport
where
    S: DecaySubject + 'a,
    I: IntoIterator<Item = (f64, &'a S)>,
{
    let lattice = decay_lattice();
    let mut rep = DecaySuiteReport {
        worst_slack: f64::INFINITY,
        ..Default::default()
    };
    for (t, f) in snapshots {
        let pre = decay_preconditions(f);
        for (a, &r0) in lattice.iter().enumerate() {
            for &r1 in &lattice[a + 1..] {
                rep.checks += 1;
                if pre.is_err() {
                    rep.inapplicable += 1;
                    continue;
                }
                match decay_inequality(f, r0, r1) {
                    DecayOutcome::Pass { slack } => rep.worst_slack = rep.worst_slack.min(slack),
                    DecayOutcome::Fail { slack } => {
                        rep.failures += 1;
                        rep.worst_slack = rep.worst_slack.min(slack);
                        rep.failed.push((t, r0, r1, slack));
                    }
                    DecayOutcome::Inapplicable(_) => rep.inapplicable += 1,
                }
            }
        }
    }
    rep
}
