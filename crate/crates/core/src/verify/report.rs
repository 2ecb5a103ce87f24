use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Counterexample,
    NotApplicable,
}

impl Verdict {
    /// Counterexample dominates; all-not-applicable stays not-applicable.
    pub fn aggregate<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut any = false;
        let mut all_na = true;
        for v in items {
            any = true;
            match v {
                Verdict::Counterexample => return Verdict::Counterexample,
                Verdict::Pass => all_na = false,
                Verdict::NotApplicable => {}
            }
        }
        if any && all_na {
            Verdict::NotApplicable
        } else {
            Verdict::Pass
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Counterexample
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Counterexample => "counterexample",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl TrialOutcome {
    pub fn new(verdict: Verdict, witness: Option<Value>) -> Self {
        TrialOutcome { verdict, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub n: usize,
    pub trials: Vec<TrialOutcome>,
    pub verdict: Verdict,
}

impl LevelReport {
    /// Aggregates the trial verdicts; no trials is a vacuous pass.
    pub fn new(n: usize, trials: Vec<TrialOutcome>) -> Self {
        let verdict = Verdict::aggregate(trials.iter().map(|t| t.verdict));
        LevelReport { n, trials, verdict }
    }
}

/// Outcome of one experiment, reproducible from `seed` and `params`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub theorem: String,
    pub params: Value,
    pub seed: u64,
    pub levels: Vec<LevelReport>,
    pub verdict: Verdict,
    /// Wall time; left empty unless requested so output stays reproducible.
    pub elapsed_ms: Option<u64>,
}

impl ExperimentReport {
    pub fn new(theorem: &str, params: Value, seed: u64, levels: Vec<LevelReport>) -> Self {
        let verdict = Verdict::aggregate(levels.iter().map(|l| l.verdict));
        ExperimentReport {
            theorem: theorem.to_string(),
            params,
            seed,
            levels,
            verdict,
            elapsed_ms: None,
        }
    }

    /// Overrides the aggregate, e.g. for unmet hypotheses.
    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn trial_count(&self) -> usize {
        self.levels.iter().map(|l| l.trials.len()).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("theorem: {}\nparams: {}\nseed: {}\n", self.theorem, self.params, self.seed);
        for l in &self.levels {
            let passed = l.trials.iter().filter(|t| t.verdict == Verdict::Pass).count();
            out.push_str(&format!(
                "level {}: {} ({}/{} trials pass)\n",
                l.n,
                l.verdict,
                passed,
                l.trials.len()
            ));
            for (i, t) in l.trials.iter().enumerate() {
                if t.verdict != Verdict::Pass || t.witness.is_some() {
                    out.push_str(&format!("  trial {i}: {}", t.verdict));
                    if let Some(w) = &t.witness {
                        out.push_str(&format!(" {w}"));
                    }
                    out.push('\n');
                }
            }
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed_ms: {ms}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregation_rules() {
        use Verdict::*;
        assert_eq!(Verdict::aggregate([]), Pass);
        assert_eq!(Verdict::aggregate([Pass, NotApplicable]), Pass);
        assert_eq!(Verdict::aggregate([NotApplicable]), NotApplicable);
        assert_eq!(Verdict::aggregate([Pass, Counterexample, NotApplicable]), Counterexample);
    }

    #[test]
    fn json_roundtrip() {
        let r = ExperimentReport::new(
            "demo",
            serde_json::json!({"n": 1}),
            7,
            vec![LevelReport::new(1, vec![TrialOutcome::new(Verdict::Pass, None)])],
        );
        let back = ExperimentReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().unwrap().contains("\"elapsed_ms\": null"));
    }
}
