use std::fmt::Write as _;

use serde::Serialize;

use crate::quaternion::Quaternion;
use crate::verify::SampleConfig;

/// How many violating samples are kept verbatim in a report.
pub const MAX_VIOLATION_WITNESSES: usize = 32;

/// How limits inferior are approximated, echoed in every report.
pub const LIMINF_POLICY: &str =
    "liminf approximated by the minimum over the last 4 points of the dyadic radial path or cone ray";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub count: usize,
    pub functions: usize,
    pub truncation: usize,
    pub tol_eq: f64,
    pub tol_strict: f64,
    pub k_radial: usize,
    pub liminf_policy: String,
}

impl From<&SampleConfig> for ConfigEcho {
    fn from(cfg: &SampleConfig) -> Self {
        ConfigEcho {
            seed: cfg.seed,
            count: cfg.count,
            functions: cfg.functions,
            truncation: cfg.truncation,
            tol_eq: cfg.tol_eq,
            tol_strict: cfg.tol_strict,
            k_radial: cfg.k_radial,
            liminf_policy: LIMINF_POLICY.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Quaternion>,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Quaternion>,
}

/// Per-check aggregate, used for the text table.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckSummary {
    pub label: String,
    pub samples: usize,
    pub min_margin: f64,
    pub violations: usize,
    worst: Option<Witness>,
}

impl CheckSummary {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Outcome of a verification suite. `pass` holds exactly when there are no
/// violations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: ConfigEcho,
    pub samples: usize,
    pub min_margin: Option<f64>,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
    pub pass: bool,
    #[serde(skip)]
    pub checks: Vec<CheckSummary>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, label: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.label == label)
    }

    /// One line per check, suffixed PASS or FAIL.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let min = self
            .min_margin
            .map_or("n/a".to_string(), |m| format!("{m:.6e}"));
        let _ = writeln!(
            out,
            "suite {}: {} samples, min margin {}, {} violations",
            self.suite, self.samples, min, self.violations
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {}: n={} min margin {:.6e} violations {} {}",
                c.label,
                c.samples,
                c.min_margin,
                c.violations,
                if c.pass() { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "result {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// Accumulates check outcomes in recording order. Callers that evaluate
/// samples in parallel collect the results by index first and record them
/// sequentially, which keeps reports independent of scheduling.
#[derive(Clone, Debug)]
pub struct ReportBuilder {
    suite: String,
    config: ConfigEcho,
    tol_strict: f64,
    tol_eq: f64,
    checks: Vec<CheckSummary>,
    violating: Vec<Witness>,
    samples: usize,
    violations: usize,
}

impl ReportBuilder {
    pub fn new(suite: &str, cfg: &SampleConfig) -> Self {
        ReportBuilder {
            suite: suite.to_string(),
            config: cfg.into(),
            tol_strict: cfg.tol_strict,
            tol_eq: cfg.tol_eq,
            checks: Vec::new(),
            violating: Vec::new(),
            samples: 0,
            violations: 0,
        }
    }

    pub fn tol_strict(&self) -> f64 {
        self.tol_strict
    }

    pub fn tol_eq(&self) -> f64 {
        self.tol_eq
    }

    pub fn record(
        &mut self,
        label: &str,
        point: Option<Quaternion>,
        margin: f64,
        violated: bool,
        value: Option<Quaternion>,
    ) {
        let witness = Witness {
            check: label.to_string(),
            point,
            margin,
            value,
        };
        let idx = match self.checks.iter().position(|c| c.label == label) {
            Some(i) => i,
            None => {
                self.checks.push(CheckSummary {
                    label: label.to_string(),
                    samples: 0,
                    min_margin: f64::INFINITY,
                    violations: 0,
                    worst: None,
                });
                self.checks.len() - 1
            }
        };
        let check = &mut self.checks[idx];
        check.samples += 1;
        self.samples += 1;
        let worse = match &check.worst {
            None => true,
            Some(w) => margin < w.margin || (margin.is_nan() && !w.margin.is_nan()),
        };
        if margin < check.min_margin || margin.is_nan() {
            check.min_margin = if margin.is_nan() {
                f64::NEG_INFINITY
            } else {
                margin
            };
        }
        if violated {
            check.violations += 1;
            self.violations += 1;
            if self.violating.len() < MAX_VIOLATION_WITNESSES {
                self.violating.push(witness.clone());
            }
        }
        if worse {
            check.worst = Some(witness);
        }
    }

    /// `margin >= tol_strict`.
    pub fn inequality(
        &mut self,
        label: &str,
        point: Option<Quaternion>,
        margin: f64,
        value: Option<Quaternion>,
    ) {
        let violated = !(margin >= self.tol_strict);
        self.record(label, point, margin, violated, value);
    }

    /// `margin >= floor`.
    pub fn at_least(
        &mut self,
        label: &str,
        point: Option<Quaternion>,
        margin: f64,
        floor: f64,
        value: Option<Quaternion>,
    ) {
        let violated = !(margin >= floor);
        self.record(label, point, margin, violated, value);
    }

    /// `|deviation| <= tol`, recorded with margin `-|deviation|`.
    pub fn equality(
        &mut self,
        label: &str,
        point: Option<Quaternion>,
        deviation: f64,
        tol: f64,
        value: Option<Quaternion>,
    ) {
        let violated = !(deviation.abs() <= tol);
        self.record(label, point, -deviation.abs(), violated, value);
    }

    /// Boolean outcome, recorded with margin 0 when it holds and -1 otherwise.
    pub fn flag(&mut self, label: &str, ok: bool, value: Option<Quaternion>) {
        self.record(label, None, if ok { 0.0 } else { -1.0 }, !ok, value);
    }

    /// Adds the checks of a finished report under `prefix/`.
    pub fn absorb(&mut self, prefix: &str, report: &Report) {
        for c in &report.checks {
            let label = format!("{prefix}/{}", c.label);
            self.checks.push(CheckSummary {
                label: label.clone(),
                samples: c.samples,
                min_margin: c.min_margin,
                violations: c.violations,
                worst: c.worst.clone().map(|mut w| {
                    w.check = label.clone();
                    w
                }),
            });
        }
        for w in report.witnesses.iter() {
            let is_violation = report.check(&w.check).is_some_and(|c| c.violations > 0)
                && self.violating.len() < MAX_VIOLATION_WITNESSES;
            if is_violation {
                let mut w = w.clone();
                w.check = format!("{prefix}/{}", w.check);
                if !self.violating.contains(&w) {
                    self.violating.push(w);
                }
            }
        }
        self.samples += report.samples;
        self.violations += report.violations;
    }

    pub fn finish(self) -> Report {
        let min_margin = self
            .checks
            .iter()
            .map(|c| c.min_margin)
            .fold(None, |acc: Option<f64>, m| {
                Some(acc.map_or(m, |a| a.min(m)))
            });
        let mut witnesses = self.violating;
        for c in &self.checks {
            if let Some(w) = &c.worst {
                if !witnesses.contains(w) {
                    witnesses.push(w.clone());
                }
            }
        }
        Report {
            suite: self.suite,
            config: self.config,
            samples: self.samples,
            min_margin,
            violations: self.violations,
            witnesses,
            pass: self.violations == 0,
            checks: self.checks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_no_violations() {
        let cfg = SampleConfig::default();
        let mut b = ReportBuilder::new("demo", &cfg);
        b.inequality("a", None, 0.5, None);
        b.inequality("a", Some(Quaternion::I), -1e-12, None);
        b.equality("b", None, 1e-9, 1e-8, None);
        let r = b.finish();
        assert!(r.pass);
        assert_eq!(r.samples, 3);
        assert_eq!(r.min_margin, Some(-1e-9));
        assert_eq!(r.witnesses.len(), 2);

        let mut b = ReportBuilder::new("demo", &cfg);
        b.inequality("a", Some(Quaternion::J), -1e-3, None);
        b.flag("c", false, None);
        let r = b.finish();
        assert!(!r.pass);
        assert_eq!(r.violations, 2);
        assert!(r.to_text().contains("a: n=1"));
        assert!(r.to_text().ends_with("result FAIL\n"));
    }

    #[test]
    fn json_key_order_is_fixed() {
        let cfg = SampleConfig::default();
        let mut b = ReportBuilder::new("demo", &cfg);
        b.inequality("a", Some(Quaternion::K), 0.25, Some(Quaternion::ONE));
        let json = b.finish().to_json();
        let keys = [
            "\"suite\"",
            "\"config\"",
            "\"samples\"",
            "\"min_margin\"",
            "\"violations\"",
            "\"witnesses\"",
            "\"pass\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"point\": [\n"));
    }

    #[test]
    fn nan_margin_counts_as_violation() {
        let cfg = SampleConfig::default();
        let mut b = ReportBuilder::new("demo", &cfg);
        b.inequality("a", None, f64::NAN, None);
        let r = b.finish();
        assert_eq!(r.violations, 1);
        assert_eq!(r.min_margin, Some(f64::NEG_INFINITY));
    }
}
