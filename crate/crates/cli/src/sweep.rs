//! Noise-level lists and CSV rows.

use std::fmt::Write as _;

use ghz_distill::protocol::DistillationReport;

use crate::error::CliError;

/// `a,b,c` or log-spaced `start:stop:count`.
pub fn parse_levels(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("invalid noise levels {spec:?}: {why}"));
    let levels = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad("stop is not a number"))?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count is not an integer"))?;
        if count == 0 {
            return Err(bad("count must be positive"));
        }
        if start <= 0.0 || stop <= 0.0 {
            return Err(bad("log spacing needs positive endpoints"));
        }
        if count == 1 {
            vec![start]
        } else {
            let (a, b) = (start.ln(), stop.ln());
            (0..count).map(|i| round_sig(f64::exp(a + (b - a) * i as f64 / (count - 1) as f64))).collect()
        }
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    if let Some(p) = levels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(bad(&format!("{p} is outside [0, 1]")));
    }
    Ok(levels)
}

/// Twelve significant digits, so log-spaced endpoints print cleanly.
fn round_sig(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub const CSV_HEADER: &str = "protocol,code,placement,topology,p,trials,failures,p_f,stderr,fidelity,seed";

pub struct Row<'a> {
    pub protocol: &'a str,
    pub code: &'a str,
    pub placement: &'a str,
    pub topology: &'a str,
    pub p: f64,
    pub seed: u64,
    pub report: &'a DistillationReport,
}

impl Row<'_> {
    pub fn write(&self, out: &mut String) {
        let r = self.report;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.protocol,
            self.code,
            self.placement,
            self.topology,
            self.p,
            r.trials,
            r.failures,
            r.p_f,
            r.stderr,
            r.fidelity,
            self.seed
        );
    }
}
