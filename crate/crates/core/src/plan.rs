//! Timed plans: `time: (action args) [duration]`, one action per line.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct TimedAction {
    pub time: f64,
    /// Display name, e.g. `(drive c1 l1 l2)`.
    pub name: String,
    /// Present for durative actions.
    pub duration: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plan {
    pub steps: Vec<TimedAction>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct PlanParseError {
    pub line: usize,
    pub message: String,
}

/// Drops float noise below a nanosecond.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl fmt::Display for TimedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", tidy(self.time), self.name)?;
        if let Some(d) = self.duration {
            write!(f, " [{}]", tidy(d))?;
        }
        Ok(())
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Plan {
    /// Parses plan text. Blank lines and `;` comments are skipped.
    pub fn parse(text: &str) -> Result<Plan, PlanParseError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let err = |m: &str| PlanParseError { line: i + 1, message: m.to_string() };
            let line = raw.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (time, rest) = line.split_once(':').ok_or_else(|| err("expected `time: (action ...)`"))?;
            let time: f64 = time.trim().parse().map_err(|_| err("bad timestamp"))?;
            let rest = rest.trim();
            let close = rest.find(')').ok_or_else(|| err("unterminated action"))?;
            if !rest.starts_with('(') {
                return Err(err("expected `(`"));
            }
            let inner: Vec<String> = rest[1..close].split_whitespace().map(|s| s.to_lowercase()).collect();
            if inner.is_empty() {
                return Err(err("empty action"));
            }
            let name = format!("({})", inner.join(" "));
            let tail = rest[close + 1..].trim();
            let duration = if tail.is_empty() {
                None
            } else {
                let d = tail
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| err("expected `[duration]`"))?;
                Some(d.trim().parse::<f64>().map_err(|_| err("bad duration"))?)
            };
            steps.push(TimedAction { time, name, duration });
        }
        Ok(Plan { steps })
    }
}
