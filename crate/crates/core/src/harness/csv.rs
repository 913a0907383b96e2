//! CSV output with `#` metadata lines and fixed 12-significant-digit numbers.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::trace::{ProtocolTrace, RoundRecord};

pub const TRACE_HEADER: &str = "round,tau,polarization,entropy,round_prob,cumulative_prob";

/// Decimal with 12 significant digits; scientific notation outside
/// `[1e-5, 1e12)` in magnitude.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..12).contains(&exponent) {
        format!("{:.*}", (11 - exponent) as usize, x)
    } else {
        sci
    }
}

/// Metadata describing a trace.
pub fn trace_metadata(trace: &ProtocolTrace) -> Vec<(String, String)> {
    let p = &trace.params;
    vec![
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("M".into(), p.bath_size.to_string()),
        ("delta_ratio".into(), p.detuning.to_string()),
        ("g_ratio".into(), p.coupling.to_string()),
        ("beta_omega1".into(), p.beta_omega1.to_string()),
        ("interaction".into(), p.interaction.to_string()),
        ("strategy".into(), trace.strategy.to_string()),
        ("engine".into(), trace.engine.to_string()),
        ("initial_polarization".into(), format_sig(trace.initial_polarization)),
        ("initial_entropy".into(), format_sig(trace.initial_entropy)),
        ("stop".into(), trace.stop.map_or("none".into(), |s| s.to_string())),
    ]
}

fn write_metadata<W: Write>(out: &mut W, metadata: &[(String, String)]) -> Result<()> {
    for (key, value) in metadata {
        writeln!(out, "# {key}: {value}")?;
    }
    Ok(())
}

/// Writes `trace` as CSV; `extra` metadata follows the trace's own.
pub fn write_trace_csv<W: Write>(trace: &ProtocolTrace, extra: &[(String, String)], out: &mut W) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::Domain("cannot emit an empty trace".into()));
    }
    write_metadata(out, &trace_metadata(trace))?;
    write_metadata(out, extra)?;
    writeln!(out, "{TRACE_HEADER}")?;
    for r in &trace.rounds {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.round,
            format_sig(r.tau),
            format_sig(r.polarization),
            format_sig(r.entropy),
            format_sig(r.round_probability),
            format_sig(r.cumulative_probability)
        )?;
    }
    Ok(())
}

/// Writes `contents` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn emit_trace_csv(trace: &ProtocolTrace, path: &Path, extra: &[(String, String)]) -> Result<()> {
    let mut buffer = Vec::new();
    write_trace_csv(trace, extra, &mut buffer)?;
    write_atomic(path, &buffer)
}

/// Contents of a trace CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub metadata: Vec<(String, String)>,
    pub rounds: Vec<RoundRecord>,
}

pub fn parse_trace_csv(text: &str) -> Result<ParsedTrace> {
    let mut metadata = Vec::new();
    let mut rounds = Vec::new();
    let mut header_seen = false;
    for (number, line) in text.lines().enumerate() {
        let bad = |what: &str| Error::Config(format!("line {}: {what}", number + 1));
        if let Some(comment) = line.strip_prefix('#') {
            let (k, v) = comment.split_once(':').ok_or_else(|| bad("malformed metadata"))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
            continue;
        }
        if !header_seen {
            if line != TRACE_HEADER {
                return Err(bad("unexpected header"));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(bad("expected 6 fields"));
        }
        let num = |i: usize| fields[i].parse::<f64>().map_err(|_| bad("bad number"));
        rounds.push(RoundRecord {
            round: fields[0].parse().map_err(|_| bad("bad round index"))?,
            tau: num(1)?,
            polarization: num(2)?,
            entropy: num(3)?,
            round_probability: num(4)?,
            cumulative_probability: num(5)?,
        });
    }
    if !header_seen {
        return Err(Error::Config("missing header".into()));
    }
    Ok(ParsedTrace { metadata, rounds })
}

/// Plot-ready table with metadata, emitted as one CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            metadata: Vec::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes `<dir>/<name>.csv` atomically and returns its path.
    pub fn write_to_dir(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        write_atomic(&path, self.render().as_bytes())?;
        Ok(path)
    }

    /// Column `name` parsed as numbers.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}
