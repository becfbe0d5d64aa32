//! The JSON class-record file written by the enumeration pipeline.
//!
//! The file is JSON with one class per line, sorted by canonical key.
//! Floats are rounded to 15 significant digits before writing, so reading a
//! file and writing it again reproduces the same bytes.

use serde::{Deserialize, Serialize};

use crate::arrangement::{profile_of, Label, TripleSystem};
use crate::canon::canonical_key;
use crate::error::{Error, Result};
use crate::realize::{Method, Verdict};

pub const FORMAT: &str = "orchard-records/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordFile {
    pub format: String,
    pub classes: Vec<ClassRecord>,
}

impl Default for RecordFile {
    fn default() -> Self {
        RecordFile {
            format: FORMAT.to_string(),
            classes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    /// Bracketed listing of the canonical form.
    pub key: String,
    pub n: Label,
    /// Triples of the canonical form; line `i` of `verdict.lines` is label `i + 1`.
    pub triples: Vec<[Label; 3]>,
    /// Intersection census as `(multiplicity, count)` pairs.
    pub profile: Vec<(u32, u64)>,
    /// Number of sweep words in the class.
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    /// `realizable`, `obstructed` or `unknown`.
    pub status: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// Forced incidences, in the labels of the class's sweep word.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub incidences: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<[f64; 3]>,
}

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

impl VerdictRecord {
    pub fn from_verdict(v: &Verdict) -> Self {
        let mut r = VerdictRecord {
            status: String::new(),
            detail: v.summary(),
            method: None,
            incidences: Vec::new(),
            samples: None,
            parameters: Vec::new(),
            max_residual: None,
            lines: Vec::new(),
        };
        match v {
            Verdict::Realizable {
                lines,
                parameters,
                max_residual,
                method,
            } => {
                r.status = "realizable".into();
                r.method = Some(match method {
                    Method::Generic => "generic".to_string(),
                    Method::RootSearch => "root-search".to_string(),
                    Method::GlobalFit { restart } => format!("global-fit/{restart}"),
                });
                r.parameters = parameters.iter().map(|&p| round15(p)).collect();
                r.max_residual = Some(round15(*max_residual));
                r.lines = lines.iter().map(|l| l.normalized().coords().map(round15)).collect();
            }
            Verdict::Obstructed {
                incidences,
                samples,
                max_value,
            } => {
                r.status = "obstructed".into();
                r.incidences = incidences.clone();
                r.samples = Some(*samples);
                r.max_residual = Some(round15(*max_value));
            }
            Verdict::Unknown { .. } => r.status = "unknown".into(),
        }
        r
    }
}

impl ClassRecord {
    /// A record for the canonical form of `ts`.
    pub fn new(ts: &TripleSystem, multiplicity: u64) -> Result<Self> {
        let key = canonical_key(ts);
        let system = key.system();
        Ok(ClassRecord {
            key: key.to_string(),
            n: system.n(),
            triples: system.triples().iter().map(|t| t.labels()).collect(),
            profile: profile_of(system)?.counts().collect(),
            multiplicity,
            word: None,
            verdict: None,
        })
    }

    pub fn system(&self) -> Result<TripleSystem> {
        TripleSystem::from_arrays(self.n, &self.triples)
    }

    /// Checks that the triples are canonical and agree with the key and profile.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Record(m));
        let ts = self.system()?;
        let key = canonical_key(&ts);
        if key.system() != &ts {
            return bad(format!("triples of {} are not in canonical form", self.key));
        }
        if key.to_string() != self.key {
            return bad(format!("key {} does not match its triples", self.key));
        }
        let profile: Vec<(u32, u64)> = profile_of(&ts)?.counts().collect();
        if profile != self.profile {
            return bad(format!("profile {:?} disagrees with the triples of {}", self.profile, self.key));
        }
        if let Some(v) = &self.verdict {
            if !v.lines.is_empty() && v.lines.len() != self.n as usize {
                return bad(format!("{} lines for {} labels in {}", v.lines.len(), self.n, self.key));
            }
        }
        Ok(())
    }

    /// `t_r` from the stored profile.
    pub fn t(&self, r: u32) -> u64 {
        self.profile.iter().find(|&&(k, _)| k == r).map_or(0, |&(_, c)| c)
    }
}

/// Serializes `file` with classes sorted by key.
pub fn emit_records(file: &RecordFile) -> String {
    let mut file = file.clone();
    file.classes.sort_by(|a, b| a.key.cmp(&b.key));
    // one class per line keeps the file diffable
    let format = serde_json::to_string(&file.format).expect("string serializes");
    let mut s = format!("{{\n  \"format\": {format},\n  \"classes\": [");
    for (i, c) in file.classes.iter().enumerate() {
        s.push_str(if i == 0 { "\n    " } else { ",\n    " });
        s.push_str(&serde_json::to_string(c).expect("records serialize"));
    }
    if !file.classes.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

/// Parses and validates a record file.
pub fn parse_records(text: &str) -> Result<RecordFile> {
    let file: RecordFile = serde_json::from_str(text).map_err(|e| Error::Record(e.to_string()))?;
    if file.format != FORMAT {
        return Err(Error::Record(format!("unsupported format '{}'", file.format)));
    }
    for c in &file.classes {
        c.validate()?;
    }
    Ok(file)
}
