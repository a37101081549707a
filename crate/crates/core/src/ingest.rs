//! File-based researcher profiles.
//!
//! Two formats are accepted: a per-researcher CSV with header
//! `pub_id,year,citations`, and a JSON profile document carrying the name
//! and tags as well. A manifest (JSON array of `{name, path, tags}`) lists
//! the profiles of a cohort. Synthetic profiles can be drawn from a few
//! simple citation models for testing.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::windows::{current_year, Publication, ResearcherProfile, MIN_YEAR};

pub const SCHEMA_VERSION: i64 = 1;
pub const CSV_HEADER: [&str; 3] = ["pub_id", "year", "citations"];

// keeps power-law draws in a sane integer range
const MAX_SYNTH_CITATIONS: f64 = 1e12;

#[derive(Debug, Serialize, Deserialize)]
struct ProfileDocument {
    schema_version: i64,
    name: String,
    #[serde(default)]
    tags: Vec<String>,
    publications: Vec<DocPublication>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DocPublication {
    id: String,
    year: i64,
    citations: i64,
}

/// Outcome of reading a CSV profile row by row.
#[derive(Debug)]
pub struct CsvReport {
    pub rows: usize,
    pub publications: Vec<Publication>,
    pub errors: Vec<Error>,
}

/// Parses CSV profile text, collecting one error per rejected row.
///
/// Every data row ends up either as a publication or as an error, so
/// `rows == publications.len() + errors.len()` unless the header itself is
/// wrong (then `errors` holds the header error and nothing is read).
pub fn parse_csv(text: &str, path: &Path) -> CsvReport {
    let mut report = CsvReport {
        rows: 0,
        publications: Vec::new(),
        errors: Vec::new(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    match reader.headers() {
        Ok(h) if h.iter().eq(CSV_HEADER) => {}
        Ok(h) => {
            report.errors.push(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!(
                    "expected header `{}`, found `{}`",
                    CSV_HEADER.join(","),
                    h.iter().collect::<Vec<_>>().join(",")
                ),
            });
            return report;
        }
        Err(e) => {
            report.errors.push(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: e.to_string(),
            });
            return report;
        }
    }

    let max_year = current_year();
    let mut seen = HashSet::new();
    for (idx, record) in reader.records().enumerate() {
        report.rows += 1;
        // header is line 1
        let fallback_line = idx as u64 + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(fallback_line);
                report.errors.push(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(fallback_line);
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let invalid = |message: String| Error::Validation {
            path: path.to_path_buf(),
            line: Some(line),
            message,
        };

        if record.len() != 3 {
            report
                .errors
                .push(parse_err(format!("expected 3 fields, found {}", record.len())));
            continue;
        }
        let id = record[0].trim();
        if id.is_empty() {
            report.errors.push(parse_err("empty pub_id".into()));
            continue;
        }
        let year = match parse_year(record[1].trim()) {
            Ok(y) => y,
            Err(m) => {
                report.errors.push(parse_err(m));
                continue;
            }
        };
        if !(MIN_YEAR..=max_year).contains(&year) {
            report
                .errors
                .push(invalid(format!("year {year} outside [{MIN_YEAR}, {max_year}]")));
            continue;
        }
        let citations = match parse_citations(record[2].trim()) {
            Ok(c) => c,
            Err(CountError::Negative(raw)) => {
                report
                    .errors
                    .push(invalid(format!("negative citation count {raw:?}")));
                continue;
            }
            Err(CountError::Malformed(raw)) => {
                report
                    .errors
                    .push(parse_err(format!("citation count {raw:?} is not an integer")));
                continue;
            }
        };
        if !seen.insert(id.to_string()) {
            report.errors.push(invalid(format!("duplicate pub_id {id:?}")));
            continue;
        }
        report.publications.push(Publication::new(id, year, citations));
    }
    report
}

fn parse_year(raw: &str) -> std::result::Result<i32, String> {
    if raw.len() == 4 && raw.bytes().all(|b| b.is_ascii_digit()) {
        Ok(raw.parse().expect("four ascii digits"))
    } else {
        Err(format!("year {raw:?} is not a 4-digit integer"))
    }
}

enum CountError {
    Negative(String),
    Malformed(String),
}

fn parse_citations(raw: &str) -> std::result::Result<u64, CountError> {
    // accept U+2212 as well as ASCII hyphen-minus for the negative check
    let unsigned = raw.strip_prefix('-').or_else(|| raw.strip_prefix('\u{2212}'));
    if let Some(digits) = unsigned {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CountError::Negative(raw.to_string()));
        }
        return Err(CountError::Malformed(raw.to_string()));
    }
    raw.parse()
        .map_err(|_| CountError::Malformed(raw.to_string()))
}

/// Reads a CSV profile; the researcher is named after the file stem.
pub fn load_csv_profile(path: &Path) -> Result<ResearcherProfile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report = parse_csv(&text, path);
    if let Some(first) = report.errors.into_iter().next() {
        return Err(first);
    }
    if report.publications.is_empty() {
        return Err(Error::Validation {
            path: path.to_path_buf(),
            line: None,
            message: "profile has no publications".into(),
        });
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut profile = ResearcherProfile::new(name, Vec::new(), report.publications);
    profile.sort();
    Ok(profile)
}

/// Parses a JSON profile document.
pub fn parse_profile_json(text: &str, path: &Path) -> Result<ResearcherProfile> {
    let json_err = |e: serde_json::Error| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    match value.get("schema_version").and_then(|v| v.as_i64()) {
        Some(SCHEMA_VERSION) => {}
        Some(found) => {
            return Err(Error::Schema {
                path: path.to_path_buf(),
                found,
            })
        }
        None => {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: "missing integer field `schema_version`".into(),
            })
        }
    }
    let doc: ProfileDocument = serde_json::from_value(value).map_err(json_err)?;

    let invalid = |message: String| Error::Validation {
        path: path.to_path_buf(),
        line: None,
        message,
    };
    let max_year = i64::from(current_year());
    let mut publications = Vec::with_capacity(doc.publications.len());
    let mut seen = HashSet::new();
    for (i, p) in doc.publications.into_iter().enumerate() {
        if !(1000..=9999).contains(&p.year) {
            return Err(invalid(format!(
                "publications[{i}]: year {} is not a 4-digit integer",
                p.year
            )));
        }
        if !(i64::from(MIN_YEAR)..=max_year).contains(&p.year) {
            return Err(invalid(format!(
                "publications[{i}]: year {} outside [{MIN_YEAR}, {max_year}]",
                p.year
            )));
        }
        if p.citations < 0 {
            return Err(invalid(format!(
                "publications[{i}]: negative citation count {}",
                p.citations
            )));
        }
        if p.id.is_empty() {
            return Err(invalid(format!("publications[{i}]: empty id")));
        }
        if !seen.insert(p.id.clone()) {
            return Err(invalid(format!("duplicate pub_id {:?}", p.id)));
        }
        publications.push(Publication::new(p.id, p.year as i32, p.citations as u64));
    }
    if publications.is_empty() {
        return Err(invalid("profile has no publications".into()));
    }
    let mut profile = ResearcherProfile::new(doc.name, doc.tags, publications);
    profile.sort();
    Ok(profile)
}

pub fn load_json_profile(path: &Path) -> Result<ResearcherProfile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_profile_json(&text, path)
}

/// Loads a profile, choosing the format by extension (`.json`/`.csv`) or,
/// failing that, by whether the content starts with `{`.
pub fn load_profile(path: impl AsRef<Path>) -> Result<ResearcherProfile> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase());
    match ext.as_deref() {
        Some("json") => load_json_profile(path),
        Some("csv") => load_csv_profile(path),
        _ => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            if text.trim_start().starts_with('{') {
                parse_profile_json(&text, path)
            } else {
                load_csv_profile(path)
            }
        }
    }
}

/// Canonical JSON form of a profile: schema version 1, publications sorted
/// by `(year, id)`, trailing newline.
pub fn write_profile(profile: &ResearcherProfile) -> String {
    let mut sorted = profile.clone();
    sorted.sort();
    let doc = ProfileDocument {
        schema_version: SCHEMA_VERSION,
        name: sorted.name,
        tags: sorted.tags,
        publications: sorted
            .publications
            .into_iter()
            .map(|p| DocPublication {
                id: p.id,
                year: i64::from(p.year),
                citations: p.citations as i64,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("profile serializes");
    out.push('\n');
    out
}

pub fn save_profile(path: impl AsRef<Path>, profile: &ResearcherProfile) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_profile(profile)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    /// Directory that relative entry paths resolve against.
    pub base_dir: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }

    /// Loads one entry's profile. The manifest name replaces the file's, and
    /// non-empty manifest tags replace the file's tags.
    pub fn load_entry(&self, entry: &ManifestEntry) -> Result<ResearcherProfile> {
        let mut profile = load_profile(self.resolve(entry))?;
        profile.name = entry.name.clone();
        if !entry.tags.is_empty() {
            profile.tags = entry.tags.clone();
        }
        Ok(profile)
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let entries: Vec<ManifestEntry> = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let base_dir = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok(Manifest { base_dir, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthModel {
    Powerlaw,
    Uniform,
    Equal,
}

impl fmt::Display for SynthModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynthModel::Powerlaw => "powerlaw",
            SynthModel::Uniform => "uniform",
            SynthModel::Equal => "equal",
        })
    }
}

impl FromStr for SynthModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "powerlaw" => Ok(SynthModel::Powerlaw),
            "uniform" => Ok(SynthModel::Uniform),
            "equal" => Ok(SynthModel::Equal),
            other => Err(format!("unknown model {other:?} (powerlaw|uniform|equal)")),
        }
    }
}

/// Parameters of a synthetic profile.
///
/// `scale` sets the magnitude of the counts: the common count for `equal`,
/// the inclusive upper bound for `uniform`, and the minimum of the
/// continuous Pareto draw for `powerlaw` (counts are its floor, so the
/// survival function goes as `c^(1 - exponent)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub name: Option<String>,
    pub model: SynthModel,
    pub n_papers: usize,
    pub exponent: f64,
    pub scale: u64,
    pub first_year: i32,
    pub last_year: i32,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            name: None,
            model: SynthModel::Powerlaw,
            n_papers: 100,
            exponent: 2.5,
            scale: 10,
            first_year: 2000,
            last_year: 2022,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_papers == 0 {
            return Err(Error::BadSpec("n_papers must be at least 1".into()));
        }
        if self.first_year > self.last_year {
            return Err(Error::BadSpec(format!(
                "first year {} after last year {}",
                self.first_year, self.last_year
            )));
        }
        if self.first_year < MIN_YEAR || self.last_year > current_year() {
            return Err(Error::BadSpec(format!(
                "years must lie in [{MIN_YEAR}, {}]",
                current_year()
            )));
        }
        if self.model == SynthModel::Powerlaw && !(self.exponent > 1.0 && self.exponent.is_finite())
        {
            return Err(Error::BadSpec(format!(
                "power-law exponent must exceed 1, got {}",
                self.exponent
            )));
        }
        if self.model == SynthModel::Powerlaw && self.scale == 0 {
            return Err(Error::BadSpec("power-law scale must be at least 1".into()));
        }
        Ok(())
    }

    pub fn display_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("synth-{}-{}", self.model, self.seed))
    }
}

/// Draws a synthetic profile; identical specs give identical profiles.
pub fn synth_profile(spec: &SynthSpec) -> Result<ResearcherProfile> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pareto = match spec.model {
        SynthModel::Powerlaw => Some(
            Pareto::new(spec.scale as f64, spec.exponent - 1.0)
                .map_err(|e| Error::BadSpec(e.to_string()))?,
        ),
        _ => None,
    };
    let width = (spec.n_papers.max(1) - 1).to_string().len();
    let publications = (0..spec.n_papers)
        .map(|i| {
            let year = rng.random_range(spec.first_year..=spec.last_year);
            let citations = match (spec.model, &pareto) {
                (SynthModel::Equal, _) => spec.scale,
                (SynthModel::Uniform, _) => rng.random_range(0..=spec.scale),
                (SynthModel::Powerlaw, Some(dist)) => {
                    dist.sample(&mut rng).min(MAX_SYNTH_CITATIONS).floor() as u64
                }
                (SynthModel::Powerlaw, None) => unreachable!("pareto built above"),
            };
            Publication::new(format!("s{i:0width$}"), year, citations)
        })
        .collect();
    let mut profile = ResearcherProfile::new(spec.display_name(), vec!["synthetic".into()], publications);
    profile.sort();
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::IndexPair;

    fn p() -> &'static Path {
        Path::new("mem.csv")
    }

    #[test]
    fn csv_basic() {
        let r = parse_csv("pub_id,year,citations\np1,2001,10\np2,2003,0\n", p());
        assert!(r.errors.is_empty());
        assert_eq!(r.publications.len(), 2);
        assert_eq!(r.publications[0], Publication::new("p1", 2001, 10));
    }

    #[test]
    fn csv_crlf() {
        let r = parse_csv("pub_id,year,citations\r\np1,2001,10\r\np2,2003,0\r\n", p());
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        assert_eq!(r.publications[1], Publication::new("p2", 2003, 0));
    }

    #[test]
    fn csv_negative_is_validation_error() {
        for minus in ["-3", "\u{2212}3"] {
            let text = format!("pub_id,year,citations\np1,2001,10\np2,2002,{minus}\n");
            let r = parse_csv(&text, p());
            assert_eq!(r.errors.len(), 1);
            match &r.errors[0] {
                Error::Validation { line, .. } => assert_eq!(*line, Some(3)),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn csv_row_errors_are_counted() {
        let text = "pub_id,year,citations\n\
                    a,2001,1\n\
                    b,20x1,1\n\
                    c,2001\n\
                    a,2002,4\n\
                    d,1700,2\n\
                    e,2005,1.5\n\
                    f,2006,8\n";
        let r = parse_csv(text, p());
        assert_eq!(r.rows, 7);
        assert_eq!(r.publications.len() + r.errors.len(), r.rows);
        assert_eq!(r.publications.len(), 2);
        let lines: Vec<u64> = r
            .errors
            .iter()
            .map(|e| match e {
                Error::Parse { line, .. } => *line,
                Error::Validation { line, .. } => line.unwrap(),
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(lines, vec![3, 4, 5, 6, 7]);
    }

    #[test]
    fn csv_bad_header() {
        let r = parse_csv("id,year,citations\np1,2001,1\n", p());
        assert!(matches!(r.errors[0], Error::Parse { line: 1, .. }));
        assert!(r.publications.is_empty());
    }

    #[test]
    fn json_schema_version() {
        let doc = r#"{"schema_version": 2, "name": "x", "tags": [], "publications": []}"#;
        assert!(matches!(
            parse_profile_json(doc, Path::new("x.json")),
            Err(Error::Schema { found: 2, .. })
        ));
    }

    #[test]
    fn json_document() {
        let doc = r#"{"schema_version": 1, "name": "A B", "tags": ["NP(P)"],
            "publications": [{"id": "b", "year": 2003, "citations": 4},
                             {"id": "a", "year": 2001, "citations": 9}]}"#;
        let prof = parse_profile_json(doc, Path::new("x.json")).unwrap();
        assert_eq!(prof.name, "A B");
        assert_eq!(prof.tags, vec!["NP(P)"]);
        assert_eq!(prof.publications[0].id, "a");

        let neg = doc.replace("\"citations\": 4", "\"citations\": -4");
        assert!(matches!(
            parse_profile_json(&neg, Path::new("x.json")),
            Err(Error::Validation { .. })
        ));
        let dup = doc.replace("\"id\": \"b\"", "\"id\": \"a\"");
        assert!(matches!(
            parse_profile_json(&dup, Path::new("x.json")),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            parse_profile_json("{not json", Path::new("x.json")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn canonical_round_trip() {
        let doc = r#"{"schema_version": 1, "name": "r", "tags": ["t"],
            "publications": [{"id": "z", "year": 2010, "citations": 1},
                             {"id": "y", "year": 2010, "citations": 0},
                             {"id": "x", "year": 2001, "citations": 12}]}"#;
        let a = parse_profile_json(doc, Path::new("a.json")).unwrap();
        let text = write_profile(&a);
        let b = parse_profile_json(&text, Path::new("b.json")).unwrap();
        assert_eq!(a, b);
        assert_eq!(write_profile(&b), text);
    }

    #[test]
    fn equal_model() {
        let spec = SynthSpec {
            model: SynthModel::Equal,
            n_papers: 5,
            scale: 7,
            ..Default::default()
        };
        let prof = synth_profile(&spec).unwrap();
        assert_eq!(prof.publications.len(), 5);
        assert!(prof.publications.iter().all(|p| p.citations == 7));
        let idx = IndexPair::from_counts(&prof.citation_counts()).unwrap();
        assert_eq!(idx, IndexPair::new(0.0, 0.5));
    }

    #[test]
    fn synthesis_is_deterministic() {
        let spec = SynthSpec {
            seed: 42,
            ..Default::default()
        };
        let a = write_profile(&synth_profile(&spec).unwrap());
        let b = write_profile(&synth_profile(&spec).unwrap());
        assert_eq!(a, b);
        let other = write_profile(&synth_profile(&SynthSpec { seed: 43, ..spec }).unwrap());
        assert_ne!(a, other);
    }

    #[test]
    fn powerlaw_more_unequal_than_uniform() {
        let base = SynthSpec {
            n_papers: 10_000,
            seed: 7,
            ..Default::default()
        };
        let pl = synth_profile(&SynthSpec {
            model: SynthModel::Powerlaw,
            exponent: 2.5,
            scale: 1,
            ..base.clone()
        })
        .unwrap();
        let un = synth_profile(&SynthSpec {
            model: SynthModel::Uniform,
            scale: 100,
            ..base
        })
        .unwrap();
        let g_pl = IndexPair::from_counts(&pl.citation_counts()).unwrap().g;
        let g_un = IndexPair::from_counts(&un.citation_counts()).unwrap().g;
        assert!(g_pl > g_un, "{g_pl} vs {g_un}");
    }

    #[test]
    fn bad_specs() {
        let bad = [
            SynthSpec {
                n_papers: 0,
                ..Default::default()
            },
            SynthSpec {
                first_year: 2010,
                last_year: 2000,
                ..Default::default()
            },
            SynthSpec {
                exponent: 1.0,
                ..Default::default()
            },
        ];
        for spec in bad {
            assert!(matches!(synth_profile(&spec), Err(Error::BadSpec(_))));
        }
    }
}
