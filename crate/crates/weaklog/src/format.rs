//! File formats: algebra and transformer-pair JSON, and the line-oriented
//! formula, equation, consequence-pair and derivation files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use weaklog_core::algebra::FiniteAlgebra;
use weaklog_core::algz::TransformerPair;
use weaklog_core::bimatrix::Bimatrix;
use weaklog_core::expanded::ExpandedAlgebra;
use weaklog_core::heyting::HeytingAlgebra;
use weaklog_core::proofsys::{parse_derivation, Derivation};
use weaklog_core::syntax::{parse, parse_equation, Connective, Equation, Formula, Signature};

#[derive(Debug)]
pub enum FormatError {
    Io { path: PathBuf, source: std::io::Error },
    Json { path: PathBuf, source: serde_json::Error },
    Invalid { path: PathBuf, message: String },
    Core(weaklog_core::Error),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            FormatError::Json { path, source } => write!(f, "{}: invalid JSON: {source}", path.display()),
            FormatError::Invalid { path, message } => write!(f, "{}: {message}", path.display()),
            FormatError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<weaklog_core::Error> for FormatError {
    fn from(e: weaklog_core::Error) -> Self {
        FormatError::Core(e)
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

fn invalid(path: &Path, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { path: path.to_path_buf(), message: message.into() }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// A signature entry: a built-in connective name, or `[name, arity]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigEntry {
    Name(String),
    WithArity(String, usize),
}

/// Algebra file: `{"sig": [...], "size": n, "tables": {...}}` with optional
/// `core`, `truth` and `labels` (one description per element).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub sig: Vec<SigEntry>,
    pub size: usize,
    pub tables: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn nest(table: &[u32], size: usize, arity: usize) -> Value {
    if arity == 0 {
        return Value::from(table[0]);
    }
    let chunk = table.len() / size;
    Value::Array((0..size).map(|i| nest(&table[i * chunk..(i + 1) * chunk], size, arity - 1)).collect())
}

fn flatten(v: &Value, size: usize, arity: usize, out: &mut Vec<u32>) -> std::result::Result<(), String> {
    if arity == 0 {
        let n = v.as_u64().ok_or_else(|| format!("expected an element index, found {v}"))?;
        out.push(u32::try_from(n).map_err(|_| format!("element index {n} too large"))?);
        return Ok(());
    }
    let items = v.as_array().ok_or_else(|| format!("expected an array, found {v}"))?;
    if items.len() != size {
        return Err(format!("expected {size} rows, found {}", items.len()));
    }
    items.iter().try_for_each(|x| flatten(x, size, arity - 1, out))
}

impl AlgebraJson {
    pub fn from_algebra(alg: &FiniteAlgebra) -> AlgebraJson {
        let mut sig = Vec::new();
        let mut tables = BTreeMap::new();
        for (i, (c, arity)) in alg.sig().connectives().iter().enumerate() {
            sig.push(match c {
                Connective::Named(n) => SigEntry::WithArity(n.clone(), *arity),
                _ => SigEntry::Name(c.name().to_owned()),
            });
            tables.insert(c.name().to_owned(), nest(alg.table(i), alg.size(), *arity));
        }
        AlgebraJson { sig, size: alg.size(), tables, core: None, truth: None, labels: None }
    }

    /// Element labels `{0,2}` listing the points of each upset, when the
    /// algebra was built from a poset.
    pub fn with_upset_labels(mut self, h: &HeytingAlgebra) -> AlgebraJson {
        if h.poset().is_some() {
            let labels = (0..h.size() as u32)
                .map(|e| {
                    let set = h.upset_of(e).unwrap_or(0);
                    let pts: Vec<String> = (0..64).filter(|i| set >> i & 1 == 1).map(|i: u32| i.to_string()).collect();
                    format!("{{{}}}", pts.join(","))
                })
                .collect();
            self.labels = Some(labels);
        }
        self
    }

    pub fn signature(&self) -> std::result::Result<Signature, String> {
        let mut entries: Vec<(String, usize)> = Vec::new();
        for e in &self.sig {
            entries.push(match e {
                SigEntry::WithArity(n, a) => (n.clone(), *a),
                SigEntry::Name(n) => {
                    let a = Connective::from_name(n)
                        .builtin_arity()
                        .ok_or_else(|| format!("connective `{n}` needs an explicit arity, as [\"{n}\", k]"))?;
                    (n.clone(), a)
                }
            });
        }
        Signature::new(&entries).map_err(|e| e.to_string())
    }

    pub fn algebra(&self) -> std::result::Result<FiniteAlgebra, String> {
        let sig = self.signature()?;
        let mut tables = Vec::new();
        for (c, arity) in sig.connectives() {
            let v = self.tables.get(c.name()).ok_or_else(|| format!("missing table for `{}`", c.name()))?;
            let mut flat = Vec::new();
            flatten(v, self.size, *arity, &mut flat).map_err(|m| format!("table `{}`: {m}", c.name()))?;
            tables.push(flat);
        }
        if let Some(extra) = self.tables.keys().find(|k| !sig.connectives().iter().any(|(c, _)| c.name() == k.as_str())) {
            return Err(format!("table `{extra}` is not in the signature"));
        }
        FiniteAlgebra::new(sig, self.size, tables).map_err(|e| e.to_string())
    }
}

pub fn read_algebra_json(path: &Path) -> Result<AlgebraJson> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })
}

pub fn read_algebra(path: &Path) -> Result<(FiniteAlgebra, AlgebraJson)> {
    let j = read_algebra_json(path)?;
    let alg = j.algebra().map_err(|m| invalid(path, m))?;
    Ok((alg, j))
}

/// An expanded algebra; a missing `core` field means the whole universe.
pub fn read_expanded(path: &Path) -> Result<ExpandedAlgebra> {
    let (alg, j) = read_algebra(path)?;
    let core = j.core.unwrap_or_else(|| (0..alg.size() as u32).collect());
    ExpandedAlgebra::new(alg, &core).map_err(|e| invalid(path, e.to_string()))
}

/// A bimatrix; `truth` is required, a missing `core` means the universe.
pub fn read_bimatrix(path: &Path) -> Result<Bimatrix> {
    let (alg, j) = read_algebra(path)?;
    let truth = j.truth.ok_or_else(|| invalid(path, "a matrix needs a `truth` field"))?;
    let core = j.core.unwrap_or_else(|| (0..alg.size() as u32).collect());
    Bimatrix::new(alg, &truth, &core).map_err(|e| invalid(path, e.to_string()))
}

pub fn bimatrix_json(m: &Bimatrix) -> AlgebraJson {
    let mut j = AlgebraJson::from_algebra(m.alg());
    j.truth = Some(m.truth().to_vec());
    j.core = Some(m.core().to_vec());
    j
}

pub fn to_pretty_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable value");
    s.push('\n');
    s
}

/// Every `*.json` file of a directory, by file name; a single file is
/// accepted as well.
pub fn json_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let rd = fs::read_dir(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    let mut out = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
        let p = entry.path();
        if p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// `{"tau": ["_phi ~ ..."], "delta": ["_x <-> _y"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub tau: Vec<String>,
    pub delta: Vec<String>,
}

pub fn read_pair(path: &Path, sig: &Signature) -> Result<TransformerPair> {
    let text = read_text(path)?;
    let j: PairJson = serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })?;
    TransformerPair::parse(&j.tau, &j.delta, sig).map_err(|e| invalid(path, e.to_string()))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn at_line(path: &Path, line: usize, e: weaklog_core::Error) -> FormatError {
    invalid(path, format!("line {line}: {e}"))
}

/// One formula per line; blank lines and `#` comments are skipped.
pub fn parse_formula_lines(text: &str, sig: &Signature, path: &Path) -> Result<Vec<Formula>> {
    content_lines(text).map(|(n, l)| parse(l, sig).map_err(|e| at_line(path, n, e))).collect()
}

pub fn read_formulas(path: &Path, sig: &Signature) -> Result<Vec<Formula>> {
    parse_formula_lines(&read_text(path)?, sig, path)
}

/// One equation `lhs ~ rhs` per line.
pub fn read_equations(path: &Path, sig: &Signature) -> Result<Vec<Equation>> {
    let text = read_text(path)?;
    content_lines(&text).map(|(n, l)| parse_equation(l, sig).map_err(|e| at_line(path, n, e))).collect()
}

/// A consequence pair `g1, g2 |- f`; the premise list may be empty.
pub fn parse_pair_line(line: &str, sig: &Signature) -> std::result::Result<(Vec<Formula>, Formula), String> {
    let (lhs, rhs) = line.split_once("|-").ok_or("expected `premises |- conclusion`")?;
    let gamma = lhs
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s, sig).map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let phi = parse(rhs.trim(), sig).map_err(|e| e.to_string())?;
    Ok((gamma, phi))
}

pub fn parse_pairs(text: &str, sig: &Signature, path: &Path) -> Result<Vec<(Vec<Formula>, Formula)>> {
    content_lines(text)
        .map(|(n, l)| parse_pair_line(l, sig).map_err(|m| invalid(path, format!("line {n}: {m}"))))
        .collect()
}

pub fn read_pairs(path: &Path, sig: &Signature) -> Result<Vec<(Vec<Formula>, Formula)>> {
    parse_pairs(&read_text(path)?, sig, path)
}

pub fn read_derivation(path: &Path, sig: &Signature) -> Result<Derivation> {
    parse_derivation(&read_text(path)?, sig).map_err(|e| invalid(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use weaklog_core::heyting::medvedev_algebra;

    #[test]
    fn algebra_json_round_trip() {
        let h = medvedev_algebra(2).unwrap();
        let j = AlgebraJson::from_algebra(h.alg()).with_upset_labels(&h);
        let text = to_pretty_json(&j);
        let back: AlgebraJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.algebra().unwrap(), *h.alg());
        assert_eq!(back.labels.as_ref().unwrap()[0], "{}");
        assert_eq!(j.tables["bot"], Value::from(0));
    }

    #[test]
    fn custom_connectives_need_arity() {
        let j: AlgebraJson = serde_json::from_str(
            r#"{"sig": ["and", ["e", 0], ["neg", 1]], "size": 2,
                "tables": {"and": [[0,0],[0,1]], "e": 1, "neg": [1, 0]}}"#,
        )
        .unwrap();
        let a = j.algebra().unwrap();
        assert_eq!(a.size(), 2);
        let bad: AlgebraJson = serde_json::from_str(r#"{"sig": ["neg"], "size": 1, "tables": {"neg": [0]}}"#).unwrap();
        assert!(bad.algebra().is_err());
        let short: AlgebraJson = serde_json::from_str(r#"{"sig": ["and"], "size": 2, "tables": {"and": [[0,0]]}}"#).unwrap();
        assert!(short.algebra().is_err());
    }

    #[test]
    fn pair_lines() {
        let sig = Signature::int();
        let (g, f) = parse_pair_line("p0, p0 -> p1 |- p1", &sig).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(f, Formula::atom(1));
        let (g, _) = parse_pair_line("|- p0 | ~p0", &sig).unwrap();
        assert!(g.is_empty());
        assert!(parse_pair_line("p0", &sig).is_err());
    }
}
