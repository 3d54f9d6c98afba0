//! The JSON model file format.
//!
//! A file describes one finite model: cell counts, face lists, named
//! cochains, optionally a free involution and a projection onto a base
//! model (for double covers), named maps into the model, and hypotheses
//! with their provenance. Output is canonical: keys sorted, supports
//! sorted, small values kept on one line, trailing newline. Exporting a
//! parsed file reproduces it byte for byte.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog::Fixture;
use crate::obstruction::{Assertions, DoubleCoverData, NormalOneType};
use crate::simplicial::{Cochain, Degeneracy, FreeInvolution, SimplicialMap, SimplicialModel, Target};

pub const FORMAT_VERSION: u32 = 1;

/// Lines at most this wide are written on one line.
const LINE_WIDTH: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unsupported format_version {0}; this build reads version {FORMAT_VERSION}")]
    Version(u32),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Invalid { path: path.into(), message: message.to_string() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDoc {
    pub cell: usize,
    /// Degeneracy word, strictly decreasing; absent for a plain cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degen: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    pub degree: usize,
    pub support: Vec<usize>,
}

/// Cells and faces without any decorations; the inline source of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeDoc {
    pub max_degree: usize,
    pub cells: Vec<usize>,
    pub faces: Vec<Vec<Vec<TargetDoc>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: ShapeDoc,
    /// `assignment[n][c]`: image of source cell `c` of degree `n`.
    pub assignment: Vec<Vec<TargetDoc>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionsDoc {
    #[serde(default)]
    pub cd_at_most_3: bool,
    #[serde(default)]
    pub h5_zero: bool,
    /// Keyed by assertion name; required for every assertion that holds.
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

/// The document as stored. `faces[n]` lists, per cell of degree `n`, its
/// `n + 1` faces; `faces[0]` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub max_degree: usize,
    pub cells: Vec<usize>,
    pub faces: Vec<Vec<Vec<TargetDoc>>>,
    #[serde(default)]
    pub cochains: BTreeMap<String, CochainDoc>,
    /// Per-degree permutation of the cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<Vec<Vec<usize>>>,
    /// Per-degree base cell under each cell; present on cover files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default)]
    pub assertions: AssertionsDoc,
}

/// A parsed and validated model file.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub model: Arc<SimplicialModel>,
    pub cochains: BTreeMap<String, Cochain>,
    pub involution: Option<FreeInvolution>,
    pub projection: Option<Vec<Vec<usize>>>,
    pub maps: BTreeMap<String, SimplicialMap>,
    pub assertions: Assertions,
}

impl LoadedModel {
    pub fn bare(model: Arc<SimplicialModel>) -> Self {
        LoadedModel {
            model,
            cochains: BTreeMap::new(),
            involution: None,
            projection: None,
            maps: BTreeMap::new(),
            assertions: Assertions::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ModelFile) -> Result<Self, FormatError> {
        if file.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(file.format_version));
        }
        let model = Arc::new(build_model(file.max_degree, &file.cells, &file.faces, "")?);
        let mut cochains = BTreeMap::new();
        for (name, doc) in &file.cochains {
            let path = format!("cochains.{name}");
            cochains.insert(name.clone(), build_cochain(&model, doc, &path)?);
        }
        let involution = match &file.involution {
            Some(perms) => {
                check_shape(perms, model.counts(), "involution")?;
                Some(FreeInvolution::new(model.clone(), perms.clone()).map_err(|e| invalid("involution", e))?)
            }
            None => None,
        };
        if let Some(p) = &file.projection {
            check_shape(p, model.counts(), "projection")?;
        }
        let mut maps = BTreeMap::new();
        for (name, doc) in &file.maps {
            let path = format!("maps.{name}");
            let source = build_model(doc.source.max_degree, &doc.source.cells, &doc.source.faces, &format!("{path}.source."))?;
            let assignment = doc
                .assignment
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(c, t)| build_target(t, &format!("{path}.assignment[{n}][{c}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let map = SimplicialMap::new(Arc::new(source), model.clone(), assignment).map_err(|e| invalid(&path, e))?;
            maps.insert(name.clone(), map);
        }
        let assertions = build_assertions(&file.assertions)?;
        Ok(LoadedModel { model, cochains, involution, projection: file.projection.clone(), maps, assertions })
    }

    pub fn to_file(&self) -> ModelFile {
        let shape = shape_doc(&self.model);
        let cochains = self
            .cochains
            .iter()
            .map(|(name, c)| (name.clone(), CochainDoc { degree: c.degree(), support: c.support() }))
            .collect();
        let maps = self
            .maps
            .iter()
            .map(|(name, m)| {
                let assignment = m.assignment().iter().map(|row| row.iter().map(|&t| target_doc(t)).collect()).collect();
                (name.clone(), MapDoc { source: shape_doc(m.source()), assignment })
            })
            .collect();
        let mut assertions = AssertionsDoc::default();
        if let Some(p) = &self.assertions.cd_at_most_3 {
            assertions.cd_at_most_3 = true;
            assertions.provenance.insert("cd_at_most_3".into(), p.clone());
        }
        if let Some(p) = &self.assertions.h5_zero {
            assertions.h5_zero = true;
            assertions.provenance.insert("h5_zero".into(), p.clone());
        }
        ModelFile {
            format_version: FORMAT_VERSION,
            max_degree: shape.max_degree,
            cells: shape.cells,
            faces: shape.faces,
            cochains,
            involution: self.involution.as_ref().map(|t| t.perms().to_vec()),
            projection: self.projection.clone(),
            maps,
            assertions,
        }
    }

    /// Canonical text of [`Self::to_file`].
    pub fn to_canonical_string(&self) -> String {
        canonical_json(&serde_json::to_value(self.to_file()).expect("model files serialize"))
    }

    fn cochain(&self, name: &str) -> Result<Cochain, FormatError> {
        self.cochains.get(name).cloned().ok_or_else(|| invalid("cochains", format!("no cochain named {name:?}")))
    }

    /// The normal 1-type given by the cochains `w1` and `w2`.
    pub fn normal_type(&self) -> Result<NormalOneType, FormatError> {
        Ok(NormalOneType::new(self.model.clone(), self.cochain("w1")?, self.cochain("w2")?)
            .with_assertions(self.assertions.clone()))
    }

    /// Reads this file as a double cover of `base`: it needs both an
    /// involution and a projection.
    pub fn cover_of(&self, base: &Arc<SimplicialModel>) -> Result<DoubleCoverData, FormatError> {
        let involution = self.involution.clone().ok_or_else(|| invalid("involution", "a cover file needs an involution"))?;
        let projection = self.projection.as_ref().ok_or_else(|| invalid("projection", "a cover file needs a projection"))?;
        let assignment = projection.iter().map(|row| row.iter().map(|&b| Target::cell(b)).collect()).collect();
        let map = SimplicialMap::new(self.model.clone(), base.clone(), assignment).map_err(|e| invalid("projection", e))?;
        DoubleCoverData::new(base.clone(), involution, map).map_err(|e| invalid("projection", e))
    }

    pub fn lift(&self, name: &str) -> Result<Cochain, FormatError> {
        self.cochain(name)
    }

    pub fn map(&self, name: &str) -> Result<SimplicialMap, FormatError> {
        self.maps.get(name).cloned().ok_or_else(|| invalid("maps", format!("no map named {name:?}")))
    }
}

/// A fixture as files: the base model and, when it has one, its cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportedFixture {
    pub base: String,
    pub cover: Option<String>,
}

impl ExportedFixture {
    /// `(file name, contents)` pairs: `NAME.json` and `NAME.cover.json`.
    pub fn files(&self, name: &str) -> Vec<(String, String)> {
        let mut out = vec![(format!("{name}.json"), self.base.clone())];
        if let Some(c) = &self.cover {
            out.push((format!("{name}.cover.json"), c.clone()));
        }
        out
    }
}

pub fn export_fixture(f: &Fixture) -> ExportedFixture {
    let mut base = LoadedModel::bare(f.base.clone());
    base.cochains = f.cochains.clone();
    base.maps = f.maps.clone();
    base.assertions = f.assertions.clone();
    let cover = f.cover.as_ref().map(|c| {
        let mut doc = LoadedModel::bare(c.cover().clone());
        doc.cochains = f.cover_cochains.clone();
        doc.involution = Some(c.involution().clone());
        doc.projection = Some(c.orbit().to_vec());
        doc.to_canonical_string()
    });
    ExportedFixture { base: base.to_canonical_string(), cover }
}

fn build_model(
    max_degree: usize,
    cells: &[usize],
    faces: &[Vec<Vec<TargetDoc>>],
    prefix: &str,
) -> Result<SimplicialModel, FormatError> {
    if cells.len() != max_degree + 1 {
        return Err(invalid(format!("{prefix}cells"), format!("expected {} counts, got {}", max_degree + 1, cells.len())));
    }
    if faces.len() != max_degree + 1 {
        return Err(invalid(format!("{prefix}faces"), format!("expected {} degrees, got {}", max_degree + 1, faces.len())));
    }
    let mut flat = Vec::with_capacity(faces.len());
    for (n, per_cell) in faces.iter().enumerate() {
        let expected_cells = if n == 0 { 0 } else { cells[n] };
        if per_cell.len() != expected_cells {
            return Err(invalid(
                format!("{prefix}faces[{n}]"),
                format!("expected {expected_cells} cells, got {}", per_cell.len()),
            ));
        }
        let mut row = Vec::with_capacity(per_cell.len() * (n + 1));
        for (c, targets) in per_cell.iter().enumerate() {
            let path = format!("{prefix}faces[{n}][{c}]");
            if targets.len() != n + 1 {
                return Err(invalid(path, format!("a {n}-cell has {} faces, got {}", n + 1, targets.len())));
            }
            for (i, t) in targets.iter().enumerate() {
                row.push(build_target(t, &format!("{path}[{i}]"))?);
            }
        }
        flat.push(row);
    }
    let model = SimplicialModel::new(max_degree, cells.to_vec(), flat).map_err(|e| invalid(format!("{prefix}faces"), e))?;
    let violations = model.validate();
    if !violations.is_empty() {
        let shown: Vec<String> = violations.iter().take(5).map(ToString::to_string).collect();
        return Err(invalid(
            format!("{prefix}faces"),
            format!("{} simplicial identity failures: {}", violations.len(), shown.join("; ")),
        ));
    }
    Ok(model)
}

fn build_target(t: &TargetDoc, path: &str) -> Result<Target, FormatError> {
    let degen = match &t.degen {
        None => Degeneracy::IDENTITY,
        Some(word) => Degeneracy::from_word(word)
            .ok_or_else(|| invalid(path, format!("degeneracy word {word:?} is not strictly decreasing")))?,
    };
    Ok(Target::new(degen, t.cell))
}

fn build_cochain(model: &Arc<SimplicialModel>, doc: &CochainDoc, path: &str) -> Result<Cochain, FormatError> {
    if doc.support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(path, "support must be strictly increasing"));
    }
    Cochain::from_support(model, doc.degree, &doc.support).map_err(|e| invalid(path, e))
}

fn build_assertions(doc: &AssertionsDoc) -> Result<Assertions, FormatError> {
    let mut out = Assertions::default();
    for key in doc.provenance.keys() {
        let held = match key.as_str() {
            "cd_at_most_3" => doc.cd_at_most_3,
            "h5_zero" => doc.h5_zero,
            _ => return Err(invalid("assertions.provenance", format!("unknown assertion {key:?}"))),
        };
        if !held {
            return Err(invalid("assertions.provenance", format!("provenance given for {key:?}, which is not asserted")));
        }
    }
    let provenance = |key: &str| -> Result<String, FormatError> {
        match doc.provenance.get(key) {
            Some(p) if !p.trim().is_empty() => Ok(p.clone()),
            _ => Err(invalid("assertions.provenance", format!("{key} is asserted without provenance"))),
        }
    };
    if doc.cd_at_most_3 {
        out.cd_at_most_3 = Some(provenance("cd_at_most_3")?);
    }
    if doc.h5_zero {
        out.h5_zero = Some(provenance("h5_zero")?);
    }
    Ok(out)
}

fn check_shape(perms: &[Vec<usize>], counts: &[usize], path: &str) -> Result<(), FormatError> {
    if perms.len() != counts.len() {
        return Err(invalid(path, format!("expected {} degrees, got {}", counts.len(), perms.len())));
    }
    for (n, (p, &c)) in perms.iter().zip(counts).enumerate() {
        if p.len() != c {
            return Err(invalid(format!("{path}[{n}]"), format!("expected {c} entries, got {}", p.len())));
        }
    }
    Ok(())
}

fn target_doc(t: Target) -> TargetDoc {
    let degen = (!t.degen.is_identity()).then(|| t.degen.word());
    TargetDoc { cell: t.cell, degen }
}

fn shape_doc(model: &SimplicialModel) -> ShapeDoc {
    let faces = (0..=model.max_degree())
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..model.count(n)).map(|c| model.faces_of(n, c).iter().map(|&t| target_doc(t)).collect()).collect()
        })
        .collect();
    ShapeDoc { max_degree: model.max_degree(), cells: model.counts().to_vec(), faces }
}

/// Sorted keys; any value whose compact form fits the line stays on one
/// line, larger ones are broken one element per line.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    let compact = compact(value);
    let fits = indent + compact.len() <= LINE_WIDTH;
    match value {
        Value::Array(items) if !fits && items.iter().all(is_scalar) => {
            // Scalars are packed into filled lines.
            out.push_str("[\n");
            let mut line = String::new();
            for (k, item) in items.iter().enumerate() {
                let mut piece = item.to_string();
                if k + 1 < items.len() {
                    piece.push(',');
                }
                if !line.is_empty() && indent + 2 + line.len() + 1 + piece.len() > LINE_WIDTH {
                    push_indent(out, indent + 2);
                    out.push_str(&line);
                    out.push('\n');
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&piece);
            }
            push_indent(out, indent + 2);
            out.push_str(&line);
            out.push('\n');
            push_indent(out, indent);
            out.push(']');
        }
        Value::Array(items) if !fits && !items.is_empty() => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                push_indent(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            push_indent(out, indent);
            out.push(']');
        }
        Value::Object(map) if !fits && !map.is_empty() => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                push_indent(out, indent + 2);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*key], indent + 2);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            push_indent(out, indent);
            out.push('}');
        }
        _ => out.push_str(&compact),
    }
}

/// One-line form with sorted keys and a space after separators.
fn compact(value: &Value) -> String {
    match value {
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let parts: Vec<String> =
                keys.iter().map(|k| format!("{}: {}", Value::String((*k).clone()), compact(&map[*k]))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        scalar => scalar.to_string(),
    }
}

fn is_scalar(value: &Value) -> bool {
    !matches!(value, Value::Array(_) | Value::Object(_))
}

fn push_indent(out: &mut String, n: usize) {
    out.extend(std::iter::repeat_n(' ', n));
}
