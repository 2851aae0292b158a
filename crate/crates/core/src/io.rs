//! JSON documents for algebras, modules, bimodules and derived-equivalence
//! data. Referenced files are resolved relative to the referring document.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{validate_algebra, Algebra, Bimodule, Module, Violation};
use crate::derived::{
    canonical_presentation, identity_datum, morita_datum, tilting_datum, DatumConfig, DerivedError, Presentation,
    TiltingDatum,
};
use crate::linalg::{Elem, Field, Matrix, SVec};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Field { path: String, field: String, message: String },
    #[error("{path}: algebra axioms violated: {violations:?}")]
    Axioms { path: String, violations: Vec<Violation> },
    #[error("{path}: module axioms violated: {violations:?}")]
    ModuleAxioms { path: String, violations: Vec<Violation> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    field: FieldSpec,
    dim: usize,
    #[serde(default)]
    basis: Option<Vec<String>>,
    unit: Vec<Scalar>,
    table: Vec<(usize, usize, usize, Scalar)>,
}

type Rows = Vec<Vec<Scalar>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleDoc {
    #[allow(dead_code)]
    kind: String,
    algebra: String,
    #[serde(default)]
    free: Option<usize>,
    #[serde(default)]
    actions: Option<Vec<Rows>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BimoduleDoc {
    #[allow(dead_code)]
    kind: String,
    algebra: String,
    #[serde(default)]
    right_algebra: Option<String>,
    #[serde(default)]
    regular: bool,
    #[serde(default)]
    left: Option<Vec<Rows>>,
    #[serde(default)]
    right: Option<Vec<Rows>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    p1: String,
    p0: String,
    d1: Rows,
    cover: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CorruptionDoc {
    #[serde(default)]
    scale_eta: Option<Vec<Scalar>>,
    #[serde(default)]
    flip_x_differential: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumDoc {
    #[allow(dead_code)]
    kind: String,
    construction: String,
    algebra: String,
    #[serde(default)]
    module: Option<String>,
    #[serde(default)]
    presentation: Option<PresentationDoc>,
    #[serde(default)]
    summands: Option<usize>,
    #[serde(default)]
    corruption: Option<CorruptionDoc>,
}

/// What a document on disk describes.
#[derive(Clone, Debug)]
pub enum Document {
    Algebra(Arc<Algebra>),
    Module(Module),
    Bimodule(Bimodule),
    Datum(DatumSpec),
}

/// A parsed datum document; building the datum itself is deferred because
/// it depends on the run configuration.
#[derive(Clone, Debug)]
pub struct DatumSpec {
    pub construction: String,
    pub algebra: Arc<Algebra>,
    pub module: Option<Module>,
    pub presentation: Option<Presentation>,
    pub summands: Option<usize>,
    pub scale_eta: Option<SVec>,
    pub flip_x_differential: Option<i64>,
}

impl DatumSpec {
    pub fn build(&self, config: DatumConfig) -> Result<TiltingDatum, DerivedError> {
        let a = &self.algebra;
        let module = || {
            self.module.as_ref().ok_or_else(|| DerivedError::Construction(format!("{} datum needs a module", self.construction)))
        };
        let mut d = match self.construction.as_str() {
            "identity" => identity_datum(a, config)?,
            "morita" => morita_datum(a, module()?, config)?,
            "tilting" => {
                let t = module()?;
                let pres = match &self.presentation {
                    Some(p) => p.clone(),
                    None => canonical_presentation(t)?,
                };
                tilting_datum(a, t, &pres, self.summands, config)?
            }
            other => return Err(DerivedError::Construction(format!("unknown construction {other:?}"))),
        };
        if let Some(u) = &self.scale_eta {
            d = d.with_eta_multiplied(u)?;
        }
        if let Some(n) = self.flip_x_differential {
            d = d.with_flipped_x_differential(n)?;
        }
        Ok(d)
    }
}

/// Loads documents, sharing one algebra per path.
#[derive(Default)]
pub struct Loader {
    field: Option<Field>,
    algebras: HashMap<PathBuf, Arc<Algebra>>,
}

fn read_json(path: &Path) -> Result<Value, InputError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Read { path: p.clone(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| InputError::Syntax { path: p, line: e.line(), column: e.column(), message: e.to_string() })
}

fn typed<T: for<'de> Deserialize<'de>>(path: &Path, v: Value) -> Result<T, InputError> {
    serde_json::from_value(v).map_err(|e| InputError::Field { path: path.display().to_string(), field: "document".into(), message: e.to_string() })
}

impl Loader {
    /// `field` replaces the field named in every algebra file.
    pub fn new(field: Option<Field>) -> Self {
        Loader { field, algebras: HashMap::new() }
    }

    fn err(path: &Path, field: &str, message: impl Into<String>) -> InputError {
        InputError::Field { path: path.display().to_string(), field: field.into(), message: message.into() }
    }

    fn scalar(&self, path: &Path, field: &str, f: Field, s: &Scalar) -> Result<Elem, InputError> {
        match s {
            Scalar::Int(v) => Ok(f.from_i64(*v)),
            Scalar::Text(t) => f.parse(t).map_err(|e| Self::err(path, field, e.to_string())),
        }
    }

    fn vector(&self, path: &Path, field: &str, f: Field, xs: &[Scalar]) -> Result<SVec, InputError> {
        let mut out = Vec::new();
        for (i, s) in xs.iter().enumerate() {
            let x = self.scalar(path, field, f, s)?;
            if x != f.zero() {
                out.push((i, x));
            }
        }
        Ok(out)
    }

    fn matrix(&self, path: &Path, field: &str, f: Field, rows: &Rows, shape: Option<(usize, usize)>) -> Result<Matrix, InputError> {
        let cols = rows.first().map_or(shape.map_or(0, |s| s.1), |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Self::err(path, field, "rows have different lengths"));
        }
        if let Some((r, c)) = shape {
            if rows.len() != r || cols != c {
                return Err(Self::err(path, field, format!("expected a {r}×{c} matrix, got {}×{cols}", rows.len())));
            }
        }
        let vecs = rows.iter().map(|r| self.vector(path, field, f, r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(f, cols, &vecs))
    }

    fn resolve(base: &Path, rel: &str) -> PathBuf {
        base.parent().unwrap_or(Path::new(".")).join(rel)
    }

    pub fn algebra(&mut self, path: &Path) -> Result<Arc<Algebra>, InputError> {
        let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        if let Some(a) = self.algebras.get(&key) {
            return Ok(a.clone());
        }
        let doc: AlgebraDoc = typed(path, read_json(path)?)?;
        let a = Arc::new(self.algebra_from(path, &doc)?);
        self.algebras.insert(key, a.clone());
        Ok(a)
    }

    fn algebra_from(&self, path: &Path, doc: &AlgebraDoc) -> Result<Algebra, InputError> {
        let named = match &doc.field {
            FieldSpec::Name(n) if n == "Q" => Field::Rationals,
            FieldSpec::Name(n) => return Err(Self::err(path, "field", format!("unknown field {n:?}; use \"Q\" or {{\"Fp\": p}}"))),
            FieldSpec::Prime { fp } => Field::prime(*fp).map_err(|e| Self::err(path, "field", e.to_string()))?,
        };
        let f = self.field.unwrap_or(named);
        let labels = match &doc.basis {
            Some(b) if b.len() != doc.dim => return Err(Self::err(path, "basis", format!("{} labels for dimension {}", b.len(), doc.dim))),
            Some(b) => b.clone(),
            None => (0..doc.dim).map(|i| format!("e{i}")).collect(),
        };
        if doc.unit.len() != doc.dim {
            return Err(Self::err(path, "unit", format!("{} coordinates for dimension {}", doc.unit.len(), doc.dim)));
        }
        let unit = self.vector(path, "unit", f, &doc.unit)?;
        let table = doc
            .table
            .iter()
            .map(|(i, j, k, c)| Ok((*i, *j, *k, self.scalar(path, "table", f, c)?)))
            .collect::<Result<Vec<_>, InputError>>()?;
        let a = Algebra::from_table(f, labels, &table, unit).map_err(|e| Self::err(path, "table", e.to_string()))?;
        validate_algebra(&a).map_err(|violations| InputError::Axioms { path: path.display().to_string(), violations })?;
        Ok(a)
    }

    pub fn module(&mut self, path: &Path) -> Result<Module, InputError> {
        let doc: ModuleDoc = typed(path, read_json(path)?)?;
        self.module_from(path, &doc)
    }

    fn module_from(&mut self, path: &Path, doc: &ModuleDoc) -> Result<Module, InputError> {
        let a = self.algebra(&Self::resolve(path, &doc.algebra))?;
        let f = a.field();
        let m = match (&doc.free, &doc.actions) {
            (Some(r), None) => Module::free(&a, *r),
            (None, Some(actions)) => {
                if actions.len() != a.dim() {
                    return Err(Self::err(path, "actions", format!("{} matrices for an algebra of dimension {}", actions.len(), a.dim())));
                }
                let dim = actions.first().map_or(0, |m| m.len());
                let mats = actions
                    .iter()
                    .map(|rows| self.matrix(path, "actions", f, rows, Some((dim, dim))))
                    .collect::<Result<Vec<_>, _>>()?;
                Module::new(a, mats).map_err(|e| Self::err(path, "actions", e.to_string()))?
            }
            _ => return Err(Self::err(path, "actions", "give exactly one of `free` and `actions`")),
        };
        m.validate().map_err(|violations| InputError::ModuleAxioms { path: path.display().to_string(), violations })?;
        Ok(m)
    }

    pub fn bimodule(&mut self, path: &Path) -> Result<Bimodule, InputError> {
        let doc: BimoduleDoc = typed(path, read_json(path)?)?;
        self.bimodule_from(path, &doc)
    }

    fn bimodule_from(&mut self, path: &Path, doc: &BimoduleDoc) -> Result<Bimodule, InputError> {
        let a = self.algebra(&Self::resolve(path, &doc.algebra))?;
        let b = match &doc.right_algebra {
            Some(r) => self.algebra(&Self::resolve(path, r))?,
            None => a.clone(),
        };
        let m = if doc.regular {
            if doc.right_algebra.is_some() || doc.left.is_some() || doc.right.is_some() {
                return Err(Self::err(path, "regular", "the regular bimodule takes no actions or second algebra"));
            }
            Bimodule::regular(&a)
        } else {
            let (Some(left), Some(right)) = (&doc.left, &doc.right) else {
                return Err(Self::err(path, "left", "give `regular: true` or both `left` and `right`"));
            };
            if left.len() != a.dim() || right.len() != b.dim() {
                return Err(Self::err(path, "left", "need one action matrix per basis element on each side"));
            }
            let f = a.field();
            let dim = left.first().or(right.first()).map_or(0, |m| m.len());
            let mats = |side: &str, ms: &Vec<Rows>| -> Result<Vec<Matrix>, InputError> {
                ms.iter().map(|rows| self.matrix(path, side, f, rows, Some((dim, dim)))).collect()
            };
            let (l, r) = (mats("left", left)?, mats("right", right)?);
            Bimodule::new(a, b, dim, l, r).map_err(|e| Self::err(path, "left", e.to_string()))?
        };
        m.validate().map_err(|violations| InputError::ModuleAxioms { path: path.display().to_string(), violations })?;
        Ok(m)
    }

    pub fn datum(&mut self, path: &Path) -> Result<DatumSpec, InputError> {
        let doc: DatumDoc = typed(path, read_json(path)?)?;
        self.datum_from(path, &doc)
    }

    fn datum_from(&mut self, path: &Path, doc: &DatumDoc) -> Result<DatumSpec, InputError> {
        if !["identity", "morita", "tilting"].contains(&doc.construction.as_str()) {
            return Err(Self::err(path, "construction", "expected identity, morita or tilting"));
        }
        let algebra = self.algebra(&Self::resolve(path, &doc.algebra))?;
        let module = doc.module.as_ref().map(|m| self.module(&Self::resolve(path, m))).transpose()?;
        if doc.construction != "identity" && module.is_none() {
            return Err(Self::err(path, "module", "required for this construction"));
        }
        let presentation = match &doc.presentation {
            None => None,
            Some(p) => {
                let p1 = self.module(&Self::resolve(path, &p.p1))?;
                let p0 = self.module(&Self::resolve(path, &p.p0))?;
                let t = module.as_ref().expect("checked above");
                let f = algebra.field();
                let d1 = self.matrix(path, "presentation.d1", f, &p.d1, Some((p0.dim(), p1.dim())))?;
                let cover = self.matrix(path, "presentation.cover", f, &p.cover, Some((t.dim(), p0.dim())))?;
                Some(Presentation { p1, p0, d1, cover })
            }
        };
        let (scale_eta, flip_x_differential) = match &doc.corruption {
            None => (None, None),
            Some(c) => {
                let scale = c
                    .scale_eta
                    .as_ref()
                    .map(|u| {
                        if u.len() != algebra.dim() {
                            return Err(Self::err(path, "corruption.scale_eta", "needs one coordinate per basis element"));
                        }
                        self.vector(path, "corruption.scale_eta", algebra.field(), u)
                    })
                    .transpose()?;
                (scale, c.flip_x_differential)
            }
        };
        Ok(DatumSpec {
            construction: doc.construction.clone(),
            algebra,
            module,
            presentation,
            summands: doc.summands,
            scale_eta,
            flip_x_differential,
        })
    }

    /// Reads any supported document, telling them apart by their fields.
    pub fn document(&mut self, path: &Path) -> Result<Document, InputError> {
        let v = read_json(path)?;
        if v.get("table").is_some() {
            let doc: AlgebraDoc = typed(path, v)?;
            let a = Arc::new(self.algebra_from(path, &doc)?);
            return Ok(Document::Algebra(a));
        }
        match v.get("kind").and_then(Value::as_str) {
            Some("module") => {
                let doc: ModuleDoc = typed(path, v)?;
                Ok(Document::Module(self.module_from(path, &doc)?))
            }
            Some("bimodule") => {
                let doc: BimoduleDoc = typed(path, v)?;
                Ok(Document::Bimodule(self.bimodule_from(path, &doc)?))
            }
            Some("datum") => {
                let doc: DatumDoc = typed(path, v)?;
                Ok(Document::Datum(self.datum_from(path, &doc)?))
            }
            _ => Err(Self::err(path, "kind", "expected an algebra table or kind module, bimodule or datum")),
        }
    }
}

/// Parses `"Q"`, `"F5"` or `"Fp:5"`.
pub fn parse_field(s: &str) -> Result<Field, String> {
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let digits = s.strip_prefix("Fp:").or_else(|| s.strip_prefix('F')).ok_or_else(|| format!("unknown field {s:?}"))?;
    let p: u64 = digits.parse().map_err(|_| format!("unknown field {s:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}
