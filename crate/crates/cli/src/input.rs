//! The TOML problem-file format and its resolution into core structures.
//!
//! Rationals are strings (`"3"`, `"-1/2"`). Names starting with `FIX-` refer
//! to the built-in catalog wherever a block name is accepted.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use rinehart_core::algebra::Derivation;
use rinehart_core::cochain::AltForm;
use rinehart_core::extension::{extension_from_cocycle, Connection, Extension};
use rinehart_core::fixtures::{builtin_fixture, Fixture};
use rinehart_core::{parse_rational, CommutativeAlgebra, LieRinehartAlgebra, LrModule, Matrix, Rational, ValidationReport};

use crate::error::CliError;

type Num = Spanned<String>;
type Elem = Vec<Num>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraBlock>,
    #[serde(default)]
    pub lie_rinehart: BTreeMap<String, LieRinehartBlock>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleBlock>,
    #[serde(default)]
    pub extensions: BTreeMap<String, ExtensionBlock>,
    #[serde(default)]
    pub request: RequestBlock,
}

/// `mult[i][j]` is the product of basis elements `i` and `j`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub dim: Option<usize>,
    pub labels: Vec<String>,
    pub unit: Elem,
    pub mult: Vec<Vec<Elem>>,
}

/// `bracket[i][j]` lists `rank` elements of `A`; `anchor[i]` is a `d × d`
/// matrix given by rows, column `c` holding the image of basis element `c`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieRinehartBlock {
    pub fixture: Option<String>,
    pub base: Option<String>,
    pub rank: Option<usize>,
    pub labels: Option<Vec<String>>,
    pub bracket: Option<Vec<Vec<Vec<Elem>>>>,
    pub anchor: Option<Vec<Vec<Elem>>>,
}

/// `kind` is `trivial`, `base` or `free`; a free module of rank `r` takes
/// `theta[i][s][t]`, the `t`-th coefficient of `e_i · m_s`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    pub over: String,
    pub kind: String,
    pub rank: Option<usize>,
    pub theta: Option<Vec<Vec<Vec<Elem>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub indices: Vec<usize>,
    pub value: Elem,
}

/// Either a catalog `fixture`, explicit `kernel`/`total`/`quotient` with
/// `incl`, `proj` and an optional `connection` (lists of `A`-element
/// lists), or a `quotient` with an abelian kernel `module` and a 2-form
/// `cocycle`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionBlock {
    pub fixture: Option<String>,
    pub kernel: Option<String>,
    pub total: Option<String>,
    pub quotient: Option<String>,
    pub incl: Option<Vec<Vec<Elem>>>,
    pub proj: Option<Vec<Vec<Elem>>>,
    pub connection: Option<Vec<Vec<Elem>>>,
    pub module: Option<String>,
    pub cocycle: Option<Vec<FormEntry>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestBlock {
    pub command: Option<String>,
    pub algebra: Option<String>,
    pub module: Option<String>,
    pub extension: Option<String>,
    pub quotient: Option<String>,
    pub degree: Option<usize>,
    pub all: Option<bool>,
    pub max_weight: Option<usize>,
}

/// A `Z`-valued 2-cocycle for `--act`, in center coordinates.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActFile {
    pub rho: Vec<FormEntry>,
}

/// Validation outcome of one block.
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub kind: &'static str,
    pub name: String,
    pub report: ValidationReport,
}

/// Resolved blocks of a problem file, plus their validation reports.
#[derive(Debug, Default)]
pub struct Workspace {
    pub algebras: BTreeMap<String, CommutativeAlgebra<Rational>>,
    pub lie_rinehart: BTreeMap<String, LieRinehartAlgebra<Rational>>,
    pub modules: BTreeMap<String, (String, LrModule<Rational>)>,
    pub extensions: BTreeMap<String, Extension<Rational>>,
    pub reports: Vec<BlockReport>,
}

impl Workspace {
    pub fn is_valid(&self) -> bool {
        self.reports.iter().all(|b| b.report.is_valid())
    }

    /// `Err` naming the first invalid block.
    pub fn require_valid(&self) -> Result<(), CliError> {
        match self.reports.iter().find(|b| !b.report.is_valid()) {
            None => Ok(()),
            Some(b) => {
                let v = &b.report.violations[0];
                Err(CliError::Invalid(format!(
                    "{} {:?}: {} violated at {:?} ({})",
                    b.kind, b.name, v.axiom, v.witness, v.detail
                )))
            }
        }
    }

    pub fn lie_rinehart(&self, name: &str) -> Result<LieRinehartAlgebra<Rational>, CliError> {
        if is_fixture(name) {
            return Ok(builtin_fixture(name)?.algebra().clone());
        }
        self.lie_rinehart.get(name).cloned().ok_or_else(|| unresolved("Lie-Rinehart algebra", name))
    }

    pub fn extension(&self, name: &str) -> Result<Extension<Rational>, CliError> {
        if is_fixture(name) {
            return match builtin_fixture(name)? {
                Fixture::Extension(e) => Ok(e),
                Fixture::Algebra(_) => Err(CliError::Usage(format!("{name} is not an extension fixture"))),
            };
        }
        self.extensions.get(name).cloned().ok_or_else(|| unresolved("extension", name))
    }

    pub fn module(&self, name: &str) -> Result<(String, LrModule<Rational>), CliError> {
        self.modules.get(name).cloned().ok_or_else(|| unresolved("module", name))
    }

    fn algebra(&self, name: &str) -> Result<CommutativeAlgebra<Rational>, CliError> {
        if name == "Q" {
            return Ok(CommutativeAlgebra::rationals());
        }
        if is_fixture(name) {
            return Ok(builtin_fixture(name)?.algebra().base().clone());
        }
        self.algebras.get(name).cloned().ok_or_else(|| unresolved("algebra", name))
    }

    fn record(&mut self, kind: &'static str, name: &str, report: ValidationReport) -> bool {
        let ok = report.is_valid();
        self.reports.push(BlockReport {
            kind,
            name: name.to_string(),
            report,
        });
        ok
    }

    fn record_error(&mut self, kind: &'static str, name: &str, error: rinehart_core::Error) {
        let mut report = ValidationReport::new(format!("{kind} {name}"));
        report.push("well-formed", Vec::new(), error.to_string());
        self.record(kind, name, report);
    }
}

/// `Ok(None)` when a lookup failed only because the referenced block was
/// declared but did not validate; that block already carries the report.
fn skip_invalid<T>(file: &ProblemFile, r: Result<T, CliError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(CliError::Unresolved { name, .. })
            if file.algebras.contains_key(&name)
                || file.lie_rinehart.contains_key(&name)
                || file.modules.contains_key(&name)
                || file.extensions.contains_key(&name) =>
        {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn is_fixture(name: &str) -> bool {
    name.starts_with("FIX-")
}

fn unresolved(kind: &'static str, name: &str) -> CliError {
    CliError::Unresolved {
        kind,
        name: name.to_string(),
    }
}

/// Byte offset to 1-based line and column.
fn position(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parser state: the source text for positioned errors.
pub struct Source<'a> {
    pub path: &'a str,
    pub text: &'a str,
}

impl Source<'_> {
    fn error(&self, span: Option<Range<usize>>, message: String) -> CliError {
        let (line, column) = span.map_or((1, 1), |s| position(self.text, s.start));
        CliError::Parse {
            path: self.path.to_string(),
            line,
            column,
            message,
        }
    }

    pub fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CliError> {
        toml::from_str(self.text).map_err(|e| self.error(e.span(), e.message().to_string()))
    }

    fn rational(&self, n: &Num) -> Result<Rational, CliError> {
        parse_rational(n.get_ref()).map_err(|e| self.error(Some(n.span()), e.to_string()))
    }

    fn elem(&self, e: &Elem) -> Result<Vec<Rational>, CliError> {
        e.iter().map(|n| self.rational(n)).collect()
    }

    /// A list of `A`-elements, concatenated into `Q`-coordinates.
    fn flat(&self, elems: &[Elem]) -> Result<Vec<Rational>, CliError> {
        let mut out = Vec::new();
        for e in elems {
            out.extend(self.elem(e)?);
        }
        Ok(out)
    }

    pub fn form(&self, entries: &[FormEntry], degree: usize, rank: usize, value_dim: usize) -> Result<AltForm<Rational>, CliError> {
        let mut values = Vec::with_capacity(entries.len());
        for entry in entries {
            if entry.indices.len() != degree || entry.indices.iter().any(|&i| i >= rank) {
                return Err(CliError::Usage(format!(
                    "form entry {:?} must list {degree} indices below {rank}",
                    entry.indices
                )));
            }
            let v = self.elem(&entry.value)?;
            if v.len() != value_dim {
                let span = entry.value.first().map(|n| n.span());
                return Err(self.error(span, format!("form value must have {value_dim} entries")));
            }
            values.push((entry.indices.clone(), v));
        }
        AltForm::from_values(degree, rank, value_dim, values).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Resolves and validates every block. Shape and axiom failures are
    /// recorded in the block reports; unresolved names and malformed
    /// numbers are errors.
    pub fn resolve(&self, file: &ProblemFile) -> Result<Workspace, CliError> {
        let mut ws = Workspace::default();
        for (name, block) in &file.algebras {
            let unit = self.elem(&block.unit)?;
            let mult = block
                .mult
                .iter()
                .map(|row| row.iter().map(|e| self.elem(e)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(dim) = block.dim {
                if dim != block.labels.len() {
                    ws.record_error("algebra", name, rinehart_core::Error::Dimension(format!("dim {dim} but {} labels", block.labels.len())));
                    continue;
                }
            }
            match CommutativeAlgebra::from_table(block.labels.clone(), mult, unit) {
                Ok(alg) => {
                    if ws.record("algebra", name, alg.validate()) {
                        ws.algebras.insert(name.clone(), alg);
                    }
                }
                Err(e) => ws.record_error("algebra", name, e),
            }
        }
        for (name, block) in &file.lie_rinehart {
            let lra = match &block.fixture {
                Some(f) => Ok(builtin_fixture(f)?.algebra().clone()),
                None => match skip_invalid(file, self.lie_rinehart_block(&ws, name, block))? {
                    Some(lra) => lra,
                    None => continue,
                },
            };
            match lra {
                Ok(lra) => {
                    if ws.record("lie_rinehart", name, lra.validate()) {
                        ws.lie_rinehart.insert(name.clone(), lra);
                    }
                }
                Err(e) => ws.record_error("lie_rinehart", name, e),
            }
        }
        for (name, block) in &file.modules {
            let lra = match skip_invalid(file, ws.lie_rinehart(&block.over))? {
                Some(lra) => lra,
                None => continue,
            };
            match self.module_block(&lra, block)? {
                Ok(m) => {
                    if ws.record("module", name, m.validate(&lra)) {
                        ws.modules.insert(name.clone(), (block.over.clone(), m));
                    }
                }
                Err(e) => ws.record_error("module", name, e),
            }
        }
        for (name, block) in &file.extensions {
            let Some(built) = skip_invalid(file, self.extension_block(&ws, block))? else {
                continue;
            };
            match built {
                Ok(ext) => {
                    let mut report = ext.validate();
                    report.extend(ext.validate_connection(ext.connection()));
                    if ws.record("extension", name, report) {
                        ws.extensions.insert(name.clone(), ext);
                    }
                }
                Err(e) => ws.record_error("extension", name, e),
            }
        }
        Ok(ws)
    }

    #[allow(clippy::type_complexity)]
    fn lie_rinehart_block(
        &self,
        ws: &Workspace,
        name: &str,
        block: &LieRinehartBlock,
    ) -> Result<rinehart_core::Result<LieRinehartAlgebra<Rational>>, CliError> {
        let missing = |field: &str| CliError::Usage(format!("lie_rinehart {name:?} needs `{field}` or `fixture`"));
        let base = ws.algebra(block.base.as_deref().unwrap_or("Q"))?;
        let labels = block.labels.clone().ok_or_else(|| missing("labels"))?;
        let n = labels.len();
        if block.rank.is_some_and(|r| r != n) {
            return Ok(Err(rinehart_core::Error::Dimension(format!("rank {} but {n} labels", block.rank.unwrap_or(0)))));
        }
        let bracket = block
            .bracket
            .as_ref()
            .ok_or_else(|| missing("bracket"))?
            .iter()
            .map(|row| row.iter().map(|v| self.flat(v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let d = base.dim();
        let anchor = match &block.anchor {
            None => vec![Derivation::zero(d); n],
            Some(rows) => {
                let mut out = Vec::with_capacity(rows.len());
                for m in rows {
                    let rows = m.iter().map(|r| self.elem(r)).collect::<Result<Vec<_>, _>>()?;
                    match Matrix::from_rows(d, &rows) {
                        Ok(m) => out.push(Derivation(m)),
                        Err(e) => return Ok(Err(e)),
                    }
                }
                out
            }
        };
        Ok(LieRinehartAlgebra::new(base, labels, bracket, anchor))
    }

    fn module_block(
        &self,
        lra: &LieRinehartAlgebra<Rational>,
        block: &ModuleBlock,
    ) -> Result<rinehart_core::Result<LrModule<Rational>>, CliError> {
        Ok(match block.kind.as_str() {
            "trivial" => LrModule::trivial(lra),
            "base" => Ok(LrModule::base(lra)),
            "free" => {
                let rank = block.rank.ok_or_else(|| CliError::Usage("free module needs `rank`".into()))?;
                let theta = block
                    .theta
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("free module needs `theta`".into()))?
                    .iter()
                    .map(|m| {
                        m.iter()
                            .map(|row| row.iter().map(|e| self.elem(e)).collect::<Result<Vec<_>, _>>())
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                LrModule::free(lra, rank, &theta)
            }
            other => return Err(CliError::Usage(format!("unknown module kind {other:?}"))),
        })
    }

    fn extension_block(
        &self,
        ws: &Workspace,
        block: &ExtensionBlock,
    ) -> Result<rinehart_core::Result<Extension<Rational>>, CliError> {
        if let Some(f) = &block.fixture {
            return ws.extension(f).map(Ok);
        }
        let quotient_name = block
            .quotient
            .as_deref()
            .ok_or_else(|| CliError::Usage("extension needs `quotient` or `fixture`".into()))?;
        let quotient = ws.lie_rinehart(quotient_name)?;
        if let Some(cocycle) = &block.cocycle {
            let module_name = block
                .module
                .as_deref()
                .ok_or_else(|| CliError::Usage("a cocycle extension needs `module`".into()))?;
            let (_, module) = ws.module(module_name)?;
            let omega = self.form(cocycle, 2, quotient.rank(), module.qdim())?;
            return Ok(extension_from_cocycle(&quotient, &module, &omega));
        }
        let need = |field: &str| CliError::Usage(format!("explicit extension needs `{field}`"));
        let kernel = ws.lie_rinehart(block.kernel.as_deref().ok_or_else(|| need("kernel"))?)?;
        let total = ws.lie_rinehart(block.total.as_deref().ok_or_else(|| need("total"))?)?;
        let maps = |v: &Option<Vec<Vec<Elem>>>, field: &str| -> Result<Vec<Vec<Rational>>, CliError> {
            v.as_ref().ok_or_else(|| need(field))?.iter().map(|x| self.flat(x)).collect()
        };
        let incl = maps(&block.incl, "incl")?;
        let proj = maps(&block.proj, "proj")?;
        let connection = match &block.connection {
            Some(_) => maps(&block.connection, "connection")?,
            None => {
                let proj_q = total.qmatrix_of_amap(&proj, quotient.qdim());
                let mut images = Vec::with_capacity(quotient.rank());
                for a in 0..quotient.rank() {
                    match proj_q.solve(&quotient.basis_element(a)) {
                        Some(x) => images.push(x),
                        None => return Ok(Err(rinehart_core::Error::Invalid("proj is not surjective".into()))),
                    }
                }
                images
            }
        };
        Ok(Extension::new(kernel, total, quotient, incl, proj, Connection::new(connection)))
    }
}
