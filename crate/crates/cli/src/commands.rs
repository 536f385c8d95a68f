//! Command implementations. Each returns a report; any failed internal
//! check aborts with [`CliError::Verification`] instead.

use std::collections::BTreeMap;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rinehart_core::chernweil::{
    chern_weil_class, classifying_map, coalgebra_morphism_check, default_max_weight, global_invariant,
    verify_lemma_3_11,
};
use rinehart_core::coalgebra::{invariants, SymCoalgebra};
use rinehart_core::cochain::{ce_differential, cohomology, differential_matrix, AltForm};
use rinehart_core::extension::{
    act_rho, bianchi_check, center, cocycle_class, congruent, curvature, extension_from_cocycle, flat_connection,
    kernel_module, Extension,
};
use rinehart_core::fixtures::{builtin_fixture, Fixture};
use rinehart_core::scalar::unit_vec;
use rinehart_core::{LieRinehartAlgebra, LrModule, Rational, Scalar};

use crate::error::CliError;
use crate::input::{ActFile, ProblemFile, RequestBlock, Source, Workspace};
use crate::report::{self, digest, form, polynomial, vector, Report, RequestEcho, TOOL};
use crate::{Command, Invocation};

/// Random connections tried by `bianchi`.
const BIANCHI_SEEDS: u64 = 10;
/// Default weight bound for `invariants`, which has no degree cap.
const DEFAULT_INVARIANT_WEIGHT: usize = 2;

/// A report together with the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

struct Context {
    ws: Workspace,
    request: RequestBlock,
    echo: RequestEcho,
    input_digest: String,
    notes: Vec<String>,
    verification: BTreeMap<String, bool>,
}

impl Context {
    fn check(&mut self, flag: &str, passed: bool) -> Result<(), CliError> {
        self.verification.insert(flag.to_string(), passed);
        if passed {
            Ok(())
        } else {
            Err(CliError::Verification(format!("{flag} check failed")))
        }
    }

    fn finish(self, result: Value, exit_code: i32) -> Outcome {
        Outcome {
            report: Report {
                tool: TOOL,
                version: env!("CARGO_PKG_VERSION"),
                input_digest: self.input_digest,
                request: self.echo,
                result,
                verification: self.verification,
                notes: self.notes,
            },
            exit_code,
        }
    }

    fn algebra(&mut self, inv: &Invocation) -> Result<LieRinehartAlgebra<Rational>, CliError> {
        if let Some(f) = &inv.fixture {
            return Ok(builtin_fixture(f)?.algebra().clone());
        }
        let name = match (&self.request.algebra, self.ws.lie_rinehart.keys().collect::<Vec<_>>().as_slice()) {
            (Some(n), _) => n.clone(),
            (None, [only]) => (*only).clone(),
            _ => return Err(CliError::Usage("name the algebra in [request] or use --fixture".into())),
        };
        self.echo.algebra = Some(name.clone());
        self.ws.lie_rinehart(&name)
    }

    fn module(&mut self, inv: &Invocation, lra: &LieRinehartAlgebra<Rational>) -> Result<LrModule<Rational>, CliError> {
        let name = inv
            .module
            .clone()
            .or_else(|| self.request.module.clone())
            .unwrap_or_else(|| if lra.base().dim() == 1 { "trivial" } else { "base" }.to_string());
        self.echo.module = Some(name.clone());
        match name.as_str() {
            "trivial" => Ok(LrModule::trivial(lra)?),
            "base" => Ok(LrModule::base(lra)),
            other => {
                let (over, m) = self.ws.module(other)?;
                if self.ws.lie_rinehart(&over)? != *lra {
                    return Err(CliError::Usage(format!("module {other:?} is not over the requested algebra")));
                }
                Ok(m)
            }
        }
    }

    fn extension(&mut self, inv: &Invocation) -> Result<Extension<Rational>, CliError> {
        if let Some(f) = &inv.fixture {
            return match builtin_fixture(f)? {
                Fixture::Extension(e) => Ok(e),
                Fixture::Algebra(_) => Err(CliError::Usage(format!("{f} is not an extension fixture"))),
            };
        }
        let name = match (&self.request.extension, self.ws.extensions.keys().collect::<Vec<_>>().as_slice()) {
            (Some(n), _) => n.clone(),
            (None, [only]) => (*only).clone(),
            _ => return Err(CliError::Usage("name the extension in [request] or use --fixture".into())),
        };
        self.echo.extension = Some(name.clone());
        self.ws.extension(&name)
    }

    fn has_extension(&self, inv: &Invocation) -> bool {
        match &inv.fixture {
            Some(f) => matches!(builtin_fixture(f), Ok(Fixture::Extension(_))),
            None => self.request.extension.is_some() || (self.request.quotient.is_none() && self.ws.extensions.len() == 1),
        }
    }

    /// The requested weight bound clamped to `⌊rank L'' / 2⌋`.
    fn clamped_weight(&mut self, inv: &Invocation, ext: &Extension<Rational>) -> usize {
        let cap = default_max_weight(ext);
        let requested = inv.max_weight.or(self.request.max_weight).unwrap_or(cap);
        if requested > cap {
            self.notes.push(format!(
                "max-weight {requested} clamped to {cap}: forms of degree above rank L'' = {} vanish",
                ext.quotient().rank()
            ));
        }
        let w = requested.min(cap);
        self.echo.max_weight = Some(w);
        w
    }
}

fn load(inv: &Invocation) -> Result<Context, CliError> {
    let mut echo = RequestEcho {
        command: inv.command.name().to_string(),
        fixture: inv.fixture.clone(),
        ..RequestEcho::default()
    };
    let (ws, request, input_digest) = match &inv.file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let display = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            let source = Source { path: &display, text: &text };
            let file: ProblemFile = source.parse()?;
            let ws = source.resolve(&file)?;
            echo.input = Some(display);
            (ws, file.request, digest(text.as_bytes()))
        }
        None => {
            let name = inv
                .fixture
                .as_deref()
                .ok_or_else(|| CliError::Usage("give an input file or --fixture NAME".into()))?;
            (Workspace::default(), RequestBlock::default(), digest(format!("fixture:{name}").as_bytes()))
        }
    };
    if let Some(c) = &request.command {
        if c != inv.command.name() {
            return Err(CliError::Usage(format!("file requests {c:?} but the command line runs {:?}", inv.command.name())));
        }
    }
    Ok(Context {
        ws,
        request,
        echo,
        input_digest,
        notes: Vec::new(),
        verification: BTreeMap::new(),
    })
}

pub fn run(inv: &Invocation) -> Result<Outcome, CliError> {
    let cx = load(inv)?;
    if inv.command != Command::Validate {
        cx.ws.require_valid()?;
    }
    match inv.command {
        Command::Validate => validate(cx, inv),
        Command::Cohomology => cmd_cohomology(cx, inv),
        Command::Curvature => cmd_curvature(cx, inv),
        Command::Bianchi => cmd_bianchi(cx, inv),
        Command::Classify => cmd_classify(cx, inv),
        Command::ChernWeil => cmd_chern_weil(cx, inv),
        Command::Invariants => cmd_invariants(cx, inv),
        Command::GlobalInvariant => cmd_global_invariant(cx, inv),
    }
}

fn validate(cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let mut blocks: Vec<Value> = cx
        .ws
        .reports
        .iter()
        .map(|b| report::validation(b.kind, &b.name, &b.report))
        .collect();
    let mut valid = cx.ws.is_valid();
    if let Some(f) = &inv.fixture {
        let (kind, r) = match builtin_fixture(f)? {
            Fixture::Algebra(l) => ("lie_rinehart", l.validate()),
            Fixture::Extension(e) => {
                let mut r = e.validate();
                r.extend(e.validate_connection(e.connection()));
                ("extension", r)
            }
        };
        valid &= r.is_valid();
        blocks.push(report::validation(kind, f, &r));
    }
    let result = json!({ "valid": valid, "blocks": blocks });
    Ok(cx.finish(result, if valid { 0 } else { 1 }))
}

fn cmd_cohomology(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let lra = cx.algebra(inv)?;
    let module = cx.module(inv, &lra)?;
    let n = lra.rank();
    let degrees: Vec<usize> = match inv.degree.or(cx.request.degree) {
        Some(p) if !(inv.all || cx.request.all == Some(true)) => {
            cx.echo.degree = Some(p);
            vec![p]
        }
        _ => (0..=n).collect(),
    };
    let squares = (0..n).all(|p| {
        let d0 = differential_matrix(&lra, &module, p);
        let d1 = differential_matrix(&lra, &module, p + 1);
        d1.mul(&d0).map(|m| m.is_zero()).unwrap_or(false)
    });
    cx.check("d_squared_zero", squares)?;
    let mut rows = Vec::new();
    for &p in &degrees {
        let h = cohomology(&lra, &module, p)?;
        let reps: Vec<Value> = h.representatives().iter().map(form).collect();
        rows.push(json!({ "degree": p, "dim": h.dim(), "representatives": reps }));
    }
    let dims: Vec<Value> = rows.iter().map(|r| r["dim"].clone()).collect();
    let result = json!({
        "labels": lra.labels(),
        "base_dim": lra.base().dim(),
        "module_qdim": module.qdim(),
        "dims": dims,
        "degrees": rows,
    });
    Ok(cx.finish(result, 0))
}

fn class_value(ext: &Extension<Rational>, conn: &rinehart_core::extension::Connection<Rational>) -> Result<Value, CliError> {
    if !ext.kernel().is_abelian() {
        return Ok(Value::Null);
    }
    Ok(vector(&cocycle_class(ext, conn)?))
}

fn cmd_curvature(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let ext = cx.extension(inv)?;
    let conn = ext.connection().clone();
    cx.check("connection_valid", ext.validate_connection(&conn).is_valid())?;
    let omega = curvature(&ext, &conn)?;
    cx.check("bianchi", bianchi_check(&ext, &conn)?)?;
    let result = json!({
        "kernel": ext.kernel().labels(),
        "quotient": ext.quotient().labels(),
        "curvature": form(&omega),
        "flat": omega.is_zero(),
        "class": class_value(&ext, &conn)?,
    });
    Ok(cx.finish(result, 0))
}

fn cmd_bianchi(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let ext = cx.extension(inv)?;
    let mut rows = vec![json!({ "connection": "stored", "holds": bianchi_check(&ext, ext.connection())? })];
    for seed in 0..BIANCHI_SEEDS {
        let conn = ext.random_connection(&mut ChaCha8Rng::seed_from_u64(seed));
        rows.push(json!({ "connection": format!("seed {seed}"), "holds": bianchi_check(&ext, &conn)? }));
    }
    let all = rows.iter().all(|r| r["holds"] == Value::Bool(true));
    cx.check("bianchi", all)?;
    Ok(cx.finish(json!({ "connections": rows }), 0))
}

fn extension_summary(ext: &Extension<Rational>) -> Value {
    let total = ext.total();
    let mut brackets = Vec::new();
    for i in 0..total.rank() {
        for j in i + 1..total.rank() {
            let v = total.bracket_basis(i, j);
            if v.iter().any(|x| *x != Rational::from_int(0)) {
                brackets.push(json!({ "pair": [i, j], "value": vector(v) }));
            }
        }
    }
    json!({ "labels": total.labels(), "brackets": brackets })
}

fn cmd_classify(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let mut result = serde_json::Map::new();
    let (quotient, module, input) = if cx.has_extension(inv) {
        let ext = cx.extension(inv)?;
        if let Some(path) = &inv.act {
            result.insert("act".into(), act(&mut cx, &ext, path)?);
        }
        if !ext.kernel().is_abelian() {
            if inv.act.is_some() {
                return Ok(cx.finish(Value::Object(result), 0));
            }
            return Err(CliError::Invalid("classification needs an abelian kernel".into()));
        }
        (ext.quotient().clone(), kernel_module(&ext)?, Some(ext))
    } else {
        if inv.act.is_some() {
            return Err(CliError::Usage("--act needs an extension".into()));
        }
        let quotient = match (&inv.fixture, &cx.request.quotient) {
            (Some(_), _) => cx.algebra(inv)?,
            (None, Some(q)) => {
                cx.echo.algebra = Some(q.clone());
                cx.ws.lie_rinehart(q)?
            }
            (None, None) => cx.algebra(inv)?,
        };
        let module = cx.module(inv, &quotient)?;
        (quotient, module, None)
    };
    if module.free_rank(quotient.base()).is_none() {
        return Err(CliError::Invalid("kernel module must be free over A".into()));
    }
    let h2 = cohomology(&quotient, &module, 2)?;
    let mut classes = Vec::new();
    let mut round_trip = true;
    let zero = AltForm::zero(2, quotient.rank(), module.qdim());
    let split = extension_from_cocycle(&quotient, &module, &zero)?;
    round_trip &= cocycle_class(&split, split.connection())?.iter().all(|x| *x == Rational::from_int(0));
    for (i, rep) in h2.representatives().iter().enumerate() {
        let built = extension_from_cocycle(&quotient, &module, rep)?;
        let class = cocycle_class(&built, built.connection())?;
        round_trip &= class == unit_vec::<Rational>(h2.dim(), i);
        classes.push(json!({ "cocycle": form(rep), "extension": extension_summary(&built) }));
    }
    cx.check("round_trip", round_trip)?;
    result.insert("h2_dim".into(), json!(h2.dim()));
    result.insert("split".into(), extension_summary(&split));
    result.insert("classes".into(), Value::Array(classes));
    if let Some(ext) = input {
        result.insert("input_class".into(), vector(&cocycle_class(&ext, ext.connection())?));
        result.insert("input_split".into(), json!(flat_connection(&ext)?.is_some()));
    }
    Ok(cx.finish(Value::Object(result), 0))
}

fn act(cx: &mut Context, ext: &Extension<Rational>, path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)?;
    let display = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    let source = Source { path: &display, text: &text };
    let file: ActFile = source.parse()?;
    cx.echo.act_digest = Some(digest(text.as_bytes()));
    let z = center(ext, ext.connection())?;
    let rho = source.form(&file.rho, 2, ext.quotient().rank(), z.dim())?;
    let moved = act_rho(ext, ext.connection(), &rho)?;
    cx.check("act_cocycle", ce_differential(ext.quotient(), z.module(), &rho).is_zero())?;
    let same = congruent(&moved, ext)?;
    Ok(json!({
        "rho": form(&rho),
        "center_dim": z.dim(),
        "curvature": form(&curvature(&moved, moved.connection())?),
        "class": class_value(&moved, moved.connection())?,
        "verdict": if same { "congruent to input" } else { "not congruent to input" },
    }))
}

fn cmd_chern_weil(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let ext = cx.extension(inv)?;
    let w = cx.clamped_weight(inv, &ext);
    let conn = ext.connection().clone();
    cx.check("bianchi", bianchi_check(&ext, &conn)?)?;
    let coalg = SymCoalgebra::for_extension(&ext);
    let map = classifying_map(&ext, &conn, w)?;
    cx.check("coalgebra_morphism", coalgebra_morphism_check(&coalg, &map, w)?)?;
    cx.check("covariantly_closed", verify_lemma_3_11(&ext, &conn, &map)?)?;
    let base = LrModule::base(ext.quotient());
    let mut weights = Vec::new();
    let mut closed = true;
    for k in 0..=w {
        let h_dim = cohomology(ext.quotient(), &base, 2 * k)?.dim();
        let mut rows = Vec::new();
        for phi in invariants(&ext, k)? {
            let class = chern_weil_class(&ext, &phi, k as u64)?;
            closed &= ce_differential(ext.quotient(), &base, &class.representative).is_zero();
            rows.push(json!({
                "polynomial": polynomial(&phi, &coalg),
                "representative": form(&class.representative),
                "class": vector(&class.coordinates),
                "zero": class.is_zero(),
            }));
        }
        weights.push(json!({ "weight": k, "cohomology_dim": h_dim, "invariants": rows }));
    }
    cx.check("cocycle", closed)?;
    // Reaching here means every chern_weil_class call matched its fresh
    // connection; a mismatch errors out above.
    cx.check("connection_independent", true)?;
    Ok(cx.finish(json!({ "max_weight": w, "weights": weights }), 0))
}

fn cmd_invariants(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let ext = cx.extension(inv)?;
    let w = inv.max_weight.or(cx.request.max_weight).unwrap_or(DEFAULT_INVARIANT_WEIGHT);
    cx.echo.max_weight = Some(w);
    let coalg = SymCoalgebra::for_extension(&ext);
    let bases = (0..=w).map(|k| invariants(&ext, k)).collect::<Result<Vec<_>, _>>()?;
    let mut invariant = true;
    for phi in bases.iter().flatten() {
        invariant &= phi.is_invariant(&ext)?;
    }
    cx.check("invariant", invariant)?;
    let mut closed = true;
    for u in 1..=w {
        for v in u..=w - u {
            for a in &bases[u] {
                for b in &bases[v] {
                    closed &= a.product(b, &coalg).is_invariant(&ext)?;
                }
            }
        }
    }
    cx.check("product_closed", closed)?;
    let weights: Vec<Value> = bases
        .iter()
        .enumerate()
        .map(|(k, basis)| {
            let polys: Vec<Value> = basis.iter().map(|p| polynomial(p, &coalg)).collect();
            json!({ "weight": k, "dim": basis.len(), "basis": polys })
        })
        .collect();
    Ok(cx.finish(json!({ "max_weight": w, "weights": weights }), 0))
}

fn cmd_global_invariant(mut cx: Context, inv: &Invocation) -> Result<Outcome, CliError> {
    let ext = cx.extension(inv)?;
    let w = cx.clamped_weight(inv, &ext);
    let conn = ext.connection().clone();
    cx.check("bianchi", bianchi_check(&ext, &conn)?)?;
    let components = global_invariant(&ext, &conn, w)?;
    let mut closed = true;
    let rows: Vec<Value> = components
        .iter()
        .map(|c| {
            closed &= ce_differential(ext.quotient(), &c.module, &c.form).is_zero();
            json!({
                "weight": c.weight,
                "coinvariant_dim": c.representatives.len(),
                "form": form(&c.form),
                "cohomology_dim": c.cohomology_dim,
                "class": vector(&c.coordinates),
                "zero": c.is_zero(),
            })
        })
        .collect();
    cx.check("cocycle", closed)?;
    Ok(cx.finish(json!({ "max_weight": w, "components": rows }), 0))
}
