//! Fixture documents: a prime, a working precision and named objects.
//!
//! Every report printed with `--json` is itself a fixture document (with an
//! extra `report` section), so command output can be fed back in.

use std::collections::BTreeMap;
use std::path::Path;

use padic_hodge::filtration::{FilteredSpace, OneParamSubgroup};
use padic_hodge::isocrystal::{simple_isocrystal, Isocrystal};
use padic_hodge::linalg::{Matrix, Subspace};
use padic_hodge::orbit::{NilpotentOperator, PeriodMapModel};
use padic_hodge::padic::{parse_scalar, scalar_to_json, Context, Padic, DEFAULT_PRECISION};
use padic_hodge::rational::{format_rational, parse_rational};
use padic_hodge::verify::FilteredIsocrystal;
use padic_hodge::Rational;
use serde_json::{json, Map, Value};

use crate::CliError;

const SECTIONS: [&str; 7] = ["isocrystals", "filtrations", "subspaces", "nilpotents", "one_params", "models", "pairs"];

#[derive(Clone, Debug)]
pub struct Model {
    pub filtration: String,
    pub model: PeriodMapModel,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub ctx: Context,
    pub isocrystals: BTreeMap<String, Isocrystal>,
    pub filtrations: BTreeMap<String, FilteredSpace>,
    pub subspaces: BTreeMap<String, Subspace>,
    pub nilpotents: BTreeMap<String, Matrix>,
    pub one_params: BTreeMap<String, OneParamSubgroup>,
    pub models: BTreeMap<String, Model>,
    /// name → (isocrystal, filtration)
    pub pairs: BTreeMap<String, (String, String)>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| bad(format!("{what}: expected an object")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| bad(format!("{what}: expected an array")))
}

fn rational(v: &Value, what: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(bad(format!("{what}: expected a rational string \"a/b\""))),
    }
}

fn vector(ctx: &Context, v: &Value, what: &str) -> Result<Vec<Padic>, CliError> {
    array(v, what)?.iter().map(|x| Ok(parse_scalar(ctx, x)?)).collect()
}

pub fn matrix_from_json(ctx: &Context, v: &Value, what: &str) -> Result<Matrix, CliError> {
    let rows = array(v, what)?.iter().map(|r| vector(ctx, r, what)).collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(bad(format!("{what}: empty matrix")));
    }
    Ok(Matrix::from_rows(ctx.p, rows)?)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect())).collect())
}

fn vectors_to_json(vs: &[Vec<Padic>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(scalar_to_json).collect())).collect())
}

fn span_from_json(ctx: &Context, n: usize, v: &Value, what: &str) -> Result<Subspace, CliError> {
    let vs = array(v, what)?.iter().map(|x| vector(ctx, x, what)).collect::<Result<Vec<_>, _>>()?;
    if vs.iter().any(|x| x.len() != n) {
        return Err(bad(format!("{what}: vectors must have {n} coordinates")));
    }
    Ok(Subspace::span_of(ctx.p, n, &vs))
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    json!({ "dim": s.ambient_dim(), "basis": vectors_to_json(&s.canonical_basis().columns()) })
}

fn subspace_from_json(ctx: &Context, v: &Value, what: &str) -> Result<Subspace, CliError> {
    let o = object(v, what)?;
    let n = o.get("dim").and_then(Value::as_u64).ok_or_else(|| bad(format!("{what}: missing \"dim\"")))? as usize;
    span_from_json(ctx, n, o.get("basis").unwrap_or(&json!([])), what)
}

pub fn filtration_to_json(f: &FilteredSpace) -> Value {
    let (jumps, bases): (Vec<Value>, Vec<Value>) = f
        .steps()
        .iter()
        .map(|(j, s)| (json!(format_rational(j)), vectors_to_json(&s.canonical_basis().columns())))
        .unzip();
    json!({ "dim": f.ambient_dim(), "jumps": jumps, "bases": bases })
}

fn filtration_from_json(ctx: &Context, v: &Value, what: &str) -> Result<FilteredSpace, CliError> {
    let o = object(v, what)?;
    let n = o.get("dim").and_then(Value::as_u64).ok_or_else(|| bad(format!("{what}: missing \"dim\"")))? as usize;
    let jumps = array(o.get("jumps").unwrap_or(&Value::Null), what)?;
    let bases = array(o.get("bases").unwrap_or(&Value::Null), what)?;
    if jumps.len() != bases.len() {
        return Err(bad(format!("{what}: {} jumps but {} bases", jumps.len(), bases.len())));
    }
    let steps = jumps
        .iter()
        .zip(bases)
        .map(|(j, b)| Ok((rational(j, what)?, span_from_json(ctx, n, b, what)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(FilteredSpace::new(ctx.p, n, steps)?)
}

pub fn isocrystal_to_json(e: &Isocrystal) -> Value {
    json!({ "p": e.p(), "dim": e.dim(), "frobenius": matrix_to_json(e.frobenius()) })
}

fn isocrystal_from_json(ctx: &Context, v: &Value, what: &str) -> Result<Isocrystal, CliError> {
    let o = object(v, what)?;
    if let Some(p) = o.get("p") {
        if p.as_u64() != Some(ctx.p as u64) {
            return Err(bad(format!("{what}: prime {p} differs from the document prime {}", ctx.p)));
        }
    }
    let e = if let Some(m) = o.get("frobenius") {
        Isocrystal::new(*ctx, matrix_from_json(ctx, m, what)?)?
    } else if let Some(d) = o.get("diagonal") {
        let entries = array(d, what)?.iter().map(|x| rational(x, what)).collect::<Result<Vec<_>, _>>()?;
        Isocrystal::diagonal(*ctx, &entries)?
    } else if let Some(s) = o.get("simple") {
        let rs = object(s, what)?;
        let get = |k: &str| rs.get(k).and_then(Value::as_i64).ok_or_else(|| bad(format!("{what}: simple.{k} missing")));
        simple_isocrystal(ctx, get("r")?, get("s")?)?
    } else {
        return Err(bad(format!("{what}: needs \"frobenius\", \"diagonal\" or \"simple\"")));
    };
    if let Some(d) = o.get("dim") {
        if d.as_u64() != Some(e.dim() as u64) {
            return Err(bad(format!("{what}: declared dim {d} but Frobenius is {0}x{0}", e.dim())));
        }
    }
    Ok(e)
}

fn one_param_from_json(ctx: &Context, v: &Value, what: &str) -> Result<OneParamSubgroup, CliError> {
    let o = object(v, what)?;
    let weights = array(o.get("weights").unwrap_or(&Value::Null), what)?
        .iter()
        .map(|w| w.as_i64().ok_or_else(|| bad(format!("{what}: weights must be integers"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match o.get("frame") {
        Some(m) => OneParamSubgroup::new(weights, matrix_from_json(ctx, m, what)?)?,
        None => OneParamSubgroup::standard(ctx, weights),
    })
}

pub fn one_param_to_json(l: &OneParamSubgroup) -> Value {
    json!({ "weights": l.weights(), "frame": matrix_to_json(l.frame()) })
}

impl Fixture {
    pub fn empty(ctx: Context) -> Self {
        Self {
            ctx,
            isocrystals: BTreeMap::new(),
            filtrations: BTreeMap::new(),
            subspaces: BTreeMap::new(),
            nilpotents: BTreeMap::new(),
            one_params: BTreeMap::new(),
            models: BTreeMap::new(),
            pairs: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path, precision: Option<i64>) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text, precision).map_err(|e| match e {
            CliError::Input(m) => bad(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str, precision: Option<i64>) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
        Self::from_value(&v, precision)
    }

    /// `precision` overrides the document's own.
    pub fn from_value(v: &Value, precision: Option<i64>) -> Result<Self, CliError> {
        let top = object(v, "fixture")?;
        for k in top.keys() {
            if !SECTIONS.contains(&k.as_str()) && !["prime", "precision", "report"].contains(&k.as_str()) {
                return Err(bad(format!("unknown section {k:?}")));
            }
        }
        let p = top.get("prime").and_then(Value::as_u64).ok_or_else(|| bad("missing \"prime\""))? as u32;
        let prec = precision.or_else(|| top.get("precision").and_then(Value::as_i64)).unwrap_or(DEFAULT_PRECISION);
        let ctx = Context::new(p, prec)?;
        let mut fx = Self::empty(ctx);
        let section = |name: &str| -> Result<Vec<(String, Value)>, CliError> {
            match top.get(name) {
                None => Ok(Vec::new()),
                Some(s) => Ok(object(s, name)?.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
            }
        };
        for (k, v) in section("isocrystals")? {
            fx.isocrystals.insert(k.clone(), isocrystal_from_json(&ctx, &v, &format!("isocrystal {k}"))?);
        }
        for (k, v) in section("filtrations")? {
            fx.filtrations.insert(k.clone(), filtration_from_json(&ctx, &v, &format!("filtration {k}"))?);
        }
        for (k, v) in section("subspaces")? {
            fx.subspaces.insert(k.clone(), subspace_from_json(&ctx, &v, &format!("subspace {k}"))?);
        }
        for (k, v) in section("nilpotents")? {
            let what = format!("nilpotent {k}");
            let m = matrix_from_json(&ctx, &v, &what)?;
            NilpotentOperator::new(ctx, m.clone()).map_err(|e| bad(format!("{what}: {e}")))?;
            fx.nilpotents.insert(k, m);
        }
        for (k, v) in section("one_params")? {
            fx.one_params.insert(k.clone(), one_param_from_json(&ctx, &v, &format!("one-parameter subgroup {k}"))?);
        }
        for (k, v) in section("models")? {
            let what = format!("model {k}");
            let o = object(&v, &what)?;
            let fname = o.get("f0").and_then(Value::as_str).ok_or_else(|| bad(format!("{what}: missing \"f0\"")))?;
            let f0 = fx.filtration(fname)?.clone();
            let sen = array(o.get("sen").unwrap_or(&json!([])), &what)?
                .iter()
                .map(|m| matrix_from_json(&ctx, m, &what))
                .collect::<Result<Vec<_>, _>>()?;
            let domain_val = o.get("domain_val").and_then(Value::as_i64).unwrap_or(1);
            fx.models.insert(k, Model { filtration: fname.to_string(), model: PeriodMapModel::new(f0, sen, domain_val)? });
        }
        for (k, v) in section("pairs")? {
            let what = format!("pair {k}");
            let o = object(&v, &what)?;
            let get = |f: &str| o.get(f).and_then(Value::as_str).map(str::to_string).ok_or_else(|| bad(format!("{what}: missing {f:?}")));
            let (e, f) = (get("isocrystal")?, get("filtration")?);
            let (iso, fil) = (fx.isocrystal(&e)?, fx.filtration(&f)?);
            if iso.dim() != fil.ambient_dim() {
                return Err(bad(format!("{what}: dimensions {} and {} differ", iso.dim(), fil.ambient_dim())));
            }
            fx.pairs.insert(k, (e, f));
        }
        Ok(fx)
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("prime".into(), json!(self.ctx.p));
        top.insert("precision".into(), json!(self.ctx.precision));
        let mut put = |name: &str, m: Map<String, Value>| {
            if !m.is_empty() {
                top.insert(name.into(), Value::Object(m));
            }
        };
        put("isocrystals", self.isocrystals.iter().map(|(k, e)| (k.clone(), isocrystal_to_json(e))).collect());
        put("filtrations", self.filtrations.iter().map(|(k, f)| (k.clone(), filtration_to_json(f))).collect());
        put("subspaces", self.subspaces.iter().map(|(k, s)| (k.clone(), subspace_to_json(s))).collect());
        put("nilpotents", self.nilpotents.iter().map(|(k, m)| (k.clone(), matrix_to_json(m))).collect());
        put("one_params", self.one_params.iter().map(|(k, l)| (k.clone(), one_param_to_json(l))).collect());
        put(
            "models",
            self.models
                .iter()
                .map(|(k, m)| {
                    let sen: Vec<Value> = m.model.sen.iter().map(matrix_to_json).collect();
                    (k.clone(), json!({ "f0": m.filtration, "sen": sen, "domain_val": m.model.domain_val }))
                })
                .collect(),
        );
        put(
            "pairs",
            self.pairs.iter().map(|(k, (e, f))| (k.clone(), json!({ "isocrystal": e, "filtration": f }))).collect(),
        );
        Value::Object(top)
    }

    fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, CliError> {
        map.get(name).ok_or_else(|| bad(format!("no {kind} named {name:?}")))
    }

    pub fn isocrystal(&self, name: &str) -> Result<&Isocrystal, CliError> {
        Self::lookup(&self.isocrystals, "isocrystal", name)
    }

    pub fn filtration(&self, name: &str) -> Result<&FilteredSpace, CliError> {
        Self::lookup(&self.filtrations, "filtration", name)
    }

    pub fn nilpotent(&self, name: &str) -> Result<NilpotentOperator, CliError> {
        let m = Self::lookup(&self.nilpotents, "nilpotent", name)?;
        Ok(NilpotentOperator::new(self.ctx, m.clone())?)
    }

    pub fn one_param(&self, name: &str) -> Result<&OneParamSubgroup, CliError> {
        Self::lookup(&self.one_params, "one-parameter subgroup", name)
    }

    pub fn model(&self, name: &str) -> Result<&Model, CliError> {
        Self::lookup(&self.models, "model", name)
    }

    pub fn filtered_isocrystals(&self) -> Vec<FilteredIsocrystal> {
        self.pairs
            .iter()
            .map(|(k, (e, f))| FilteredIsocrystal {
                name: k.clone(),
                e: self.isocrystals[e].clone(),
                f: self.filtrations[f].clone(),
            })
            .collect()
    }
}
