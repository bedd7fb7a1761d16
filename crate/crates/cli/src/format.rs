//! Problem files: JSON, version 1, every number a `"p/q"` string.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use process_duality_core::exactlp::{Rational, RationalVector};
use process_duality_core::model::{AffineVectorProgram, FiniteProgram, OrderCone, SampledPoint, VectorProgram};
use process_duality_core::polyhedra::{
    AffineMap, BoundaryRestrictedPolyhedron, FacetRestriction, HalfSpace, Polyhedron, Region, Relation,
};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

pub const FORMAT_VERSION: u32 = 1;

/// JSON Schema of the problem format.
pub const SCHEMA: &str = include_str!("../../../docs/problem.schema.json");

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema = serde_json::from_str(SCHEMA).expect("bundled schema is JSON");
        jsonschema::validator_for(&schema).expect("bundled schema is valid")
    })
}

/// Rejected input, with the offending location.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    /// Malformed JSON or a value of the wrong shape; `message` names the
    /// JSON path, line and column.
    #[error("{message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn field(field: impl Into<String>, message: impl fmt::Display) -> InputError {
    InputError::Field { field: field.into(), message: message.to_string() }
}

/// A rational written as `"p/q"` (or `"p"` on input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let digits = |t: &str| {
        let body = t.strip_prefix(['-', '+']).unwrap_or(t);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(n) || !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
        return Err(format!("`{s}` is not a rational of the form p/q"));
    }
    let n: BigInt = n.parse().map_err(|e| format!("`{s}`: {e}"))?;
    let d: BigInt = d.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if d.is_zero() {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn parse_vector(s: &str) -> Result<RationalVector, String> {
    s.split(',').map(parse_rational).collect()
}

pub fn format_rational(q: &Rational) -> String {
    Q(q.clone()).to_string()
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn rs(v: &[Q]) -> RationalVector {
    v.iter().map(|q| q.0.clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Affine,
    Discrete,
    Setvalued,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    pub y: usize,
    pub z: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationSpec {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub relation: RelationSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionSpec {
    /// Index into `omega.h_rep`.
    pub facet: usize,
    /// H-representation of the retained part of the facet.
    pub retained: Vec<RowSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaSpec {
    pub h_rep: Vec<RowSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub facet_restrictions: Vec<RestrictionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub matrix: Vec<Vec<Q>>,
    pub offset: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub id: String,
    /// Values of `F(x)`; exactly one for discrete programs.
    pub f: Vec<Vec<Q>>,
    /// Values of `G(x)`; exactly one for discrete programs.
    pub g: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub rays: Vec<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub kind: Kind,
    pub dims: Dims,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointSpec>>,
    pub y_plus: ConeSpec,
    pub z_plus: ConeSpec,
}

/// Parses JSON text into the file structure. Checks, in order: JSON syntax
/// (line and column), the schema (JSON pointer of the offending value), and
/// the typed structure (JSON path).
pub fn parse_str(text: &str) -> Result<ProblemFile, InputError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Err(e) = validator().validate(&value) {
        let path = e.instance_path().to_string();
        return Err(field(if path.is_empty() { "/".to_string() } else { path }, e));
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let message = match e.path().to_string().as_str() {
            "." => e.inner().to_string(),
            path => format!("{path}: {}", e.inner()),
        };
        InputError::Syntax { line: e.inner().line(), column: e.inner().column(), message }
    })
}

pub fn load(path: &Path) -> Result<(ProblemFile, VectorProgram), InputError> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_str(&text)?;
    let program = file.to_program()?;
    Ok((file, program))
}

/// Canonical text: pretty JSON with fixed field order and a trailing newline.
pub fn emit(file: &ProblemFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("problem files always serialize");
    s.push('\n');
    s
}

fn vector(name: &str, v: &[Q], dim: usize) -> Result<RationalVector, InputError> {
    if v.len() != dim {
        return Err(field(name, format!("expected {dim} entries, found {}", v.len())));
    }
    Ok(rs(v))
}

fn rows(name: &str, specs: &[RowSpec], dim: usize) -> Result<Vec<HalfSpace>, InputError> {
    specs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let normal = vector(&format!("{name}[{i}].normal"), &r.normal, dim)?;
            Ok(match r.relation {
                RelationSpec::Le => HalfSpace::le(normal, r.offset.0.clone()),
                RelationSpec::Eq => HalfSpace::eq(normal, r.offset.0.clone()),
            })
        })
        .collect()
}

fn affine_map(name: &str, m: &MapSpec, in_dim: usize, out_dim: usize) -> Result<AffineMap, InputError> {
    if m.matrix.len() != out_dim {
        return Err(field(format!("{name}.matrix"), format!("expected {out_dim} rows, found {}", m.matrix.len())));
    }
    let matrix = m
        .matrix
        .iter()
        .enumerate()
        .map(|(i, row)| vector(&format!("{name}.matrix[{i}]"), row, in_dim))
        .collect::<Result<Vec<_>, _>>()?;
    let offset = vector(&format!("{name}.offset"), &m.offset, out_dim)?;
    AffineMap::new(in_dim, matrix, offset).map_err(|e| field(name, e))
}

fn order_cone(name: &str, c: &ConeSpec, dim: usize) -> Result<OrderCone, InputError> {
    let gens = |what: &str, list: &[Vec<Q>]| {
        list.iter()
            .enumerate()
            .map(|(i, g)| vector(&format!("{name}.{what}[{i}]"), g, dim))
            .collect::<Result<Vec<_>, _>>()
    };
    OrderCone::from_generators(dim, gens("rays", &c.rays)?, gens("lines", &c.lines)?).map_err(|e| field(name, e))
}

fn cone_spec(k: &OrderCone) -> ConeSpec {
    ConeSpec {
        rays: k.cone().rays().iter().map(|r| qs(r)).collect(),
        lines: k.cone().lines().iter().map(|r| qs(r)).collect(),
    }
}

fn row_specs(rows: &[HalfSpace]) -> Vec<RowSpec> {
    rows.iter()
        .map(|r| RowSpec {
            normal: qs(&r.normal),
            offset: Q(r.offset.clone()),
            relation: match r.relation {
                Relation::Le => RelationSpec::Le,
                Relation::Eq => RelationSpec::Eq,
            },
        })
        .collect()
}

fn map_spec(m: &AffineMap) -> MapSpec {
    MapSpec { matrix: m.matrix.iter().map(|r| qs(r)).collect(), offset: qs(&m.offset) }
}

impl ProblemFile {
    pub fn to_program(&self) -> Result<VectorProgram, InputError> {
        if self.version != FORMAT_VERSION {
            return Err(field("version", format!("unsupported version {}, expected {FORMAT_VERSION}", self.version)));
        }
        let Dims { x, y, z } = self.dims;
        if y == 0 || z == 0 {
            return Err(field("dims", "y and z must be positive"));
        }
        let y_plus = order_cone("y_plus", &self.y_plus, y)?;
        let z_plus = order_cone("z_plus", &self.z_plus, z)?;
        match self.kind {
            Kind::Affine => {
                if self.points.is_some() {
                    return Err(field("points", "not allowed for affine programs"));
                }
                let x = x.ok_or_else(|| field("dims.x", "required for affine programs"))?;
                let omega = self.omega.as_ref().ok_or_else(|| field("omega", "required for affine programs"))?;
                let f = self.f.as_ref().ok_or_else(|| field("f", "required for affine programs"))?;
                let g = self.g.as_ref().ok_or_else(|| field("g", "required for affine programs"))?;
                let closure =
                    Polyhedron::from_h(x, rows("omega.h_rep", &omega.h_rep, x)?).map_err(|e| field("omega", e))?;
                let region = if omega.facet_restrictions.is_empty() {
                    Region::Closed(closure)
                } else {
                    let restrictions = omega
                        .facet_restrictions
                        .iter()
                        .enumerate()
                        .map(|(i, r)| {
                            let name = format!("omega.facet_restrictions[{i}].retained");
                            let retained =
                                Polyhedron::from_h(x, rows(&name, &r.retained, x)?).map_err(|e| field(&name, e))?;
                            Ok(FacetRestriction { facet: r.facet, retained })
                        })
                        .collect::<Result<Vec<_>, InputError>>()?;
                    Region::Restricted(
                        BoundaryRestrictedPolyhedron::new(closure, restrictions)
                            .map_err(|e| field("omega.facet_restrictions", e))?,
                    )
                };
                let program = AffineVectorProgram::new(
                    region,
                    affine_map("f", f, x, y)?,
                    affine_map("g", g, x, z)?,
                    y_plus,
                    z_plus,
                )
                .map_err(|e| field("omega", e))?;
                Ok(VectorProgram::Affine(program))
            }
            Kind::Discrete | Kind::Setvalued => {
                for (name, present) in
                    [("omega", self.omega.is_some()), ("f", self.f.is_some()), ("g", self.g.is_some())]
                {
                    if present {
                        return Err(field(name, "only allowed for affine programs"));
                    }
                }
                let points = self.points.as_ref().ok_or_else(|| field("points", "required for finite programs"))?;
                let single = self.kind == Kind::Discrete;
                let mut sampled = Vec::with_capacity(points.len());
                for (i, p) in points.iter().enumerate() {
                    let values = |what: &str, list: &[Vec<Q>], dim: usize| {
                        let name = format!("points[{i}].{what}");
                        if single && list.len() != 1 {
                            return Err(field(&name, "discrete programs take exactly one value"));
                        }
                        list.iter()
                            .enumerate()
                            .map(|(j, v)| vector(&format!("{name}[{j}]"), v, dim))
                            .collect::<Result<Vec<_>, _>>()
                    };
                    sampled.push(SampledPoint {
                        id: p.id.clone(),
                        f_values: values("f", &p.f, y)?,
                        g_values: values("g", &p.g, z)?,
                    });
                }
                let program = if single {
                    let triples = sampled
                        .into_iter()
                        .map(|p| (p.id, p.f_values.into_iter().next().unwrap(), p.g_values.into_iter().next().unwrap()))
                        .collect();
                    VectorProgram::Discrete(
                        FiniteProgram::discrete(triples, y_plus, z_plus).map_err(|e| field("points", e))?,
                    )
                } else {
                    VectorProgram::SetValued(
                        FiniteProgram::set_valued(sampled, y_plus, z_plus).map_err(|e| field("points", e))?,
                    )
                };
                Ok(program)
            }
        }
    }

    pub fn from_program(p: &VectorProgram) -> ProblemFile {
        match p {
            VectorProgram::Affine(a) => {
                let omega = match a.omega() {
                    Region::Restricted(b) => OmegaSpec {
                        h_rep: row_specs(b.closure().h_rep().expect("closure carries H")),
                        facet_restrictions: b
                            .restrictions()
                            .iter()
                            .map(|r| RestrictionSpec { facet: r.facet, retained: row_specs(&r.retained.rows()) })
                            .collect(),
                    },
                    other => OmegaSpec {
                        h_rep: row_specs(&other.closure().expect("affine domains are polyhedral").rows()),
                        facet_restrictions: Vec::new(),
                    },
                };
                ProblemFile {
                    version: FORMAT_VERSION,
                    kind: Kind::Affine,
                    dims: Dims { x: Some(a.x_dim()), y: a.f().out_dim(), z: a.g().out_dim() },
                    omega: Some(omega),
                    f: Some(map_spec(a.f())),
                    g: Some(map_spec(a.g())),
                    points: None,
                    y_plus: cone_spec(a.y_plus()),
                    z_plus: cone_spec(a.z_plus()),
                }
            }
            VectorProgram::Discrete(fp) | VectorProgram::SetValued(fp) => ProblemFile {
                version: FORMAT_VERSION,
                kind: if fp.is_single_valued() { Kind::Discrete } else { Kind::Setvalued },
                dims: Dims { x: None, y: fp.y_plus().dim(), z: fp.z_plus().dim() },
                omega: None,
                f: None,
                g: None,
                points: Some(
                    fp.points()
                        .iter()
                        .map(|s| PointSpec {
                            id: s.id.clone(),
                            f: s.f_values.iter().map(|v| qs(v)).collect(),
                            g: s.g_values.iter().map(|v| qs(v)).collect(),
                        })
                        .collect(),
                ),
                y_plus: cone_spec(fp.y_plus()),
                z_plus: cone_spec(fp.z_plus()),
            },
        }
    }
}

/// `3` or `3/4`, for text output.
pub fn show_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `(a, b, c)`, for text output.
pub fn show_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(show_rational).collect();
    format!("({})", parts.join(", "))
}

/// Sign-aware `a·x rel b` rendering with variable names `names`.
pub fn show_row(row: &HalfSpace, names: &[String]) -> String {
    let mut terms = Vec::new();
    for (c, n) in row.normal.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { show_rational(&mag) };
        let sign = if c.is_negative() { "-" } else { "+" };
        terms.push((sign, format!("{coef}{n}")));
    }
    let mut lhs = String::new();
    for (i, (sign, t)) in terms.iter().enumerate() {
        match (i, *sign) {
            (0, "-") => lhs.push('-'),
            (0, _) => {}
            (_, s) => lhs.push_str(&format!(" {s} ")),
        }
        lhs.push_str(t);
    }
    if lhs.is_empty() {
        lhs.push('0');
    }
    let rel = match row.relation {
        Relation::Le => "<=",
        Relation::Eq => "=",
    };
    format!("{lhs} {rel} {}", show_rational(&row.offset))
}
