//! JSON documents for curves, divisors, functions and groups.
//!
//! Rationals are strings `"p/q"` (integers without the denominator), and
//! infinities are `"inf"` for lengths or `"+inf"` / `"-inf"` for values.
//! Parsers report every problem they find, each with the location in the
//! document.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};

use crate::divisor::Divisor;
use crate::error::Error;
use crate::function::PlFunction;
use crate::graph::{Curve, Edge, Point, Remodel, Vertex};
use crate::group::{close_group, GroupAction, Isometry};
use crate::scalar::{format_rational, parse_rational, Length, Rational, Value};

/// A validation problem with its location, such as `c.json: $.edges[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub error: Error,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.location, self.error.code(), self.error)
    }
}

pub type Parsed<T> = std::result::Result<T, Vec<Diagnostic>>;

fn diag(location: impl Into<String>, error: Error) -> Vec<Diagnostic> {
    vec![Diagnostic { location: location.into(), error }]
}

fn field<'a>(v: &'a Json, key: &str, loc: &str) -> Parsed<&'a Json> {
    v.get(key).ok_or_else(|| diag(loc, Error::Invalid(format!("missing field `{key}`"))))
}

fn string<'a>(v: &'a Json, loc: &str) -> Parsed<&'a str> {
    v.as_str().ok_or_else(|| diag(loc, Error::Invalid("expected a string".into())))
}

fn array<'a>(v: &'a Json, loc: &str) -> Parsed<&'a Vec<Json>> {
    v.as_array().ok_or_else(|| diag(loc, Error::Invalid("expected an array".into())))
}

fn object<'a>(v: &'a Json, loc: &str) -> Parsed<&'a Map<String, Json>> {
    v.as_object().ok_or_else(|| diag(loc, Error::Invalid("expected an object".into())))
}

fn integer(v: &Json, loc: &str) -> Parsed<i64> {
    v.as_i64().ok_or_else(|| diag(loc, Error::Invalid("expected an integer".into())))
}

fn rational(v: &Json, loc: &str) -> Parsed<Rational> {
    parse_rational(string(v, loc)?).map_err(|e| diag(loc, e))
}

/// Collects the errors of all items, or returns all values.
fn gather<T>(items: impl IntoIterator<Item = Parsed<T>>) -> Parsed<Vec<T>> {
    let mut ok = Vec::new();
    let mut errs = Vec::new();
    for it in items {
        match it {
            Ok(x) => ok.push(x),
            Err(e) => errs.extend(e),
        }
    }
    if errs.is_empty() {
        Ok(ok)
    } else {
        Err(errs)
    }
}

pub fn rational_to_json(q: &Rational) -> Json {
    Json::String(format_rational(q))
}

pub fn length_to_json(l: &Length) -> Json {
    match l {
        Length::Finite(q) => rational_to_json(q),
        Length::Infinite => Json::String("inf".into()),
    }
}

pub fn value_to_json(v: &Value) -> Json {
    Json::String(v.to_string())
}

pub fn curve_to_json(c: &Curve) -> Json {
    let vertices: Vec<Json> =
        c.vertices().iter().map(|v| json!({"id": v.id, "at_infinity": v.at_infinity})).collect();
    let edges: Vec<Json> = c
        .edges()
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "ends": [c.vertex(e.ends[0]).id, c.vertex(e.ends[1]).id],
                "length": length_to_json(&e.length),
            })
        })
        .collect();
    json!({"vertices": vertices, "edges": edges})
}

pub fn curve_from_json(v: &Json, loc: &str) -> Parsed<Curve> {
    let vs = array(field(v, "vertices", loc)?, &format!("{loc}.vertices"))?;
    let es = array(field(v, "edges", loc)?, &format!("{loc}.edges"))?;
    let vertices = gather(vs.iter().enumerate().map(|(i, x)| {
        let l = format!("{loc}.vertices[{i}]");
        let id = string(field(x, "id", &l)?, &format!("{l}.id"))?.to_string();
        let at_infinity = match x.get("at_infinity") {
            None => false,
            Some(b) => b.as_bool().ok_or_else(|| diag(format!("{l}.at_infinity"), Error::Invalid("expected a boolean".into())))?,
        };
        Ok(Vertex { id, at_infinity })
    }));
    let vertices = vertices?;
    let mut errs = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, x) in vertices.iter().enumerate() {
        if index.insert(&x.id, i).is_some() {
            errs.extend(diag(format!("{loc}.vertices[{i}].id"), Error::DuplicateId(x.id.clone())));
        }
    }
    let mut edge_ids: HashMap<String, usize> = HashMap::new();
    let edges = gather(es.iter().enumerate().map(|(i, x)| {
        let l = format!("{loc}.edges[{i}]");
        let id = string(field(x, "id", &l)?, &format!("{l}.id"))?.to_string();
        let ends = array(field(x, "ends", &l)?, &format!("{l}.ends"))?;
        if ends.len() != 2 {
            return Err(diag(format!("{l}.ends"), Error::Invalid("an edge has two ends".into())));
        }
        let mut idx = [0usize; 2];
        let mut bad = Vec::new();
        for k in 0..2 {
            let name = string(&ends[k], &format!("{l}.ends[{k}]"))?;
            match index.get(name) {
                Some(&n) => idx[k] = n,
                None => bad.extend(diag(format!("{l}.ends[{k}]"), Error::DanglingId(name.into()))),
            }
        }
        let ls = format!("{l}.length");
        let length = Length::parse(string(field(x, "length", &l)?, &ls)?).map_err(|e| diag(&ls, e));
        match &length {
            Ok(Length::Finite(q)) if !crate::scalar::is_positive(q) => {
                bad.extend(diag(&ls, Error::NonpositiveLength(id.clone())))
            }
            Err(e) => bad.extend(e.clone()),
            _ => {}
        }
        if edge_ids.insert(id.clone(), i).is_some() {
            bad.extend(diag(format!("{l}.id"), Error::DuplicateId(id.clone())));
        }
        if !bad.is_empty() {
            return Err(bad);
        }
        Ok(Edge { id, ends: idx, length: length.expect("checked") })
    }));
    let edges = match edges {
        Ok(e) if errs.is_empty() => e,
        Ok(_) => return Err(errs),
        Err(e) => {
            errs.extend(e);
            return Err(errs);
        }
    };
    Curve::new(vertices, edges).map_err(|e| diag(loc, e))
}

/// A point as `{"vertex": id}` or `{"edge": id, "offset": q, "anchor": id}`
/// with the offset measured from `ends[0]`, the finite end.
pub fn point_to_json(c: &Curve, p: &Point) -> Json {
    match p {
        Point::Vertex(v) => json!({"vertex": c.vertex(*v).id}),
        Point::Edge { edge, offset } => {
            let e = c.edge(*edge);
            json!({"edge": e.id, "offset": rational_to_json(offset), "anchor": c.vertex(e.ends[0]).id})
        }
    }
}

pub fn point_from_json(c: &Curve, v: &Json, loc: &str) -> Parsed<Point> {
    if let Some(id) = v.get("vertex") {
        let id = string(id, &format!("{loc}.vertex"))?;
        return c
            .vertex_index(id)
            .map(Point::Vertex)
            .ok_or_else(|| diag(format!("{loc}.vertex"), Error::DanglingId(id.into())));
    }
    let eid = string(field(v, "edge", loc)?, &format!("{loc}.edge"))?;
    let e = c.edge_index(eid).ok_or_else(|| diag(format!("{loc}.edge"), Error::DanglingId(eid.into())))?;
    let t = rational(field(v, "offset", loc)?, &format!("{loc}.offset"))?;
    let edge = c.edge(e);
    let t = match v.get("anchor") {
        None => t,
        Some(a) => {
            let a = string(a, &format!("{loc}.anchor"))?;
            let ai = c.vertex_index(a).ok_or_else(|| diag(format!("{loc}.anchor"), Error::DanglingId(a.into())))?;
            if ai == edge.ends[0] {
                t
            } else if ai == edge.ends[1] {
                match &edge.length {
                    Length::Finite(l) => l - &t,
                    Length::Infinite => {
                        return Err(diag(
                            format!("{loc}.anchor"),
                            Error::PointOffCurve("offsets on an unbounded edge start at its finite end".into()),
                        ))
                    }
                }
            } else {
                return Err(diag(format!("{loc}.anchor"), Error::PointOffCurve(format!("`{a}` is not an end of `{eid}`"))));
            }
        }
    };
    let inside = crate::scalar::is_positive(&t) && Length::Finite(t.clone()) < edge.length;
    if !inside {
        return Err(diag(
            format!("{loc}.offset"),
            Error::PointOffCurve(format!("offset {} is not inside `{eid}`", format_rational(&t))),
        ));
    }
    Ok(Point::Edge { edge: e, offset: t })
}

pub fn divisor_to_json(c: &Curve, d: &Divisor) -> Json {
    Json::Array(d.iter().map(|(p, k)| json!({"point": point_to_json(c, p), "coeff": k})).collect())
}

pub fn divisor_from_json(c: &Curve, v: &Json, loc: &str) -> Parsed<Divisor> {
    let items = array(v, loc)?;
    let terms = gather(items.iter().enumerate().map(|(i, x)| {
        let l = format!("{loc}[{i}]");
        let p = point_from_json(c, field(x, "point", &l)?, &format!("{l}.point"));
        let k = integer(field(x, "coeff", &l)?, &format!("{l}.coeff"));
        match (p, k) {
            (Ok(p), Ok(k)) => Ok((p, k)),
            (p, k) => Err(p.err().into_iter().chain(k.err()).flatten().collect()),
        }
    }))?;
    Ok(Divisor::from_terms(terms))
}

/// A function as its values at the vertices of a refinement carrying all
/// breakpoints, with the slope of each refined edge.
pub fn function_to_json(f: &PlFunction) -> Json {
    let c = f.curve();
    let r = Remodel::refine(c, &f.breakpoints()).expect("breakpoints lie on the curve");
    let rc = &r.curve;
    let value_at = |v: usize| f.eval(&r.vertex_points[v]);
    let mut values = Map::new();
    for v in 0..rc.num_vertices() {
        values.insert(rc.vertex(v).id.clone(), value_to_json(&value_at(v)));
    }
    let mut slopes = Map::new();
    for (e, edge) in rc.edges().iter().enumerate() {
        let s = if f.is_neg_infinity() {
            0
        } else {
            match (&edge.length, value_at(edge.ends[0]), value_at(edge.ends[1])) {
                (Length::Finite(l), Value::Finite(a), Value::Finite(b)) => {
                    crate::scalar::to_i64(&((b - a) / l)).expect("integer slope")
                }
                _ => {
                    let pc = &r.pieces[e][0];
                    f.tail_slope(pc.edge)
                }
            }
        };
        slopes.insert(edge.id.clone(), json!({"slope": s, "from": rc.vertex(edge.ends[0]).id}));
    }
    json!({"refinement": curve_to_json(rc), "values": values, "slopes": slopes})
}

/// Reads a function on `curve`. Refinement vertices are vertex ids of
/// `curve` or labels `edge@offset`.
pub fn function_from_json(curve: &Arc<Curve>, v: &Json, loc: &str) -> Parsed<PlFunction> {
    let rloc = format!("{loc}.refinement");
    let r = curve_from_json(field(v, "refinement", loc)?, &rloc)?;
    let values = object(field(v, "values", loc)?, &format!("{loc}.values"))?;
    let slopes = object(field(v, "slopes", loc)?, &format!("{loc}.slopes"))?;
    let points = gather((0..r.num_vertices()).map(|i| {
        let id = &r.vertex(i).id;
        label_point(curve, id).ok_or_else(|| diag(format!("{rloc}.vertices[{i}].id"), Error::DanglingId(id.clone())))
    }))?;
    let vals = gather((0..r.num_vertices()).map(|i| {
        let id = &r.vertex(i).id;
        let l = format!("{loc}.values.{id}");
        let s = string(values.get(id).ok_or_else(|| diag(&l, Error::Invalid("missing value".into())))?, &l)?;
        Value::parse(s).map_err(|e| diag(&l, e))
    }))?;
    let finite: Vec<usize> = (0..r.num_vertices()).filter(|&i| !r.vertex(i).at_infinity).collect();
    if finite.iter().all(|&i| vals[i] == Value::NegInf) {
        return Ok(PlFunction::neg_infinity(curve.clone()));
    }
    let mut errs = Vec::new();
    for &i in &finite {
        if !vals[i].is_finite() {
            errs.extend(diag(format!("{loc}.values.{}", r.vertex(i).id), Error::Invalid("infinite value at a finite point".into())));
        }
    }
    let mut expected_cuts: Vec<Point> = Vec::new();
    let mut cuts = vec![Vec::new(); curve.num_edges()];
    let mut at: BTreeMap<Point, Rational> = BTreeMap::new();
    for &i in &finite {
        if let (Point::Edge { edge, offset }, Value::Finite(_)) = (&points[i], &vals[i]) {
            cuts[*edge].push(offset.clone());
            expected_cuts.push(points[i].clone());
        }
        if let Value::Finite(q) = &vals[i] {
            at.insert(points[i].clone(), q.clone());
        }
    }
    // Each refined edge must be a piece of the curve between its ends.
    match Remodel::refine(curve, &expected_cuts) {
        Ok(exp) => {
            let key = |a: &Point, b: &Point, l: &Length| {
                let (a, b) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                (a, b, l.clone())
            };
            let mut want: Vec<_> = exp
                .curve
                .edges()
                .iter()
                .map(|e| key(&exp.vertex_points[e.ends[0]], &exp.vertex_points[e.ends[1]], &e.length))
                .collect();
            let mut got: Vec<_> =
                r.edges().iter().map(|e| key(&points[e.ends[0]], &points[e.ends[1]], &e.length)).collect();
            want.sort();
            got.sort();
            if want != got {
                errs.extend(diag(&rloc, Error::InvalidCurve("refinement does not subdivide the curve".into())));
            }
        }
        Err(e) => errs.extend(diag(&rloc, e)),
    }
    // Declared slopes, oriented along each refined edge.
    let mut slope_of = vec![0i64; r.num_edges()];
    for (e, edge) in r.edges().iter().enumerate() {
        let l = format!("{loc}.slopes.{}", edge.id);
        let parsed = slopes
            .get(&edge.id)
            .ok_or_else(|| diag(&l, Error::Invalid("missing slope".into())))
            .and_then(|s| {
                let k = integer(field(s, "slope", &l)?, &format!("{l}.slope"))?;
                let from = string(field(s, "from", &l)?, &format!("{l}.from"))?;
                match r.vertex_index(from) {
                    Some(x) if x == edge.ends[0] => Ok(k),
                    Some(x) if x == edge.ends[1] => Ok(-k),
                    _ => Err(diag(format!("{l}.from"), Error::DanglingId(from.into()))),
                }
            });
        match parsed {
            Ok(k) => slope_of[e] = k,
            Err(d) => errs.extend(d),
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let mut tails = vec![0i64; curve.num_edges()];
    for (e, edge) in r.edges().iter().enumerate() {
        if let Point::Vertex(w) = points[edge.ends[1]] {
            if curve.vertex(w).at_infinity {
                if let Some(t) = (0..curve.num_edges()).find(|&t| curve.edge(t).ends[1] == w) {
                    tails[t] = slope_of[e];
                }
            }
        }
    }
    let f = PlFunction::from_samples(curve.clone(), &cuts, |e| tails[e], |p| {
        at.get(p).cloned().ok_or_else(|| Error::Invalid(format!("no value at {}", curve.point_label(p))))
    })
    .map_err(|e| diag(loc, e))?;
    // Declared slopes and infinite values must agree with the values.
    for (e, edge) in r.edges().iter().enumerate() {
        let [a, b] = edge.ends;
        let ok = match (&edge.length, &vals[a], &vals[b]) {
            (Length::Finite(l), Value::Finite(x), Value::Finite(y)) => (y - x) / l == Rational::from_integer(slope_of[e].into()),
            _ => f.eval(&points[b]) == vals[b],
        };
        if !ok {
            errs.extend(diag(format!("{loc}.slopes.{}", edge.id), Error::Invalid("slope disagrees with the values".into())));
        }
    }
    if errs.is_empty() {
        Ok(f)
    } else {
        Err(errs)
    }
}

/// The point named by a vertex id or an `edge@offset` label.
fn label_point(c: &Curve, id: &str) -> Option<Point> {
    if let Some(v) = c.vertex_index(id) {
        return Some(Point::Vertex(v));
    }
    let (e, t) = id.rsplit_once('@')?;
    let e = c.edge_index(e)?;
    let t = parse_rational(t).ok()?;
    match c.point_at(e, &t).ok()? {
        p @ Point::Edge { .. } => Some(p),
        Point::Vertex(_) => None,
    }
}

pub fn isometry_to_json(c: &Curve, s: &Isometry) -> Json {
    let mut vm = Map::new();
    for (v, &w) in s.vertex_map.iter().enumerate() {
        vm.insert(c.vertex(v).id.clone(), Json::String(c.vertex(w).id.clone()));
    }
    let mut em = Map::new();
    for (e, &(f, rev)) in s.edge_map.iter().enumerate() {
        em.insert(c.edge(e).id.clone(), json!({"to": c.edge(f).id, "reversed": rev}));
    }
    json!({"vertex_map": vm, "edge_map": em})
}

pub fn isometry_from_json(c: &Curve, v: &Json, loc: &str) -> Parsed<Isometry> {
    let vm = object(field(v, "vertex_map", loc)?, &format!("{loc}.vertex_map"))?;
    let em = object(field(v, "edge_map", loc)?, &format!("{loc}.edge_map"))?;
    let mut errs = Vec::new();
    let mut vertex_map = vec![usize::MAX; c.num_vertices()];
    for (k, x) in vm {
        let l = format!("{loc}.vertex_map.{k}");
        let target = string(x, &l).and_then(|t| c.vertex_index(t).ok_or_else(|| diag(&l, Error::DanglingId(t.into()))));
        match (c.vertex_index(k), target) {
            (Some(a), Ok(b)) => vertex_map[a] = b,
            (None, _) => errs.extend(diag(&l, Error::DanglingId(k.clone()))),
            (_, Err(d)) => errs.extend(d),
        }
    }
    let mut edge_map = vec![(usize::MAX, false); c.num_edges()];
    for (k, x) in em {
        let l = format!("{loc}.edge_map.{k}");
        let target = field(x, "to", &l)
            .and_then(|t| string(t, &format!("{l}.to")))
            .and_then(|t| c.edge_index(t).ok_or_else(|| diag(format!("{l}.to"), Error::DanglingId(t.into()))));
        let rev = match x.get("reversed") {
            None => Ok(false),
            Some(b) => b.as_bool().ok_or_else(|| diag(format!("{l}.reversed"), Error::Invalid("expected a boolean".into()))),
        };
        match (c.edge_index(k), target, rev) {
            (Some(a), Ok(b), Ok(r)) => edge_map[a] = (b, r),
            (None, _, _) => errs.extend(diag(&l, Error::DanglingId(k.clone()))),
            (_, t, r) => errs.extend(t.err().into_iter().chain(r.err()).flatten()),
        }
    }
    if errs.is_empty() {
        let missing = vertex_map.contains(&usize::MAX) || edge_map.iter().any(|x| x.0 == usize::MAX);
        if missing {
            errs.extend(diag(loc, Error::NotIsometry("maps do not cover the model".into())));
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let s = Isometry { vertex_map, edge_map };
    s.validate(c).map_err(|e| diag(loc, e))?;
    Ok(s)
}

pub fn group_to_json(g: &GroupAction, generators: &[Isometry]) -> Json {
    let c = g.curve();
    json!({
        "model": curve_to_json(c),
        "generators": generators.iter().map(|s| isometry_to_json(c, s)).collect::<Vec<_>>(),
    })
}

/// Reads a group document: the model and the generators, closed under
/// composition.
pub fn group_from_json(v: &Json, loc: &str) -> Parsed<(GroupAction, Vec<Isometry>)> {
    let model = Arc::new(curve_from_json(field(v, "model", loc)?, &format!("{loc}.model"))?);
    let gens = array(field(v, "generators", loc)?, &format!("{loc}.generators"))?;
    let gens = gather(
        gens.iter().enumerate().map(|(i, x)| isometry_from_json(&model, x, &format!("{loc}.generators[{i}]"))),
    )?;
    let g = close_group(model, &gens).map_err(|e| diag(loc, e))?;
    Ok((g, gens))
}

/// A subgraph as its closed intervals `[from, to]` along edges (offsets
/// from `ends[0]`) and its isolated points.
pub fn subgraph_to_json(c: &Curve, g: &crate::subgraph::Subgraph) -> Json {
    let intervals: Vec<Json> = g
        .intervals()
        .map(|(e, (a, b))| json!({"edge": c.edge(e).id, "from": rational_to_json(a), "to": length_to_json(b)}))
        .collect();
    let points: Vec<Json> = g.points().map(|p| point_to_json(c, p)).collect();
    json!({"intervals": intervals, "points": points})
}

/// The documents of one problem, parsed against each other.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub curve: Arc<Curve>,
    pub divisor: Option<Divisor>,
    pub group: Option<(GroupAction, Vec<Isometry>)>,
    pub functions: Vec<PlFunction>,
}

/// Paths of the documents making up a [`Bundle`]. The curve may be omitted
/// when a group document supplies its model.
#[derive(Clone, Debug, Default)]
pub struct BundlePaths {
    pub curve: Option<std::path::PathBuf>,
    pub divisor: Option<std::path::PathBuf>,
    pub group: Option<std::path::PathBuf>,
    pub functions: Vec<std::path::PathBuf>,
}

fn read_json(path: &std::path::Path) -> Parsed<Json> {
    let loc = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| diag(&loc, Error::Invalid(e.to_string())))?;
    serde_json::from_str(&text).map_err(|e| diag(&loc, Error::Invalid(format!("not JSON: {e}"))))
}

/// Reads and validates all documents, reporting every problem found.
pub fn parse_bundle(paths: &BundlePaths) -> Parsed<Bundle> {
    let mut errs = Vec::new();
    let loc = |p: &std::path::Path| format!("{}: $", p.display());
    let group = paths.group.as_ref().map(|p| read_json(p).and_then(|v| group_from_json(&v, &loc(p))));
    let group = match group {
        Some(Ok(g)) => Some(g),
        Some(Err(e)) => {
            errs.extend(e);
            None
        }
        None => None,
    };
    let curve = match (&paths.curve, &group) {
        (Some(p), _) => match read_json(p).and_then(|v| curve_from_json(&v, &loc(p))) {
            Ok(c) => Some(Arc::new(c)),
            Err(e) => {
                errs.extend(e);
                None
            }
        },
        (None, Some((g, _))) => Some(g.curve().clone()),
        (None, None) if paths.group.is_none() => {
            errs.extend(diag("arguments", Error::Invalid("a curve or a group document is required".into())));
            None
        }
        (None, None) => None,
    };
    let Some(curve) = curve else { return Err(errs) };
    if let (Some((g, _)), Some(p)) = (&group, &paths.group) {
        if **g.curve() != *curve {
            errs.extend(diag(loc(p), Error::CurveMismatch));
        }
    }
    let divisor = match &paths.divisor {
        Some(p) => match read_json(p).and_then(|v| divisor_from_json(&curve, &v, &loc(p))) {
            Ok(d) => Some(d),
            Err(e) => {
                errs.extend(e);
                None
            }
        },
        None => None,
    };
    let functions = gather(
        paths.functions.iter().map(|p| read_json(p).and_then(|v| function_from_json(&curve, &v, &loc(p)))),
    );
    let functions = functions.unwrap_or_else(|e| {
        errs.extend(e);
        Vec::new()
    });
    if errs.is_empty() {
        Ok(Bundle { curve, divisor, group, functions })
    } else {
        Err(errs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{int, rat};

    fn codes(r: Parsed<impl fmt::Debug>) -> Vec<&'static str> {
        r.unwrap_err().iter().map(|d| d.error.code()).collect()
    }

    #[test]
    fn curves_round_trip() {
        for c in [fixtures::theta(rat(3, 2)), fixtures::infinite_star(3), fixtures::circle(int(2))] {
            let j = curve_to_json(&c);
            let back = curve_from_json(&j, "$").unwrap();
            assert_eq!(back, c);
            assert_eq!(curve_to_json(&back).to_string(), j.to_string());
        }
    }

    #[test]
    fn curve_errors_are_all_reported() {
        let j = json!({
            "vertices": [{"id": "a"}, {"id": "b"}],
            "edges": [
                {"id": "e", "ends": ["a", "z"], "length": "1"},
                {"id": "f", "ends": ["a", "b"], "length": "0/1"},
                {"id": "g", "ends": ["a", "b"], "length": "1/x"},
            ]
        });
        assert_eq!(codes(curve_from_json(&j, "$")), vec!["dangling-id", "nonpositive-length", "malformed-rational"]);
        let j = json!({"vertices": [{"id": "a"}, {"id": "b"}], "edges": []});
        assert_eq!(codes(curve_from_json(&j, "$")), vec!["disconnected"]);
    }

    #[test]
    fn divisors_with_anchors() {
        let c = fixtures::segment(int(2));
        let j = json!([
            {"point": {"edge": "e", "offset": "1/2", "anchor": "b"}, "coeff": 2},
            {"point": {"vertex": "a"}, "coeff": -1},
        ]);
        let d = divisor_from_json(&c, &j, "$").unwrap();
        assert_eq!(d.at(&Point::Edge { edge: 0, offset: rat(3, 2) }), 2);
        assert_eq!(d.degree(), 1);
        let back = divisor_from_json(&c, &divisor_to_json(&c, &d), "$").unwrap();
        assert_eq!(back, d);
        let off = json!([{"point": {"edge": "e", "offset": "2"}, "coeff": 1}]);
        assert_eq!(codes(divisor_from_json(&c, &off, "$")), vec!["point-off-curve"]);
    }

    #[test]
    fn functions_round_trip() {
        let c = Arc::new(fixtures::ray());
        let f = PlFunction::from_samples(c.clone(), &[vec![int(1)]], |_| -2, |p| {
            Ok(if matches!(p, Point::Vertex(_)) { int(0) } else { int(1) })
        })
        .unwrap();
        let j = function_to_json(&f);
        assert_eq!(j["values"]["z0"], json!("-inf"));
        let back = function_from_json(&c, &j, "$").unwrap();
        assert_eq!(back, f);
        assert_eq!(function_to_json(&back).to_string(), j.to_string());
        let neg = PlFunction::neg_infinity(c.clone());
        assert!(function_from_json(&c, &function_to_json(&neg), "$").unwrap().is_neg_infinity());
    }

    #[test]
    fn function_slopes_are_checked() {
        let c = Arc::new(fixtures::segment(int(1)));
        let j = json!({
            "refinement": curve_to_json(&c),
            "values": {"a": "0", "b": "-1"},
            "slopes": {"e": {"slope": 1, "from": "a"}},
        });
        assert_eq!(codes(function_from_json(&c, &j, "$")), vec!["invalid"]);
        let j = json!({
            "refinement": curve_to_json(&c),
            "values": {"a": "0", "b": "-1"},
            "slopes": {"e": {"slope": 1, "from": "b"}},
        });
        assert!(function_from_json(&c, &j, "$").is_ok());
    }

    #[test]
    fn groups_round_trip_and_reject_non_isometries() {
        let c = fixtures::circle_two_vertex(int(1), int(1));
        let j = json!({
            "model": curve_to_json(&c),
            "generators": [{"vertex_map": {"p": "q", "q": "p"}, "edge_map": {"e0": {"to": "e1"}, "e1": {"to": "e0"}}}],
        });
        let (g, gens) = group_from_json(&j, "$").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(group_to_json(&g, &gens)["generators"][0]["edge_map"]["e0"]["reversed"], json!(false));
        let c = fixtures::circle_two_vertex(int(1), int(2));
        let bad = json!({
            "model": curve_to_json(&c),
            "generators": [{"vertex_map": {"p": "q", "q": "p"}, "edge_map": {"e0": {"to": "e1"}, "e1": {"to": "e0"}}}],
        });
        assert_eq!(codes(group_from_json(&bad, "$")), vec!["non-isometry"]);
    }
}
