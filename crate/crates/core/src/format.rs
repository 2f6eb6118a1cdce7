//! JSON files for models, maps and entropy vectors.
//!
//! Weights are read from integers or strings (`"3/2"`, `"inf"` for link
//! loops) and always written as strings. External elements are listed as a
//! party-letter to name object whose last letter is the purifier. Objects
//! are emitted with sorted keys, so emit, parse, emit is a fixed point.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::contraction::CandidateMap;
use crate::graph::Edge;
use crate::hypergraph::Hyperedge;
use crate::link::ConnectivityTable;
use crate::party::{Party, MAX_PARTIES};
use crate::prop3::Prop3Map;
use crate::rational::parse_rational;
use crate::{
    BitString, EntropyVector, Error, Hypergraph, LinkModel, LinkingStructure, LoopSet, LoopWeight, Rational, Result,
    Subsystem, TritString, WeightedGraph,
};

#[derive(Clone, Debug)]
pub enum ModelFile {
    Graph(WeightedGraph),
    Hypergraph(Hypergraph),
    Link(LinkModel),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightField {
    Integer(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[allow(dead_code)]
    kind: String,
    vertices: Vec<String>,
    external: BTreeMap<String, String>,
    edges: Vec<(String, String, WeightField)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    #[allow(dead_code)]
    kind: String,
    vertices: Vec<String>,
    external: BTreeMap<String, String>,
    hyperedges: Vec<HyperedgeFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperedgeFile {
    members: Vec<String>,
    weight: WeightField,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    #[allow(dead_code)]
    kind: String,
    loops: Vec<LoopFile>,
    external: BTreeMap<String, String>,
    atoms: Option<Vec<Vec<String>>>,
    table: Option<Vec<TableEntryFile>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopFile {
    name: String,
    weight: WeightField,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntryFile {
    set: Vec<String>,
    blocks: Vec<Vec<String>>,
}

fn parse_err(msg: impl std::fmt::Display) -> Error {
    Error::Parse(msg.to_string())
}

fn from_value<T: DeserializeOwned>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(parse_err)
}

fn weight(field: &WeightField) -> Result<Rational> {
    match field {
        WeightField::Integer(i) => Ok(Rational::from_integer((*i).into())),
        WeightField::Text(t) => parse_rational(t),
    }
}

fn loop_weight(field: &WeightField) -> Result<LoopWeight> {
    match field {
        WeightField::Text(t) if t.trim() == "inf" => Ok(LoopWeight::Infinite),
        other => Ok(LoopWeight::Finite(weight(other)?)),
    }
}

/// Name to index, rejecting duplicates.
fn index_names(names: &[String]) -> Result<BTreeMap<&str, usize>> {
    let mut index = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(parse_err(format!("duplicate name '{name}'")));
        }
    }
    Ok(index)
}

fn resolve(index: &BTreeMap<&str, usize>, name: &str) -> Result<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| parse_err(format!("unknown name '{name}'")))
}

/// Reads the letter map: letters `A, B, ..` in order, the last one the purifier.
fn parse_external(map: &BTreeMap<String, String>, index: &BTreeMap<&str, usize>) -> Result<Vec<usize>> {
    if map.len() < 2 || map.len() > MAX_PARTIES + 1 {
        return Err(parse_err(format!(
            "external map needs 2 to {} letters, got {}",
            MAX_PARTIES + 1,
            map.len()
        )));
    }
    let n = map.len() - 1;
    (1..=n + 1)
        .map(|i| {
            let letter = Party::new(i, n)?.letter().to_string();
            let name = map
                .get(&letter)
                .ok_or_else(|| parse_err(format!("external map lacks letter {letter}")))?;
            resolve(index, name)
        })
        .collect()
}

fn emit_external(names: &[String], external: &[usize]) -> Value {
    let n = external.len() - 1;
    let map: Map<String, Value> = external
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let letter = Party::new(i + 1, n).expect("valid party").letter().to_string();
            (letter, Value::String(names[v].clone()))
        })
        .collect();
    Value::Object(map)
}

fn names_of(names: &[String], set: LoopSet) -> Vec<String> {
    set.iter().map(|i| names[i].clone()).collect()
}

fn loop_set(index: &BTreeMap<&str, usize>, names: &[String]) -> Result<LoopSet> {
    let mut set = LoopSet::EMPTY;
    for name in names {
        let i = resolve(index, name)?;
        if set.contains(i) {
            return Err(parse_err(format!("loop '{name}' listed twice")));
        }
        set.insert(i);
    }
    Ok(set)
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(parse_err)?;
        ModelFile::from_json(value)
    }

    pub fn from_json(value: Value) -> Result<Self> {
        let kind = value
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err("missing string field 'kind'"))?
            .to_string();
        match kind.as_str() {
            "graph" => {
                let f: GraphFile = from_value(value)?;
                let index = index_names(&f.vertices)?;
                let external = parse_external(&f.external, &index)?;
                let edges = f
                    .edges
                    .iter()
                    .map(|(u, v, w)| {
                        Ok(Edge {
                            u: resolve(&index, u)?,
                            v: resolve(&index, v)?,
                            weight: weight(w)?,
                        })
                    })
                    .collect::<Result<_>>()?;
                Ok(ModelFile::Graph(WeightedGraph::new(f.vertices, external, edges)?))
            }
            "hypergraph" => {
                let f: HypergraphFile = from_value(value)?;
                let index = index_names(&f.vertices)?;
                let external = parse_external(&f.external, &index)?;
                let edges = f
                    .hyperedges
                    .iter()
                    .map(|e| {
                        Ok(Hyperedge {
                            members: e.members.iter().map(|m| resolve(&index, m)).collect::<Result<_>>()?,
                            weight: weight(&e.weight)?,
                        })
                    })
                    .collect::<Result<_>>()?;
                Ok(ModelFile::Hypergraph(Hypergraph::new(f.vertices, external, edges)?))
            }
            "link" => {
                let f: LinkFile = from_value(value)?;
                let names: Vec<String> = f.loops.iter().map(|l| l.name.clone()).collect();
                let index = index_names(&names)?;
                let external = parse_external(&f.external, &index)?;
                let weights = f.loops.iter().map(|l| loop_weight(&l.weight)).collect::<Result<_>>()?;
                let structure = match (&f.atoms, &f.table) {
                    (Some(atoms), None) => LinkingStructure::Atoms(
                        atoms.iter().map(|a| loop_set(&index, a)).collect::<Result<_>>()?,
                    ),
                    (None, Some(table)) => {
                        let entries = table
                            .iter()
                            .map(|e| {
                                let blocks = e.blocks.iter().map(|b| loop_set(&index, b)).collect::<Result<_>>()?;
                                Ok((loop_set(&index, &e.set)?, blocks))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        LinkingStructure::Table(ConnectivityTable::new(entries))
                    }
                    _ => return Err(parse_err("a link file needs exactly one of 'atoms' and 'table'")),
                };
                Ok(ModelFile::Link(LinkModel::new(names, weights, external, structure)?))
            }
            other => Err(parse_err(format!("unknown model kind '{other}'"))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelFile::Graph(_) => "graph",
            ModelFile::Hypergraph(_) => "hypergraph",
            ModelFile::Link(_) => "link",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ModelFile::Graph(g) => g.n(),
            ModelFile::Hypergraph(h) => h.n(),
            ModelFile::Link(l) => l.n(),
        }
    }

    pub fn entropy(&self, subsystem: Subsystem) -> Result<Rational> {
        match self {
            ModelFile::Graph(g) => g.entropy(subsystem),
            ModelFile::Hypergraph(h) => h.entropy(subsystem),
            ModelFile::Link(l) => l.entropy(subsystem),
        }
    }

    pub fn entropy_vector(&self) -> Result<EntropyVector> {
        match self {
            ModelFile::Graph(g) => g.entropy_vector(),
            ModelFile::Hypergraph(h) => h.entropy_vector(),
            ModelFile::Link(l) => l.entropy_vector(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ModelFile::Graph(g) => graph_json(g),
            ModelFile::Hypergraph(h) => hypergraph_json(h),
            ModelFile::Link(l) => link_json(l),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_pretty_string(&self) -> String {
        pretty(&self.to_json())
    }
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn graph_json(g: &WeightedGraph) -> Value {
    let names = g.vertex_names();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!([names[e.u], names[e.v], e.weight.to_string()]))
        .collect();
    json!({
        "kind": "graph",
        "vertices": names,
        "external": emit_external(names, g.external()),
        "edges": edges,
    })
}

pub fn hypergraph_json(h: &Hypergraph) -> Value {
    let names = h.vertex_names();
    let edges: Vec<Value> = h
        .edges()
        .iter()
        .map(|e| {
            json!({
                "members": e.members.iter().map(|&m| names[m].clone()).collect::<Vec<_>>(),
                "weight": e.weight.to_string(),
            })
        })
        .collect();
    json!({
        "kind": "hypergraph",
        "vertices": names,
        "external": emit_external(names, h.external()),
        "hyperedges": edges,
    })
}

pub fn link_json(m: &LinkModel) -> Value {
    let names = m.names();
    let loops: Vec<Value> = names
        .iter()
        .zip(m.weights())
        .map(|(name, w)| json!({ "name": name, "weight": w.to_string() }))
        .collect();
    let mut value = json!({
        "kind": "link",
        "loops": loops,
        "external": emit_external(names, m.external()),
    });
    let (key, body) = match m.structure() {
        LinkingStructure::Atoms(atoms) => (
            "atoms",
            atoms.iter().map(|a| json!(names_of(names, *a))).collect::<Vec<_>>(),
        ),
        LinkingStructure::Table(table) => (
            "table",
            table
                .entries()
                .map(|(set, blocks)| {
                    json!({
                        "set": names_of(names, set),
                        "blocks": blocks.iter().map(|b| names_of(names, *b)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    };
    value[key] = Value::Array(body);
    value
}

/// Entries in canonical order, each labelled by its subsystem.
pub fn entropy_vector_json(v: &EntropyVector) -> Value {
    Value::Array(
        v.iter()
            .map(|(s, e)| json!({ "subsystem": s.letters(), "entropy": e.to_string() }))
            .collect(),
    )
}

fn parse_object(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str(text).map_err(parse_err)? {
        Value::Object(map) => Ok(map),
        _ => Err(parse_err("expected a JSON object")),
    }
}

fn string_value<'a>(key: &str, value: &'a Value) -> Result<&'a str> {
    value
        .as_str()
        .ok_or_else(|| parse_err(format!("value for '{key}' is not a string")))
}

/// Reads a bitstring-keyed map with `l`-bit keys and `r`-bit values.
pub fn parse_bitstring_map(text: &str, l: usize, r: usize) -> Result<CandidateMap> {
    let mut map = CandidateMap::new(l, r);
    for (key, value) in parse_object(text)? {
        let x: BitString = key.parse()?;
        let y: BitString = string_value(&key, &value)?.parse()?;
        map.insert(x, y)?;
    }
    Ok(map)
}

pub fn bitstring_map_json(map: &CandidateMap) -> Value {
    Value::Object(
        map.iter()
            .map(|(x, y)| (x.to_string(), Value::String(y.to_string())))
            .collect(),
    )
}

/// Reads a trit-string keyed map with values of length `r`.
pub fn parse_prop3_map(text: &str, r: usize) -> Result<Prop3Map> {
    let mut values = BTreeMap::new();
    for (key, value) in parse_object(text)? {
        let x: TritString = key.parse()?;
        let y: TritString = string_value(&key, &value)?.parse()?;
        if values.insert(x, y).is_some() {
            return Err(parse_err(format!("cell {key} listed twice")));
        }
    }
    Prop3Map::new(r, values)
}

pub fn prop3_map_json(map: &Prop3Map) -> Value {
    Value::Object(
        map.iter()
            .map(|(x, y)| (x.to_string(), Value::String(y.to_string())))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::ray15_link;

    fn round_trip(text: &str) -> String {
        let first = ModelFile::parse(text).unwrap().to_pretty_string();
        let second = ModelFile::parse(&first).unwrap().to_pretty_string();
        assert_eq!(first, second);
        first
    }

    #[test]
    fn graph_reads_numbers_and_strings() {
        let text = r#"{"kind":"graph","vertices":["a","b","m"],
            "external":{"A":"a","B":"b"},"edges":[["a","m",1],["m","b","3/2"]]}"#;
        let out = round_trip(text);
        assert!(out.contains("\"3/2\""));
        let m = ModelFile::parse(&out).unwrap();
        assert_eq!(m.entropy(Subsystem::parse("A", 1).unwrap()).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn ray15_round_trips() {
        let text = pretty(&link_json(&ray15_link()));
        let back = round_trip(&text);
        assert_eq!(back, text);
        let ModelFile::Link(m) = ModelFile::parse(&text).unwrap() else {
            panic!("expected a link")
        };
        assert_eq!(m.entropy_vector().unwrap(), ray15_link().entropy_vector().unwrap());
    }

    #[test]
    fn table_links_round_trip() {
        let text = r#"{"kind":"link","loops":[{"name":"a","weight":"inf"},{"name":"b","weight":"inf"}],
            "external":{"A":"a","B":"b"},
            "table":[{"set":["a"],"blocks":[["a"]]},{"set":["b"],"blocks":[["b"]]},
                     {"set":["a","b"],"blocks":[["a"],["b"]]}]}"#;
        round_trip(text);
    }

    #[test]
    fn bad_files_are_parse_errors() {
        for text in [
            "not json",
            r#"{"kind":"tree"}"#,
            r#"{"kind":"graph","vertices":["a","b"],"external":{"A":"a","B":"zz"},"edges":[]}"#,
            r#"{"kind":"graph","vertices":["a","b"],"external":{"A":"a","C":"b"},"edges":[]}"#,
            r#"{"kind":"graph","vertices":["a","a"],"external":{"A":"a","B":"a"},"edges":[]}"#,
            r#"{"kind":"graph","vertices":["a","b"],"external":{"A":"a","B":"b"},"edges":[],"extra":1}"#,
            r#"{"kind":"link","loops":[],"external":{}}"#,
        ] {
            assert!(matches!(ModelFile::parse(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn maps_round_trip() {
        let text = r#"{"00":"0","01":"1","10":"1","11":"1"}"#;
        let map = parse_bitstring_map(text, 2, 1).unwrap();
        assert!(map.is_total());
        assert_eq!(serde_json::to_string(&bitstring_map_json(&map)).unwrap(), text);
        let trits = r#"{"-1,0":"0","1,1":"1"}"#;
        let f = parse_prop3_map(trits, 1).unwrap();
        assert_eq!(serde_json::to_string(&prop3_map_json(&f)).unwrap(), trits);
        assert!(parse_bitstring_map(r#"{"0":"1"}"#, 2, 1).is_err());
    }
}
