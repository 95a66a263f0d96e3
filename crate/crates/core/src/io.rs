//! JSON documents and DOT export.
//!
//! Every document is an object with a `schema_version` field; keys are
//! written in sorted order. Algebras are `{"dim", "points"}` with points as
//! bitstrings; morphisms are `{"source", "target", "map"}` where each end is
//! an inline algebra, a path to an algebra file or, inside a sequence, a
//! stage index.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fraisse::{BuildConfig, Certificate, InverseSequence, Provenance};
use crate::median::{canonicalize, MaximalLinkedSystem, MedianAlgebra};
use crate::morphism::Epimorphism;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub points: Vec<String>,
}

impl AlgebraJson {
    pub fn from_algebra(alg: &MedianAlgebra) -> Self {
        AlgebraJson {
            dim: alg.dim(),
            points: alg.points().iter().map(Bits::to_bitstring).collect(),
        }
    }

    /// Validates the points. An algebra already in canonical form comes back
    /// marked canonical, so reading a written algebra gives it back exactly.
    pub fn to_algebra(&self) -> Result<MedianAlgebra> {
        let points = self
            .points
            .iter()
            .map(|s| Bits::parse(s).ok_or_else(|| Error::Parse(format!("not a bitstring: {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let alg = MedianAlgebra::validate(points, self.dim)?;
        let (canon, _) = canonicalize(&alg);
        Ok(
            if canon.dim() == alg.dim() && canon.points() == alg.points() {
                canon
            } else {
                alg
            },
        )
    }
}

/// One end of a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Stage(usize),
    Path(String),
    Inline(AlgebraJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlsJson {
    pub ground: usize,
    pub family: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SequenceJson {
    stages: Vec<AlgebraJson>,
    bonds: Vec<MorphismJson>,
    provenance: Vec<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<BuildConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CertificatesJson {
    certificates: Vec<Option<Certificate>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct LambdaJson {
    algebra: AlgebraJson,
    systems: Vec<MlsJson>,
}

/// What a document holds, told apart by its fields.
#[derive(Clone, Debug)]
pub enum Document {
    Algebra(MedianAlgebra),
    Morphism(Epimorphism),
    Sequence(InverseSequence),
    Lambda(MedianAlgebra, Vec<MaximalLinkedSystem>),
    Certificates(Vec<Option<Certificate>>),
}

fn to_sorted_string<T: Serialize>(body: &T) -> Result<String> {
    let mut value = serde_json::to_value(body).map_err(|e| Error::Parse(e.to_string()))?;
    match &mut value {
        Value::Object(map) => {
            map.insert("schema_version".into(), SCHEMA_VERSION.into());
        }
        _ => {
            return Err(Error::InternalInvariantViolation(
                "documents are objects".into(),
            ))
        }
    }
    // `Value` keeps object keys in a sorted map
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn parse_versioned(text: &str) -> Result<serde_json::Map<String, Value>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let Value::Object(mut map) = value else {
        return Err(Error::Parse("expected a JSON object".into()));
    };
    let version = map
        .remove("schema_version")
        .ok_or_else(|| Error::Parse("missing schema_version".into()))?;
    let found = version
        .as_u64()
        .ok_or_else(|| Error::Parse("schema_version must be an integer".into()))?;
    if found != SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersion {
            found: found.min(u32::MAX as u64) as u32,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(map)
}

fn from_map<T: for<'de> Deserialize<'de>>(map: serde_json::Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(map)).map_err(|e| Error::Parse(e.to_string()))
}

pub fn algebra_to_json(alg: &MedianAlgebra) -> Result<String> {
    to_sorted_string(&AlgebraJson::from_algebra(alg))
}

pub fn algebra_from_json(text: &str) -> Result<MedianAlgebra> {
    from_map::<AlgebraJson>(parse_versioned(text)?)?.to_algebra()
}

/// Inline source and target.
pub fn morphism_to_json(f: &Epimorphism) -> Result<String> {
    to_sorted_string(&MorphismJson {
        source: AlgebraRef::Inline(AlgebraJson::from_algebra(f.source())),
        target: AlgebraRef::Inline(AlgebraJson::from_algebra(f.target())),
        map: f.map().to_vec(),
    })
}

/// Paths in `source`/`target` are resolved against `base_dir`.
pub fn morphism_from_json(text: &str, base_dir: &Path) -> Result<Epimorphism> {
    let m: MorphismJson = from_map(parse_versioned(text)?)?;
    morphism_from_parts(&m, base_dir)
}

fn resolve(r: &AlgebraRef, base_dir: &Path) -> Result<MedianAlgebra> {
    match r {
        AlgebraRef::Inline(a) => a.to_algebra(),
        AlgebraRef::Path(p) => read_algebra(&base_dir.join(p)),
        AlgebraRef::Stage(i) => Err(Error::Parse(format!(
            "stage reference {i} outside a sequence"
        ))),
    }
}

fn morphism_from_parts(m: &MorphismJson, base_dir: &Path) -> Result<Epimorphism> {
    let source = Arc::new(resolve(&m.source, base_dir)?);
    let target = Arc::new(resolve(&m.target, base_dir)?);
    Epimorphism::new(source, target, m.map.clone())
}

/// Stages inline, bonds by stage index. Certificates go to a separate
/// document, see [`certificates_to_json`].
pub fn sequence_to_json(seq: &InverseSequence, config: Option<&BuildConfig>) -> Result<String> {
    let body = SequenceJson {
        stages: seq
            .stages()
            .iter()
            .map(|s| AlgebraJson::from_algebra(s))
            .collect(),
        bonds: seq
            .bonds()
            .iter()
            .enumerate()
            .map(|(i, b)| MorphismJson {
                source: AlgebraRef::Stage(i + 1),
                target: AlgebraRef::Stage(i),
                map: b.map().to_vec(),
            })
            .collect(),
        provenance: seq.provenance().to_vec(),
        config: config.cloned(),
    };
    to_sorted_string(&body)
}

pub fn sequence_from_json(text: &str) -> Result<InverseSequence> {
    sequence_from_map(parse_versioned(text)?)
}

fn sequence_from_map(map: serde_json::Map<String, Value>) -> Result<InverseSequence> {
    let body: SequenceJson = from_map(map)?;
    let stages = body
        .stages
        .iter()
        .map(|s| s.to_algebra().map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let mut bonds = Vec::with_capacity(body.bonds.len());
    for (i, b) in body.bonds.iter().enumerate() {
        if b.source != AlgebraRef::Stage(i + 1) || b.target != AlgebraRef::Stage(i) {
            return Err(Error::Parse(format!(
                "bond {i} must run from stage {} to stage {i}",
                i + 1
            )));
        }
        let (Some(src), Some(tgt)) = (stages.get(i + 1), stages.get(i)) else {
            return Err(Error::Parse(format!("bond {i} has no stages to connect")));
        };
        bonds.push(Epimorphism::new(src.clone(), tgt.clone(), b.map.clone())?);
    }
    InverseSequence::new(stages, bonds, body.provenance)
}

/// The build configuration recorded in a sequence document, if any.
pub fn sequence_config(text: &str) -> Result<Option<BuildConfig>> {
    Ok(from_map::<SequenceJson>(parse_versioned(text)?)?.config)
}

pub fn certificates_to_json(seq: &InverseSequence) -> Result<String> {
    to_sorted_string(&CertificatesJson {
        certificates: seq.certificates().to_vec(),
    })
}

/// Attaches certificates read from `text`; one slot per stage.
pub fn with_certificates(seq: InverseSequence, text: &str) -> Result<InverseSequence> {
    let body: CertificatesJson = from_map(parse_versioned(text)?)?;
    if body.certificates.len() != seq.len() {
        return Err(Error::Parse(format!(
            "{} certificate slots for {} stages",
            body.certificates.len(),
            seq.len()
        )));
    }
    let stages = seq.stages().to_vec();
    let bonds = seq.bonds().to_vec();
    let provenance = seq.provenance().to_vec();
    Ok(InverseSequence::from_parts(
        stages,
        bonds,
        provenance,
        body.certificates,
    ))
}

pub fn lambda_to_json(alg: &MedianAlgebra, systems: &[MaximalLinkedSystem]) -> Result<String> {
    to_sorted_string(&LambdaJson {
        algebra: AlgebraJson::from_algebra(alg),
        systems: systems
            .iter()
            .map(|s| MlsJson {
                ground: s.ground(),
                family: s.members(),
            })
            .collect(),
    })
}

/// Reads any document kind.
pub fn parse_document(text: &str, base_dir: &Path) -> Result<Document> {
    let map = parse_versioned(text)?;
    if map.contains_key("stages") {
        Ok(Document::Sequence(sequence_from_map(map)?))
    } else if map.contains_key("certificates") {
        Ok(Document::Certificates(
            from_map::<CertificatesJson>(map)?.certificates,
        ))
    } else if map.contains_key("systems") {
        let body: LambdaJson = from_map(map)?;
        let alg = body.algebra.to_algebra()?;
        let systems = body
            .systems
            .iter()
            .map(|s| MaximalLinkedSystem::new(s.ground, &s.family))
            .collect::<Result<Vec<_>>>()?;
        if systems.len() != alg.len() {
            return Err(Error::Parse(format!(
                "{} systems for {} points",
                systems.len(),
                alg.len()
            )));
        }
        Ok(Document::Lambda(alg, systems))
    } else if map.contains_key("map") {
        Ok(Document::Morphism(morphism_from_parts(
            &from_map(map)?,
            base_dir,
        )?))
    } else if map.contains_key("points") {
        Ok(Document::Algebra(
            from_map::<AlgebraJson>(map)?.to_algebra()?,
        ))
    } else {
        Err(Error::Parse("unrecognized document".into()))
    }
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn read_document(path: &Path) -> Result<Document> {
    parse_document(&std::fs::read_to_string(path)?, &base_dir(path))
}

pub fn read_algebra(path: &Path) -> Result<MedianAlgebra> {
    algebra_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_morphism(path: &Path) -> Result<Epimorphism> {
    morphism_from_json(&std::fs::read_to_string(path)?, &base_dir(path))
}

/// Reads a sequence and, when `certificates.json` sits next to it, its
/// certificates.
pub fn read_sequence(path: &Path) -> Result<InverseSequence> {
    let seq = sequence_from_json(&std::fs::read_to_string(path)?)?;
    let certs = base_dir(path).join(CERTIFICATES_FILE);
    if certs.is_file() {
        return with_certificates(seq, &std::fs::read_to_string(certs)?);
    }
    Ok(seq)
}

pub const SEQUENCE_FILE: &str = "sequence.json";
pub const CERTIFICATES_FILE: &str = "certificates.json";

/// Median graph in DOT: one vertex per carrier point in carrier order,
/// labelled by its bitstring, and an edge for every pair whose interval is
/// the pair itself.
pub fn to_dot(alg: &MedianAlgebra) -> String {
    let mut out = String::from("graph median {\n");
    for (i, p) in alg.points().iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{}\"];", p.to_bitstring());
    }
    for (a, b) in alg.median_graph_edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}
