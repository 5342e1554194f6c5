//! JSON schemas for algebras, subalgebras and combinatorial types, plus the
//! JSON rendering of polynomial systems.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{ConductanceVector, FiniteAlgebra, Subalgebra};
use crate::combtypes::{Branch, CombinatorialType, MarkTarget};
use crate::equations::{PolynomialSystem, Provenance};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};

fn schema_err(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub field: FieldSpec,
    pub spec: AlgebraSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraSpec {
    TruncatedProduct { conductances: Vec<u32> },
    StructureConstants {
        dim: usize,
        unit: Vec<Value>,
        labels: Vec<String>,
        table: Vec<Vec<Vec<Value>>>,
    },
}

/// A loaded algebra over either base field, with the conductance vector
/// retained when the spec was a truncated product.
#[derive(Debug)]
pub enum LoadedAlgebra {
    Rational {
        alg: Arc<FiniteAlgebra<Rationals>>,
        conductances: Option<ConductanceVector>,
    },
    Prime {
        alg: Arc<FiniteAlgebra<PrimeField>>,
        conductances: Option<ConductanceVector>,
    },
}

impl LoadedAlgebra {
    pub fn dim(&self) -> usize {
        match self {
            LoadedAlgebra::Rational { alg, .. } => alg.dim,
            LoadedAlgebra::Prime { alg, .. } => alg.dim,
        }
    }

    pub fn conductances(&self) -> Option<&ConductanceVector> {
        match self {
            LoadedAlgebra::Rational { conductances, .. } => conductances.as_ref(),
            LoadedAlgebra::Prime { conductances, .. } => conductances.as_ref(),
        }
    }
}

fn parse_rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| schema_err(path, "expected an integer or \"num/den\" string"))?;
            Ok(BigRational::from_integer(BigInt::from(i)))
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n, d),
                None => (s.as_str(), "1"),
            };
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| schema_err(path, format!("cannot parse numerator in {s:?}")))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| schema_err(path, format!("cannot parse denominator in {s:?}")))?;
            if den == BigInt::from(0) {
                return Err(schema_err(path, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(schema_err(path, "expected an integer or \"num/den\" string")),
    }
}

fn parse_mod_p(v: &Value, p: u64, path: &str) -> Result<u64> {
    let n = v
        .as_u64()
        .ok_or_else(|| schema_err(path, format!("expected an integer in [0, {p})")))?;
    if n >= p {
        return Err(schema_err(path, format!("{n} is not in [0, {p})")));
    }
    Ok(n)
}

pub fn render_rational(x: &BigRational) -> Value {
    Value::String(Rationals.render(x))
}

fn build_algebra<K: Field>(
    field: K,
    spec: &AlgebraSpec,
    parse: impl Fn(&Value, &str) -> Result<K::Elem>,
) -> Result<(Arc<FiniteAlgebra<K>>, Option<ConductanceVector>)> {
    match spec {
        AlgebraSpec::TruncatedProduct { conductances } => {
            let c = ConductanceVector::new(conductances.clone())?;
            let alg = FiniteAlgebra::truncated_product(
                &c,
                field,
                crate::algebra::DEFAULT_CONSTRUCTION_DIM_CAP,
            )?;
            Ok((Arc::new(alg), Some(c)))
        }
        AlgebraSpec::StructureConstants {
            dim,
            unit,
            labels,
            table,
        } => {
            let n = *dim;
            if unit.len() != n || labels.len() != n || table.len() != n {
                return Err(schema_err("spec", "dim does not match unit/labels/table sizes"));
            }
            let mut flat = Vec::with_capacity(n * n * n);
            for (i, plane) in table.iter().enumerate() {
                if plane.len() != n {
                    return Err(schema_err(&format!("spec.table[{i}]"), "wrong length"));
                }
                for (j, row) in plane.iter().enumerate() {
                    if row.len() != n {
                        return Err(schema_err(&format!("spec.table[{i}][{j}]"), "wrong length"));
                    }
                    for (k, v) in row.iter().enumerate() {
                        flat.push(parse(v, &format!("spec.table[{i}][{j}][{k}]"))?);
                    }
                }
            }
            let unit = unit
                .iter()
                .enumerate()
                .map(|(i, v)| parse(v, &format!("spec.unit[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let alg =
                FiniteAlgebra::from_structure_constants(field, n, labels.clone(), unit, flat)?;
            Ok((Arc::new(alg), None))
        }
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<LoadedAlgebra> {
    doc.field.validate()?;
    match doc.field {
        FieldSpec::Rationals => {
            let (alg, conductances) = build_algebra(Rationals, &doc.spec, parse_rational)?;
            Ok(LoadedAlgebra::Rational { alg, conductances })
        }
        FieldSpec::Prime { p } => {
            let field = PrimeField::new(p)?;
            let (alg, conductances) =
                build_algebra(field, &doc.spec, |v, path| parse_mod_p(v, p, path))?;
            Ok(LoadedAlgebra::Prime { alg, conductances })
        }
    }
}

pub fn load_algebra(path: &Path) -> Result<LoadedAlgebra> {
    let text = std::fs::read_to_string(path)?;
    let doc: AlgebraDoc = serde_json::from_str(&text)
        .map_err(|e| schema_err(&path.display().to_string(), e.to_string()))?;
    algebra_from_doc(&doc)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Inline(AlgebraDoc),
    File(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubalgebraDoc {
    /// Inline algebra document or a path to one; may be omitted when the
    /// caller supplies the ambient algebra separately.
    #[serde(default)]
    pub algebra: Option<AlgebraRef>,
    pub basis: Vec<Vec<Value>>,
}

/// A loaded subalgebra over either base field.
#[derive(Debug)]
pub enum LoadedSubalgebra {
    Rational {
        sub: Subalgebra<Rationals>,
        conductances: Option<ConductanceVector>,
    },
    Prime {
        sub: Subalgebra<PrimeField>,
        conductances: Option<ConductanceVector>,
    },
}

pub fn subalgebra_from_doc(
    doc: &SubalgebraDoc,
    base_dir: &Path,
    ambient: Option<LoadedAlgebra>,
) -> Result<LoadedSubalgebra> {
    let loaded = match (ambient, &doc.algebra) {
        (Some(a), _) => a,
        (None, Some(AlgebraRef::Inline(a))) => algebra_from_doc(a)?,
        (None, Some(AlgebraRef::File(rel))) => {
            let mut path = PathBuf::from(rel);
            if path.is_relative() {
                path = base_dir.join(path);
            }
            load_algebra(&path)?
        }
        (None, None) => {
            return Err(schema_err(
                "algebra",
                "no ambient algebra: give one inline, as a file reference, or via --algebra",
            ))
        }
    };
    match loaded {
        LoadedAlgebra::Rational { alg, conductances } => {
            let rows = doc
                .basis
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| parse_rational(v, &format!("basis[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let sub = Subalgebra::from_span(&alg, rows)?;
            Ok(LoadedSubalgebra::Rational { sub, conductances })
        }
        LoadedAlgebra::Prime { alg, conductances } => {
            let p = alg.field.characteristic();
            let rows = doc
                .basis
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| parse_mod_p(v, p, &format!("basis[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let sub = Subalgebra::from_span(&alg, rows)?;
            Ok(LoadedSubalgebra::Prime { sub, conductances })
        }
    }
}

pub fn load_subalgebra(path: &Path, ambient: Option<LoadedAlgebra>) -> Result<LoadedSubalgebra> {
    let text = std::fs::read_to_string(path)?;
    let doc: SubalgebraDoc = serde_json::from_str(&text)
        .map_err(|e| schema_err(&path.display().to_string(), e.to_string()))?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    subalgebra_from_doc(&doc, base_dir, ambient)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    pub genus: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchDoc {
    pub id: String,
    pub sing: String,
    pub comp: String,
    pub conductance: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointDoc {
    pub id: String,
    pub comp: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkingDoc {
    pub index: usize,
    pub at: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeDoc {
    #[serde(default)]
    pub singularities: Vec<VertexDoc>,
    pub components: Vec<VertexDoc>,
    #[serde(default)]
    pub branches: Vec<BranchDoc>,
    #[serde(default)]
    pub distinguished: Vec<PointDoc>,
    #[serde(default)]
    pub markings: Vec<MarkingDoc>,
}

fn index_of(ids: &[&String], id: &str, path: &str) -> Result<usize> {
    ids.iter()
        .position(|x| x.as_str() == id)
        .ok_or_else(|| schema_err(path, format!("unknown id {id:?}")))
}

pub fn type_from_doc(doc: &TypeDoc) -> Result<CombinatorialType> {
    let sing_ids: Vec<&String> = doc.singularities.iter().map(|v| &v.id).collect();
    let comp_ids: Vec<&String> = doc.components.iter().map(|v| &v.id).collect();
    let branch_ids: Vec<&String> = doc.branches.iter().map(|v| &v.id).collect();
    let point_ids: Vec<&String> = doc.distinguished.iter().map(|v| &v.id).collect();
    for (name, ids) in [
        ("singularities", &sing_ids),
        ("components", &comp_ids),
        ("branches", &branch_ids),
        ("distinguished", &point_ids),
    ] {
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != ids.len() {
            return Err(schema_err(name, "duplicate ids"));
        }
    }
    let branches = doc
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            Ok(Branch {
                sing: index_of(&sing_ids, &b.sing, &format!("branches[{i}].sing"))?,
                comp: index_of(&comp_ids, &b.comp, &format!("branches[{i}].comp"))?,
                conductance: b.conductance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let point_comp = doc
        .distinguished
        .iter()
        .enumerate()
        .map(|(i, d)| index_of(&comp_ids, &d.comp, &format!("distinguished[{i}].comp")))
        .collect::<Result<Vec<_>>>()?;

    let n = doc.markings.len();
    let mut markings = vec![None; n];
    for (i, m) in doc.markings.iter().enumerate() {
        if m.index == 0 || m.index > n {
            return Err(schema_err(
                &format!("markings[{i}].index"),
                format!("index {} out of 1..={n}", m.index),
            ));
        }
        let target = match m.at.split_once(':') {
            Some(("branch", id)) => {
                MarkTarget::Branch(index_of(&branch_ids, id, &format!("markings[{i}].at"))?)
            }
            Some(("point", id)) => {
                MarkTarget::Point(index_of(&point_ids, id, &format!("markings[{i}].at"))?)
            }
            _ => {
                return Err(schema_err(
                    &format!("markings[{i}].at"),
                    "expected \"branch:<id>\" or \"point:<id>\"",
                ))
            }
        };
        if markings[m.index - 1].replace(target).is_some() {
            return Err(schema_err(
                &format!("markings[{i}].index"),
                format!("marking index {} appears twice", m.index),
            ));
        }
    }
    let markings = markings
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| schema_err("markings", format!("index {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CombinatorialType {
        sing_genus: doc.singularities.iter().map(|v| v.genus).collect(),
        comp_genus: doc.components.iter().map(|v| v.genus).collect(),
        branches,
        point_comp,
        markings,
    })
}

pub fn type_to_doc(t: &CombinatorialType) -> TypeDoc {
    TypeDoc {
        singularities: t
            .sing_genus
            .iter()
            .enumerate()
            .map(|(i, &genus)| VertexDoc {
                id: format!("s{}", i + 1),
                genus,
            })
            .collect(),
        components: t
            .comp_genus
            .iter()
            .enumerate()
            .map(|(i, &genus)| VertexDoc {
                id: format!("k{}", i + 1),
                genus,
            })
            .collect(),
        branches: t
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| BranchDoc {
                id: format!("b{}", i + 1),
                sing: format!("s{}", b.sing + 1),
                comp: format!("k{}", b.comp + 1),
                conductance: b.conductance,
            })
            .collect(),
        distinguished: t
            .point_comp
            .iter()
            .enumerate()
            .map(|(i, &comp)| PointDoc {
                id: format!("d{}", i + 1),
                comp: format!("k{}", comp + 1),
            })
            .collect(),
        markings: t
            .markings
            .iter()
            .enumerate()
            .map(|(i, m)| MarkingDoc {
                index: i + 1,
                at: match m {
                    MarkTarget::Branch(b) => format!("branch:b{}", b + 1),
                    MarkTarget::Point(d) => format!("point:d{}", d + 1),
                },
            })
            .collect(),
    }
}

pub fn load_type(path: &Path) -> Result<CombinatorialType> {
    let text = std::fs::read_to_string(path)?;
    let doc: TypeDoc = serde_json::from_str(&text)
        .map_err(|e| schema_err(&path.display().to_string(), e.to_string()))?;
    type_from_doc(&doc)
}

#[derive(Serialize)]
pub struct TermJson {
    pub coeff: i64,
    pub exponents: Vec<u16>,
}

#[derive(Serialize)]
pub struct PolyJson {
    pub provenance: Provenance,
    pub terms: Vec<TermJson>,
    pub text: String,
}

#[derive(Serialize)]
pub struct SystemJson {
    pub variables: Vec<String>,
    pub closed: Vec<PolyJson>,
    pub open: Vec<PolyJson>,
}

pub fn system_to_json(system: &PolynomialSystem) -> SystemJson {
    let render = |t: &crate::equations::TaggedPoly| PolyJson {
        provenance: t.provenance,
        terms: t
            .poly
            .terms()
            .map(|(e, c)| TermJson {
                coeff: c,
                exponents: e.to_vec(),
            })
            .collect(),
        text: t.poly.render(&system.variables),
    };
    SystemJson {
        variables: system.variables.clone(),
        closed: system.closed.iter().map(render).collect(),
        open: system.open.iter().map(render).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_roundtrip_truncated_product() {
        let doc: AlgebraDoc = serde_json::from_str(
            r#"{"field":{"kind":"prime","p":5},"spec":{"kind":"truncated_product","conductances":[2,2]}}"#,
        )
        .unwrap();
        let loaded = algebra_from_doc(&doc).unwrap();
        assert_eq!(loaded.dim(), 4);
        assert!(loaded.conductances().is_some());
    }

    #[test]
    fn structure_constants_over_q() {
        let doc: AlgebraDoc = serde_json::from_str(
            r#"{"field":{"kind":"rationals"},
                "spec":{"kind":"structure_constants","dim":2,
                        "unit":["1",0],"labels":["1","t"],
                        "table":[[[1,0],[0,1]],[[0,1],[0,0]]]}}"#,
        )
        .unwrap();
        let LoadedAlgebra::Rational { alg, .. } = algebra_from_doc(&doc).unwrap() else {
            panic!("expected rational algebra");
        };
        assert!(alg.validate().is_empty());
    }

    #[test]
    fn bad_scalar_is_a_schema_error_with_path() {
        let doc: AlgebraDoc = serde_json::from_str(
            r#"{"field":{"kind":"prime","p":3},
                "spec":{"kind":"structure_constants","dim":1,
                        "unit":[7],"labels":["1"],"table":[[[1]]]}}"#,
        )
        .unwrap();
        let err = algebra_from_doc(&doc).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unit[0]"), "got: {msg}");
    }

    #[test]
    fn subalgebra_doc_inline() {
        let doc: SubalgebraDoc = serde_json::from_str(
            r#"{"algebra":{"field":{"kind":"prime","p":3},
                           "spec":{"kind":"truncated_product","conductances":[1,1]}},
                "basis":[[1,1]]}"#,
        )
        .unwrap();
        let LoadedSubalgebra::Prime { sub, .. } =
            subalgebra_from_doc(&doc, Path::new("."), None).unwrap()
        else {
            panic!("expected prime subalgebra");
        };
        assert_eq!(sub.dim(), 1);
        assert_eq!(sub.corank(), 1);
    }

    #[test]
    fn type_doc_roundtrip() {
        let json = r#"{
            "singularities":[{"id":"s1","genus":1}],
            "components":[{"id":"k1","genus":0}],
            "branches":[{"id":"b1","sing":"s1","comp":"k1","conductance":2}],
            "distinguished":[{"id":"d1","comp":"k1"}],
            "markings":[{"index":1,"at":"point:d1"},{"index":2,"at":"branch:b1"}]
        }"#;
        let doc: TypeDoc = serde_json::from_str(json).unwrap();
        let t = type_from_doc(&doc).unwrap();
        assert!(crate::combtypes::validate_type(&t).is_empty());
        let doc2 = type_to_doc(&t);
        let t2 = type_from_doc(&doc2).unwrap();
        assert_eq!(
            crate::combtypes::canonical_form(&t),
            crate::combtypes::canonical_form(&t2)
        );
    }

    #[test]
    fn unknown_id_names_the_path() {
        let json = r#"{
            "singularities":[{"id":"s1","genus":1}],
            "components":[{"id":"k1","genus":0}],
            "branches":[{"id":"b1","sing":"sX","comp":"k1","conductance":2}]
        }"#;
        let doc: TypeDoc = serde_json::from_str(json).unwrap();
        let err = type_from_doc(&doc).unwrap_err();
        assert!(err.to_string().contains("branches[0].sing"));
    }
}
