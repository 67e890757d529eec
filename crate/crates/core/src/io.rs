//! JSON instance files, assignments and certificates.
//!
//! Element identifiers may be strings or integers; integers are read as their
//! decimal string. Names that do not appear in the instance's `elements` list
//! are hidden elements, allowed only where a minor contracts or deletes them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::assignment::{Assignment, Mode, Report, Violation};
use crate::augment::UncoverableCertificate;
use crate::error::{Error, Result};
use crate::family::{MatroidFamily, Member, Role};
use crate::feasible::{PackingRoute, UnpackableCertificate};
use crate::ground::GroundSet;
use crate::matroid::Matroid;
use crate::partition::Obstruction;
use crate::set::{Element, ElementSet, MAX_ELEMENTS};

/// An element identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Id(pub String);

impl Serialize for Id {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Id {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Id, D::Error> {
        struct IdVisitor;
        impl Visitor<'_> for IdVisitor {
            type Value = Id;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string or integer element identifier")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Id, E> {
                Ok(Id(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Id, E> {
                Ok(Id(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Id, E> {
                Ok(Id(v.to_string()))
            }
        }
        d.deserialize_any(IdVisitor)
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Id {
        Id(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub elements: Vec<Id>,
    pub capacity: usize,
}

/// One matroid, tagged by `"type"`.
///
/// `uniform`, `free` and `zero` default to the ground set of their context:
/// the instance's elements at top level, the outer ground for `dual` and
/// `looped`, and the outer ground plus the contracted and deleted elements
/// for the inner matroid of a `minor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatroidSpec {
    Uniform {
        rank: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<Id>>,
    },
    Graphic {
        vertices: Vec<Id>,
        edges: BTreeMap<String, (Id, Id)>,
    },
    Partition {
        blocks: Vec<BlockSpec>,
    },
    LinearGf2 {
        columns: BTreeMap<String, Vec<u8>>,
    },
    Free {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<Id>>,
    },
    Zero {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<Id>>,
    },
    Dual {
        inner: Box<MatroidSpec>,
    },
    Minor {
        inner: Box<MatroidSpec>,
        #[serde(default)]
        contract: Vec<Id>,
        #[serde(default)]
        delete: Vec<Id>,
    },
    DirectSum {
        parts: Vec<MatroidSpec>,
    },
    Looped {
        inner: Box<MatroidSpec>,
        loops: Vec<Id>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSpec {
    #[serde(flatten)]
    pub matroid: MatroidSpec,
    #[serde(default = "default_role", with = "role_serde")]
    pub role: Role,
}

fn default_role() -> Role {
    Role::Finitary
}

mod role_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Role, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(r.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Role, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "finitary" => Ok(Role::Finitary),
            "cofinitary" => Ok(Role::Cofinitary),
            other => Err(de::Error::custom(format!(
                "unknown role {other:?}, expected \"finitary\" or \"cofinitary\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub elements: Vec<Id>,
    pub matroids: Vec<MemberSpec>,
}

/// A parsed instance: element names and the family over their indices.
#[derive(Debug, Clone)]
pub struct Instance {
    pub names: GroundSet,
    pub family: MatroidFamily,
}

pub fn parse_instance(text: &str) -> Result<(InstanceFile, Instance)> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("instance file: {e}")))?;
    let inst = build_instance(&file)?;
    Ok((file, inst))
}

pub fn build_instance(file: &InstanceFile) -> Result<Instance> {
    let names = GroundSet::new(file.elements.iter().map(|i| i.0.clone()))?;
    let mut b = Builder {
        names: &names,
        hidden: HashMap::new(),
    };
    let ground = names.all();
    let mut members = Vec::with_capacity(file.matroids.len());
    for (i, m) in file.matroids.iter().enumerate() {
        let path = format!("matroids[{i}]");
        let matroid = b.build(&m.matroid, ground, &path)?;
        if matroid.ground() != ground {
            return Err(Error::Input(format!(
                "{path}: ground set {:?} differs from the instance elements",
                b.describe(matroid.ground())
            )));
        }
        members.push(Member::new(matroid, m.role));
    }
    Ok(Instance {
        family: MatroidFamily::new(ground, members)?,
        names,
    })
}

struct Builder<'a> {
    names: &'a GroundSet,
    hidden: HashMap<String, Element>,
}

impl Builder<'_> {
    fn index(&mut self, id: &str, path: &str) -> Result<Element> {
        if let Ok(e) = self.names.index_of(id) {
            return Ok(e);
        }
        let next = self.names.len() + self.hidden.len();
        if let Some(&e) = self.hidden.get(id) {
            return Ok(e);
        }
        if next >= MAX_ELEMENTS {
            return Err(Error::Input(format!(
                "{path}: more than {MAX_ELEMENTS} distinct element names"
            )));
        }
        self.hidden.insert(id.to_string(), next);
        Ok(next)
    }

    fn set(&mut self, ids: &[Id], path: &str) -> Result<ElementSet> {
        let mut s = ElementSet::empty();
        for id in ids {
            let e = self.index(&id.0, path)?;
            if s.contains(e) {
                return Err(Error::Input(format!(
                    "{path}: element {:?} listed twice",
                    id.0
                )));
            }
            s.insert(e);
        }
        Ok(s)
    }

    fn describe(&self, s: ElementSet) -> Vec<String> {
        s.iter()
            .map(|e| {
                if e < self.names.len() {
                    self.names.name(e).to_string()
                } else {
                    self.hidden
                        .iter()
                        .find(|p| *p.1 == e)
                        .map(|p| p.0.clone())
                        .unwrap_or_default()
                }
            })
            .collect()
    }

    fn build(&mut self, spec: &MatroidSpec, ctx: ElementSet, path: &str) -> Result<Matroid> {
        let at = |e: Error| match e {
            Error::Input(m) => Error::Input(format!("{path}: {m}")),
            other => other,
        };
        Ok(match spec {
            MatroidSpec::Uniform { rank, elements } => {
                let g = self.opt_set(elements, ctx, path)?;
                Matroid::uniform(g, *rank).map_err(at)?
            }
            MatroidSpec::Free { elements } => Matroid::free(self.opt_set(elements, ctx, path)?),
            MatroidSpec::Zero { elements } => Matroid::zero(self.opt_set(elements, ctx, path)?),
            MatroidSpec::Graphic { vertices, edges } => {
                let mut vmap = HashMap::new();
                for (i, v) in vertices.iter().enumerate() {
                    if vmap.insert(v.0.clone(), i).is_some() {
                        return Err(Error::Input(format!(
                            "{path}.vertices: vertex {:?} listed twice",
                            v.0
                        )));
                    }
                }
                let mut list = Vec::with_capacity(edges.len());
                for (name, (u, v)) in edges {
                    let look = |x: &Id| {
                        vmap.get(&x.0).copied().ok_or_else(|| {
                            Error::Input(format!("{path}.edges.{name}: unknown vertex {:?}", x.0))
                        })
                    };
                    list.push((self.index(name, path)?, look(u)?, look(v)?));
                }
                Matroid::graphic(vertices.len(), &list).map_err(at)?
            }
            MatroidSpec::Partition { blocks } => {
                let mut spec = Vec::with_capacity(blocks.len());
                for (i, b) in blocks.iter().enumerate() {
                    spec.push((
                        self.set(&b.elements, &format!("{path}.blocks[{i}]"))?,
                        b.capacity,
                    ));
                }
                Matroid::partition(&spec).map_err(at)?
            }
            MatroidSpec::LinearGf2 { columns } => {
                let mut cols = Vec::with_capacity(columns.len());
                for (name, bits) in columns {
                    if bits.len() > 64 {
                        return Err(Error::Input(format!(
                            "{path}.columns.{name}: more than 64 rows"
                        )));
                    }
                    let mut v = 0u64;
                    for (r, &bit) in bits.iter().enumerate() {
                        match bit {
                            0 => {}
                            1 => v |= 1 << r,
                            _ => {
                                return Err(Error::Input(format!(
                                    "{path}.columns.{name}: entries must be 0 or 1"
                                )))
                            }
                        }
                    }
                    cols.push((self.index(name, path)?, v));
                }
                Matroid::linear_gf2(&cols).map_err(at)?
            }
            MatroidSpec::Dual { inner } => self.build(inner, ctx, &format!("{path}.inner"))?.dual(),
            MatroidSpec::Looped { inner, loops } => {
                let l = self.set(loops, &format!("{path}.loops"))?;
                self.build(inner, ctx, &format!("{path}.inner"))?
                    .declare_loops(l)
                    .map_err(at)?
            }
            MatroidSpec::Minor {
                inner,
                contract,
                delete,
            } => {
                let c = self.set(contract, &format!("{path}.contract"))?;
                let d = self.set(delete, &format!("{path}.delete"))?;
                let m = self.build(inner, ctx | c | d, &format!("{path}.inner"))?;
                m.minor(c, d).map_err(at)?
            }
            MatroidSpec::DirectSum { parts } => {
                let mut built = Vec::with_capacity(parts.len());
                for (i, p) in parts.iter().enumerate() {
                    let sub = format!("{path}.parts[{i}]");
                    if matches!(
                        p,
                        MatroidSpec::Uniform { elements: None, .. }
                            | MatroidSpec::Free { elements: None }
                            | MatroidSpec::Zero { elements: None }
                    ) {
                        return Err(Error::Input(format!(
                            "{sub}: direct_sum parts need explicit elements"
                        )));
                    }
                    built.push(self.build(p, ElementSet::empty(), &sub)?);
                }
                Matroid::direct_sum(built).map_err(at)?
            }
        })
    }

    fn opt_set(
        &mut self,
        ids: &Option<Vec<Id>>,
        ctx: ElementSet,
        path: &str,
    ) -> Result<ElementSet> {
        match ids {
            Some(ids) => self.set(ids, &format!("{path}.elements")),
            None => Ok(ctx),
        }
    }
}

/// Renames every element of `spec`, making defaulted grounds explicit.
fn rename(spec: &MatroidSpec, ctx: &[Id], f: &dyn Fn(&str) -> String) -> MatroidSpec {
    let ids = |v: &[Id]| v.iter().map(|i| Id(f(&i.0))).collect::<Vec<_>>();
    let opt = |v: &Option<Vec<Id>>| Some(ids(v.as_deref().unwrap_or(ctx)));
    match spec {
        MatroidSpec::Uniform { rank, elements } => MatroidSpec::Uniform {
            rank: *rank,
            elements: opt(elements),
        },
        MatroidSpec::Free { elements } => MatroidSpec::Free {
            elements: opt(elements),
        },
        MatroidSpec::Zero { elements } => MatroidSpec::Zero {
            elements: opt(elements),
        },
        MatroidSpec::Graphic { vertices, edges } => MatroidSpec::Graphic {
            vertices: vertices.clone(),
            edges: edges.iter().map(|(k, v)| (f(k), v.clone())).collect(),
        },
        MatroidSpec::Partition { blocks } => MatroidSpec::Partition {
            blocks: blocks
                .iter()
                .map(|b| BlockSpec {
                    elements: ids(&b.elements),
                    capacity: b.capacity,
                })
                .collect(),
        },
        MatroidSpec::LinearGf2 { columns } => MatroidSpec::LinearGf2 {
            columns: columns.iter().map(|(k, v)| (f(k), v.clone())).collect(),
        },
        MatroidSpec::Dual { inner } => MatroidSpec::Dual {
            inner: Box::new(rename(inner, ctx, f)),
        },
        MatroidSpec::Looped { inner, loops } => MatroidSpec::Looped {
            inner: Box::new(rename(inner, ctx, f)),
            loops: ids(loops),
        },
        MatroidSpec::Minor {
            inner,
            contract,
            delete,
        } => {
            let mut wider = ctx.to_vec();
            wider.extend(contract.iter().cloned());
            wider.extend(delete.iter().cloned());
            MatroidSpec::Minor {
                inner: Box::new(rename(inner, &wider, f)),
                contract: ids(contract),
                delete: ids(delete),
            }
        }
        MatroidSpec::DirectSum { parts } => MatroidSpec::DirectSum {
            parts: parts.iter().map(|p| rename(p, &[], f)).collect(),
        },
    }
}

/// Name of the copy of `e` in slice `i` of a reduced or auxiliary family.
pub fn slice_name(e: &str, i: usize) -> String {
    format!("{e}@{i}")
}

/// The three-member instance of [`crate::partition::reduce_to_three`], as a file.
pub fn reduce_instance_file(file: &InstanceFile) -> Result<InstanceFile> {
    let k = file.matroids.len();
    if k == 0 && !file.elements.is_empty() {
        return Err(Error::Precondition(
            "cannot reduce a family with no members on a non-empty ground set".into(),
        ));
    }
    let slice = |i: usize| -> Vec<Id> {
        file.elements
            .iter()
            .map(|e| Id(slice_name(&e.0, i)))
            .collect()
    };
    let holder = |which: Role| {
        let mut parts = Vec::new();
        let mut loops = Vec::new();
        for (i, m) in file.matroids.iter().enumerate() {
            if m.role == which {
                parts.push(rename(&m.matroid, &file.elements, &|s| slice_name(s, i)));
            } else {
                loops.extend(slice(i));
            }
        }
        parts.push(MatroidSpec::Zero {
            elements: Some(loops),
        });
        MatroidSpec::DirectSum { parts }
    };
    let fibres = file
        .elements
        .iter()
        .map(|e| MatroidSpec::Uniform {
            rank: k.saturating_sub(1),
            elements: Some((0..k).map(|i| Id(slice_name(&e.0, i))).collect()),
        })
        .chain(std::iter::once(MatroidSpec::Zero {
            elements: Some(vec![]),
        }))
        .collect();
    let elements = (0..k).flat_map(slice).collect();
    Ok(InstanceFile {
        elements,
        matroids: vec![
            MemberSpec {
                matroid: holder(Role::Finitary),
                role: Role::Finitary,
            },
            MemberSpec {
                matroid: holder(Role::Cofinitary),
                role: Role::Cofinitary,
            },
            MemberSpec {
                matroid: MatroidSpec::DirectSum { parts: fibres },
                role: Role::Cofinitary,
            },
        ],
    })
}

/// `{"mode": …, "parts": [[names…], …]}`, elements in ground order.
pub fn assignment_json(names: &GroundSet, a: &Assignment) -> Value {
    json!({
        "mode": a.mode.as_str(),
        "parts": a.parts.iter().map(|&p| names.names_of(p)).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Clone, Deserialize)]
struct AssignmentFile {
    #[serde(default)]
    mode: Option<String>,
    parts: Vec<Vec<Id>>,
}

/// Reads an assignment file; `mode` overrides the file's own mode.
pub fn parse_assignment(text: &str, names: &GroundSet, mode: Option<Mode>) -> Result<Assignment> {
    let file: AssignmentFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("assignment file: {e}")))?;
    let mode = match (mode, &file.mode) {
        (Some(m), _) => m,
        (None, Some(s)) => Mode::parse(s)
            .ok_or_else(|| Error::Input(format!("assignment file: unknown mode {s:?}")))?,
        (None, None) => return Err(Error::Input("assignment file: no mode given".into())),
    };
    let mut parts = Vec::with_capacity(file.parts.len());
    for (i, p) in file.parts.iter().enumerate() {
        let mut s = ElementSet::empty();
        for id in p {
            let e = names
                .index_of(&id.0)
                .map_err(|_| Error::Input(format!("parts[{i}]: unknown element {:?}", id.0)))?;
            s.insert(e);
        }
        parts.push(s);
    }
    Ok(Assignment::new(mode, parts))
}

/// `{"valid": …, "mode": …, "violations": [...]}` with elements named.
pub fn report_json(names: &GroundSet, mode: Mode, report: &Report) -> Value {
    let name = |e: Element| {
        if e < names.len() {
            names.name(e).to_string()
        } else {
            format!("#{e}")
        }
    };
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| match v {
            Violation::WrongArity { expected, found } => {
                json!({"kind": "wrong_arity", "expected": expected, "found": found})
            }
            Violation::OutsideGround { member, elements } => {
                json!({"kind": "outside_ground", "member": member, "elements": elements.iter().map(name).collect::<Vec<_>>()})
            }
            Violation::NotIndependent { member } => json!({"kind": "not_independent", "member": member}),
            Violation::NotSpanning { member } => json!({"kind": "not_spanning", "member": member}),
            Violation::Uncovered { element } => json!({"kind": "uncovered", "element": name(*element)}),
            Violation::Overlap { element, members } => {
                json!({"kind": "overlap", "element": name(*element), "members": [members.0, members.1]})
            }
        })
        .collect();
    json!({"valid": report.is_valid(), "mode": mode.as_str(), "violations": violations})
}

pub fn uncoverable_json(names: &GroundSet, c: &UncoverableCertificate) -> Value {
    json!({
        "kind": "uncoverable",
        "X": names.names_of(c.witness),
        "element": names.name(c.element),
    })
}

/// Unpackability certificates name elements of the translated family: plain
/// names for the dual route and `name@i` for the auxiliary family on `E × K`.
pub fn unpackable_json(names: &GroundSet, c: &UnpackableCertificate) -> Value {
    let name = |x: Element| match c.route {
        PackingRoute::Dual => names.name(x).to_string(),
        PackingRoute::Hat => slice_name(names.name(x % c.stride), x / c.stride),
    };
    json!({
        "kind": "unpackable",
        "route": c.route.as_str(),
        "X": c.translated.witness.iter().map(name).collect::<Vec<_>>(),
        "element": name(c.translated.element),
    })
}

pub fn obstruction_json(names: &GroundSet, o: &Obstruction) -> Value {
    match o {
        Obstruction::Uncoverable(c) => uncoverable_json(names, c),
        Obstruction::Unpackable(c) => unpackable_json(names, c),
    }
}

/// Pretty JSON with a trailing newline; key order is fixed by construction.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{reduce_to_three, synthesize_partition, SynthesisOptions};

    const K4: &str = r#"{
        "elements": ["12", "13", "14", "23", "24", "34"],
        "matroids": [
            {"type": "graphic", "vertices": ["1","2","3","4"],
             "edges": {"12": ["1","2"], "13": ["1","3"], "14": ["1","4"], "23": ["2","3"], "24": ["2","4"], "34": ["3","4"]}},
            {"type": "dual", "inner": {"type": "dual", "inner":
             {"type": "graphic", "vertices": ["1","2","3","4"],
              "edges": {"12": ["1","2"], "13": ["1","3"], "14": ["1","4"], "23": ["2","3"], "24": ["2","4"], "34": ["3","4"]}}},
             "role": "cofinitary"}
        ]
    }"#;

    #[test]
    fn parses_graphic_and_roles() {
        let (_, inst) = parse_instance(K4).unwrap();
        assert_eq!(inst.family.len(), 2);
        assert_eq!(inst.family.role(1), Role::Cofinitary);
        assert_eq!(inst.family.matroid(0).full_rank(), 3);
        assert_eq!(inst.family.matroid(1).full_rank(), 3);
    }

    #[test]
    fn integer_ids_and_hidden_elements() {
        let text = r#"{"elements": [1, 2], "matroids": [
            {"type": "minor", "contract": ["h"], "inner": {"type": "uniform", "rank": 2}},
            {"type": "linear_gf2", "columns": {"1": [1, 0], "2": [1, 0]}}
        ]}"#;
        let (_, inst) = parse_instance(text).unwrap();
        // U_{2,3} with one element contracted is U_{1,2}
        assert!(!inst.family.matroid(0).is_independent(inst.family.ground()));
        assert_eq!(inst.family.matroid(1).full_rank(), 1);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = r#"{"elements": ["a"], "matroids": [{"type": "graphic", "vertices": ["u"], "edges": {"a": ["u", "w"]}}]}"#;
        let err = parse_instance(bad).unwrap_err().to_string();
        assert!(err.contains("matroids[0].edges.a"), "{err}");
        let wrong =
            r#"{"elements": ["a"], "matroids": [{"type": "free", "elements": ["a", "b"]}]}"#;
        assert!(parse_instance(wrong)
            .unwrap_err()
            .to_string()
            .contains("matroids[0]"));
        let syntax = "{\"elements\": [\"a\"],\n \"matroids\": [{\"type\": \"nope\"}]}";
        assert!(parse_instance(syntax)
            .unwrap_err()
            .to_string()
            .contains("line 2"));
    }

    #[test]
    fn reduced_file_matches_reduced_family() {
        let (file, inst) = parse_instance(K4).unwrap();
        let reduced = build_instance(&reduce_instance_file(&file).unwrap()).unwrap();
        let (fam, map) = reduce_to_three(&inst.family).unwrap();
        assert_eq!(reduced.family.len(), 3);
        for x in fam.ground() {
            let (e, i) = map.decode(x);
            let name = slice_name(inst.names.name(e), i);
            assert_eq!(reduced.names.index_of(&name).unwrap(), x);
        }
        for i in 0..3 {
            assert_eq!(reduced.family.role(i), fam.role(i));
            assert_eq!(
                reduced.family.matroid(i).full_rank(),
                fam.matroid(i).full_rank()
            );
        }
        let s = synthesize_partition(&reduced.family, SynthesisOptions::default()).unwrap();
        assert!(s.partition().is_some());
    }

    #[test]
    fn assignment_round_trip() {
        let (_, inst) = parse_instance(K4).unwrap();
        let a = Assignment::new(
            Mode::Partitioning,
            vec![crate::set![0, 3, 5], crate::set![1, 2, 4]],
        );
        let text = assignment_json(&inst.names, &a).to_string();
        assert_eq!(parse_assignment(&text, &inst.names, None).unwrap(), a);
        assert!(a.is_valid(&inst.family));
    }
}
