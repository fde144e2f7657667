//! The declarative input format and its validation into a workspace.
//!
//! A document is a JSON object with a `declarations` array. Each entry has
//! a `kind` and a `name`; later entries may refer to earlier ones by name.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use descent_core::enriched::{validate_vcategory, VCategory, VFunctor};
use descent_core::famv::{Cover, LatticeV};
use descent_core::finbase::{Atom, FinFunction, FinSet};
use descent_core::fincat::{validate_category, FinCategory, FinFunctor, RawCategory};
use descent_core::multicat::{validate_multicategory, FinMulticategory, MultiFunctor, RawMulticategory};
use descent_core::poset::{FinPoset, MonotoneMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub declarations: Vec<Declaration>,
}

pub type Table = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDecl {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiMorphismDecl {
    pub name: String,
    pub dom: Vec<String>,
    pub cod: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiCompositeDecl {
    pub f: String,
    pub list: Vec<String>,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Declaration {
    Set {
        name: String,
        elements: Vec<String>,
    },
    Function {
        name: String,
        dom: String,
        cod: String,
        map: Table,
    },
    Poset {
        name: String,
        elements: Vec<String>,
        /// generating pairs `[lower, upper]`
        #[serde(default)]
        relations: Vec<(String, String)>,
    },
    Monotone {
        name: String,
        dom: String,
        cod: String,
        map: Table,
    },
    Lattice {
        name: String,
        elements: Vec<String>,
        hasse: Vec<(String, String)>,
    },
    Category {
        name: String,
        objects: Vec<String>,
        #[serde(default)]
        morphisms: Vec<MorphismDecl>,
        /// missing identities are added as `id_x`
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        identities: Table,
        /// `[g, f, g∘f]`; composites with identities may be omitted
        #[serde(default)]
        composites: Vec<(String, String, String)>,
    },
    Functor {
        name: String,
        dom: String,
        cod: String,
        objects: Table,
        /// identities may be omitted
        #[serde(default)]
        morphisms: Table,
    },
    Vcategory {
        name: String,
        lattice: String,
        objects: Vec<String>,
        hom: BTreeMap<String, Table>,
    },
    Vfunctor {
        name: String,
        dom: String,
        cod: String,
        map: Table,
    },
    Cover {
        name: String,
        lattice: String,
        fibers: Vec<String>,
        target: String,
    },
    Multicategory {
        name: String,
        objects: Vec<String>,
        #[serde(default)]
        morphisms: Vec<MultiMorphismDecl>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        units: Table,
        #[serde(default)]
        composites: Vec<MultiCompositeDecl>,
    },
    Multifunctor {
        name: String,
        dom: String,
        cod: String,
        objects: Table,
        #[serde(default)]
        morphisms: Table,
    },
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Set { name, .. }
            | Declaration::Function { name, .. }
            | Declaration::Poset { name, .. }
            | Declaration::Monotone { name, .. }
            | Declaration::Lattice { name, .. }
            | Declaration::Category { name, .. }
            | Declaration::Functor { name, .. }
            | Declaration::Vcategory { name, .. }
            | Declaration::Vfunctor { name, .. }
            | Declaration::Cover { name, .. }
            | Declaration::Multicategory { name, .. }
            | Declaration::Multifunctor { name, .. } => name,
        }
    }
}

/// A validated declaration.
#[derive(Clone, Debug)]
pub enum Item {
    Set(FinSet),
    Function(FinFunction),
    Poset(FinPoset),
    Monotone(MonotoneMap),
    Lattice(LatticeV),
    Category(FinCategory),
    Functor(FinFunctor),
    VCategory(VCategory),
    VFunctor(VFunctor),
    Cover(LatticeV, Cover),
    Multicategory(FinMulticategory),
    Multifunctor(MultiFunctor),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Set(_) => "set",
            Item::Function(_) => "function",
            Item::Poset(_) => "poset",
            Item::Monotone(_) => "monotone",
            Item::Lattice(_) => "lattice",
            Item::Category(_) => "category",
            Item::Functor(_) => "functor",
            Item::VCategory(_) => "vcategory",
            Item::VFunctor(_) => "vfunctor",
            Item::Cover(..) => "cover",
            Item::Multicategory(_) => "multicategory",
            Item::Multifunctor(_) => "multifunctor",
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0} is declared twice")]
    Duplicate(String),
    #[error("unknown {kind} {name}")]
    Unknown { kind: &'static str, name: String },
    #[error("{name}: {message}")]
    Invalid { name: String, message: String },
}

/// Validated declarations in document order.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub document: Document,
    items: HashMap<String, Item>,
}

impl Workspace {
    pub fn get(&self, name: &str) -> Option<&Item> {
        self.items.get(name)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The document as canonical pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document).expect("documents serialize") + "\n"
    }
}

pub fn load(path: &Path) -> Result<Workspace, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Workspace, LoadError> {
    let document: Document = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build(document)
}

pub fn build(document: Document) -> Result<Workspace, LoadError> {
    let mut items = HashMap::new();
    for decl in &document.declarations {
        let name = decl.name().to_string();
        if items.contains_key(&name) {
            return Err(LoadError::Duplicate(name));
        }
        let item = resolve(&items, decl)?;
        items.insert(name, item);
    }
    Ok(Workspace { document, items })
}

macro_rules! lookup {
    ($items:expr, $name:expr, $variant:ident, $kind:literal) => {
        match $items.get($name.as_str()) {
            Some(Item::$variant(x)) => x,
            _ => {
                return Err(LoadError::Unknown {
                    kind: $kind,
                    name: $name.clone(),
                })
            }
        }
    };
}

fn invalid(name: &str, e: impl ToString) -> LoadError {
    LoadError::Invalid {
        name: name.to_string(),
        message: e.to_string(),
    }
}

fn finset(name: &str, elements: &[String]) -> Result<FinSet, LoadError> {
    FinSet::new(elements.iter().map(Atom::new)).map_err(|e| invalid(name, e))
}

/// Index table of a total map given by names.
fn table(name: &str, dom: &FinSet, cod: &FinSet, map: &Table) -> Result<Vec<usize>, LoadError> {
    for k in map.keys() {
        dom.lookup(k)
            .map_err(|_| invalid(name, format!("{k} is not in the domain")))?;
    }
    (0..dom.len())
        .map(|i| {
            let a = dom.atom(i);
            let b = map
                .get(a.as_str())
                .ok_or_else(|| invalid(name, format!("no image for {a}")))?;
            cod.lookup(b)
                .map_err(|_| invalid(name, format!("{b} is not in the codomain")))
        })
        .collect()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(|s| s.as_str()).collect()
}

fn resolve(items: &HashMap<String, Item>, decl: &Declaration) -> Result<Item, LoadError> {
    Ok(match decl {
        Declaration::Set { name, elements } => Item::Set(finset(name, elements)?),
        Declaration::Function { name, dom, cod, map } => {
            let (d, c) = (lookup!(items, dom, Set, "set"), lookup!(items, cod, Set, "set"));
            let t = table(name, d, c, map)?;
            Item::Function(FinFunction::new(d.clone(), c.clone(), t).map_err(|e| invalid(name, e))?)
        }
        Declaration::Poset {
            name,
            elements,
            relations,
        } => {
            let set = finset(name, elements)?;
            let rel = relations
                .iter()
                .map(|(a, b)| {
                    Ok((
                        set.lookup(a).map_err(|e| invalid(name, e))?,
                        set.lookup(b).map_err(|e| invalid(name, e))?,
                    ))
                })
                .collect::<Result<Vec<_>, LoadError>>()?;
            Item::Poset(FinPoset::generated(set, &rel).map_err(|e| invalid(name, e))?)
        }
        Declaration::Monotone { name, dom, cod, map } => {
            let (d, c) = (lookup!(items, dom, Poset, "poset"), lookup!(items, cod, Poset, "poset"));
            let t = table(name, d.elements(), c.elements(), map)?;
            Item::Monotone(MonotoneMap::new(d.clone(), c.clone(), t).map_err(|e| invalid(name, e))?)
        }
        Declaration::Lattice { name, elements, hasse } => {
            let edges: Vec<(&str, &str)> = hasse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            Item::Lattice(LatticeV::from_hasse(&strs(elements), &edges).map_err(|e| invalid(name, e))?)
        }
        Declaration::Category {
            name,
            objects,
            morphisms,
            identities,
            composites,
        } => {
            let raw = RawCategory {
                objects: objects.clone(),
                morphisms: morphisms
                    .iter()
                    .map(|m| (m.name.clone(), m.src.clone(), m.tgt.clone()))
                    .collect(),
                identities: identities.iter().map(|(x, i)| (x.clone(), i.clone())).collect(),
                composites: composites.clone(),
            }
            .with_identities();
            Item::Category(validate_category(&raw).map_err(|e| invalid(name, e))?)
        }
        Declaration::Functor {
            name,
            dom,
            cod,
            objects,
            morphisms,
        } => {
            let (d, c) = (
                lookup!(items, dom, Category, "category"),
                lookup!(items, cod, Category, "category"),
            );
            let obj_map = table(name, d.objects(), c.objects(), objects)?;
            let mut full = morphisms.clone();
            for x in 0..d.objects().len() {
                full.entry(d.morphisms().atom(d.id(x)).to_string())
                    .or_insert_with(|| c.morphisms().atom(c.id(obj_map[x])).to_string());
            }
            let mor_map = table(name, d.morphisms(), c.morphisms(), &full)?;
            Item::Functor(FinFunctor::new(d.clone(), c.clone(), obj_map, mor_map).map_err(|e| invalid(name, e))?)
        }
        Declaration::Vcategory {
            name,
            lattice,
            objects,
            hom,
        } => {
            let v = lookup!(items, lattice, Lattice, "lattice");
            let objs = finset(name, objects)?;
            let n = objs.len();
            let mut h = vec![v.bottom(); n * n];
            for (x, row) in hom {
                let i = objs.lookup(x).map_err(|e| invalid(name, e))?;
                for (y, val) in row {
                    let j = objs.lookup(y).map_err(|e| invalid(name, e))?;
                    h[i * n + j] = v
                        .elements()
                        .lookup(val)
                        .map_err(|_| invalid(name, format!("{val} is not in the lattice")))?;
                }
            }
            // unlisted diagonal entries default to the top element
            for i in 0..n {
                let listed = hom
                    .get(objs.atom(i).as_str())
                    .is_some_and(|r| r.contains_key(objs.atom(i).as_str()));
                if !listed {
                    h[i * n + i] = v.top();
                }
            }
            Item::VCategory(validate_vcategory(v.clone(), objs, h).map_err(|e| invalid(name, e))?)
        }
        Declaration::Vfunctor { name, dom, cod, map } => {
            let (d, c) = (
                lookup!(items, dom, VCategory, "vcategory"),
                lookup!(items, cod, VCategory, "vcategory"),
            );
            let t = table(name, d.objects(), c.objects(), map)?;
            let f = FinFunction::new(d.objects().clone(), c.objects().clone(), t).map_err(|e| invalid(name, e))?;
            Item::VFunctor(VFunctor::new(d.clone(), c.clone(), f).map_err(|e| invalid(name, e))?)
        }
        Declaration::Cover {
            name,
            lattice,
            fibers,
            target,
        } => {
            let v = lookup!(items, lattice, Lattice, "lattice");
            let elem = |x: &String| {
                v.elements()
                    .lookup(x)
                    .map_err(|_| invalid(name, format!("{x} is not in the lattice")))
            };
            let fibers = fibers.iter().map(elem).collect::<Result<Vec<_>, _>>()?;
            let cover = Cover::over(v, &fibers, elem(target)?).map_err(|e| invalid(name, e))?;
            Item::Cover(v.clone(), cover)
        }
        Declaration::Multicategory {
            name,
            objects,
            morphisms,
            units,
            composites,
        } => {
            let mut raw = RawMulticategory {
                objects: objects.clone(),
                morphisms: morphisms
                    .iter()
                    .map(|m| (m.name.clone(), m.dom.clone(), m.cod.clone()))
                    .collect(),
                units: units.iter().map(|(x, u)| (x.clone(), u.clone())).collect(),
                composites: composites
                    .iter()
                    .map(|c| (c.f.clone(), c.list.clone(), c.result.clone()))
                    .collect(),
            };
            raw = raw.with_units();
            Item::Multicategory(validate_multicategory(&raw).map_err(|e| invalid(name, e))?)
        }
        Declaration::Multifunctor {
            name,
            dom,
            cod,
            objects,
            morphisms,
        } => {
            let d = lookup!(items, dom, Multicategory, "multicategory");
            let c = lookup!(items, cod, Multicategory, "multicategory");
            let objs: Vec<(&str, &str)> = objects.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let mors: Vec<(&str, &str)> = morphisms.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            Item::Multifunctor(MultiFunctor::from_names(d, c, &objs, &mors).map_err(|e| invalid(name, e))?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTERVAL: &str = r#"{"declarations": [
        {"kind": "poset", "name": "I", "elements": ["0", "1"], "relations": [["0", "1"]]},
        {"kind": "monotone", "name": "id", "dom": "I", "cod": "I", "map": {"0": "0", "1": "1"}}
    ]}"#;

    #[test]
    fn interval_and_identity_load() {
        let ws = parse(INTERVAL).unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws.get("id").unwrap().kind(), "monotone");
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a monoid {1,a,b} with ab = a, ba = b, aa = b, bb = a
        let text = r#"{"declarations": [{"kind": "category", "name": "M", "objects": ["*"],
            "morphisms": [{"name": "a", "src": "*", "tgt": "*"}, {"name": "b", "src": "*", "tgt": "*"}],
            "composites": [["a", "b", "a"], ["b", "a", "b"], ["a", "a", "b"], ["b", "b", "a"]]}]}"#;
        let err = parse(text).unwrap_err().to_string();
        assert!(err.starts_with("M: associativity fails at ("), "{err}");
    }

    #[test]
    fn unknown_lattice_is_named() {
        let text = r#"{"declarations": [{"kind": "cover", "name": "c", "lattice": "V", "fibers": [], "target": "1"}]}"#;
        assert_eq!(parse(text).unwrap_err().to_string(), "unknown lattice V");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("{\n  \"declarations\": [,]\n}") {
            Err(LoadError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reserialization_is_idempotent() {
        let once = parse(INTERVAL).unwrap().to_json();
        assert_eq!(parse(&once).unwrap().to_json(), once);
    }
}
