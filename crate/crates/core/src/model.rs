//! Language-neutral class model: classes, single inheritance, methods and the
//! invocations made from their bodies.
//!
//! A [`ClassModel`] is built either by the source frontend or by ingesting an
//! interchange document (JSON):
//!
//! ```json
//! { "classes": [
//!     { "name": "B", "extends": "A",
//!       "methods": [ { "name": "m", "arity": 0, "decision_points": 1,
//!                      "calls": [ { "receiver": "self", "method": "n", "arity": 0 } ] } ] }
//! ] }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Receiver keyword used by the interchange document for calls on the current object.
pub const SELF_RECEIVER: &str = "self";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Receiver {
    /// The invoking object itself (`m()`, `this.m()`).
    SelfRef,
    /// A class in the model or an external type, by name.
    Type(String),
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Receiver::SelfRef => f.write_str("SELF"),
            Receiver::Type(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodRef {
    pub receiver: Receiver,
    pub method: String,
    pub arity: u32,
}

impl MethodRef {
    pub fn on_self(method: impl Into<String>, arity: u32) -> Self {
        Self {
            receiver: Receiver::SelfRef,
            method: method.into(),
            arity,
        }
    }

    pub fn on_type(receiver: impl Into<String>, method: impl Into<String>, arity: u32) -> Self {
        Self {
            receiver: Receiver::Type(receiver.into()),
            method: method.into(),
            arity,
        }
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}/{}", self.receiver, self.method, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub arity: u32,
    /// Branch, loop, case, catch and short-circuit operators in the body.
    pub decision_points: u32,
    pub invocations: BTreeSet<MethodRef>,
}

impl MethodDecl {
    pub fn new(name: impl Into<String>, arity: u32) -> Self {
        Self {
            name: name.into(),
            arity,
            decision_points: 0,
            invocations: BTreeSet::new(),
        }
    }

    pub fn with_decisions(mut self, decision_points: u32) -> Self {
        self.decision_points = decision_points;
        self
    }

    pub fn calling(mut self, call: MethodRef) -> Self {
        self.invocations.insert(call);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub superclass: Option<String>,
    pub methods: Vec<MethodDecl>,
}

impl ClassDecl {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            superclass: None,
            methods: Vec::new(),
        }
    }

    pub fn extending(mut self, superclass: impl Into<String>) -> Self {
        self.superclass = Some(superclass.into());
        self
    }

    pub fn with_method(mut self, method: MethodDecl) -> Self {
        self.methods.push(method);
        self
    }
}

/// A resolved set of classes. Immutable once built; cheap to share across threads.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassModel {
    pub classes: BTreeMap<String, ClassDecl>,
    /// Superclasses and receivers referenced but not declared in the model.
    pub externals: BTreeSet<String>,
}

impl ClassModel {
    /// Builds a model without checking invariants, deriving `externals` from
    /// every referenced name that is not a declared class. Later duplicates win.
    pub fn from_classes(classes: impl IntoIterator<Item = ClassDecl>) -> Self {
        let classes: BTreeMap<String, ClassDecl> =
            classes.into_iter().map(|c| (c.name.clone(), c)).collect();
        let mut externals = BTreeSet::new();
        for class in classes.values() {
            if let Some(sup) = &class.superclass {
                if !classes.contains_key(sup) {
                    externals.insert(sup.clone());
                }
            }
            for call in class.methods.iter().flat_map(|m| &m.invocations) {
                if let Receiver::Type(name) = &call.receiver {
                    if !classes.contains_key(name) {
                        externals.insert(name.clone());
                    }
                }
            }
        }
        Self { classes, externals }
    }

    pub fn get(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.get(name)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Superclass of `class` if it is declared in this model.
    pub fn in_model_superclass(&self, class: &ClassDecl) -> Option<&ClassDecl> {
        class
            .superclass
            .as_deref()
            .and_then(|s| self.classes.get(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    KeyMismatch { key: String },
    SelfSuperclass,
    UnresolvedSuperclass(String),
    InheritanceCycle(Vec<String>),
    DuplicateMethod { name: String, arity: u32 },
    EmptyMethodName,
    UnresolvedReceiver(String),
    ExternalShadowsClass,
}

/// One violated invariant, attributed to a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub class: String,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.class;
        match &self.kind {
            DiagnosticKind::KeyMismatch { key } => {
                write!(f, "class `{c}` is stored under key `{key}`")
            }
            DiagnosticKind::SelfSuperclass => write!(f, "class `{c}` extends itself"),
            DiagnosticKind::UnresolvedSuperclass(s) => write!(
                f,
                "superclass `{s}` of `{c}` is neither declared nor external"
            ),
            DiagnosticKind::InheritanceCycle(cycle) => {
                write!(f, "inheritance cycle {}", cycle.join(" -> "))
            }
            DiagnosticKind::DuplicateMethod { name, arity } => {
                write!(f, "class `{c}` declares `{name}/{arity}` more than once")
            }
            DiagnosticKind::EmptyMethodName => write!(f, "class `{c}` has an unnamed method"),
            DiagnosticKind::UnresolvedReceiver(r) => write!(
                f,
                "class `{c}` calls into `{r}`, which is neither declared nor external"
            ),
            DiagnosticKind::ExternalShadowsClass => {
                write!(f, "`{c}` is both declared and listed as external")
            }
        }
    }
}

/// Checks every [`ClassModel`] invariant; an empty list means the model is valid.
pub fn validate(model: &ClassModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let diag = |class: &str, kind| Diagnostic {
        class: class.to_string(),
        kind,
    };

    for (key, class) in &model.classes {
        if key != &class.name {
            out.push(diag(
                &class.name,
                DiagnosticKind::KeyMismatch { key: key.clone() },
            ));
        }
        if model.externals.contains(key) {
            out.push(diag(key, DiagnosticKind::ExternalShadowsClass));
        }
        match &class.superclass {
            Some(sup) if sup == &class.name => out.push(diag(key, DiagnosticKind::SelfSuperclass)),
            Some(sup) if !model.classes.contains_key(sup) && !model.externals.contains(sup) => {
                out.push(diag(key, DiagnosticKind::UnresolvedSuperclass(sup.clone())))
            }
            _ => {}
        }

        let mut seen = BTreeSet::new();
        let mut reported = BTreeSet::new();
        for method in &class.methods {
            if method.name.is_empty() {
                out.push(diag(key, DiagnosticKind::EmptyMethodName));
            }
            let id = (method.name.as_str(), method.arity);
            if !seen.insert(id) && reported.insert(id) {
                out.push(diag(
                    key,
                    DiagnosticKind::DuplicateMethod {
                        name: method.name.clone(),
                        arity: method.arity,
                    },
                ));
            }
        }

        let unresolved: BTreeSet<&str> = class
            .methods
            .iter()
            .flat_map(|m| &m.invocations)
            .filter_map(|call| match &call.receiver {
                Receiver::Type(r)
                    if !model.classes.contains_key(r) && !model.externals.contains(r) =>
                {
                    Some(r.as_str())
                }
                _ => None,
            })
            .collect();
        for r in unresolved {
            out.push(diag(key, DiagnosticKind::UnresolvedReceiver(r.to_string())));
        }
    }

    for cycle in find_cycles(model) {
        out.push(Diagnostic {
            class: cycle[0].clone(),
            kind: DiagnosticKind::InheritanceCycle(cycle),
        });
    }
    out
}

/// Inheritance cycles of length ≥ 2 among in-model classes, each rotated so its
/// smallest name comes first. Self-loops are reported separately by [`validate`].
fn find_cycles(model: &ClassModel) -> Vec<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        OnPath,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = model
        .classes
        .keys()
        .map(|k| (k.as_str(), Mark::Fresh))
        .collect();
    let mut cycles = Vec::new();

    for start in model.classes.keys() {
        if marks[start.as_str()] != Mark::Fresh {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut cur = Some(start.as_str());
        while let Some(name) = cur {
            match marks[name] {
                Mark::Done => break,
                Mark::OnPath => {
                    let pos = path.iter().position(|n| *n == name).unwrap_or(0);
                    let cycle = &path[pos..];
                    if cycle.len() > 1 {
                        cycles.push(rotate_smallest_first(cycle));
                    }
                    break;
                }
                Mark::Fresh => {
                    marks.insert(name, Mark::OnPath);
                    path.push(name);
                    cur = model.classes[name]
                        .superclass
                        .as_deref()
                        .filter(|s| model.classes.contains_key(*s))
                        .map(|s| model.classes.get_key_value(s).unwrap().0.as_str());
                }
            }
        }
        for n in path {
            marks.insert(n, Mark::Done);
        }
    }
    cycles
}

fn rotate_smallest_first(cycle: &[&str]) -> Vec<String> {
    let min = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, n)| **n)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle[min..]
        .iter()
        .chain(&cycle[..min])
        .map(|s| s.to_string())
        .collect()
}

// Interchange document schema.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    classes: Vec<ClassEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassEntry {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extends: Option<String>,
    #[serde(default)]
    methods: Vec<MethodEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MethodEntry {
    name: String,
    arity: u32,
    #[serde(default)]
    decision_points: u32,
    #[serde(default)]
    calls: Vec<CallEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CallEntry {
    receiver: String,
    method: String,
    arity: u32,
}

/// Identifiers: a letter, `_` or `$`, then letters, digits, `_`, `$` or `.`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '$' | '.'))
}

fn check_ident(value: &str, path: String) -> Result<(), ModelError> {
    if is_identifier(value) {
        Ok(())
    } else {
        Err(ModelError::Schema {
            path,
            message: format!("`{value}` is not a valid identifier"),
        })
    }
}

/// Parses and validates an interchange document.
pub fn ingest_model(document: &str) -> Result<ClassModel, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| ModelError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;

    let mut classes: Vec<ClassDecl> = Vec::with_capacity(doc.classes.len());
    let mut names = BTreeSet::new();
    for (ci, entry) in doc.classes.into_iter().enumerate() {
        check_ident(&entry.name, format!("classes[{ci}].name"))?;
        if let Some(sup) = &entry.extends {
            check_ident(sup, format!("classes[{ci}].extends"))?;
        }
        if !names.insert(entry.name.clone()) {
            return Err(ModelError::DuplicateClass(entry.name));
        }
        let mut methods = Vec::with_capacity(entry.methods.len());
        for (mi, m) in entry.methods.into_iter().enumerate() {
            check_ident(&m.name, format!("classes[{ci}].methods[{mi}].name"))?;
            let mut invocations = BTreeSet::new();
            for (ki, call) in m.calls.into_iter().enumerate() {
                let at = format!("classes[{ci}].methods[{mi}].calls[{ki}]");
                check_ident(&call.method, format!("{at}.method"))?;
                let receiver = if call.receiver == SELF_RECEIVER {
                    Receiver::SelfRef
                } else {
                    check_ident(&call.receiver, format!("{at}.receiver"))?;
                    Receiver::Type(call.receiver)
                };
                invocations.insert(MethodRef {
                    receiver,
                    method: call.method,
                    arity: call.arity,
                });
            }
            methods.push(MethodDecl {
                name: m.name,
                arity: m.arity,
                decision_points: m.decision_points,
                invocations,
            });
        }
        classes.push(ClassDecl {
            name: entry.name,
            superclass: entry.extends,
            methods,
        });
    }

    finalize(classes)
}

/// Builds a model from uniquely named classes and enforces every invariant:
/// inheritance cycles (including self-extension) first, then [`validate`].
pub fn finalize(classes: Vec<ClassDecl>) -> Result<ClassModel, ModelError> {
    let model = ClassModel::from_classes(classes);
    if let Some(class) = model
        .classes
        .values()
        .find(|c| c.superclass.as_deref() == Some(c.name.as_str()))
    {
        return Err(ModelError::InheritanceCycle(vec![class.name.clone()]));
    }
    if let Some(cycle) = find_cycles(&model).into_iter().next() {
        return Err(ModelError::InheritanceCycle(cycle));
    }
    let diagnostics = validate(&model);
    if !diagnostics.is_empty() {
        return Err(ModelError::Invalid(diagnostics));
    }
    Ok(model)
}

/// Renders a model as an interchange document accepted by [`ingest_model`].
pub fn serialize_model(model: &ClassModel) -> String {
    let doc = Document {
        classes: model
            .classes
            .values()
            .map(|c| ClassEntry {
                name: c.name.clone(),
                extends: c.superclass.clone(),
                methods: c
                    .methods
                    .iter()
                    .map(|m| MethodEntry {
                        name: m.name.clone(),
                        arity: m.arity,
                        decision_points: m.decision_points,
                        calls: m
                            .invocations
                            .iter()
                            .map(|call| CallEntry {
                                receiver: match &call.receiver {
                                    Receiver::SelfRef => SELF_RECEIVER.to_string(),
                                    Receiver::Type(t) => t.clone(),
                                },
                                method: call.method.clone(),
                                arity: call.arity,
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("class model documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> ClassModel {
        ClassModel::from_classes([
            ClassDecl::new("A"),
            ClassDecl::new("B").extending("A"),
            ClassDecl::new("C").extending("B"),
        ])
    }

    #[test]
    fn minimal_document() {
        let m = ingest_model(r#"{"classes":[{"name":"A","methods":[]}]}"#).unwrap();
        assert_eq!(m.classes.keys().collect::<Vec<_>>(), ["A"]);
        assert!(m.externals.is_empty());
    }

    #[test]
    fn two_class_cycle_is_named() {
        let err =
            ingest_model(r#"{"classes":[{"name":"A","extends":"B"},{"name":"B","extends":"A"}]}"#)
                .unwrap_err();
        match err {
            ModelError::InheritanceCycle(c) => assert_eq!(c, ["A", "B"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_extension_is_a_cycle_at_ingest() {
        let err = ingest_model(r#"{"classes":[{"name":"A","extends":"A"}]}"#).unwrap_err();
        assert!(matches!(err, ModelError::InheritanceCycle(c) if c == ["A"]));
    }

    #[test]
    fn undeclared_superclass_becomes_external() {
        let m = ingest_model(r#"{"classes":[{"name":"A","extends":"Framework"}]}"#).unwrap();
        assert_eq!(m.externals.iter().collect::<Vec<_>>(), ["Framework"]);
    }

    #[test]
    fn unknown_key_names_path() {
        let err = ingest_model(
            r#"{"classes":[{"name":"A","methods":[{"name":"m","arity":0,"weight":3}]}]}"#,
        )
        .unwrap_err();
        match err {
            ModelError::Schema { path, .. } => assert_eq!(path, "classes[0].methods[0].weight"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_identifier_names_path() {
        let err = ingest_model(
            r#"{"classes":[{"name":"A","methods":[{"name":"m","arity":0,
                "calls":[{"receiver":"a b","method":"x","arity":0}]}]}]}"#,
        )
        .unwrap_err();
        assert!(
            matches!(err, ModelError::Schema { ref path, .. } if path == "classes[0].methods[0].calls[0].receiver"),
            "{err}"
        );
    }

    #[test]
    fn duplicate_class_rejected() {
        let err = ingest_model(r#"{"classes":[{"name":"A"},{"name":"A"}]}"#).unwrap_err();
        assert!(matches!(err, ModelError::DuplicateClass(n) if n == "A"));
    }

    #[test]
    fn duplicate_method_rejected_at_ingest() {
        let err = ingest_model(
            r#"{"classes":[{"name":"A","methods":[{"name":"m","arity":1},{"name":"m","arity":1}]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::Invalid(d) if d.len() == 1));
    }

    #[test]
    fn validate_chain_is_clean() {
        assert!(validate(&chain()).is_empty());
    }

    #[test]
    fn validate_duplicate_method() {
        let model = ClassModel::from_classes([ClassDecl::new("A")
            .with_method(MethodDecl::new("m", 0))
            .with_method(MethodDecl::new("m", 0))
            .with_method(MethodDecl::new("m", 1))]);
        let d = validate(&model);
        assert_eq!(d.len(), 1);
        assert_eq!(
            d[0].kind,
            DiagnosticKind::DuplicateMethod {
                name: "m".into(),
                arity: 0
            }
        );
    }

    #[test]
    fn validate_self_superclass_reports_once() {
        let model = ClassModel::from_classes([ClassDecl::new("A").extending("A")]);
        let d = validate(&model);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::SelfSuperclass);
    }

    #[test]
    fn validate_reports_longer_cycle_and_dangling_names() {
        let mut model = ClassModel::from_classes([
            ClassDecl::new("B").extending("C"),
            ClassDecl::new("C").extending("D"),
            ClassDecl::new("D").extending("B"),
            ClassDecl::new("E")
                .with_method(MethodDecl::new("m", 0).calling(MethodRef::on_type("Ghost", "x", 0))),
        ]);
        model.externals.clear();
        let kinds: Vec<_> = validate(&model).into_iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::InheritanceCycle(vec![
            "B".into(),
            "C".into(),
            "D".into()
        ])));
        assert!(kinds.contains(&DiagnosticKind::UnresolvedReceiver("Ghost".into())));
        assert_eq!(kinds.len(), 2);
    }

    #[test]
    fn serialize_then_ingest_is_identity() {
        let model = ClassModel::from_classes([
            ClassDecl::new("A").with_method(
                MethodDecl::new("m", 2)
                    .with_decisions(3)
                    .calling(MethodRef::on_self("n", 0))
                    .calling(MethodRef::on_type("Sys", "out", 1)),
            ),
            ClassDecl::new("B").extending("A"),
            ClassDecl::new("C").extending("Ext"),
        ]);
        let back = ingest_model(&serialize_model(&model)).unwrap();
        assert_eq!(back, model);
    }
}
