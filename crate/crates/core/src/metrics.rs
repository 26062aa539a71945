//! WMC, DIT and RFC over a [`ClassModel`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{ClassDecl, ClassModel, Receiver};

/// How WMC weighs each method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WmcMode {
    /// Unit weight: WMC is the method count.
    #[default]
    Count,
    /// Each method weighs its cyclomatic complexity, `decision_points + 1`.
    Cyclomatic,
}

impl FromStr for WmcMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "count" => Ok(WmcMode::Count),
            "cyclomatic" => Ok(WmcMode::Cyclomatic),
            other => Err(format!("unknown WMC mode `{other}`")),
        }
    }
}

impl fmt::Display for WmcMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WmcMode::Count => "count",
            WmcMode::Cyclomatic => "cyclomatic",
        })
    }
}

/// Per-class (DIT, RFC, WMC) triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricVector {
    pub class_name: String,
    pub dit: u32,
    pub rfc: u32,
    pub wmc: u32,
}

impl MetricVector {
    pub fn new(class_name: impl Into<String>, dit: u32, rfc: u32, wmc: u32) -> Self {
        Self {
            class_name: class_name.into(),
            dit,
            rfc,
            wmc,
        }
    }
}

pub fn compute_wmc(class: &ClassDecl, mode: WmcMode) -> u32 {
    match mode {
        WmcMode::Count => class.methods.len() as u32,
        WmcMode::Cyclomatic => class.methods.iter().map(|m| m.decision_points + 1).sum(),
    }
}

/// Extends-edges from `class` to its root. An external superclass counts as
/// one edge and ends the walk.
pub fn compute_dit(class: &ClassDecl, model: &ClassModel) -> u32 {
    let mut depth = 0;
    let mut current = class;
    while let Some(sup) = &current.superclass {
        depth += 1;
        match model.classes.get(sup) {
            // bound guards against models that skipped validation
            Some(next) if (depth as usize) <= model.classes.len() => current = next,
            _ => break,
        }
    }
    depth
}

/// Size of the response set: own methods plus distinct non-self callees, one level deep.
/// Receivers are already resolved names, so the model is not consulted.
pub fn compute_rfc(class: &ClassDecl, _model: &ClassModel) -> u32 {
    let mut response: BTreeSet<(&str, &str, u32)> = class
        .methods
        .iter()
        .map(|m| (class.name.as_str(), m.name.as_str(), m.arity))
        .collect();
    for call in class.methods.iter().flat_map(|m| &m.invocations) {
        if let Receiver::Type(receiver) = &call.receiver {
            response.insert((receiver.as_str(), call.method.as_str(), call.arity));
        }
    }
    response.len() as u32
}

/// One vector per declared class, ordered by class name.
pub fn compute_all(model: &ClassModel, mode: WmcMode) -> Vec<MetricVector> {
    let classes: Vec<&ClassDecl> = model.classes.values().collect();
    classes
        .par_iter()
        .map(|class| MetricVector {
            class_name: class.name.clone(),
            dit: compute_dit(class, model),
            rfc: compute_rfc(class, model),
            wmc: compute_wmc(class, mode),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MethodDecl, MethodRef};

    fn straight(name: &str, n: usize) -> ClassDecl {
        (0..n).fold(ClassDecl::new(name), |c, i| {
            c.with_method(MethodDecl::new(format!("m{i}"), 0))
        })
    }

    #[test]
    fn wmc_empty_class() {
        let c = ClassDecl::new("E");
        assert_eq!(compute_wmc(&c, WmcMode::Count), 0);
        assert_eq!(compute_wmc(&c, WmcMode::Cyclomatic), 0);
    }

    #[test]
    fn wmc_modes_coincide_without_branches() {
        let c = straight("S", 5);
        assert_eq!(compute_wmc(&c, WmcMode::Count), 5);
        assert_eq!(compute_wmc(&c, WmcMode::Cyclomatic), 5);
    }

    #[test]
    fn wmc_cyclomatic_sums_decisions_plus_one() {
        let c = ClassDecl::new("K")
            .with_method(MethodDecl::new("a", 0).with_decisions(2))
            .with_method(MethodDecl::new("b", 0))
            .with_method(MethodDecl::new("c", 0).with_decisions(1));
        assert_eq!(compute_wmc(&c, WmcMode::Count), 3);
        assert_eq!(compute_wmc(&c, WmcMode::Cyclomatic), 6);
    }

    #[test]
    fn dit_cases() {
        let model = ClassModel::from_classes([
            ClassDecl::new("A"),
            ClassDecl::new("B").extending("A"),
            ClassDecl::new("C").extending("B"),
            ClassDecl::new("D").extending("External"),
        ]);
        let dit = |n: &str| compute_dit(model.get(n).unwrap(), &model);
        assert_eq!(dit("A"), 0);
        assert_eq!(dit("C"), 2);
        assert_eq!(dit("D"), 1);
    }

    #[test]
    fn dit_terminates_on_unvalidated_cycle() {
        let model = ClassModel::from_classes([
            ClassDecl::new("A").extending("B"),
            ClassDecl::new("B").extending("A"),
        ]);
        assert!(compute_dit(model.get("A").unwrap(), &model) <= 3);
    }

    #[test]
    fn rfc_without_calls_is_method_count() {
        let model = ClassModel::from_classes([straight("S", 4)]);
        assert_eq!(compute_rfc(model.get("S").unwrap(), &model), 4);
    }

    #[test]
    fn rfc_dedupes_shared_call() {
        let call = MethodRef::on_type("X", "foo", 1);
        let c = ClassDecl::new("C")
            .with_method(MethodDecl::new("a", 0).calling(call.clone()))
            .with_method(MethodDecl::new("b", 0).calling(call));
        let model = ClassModel::from_classes([c]);
        assert_eq!(compute_rfc(model.get("C").unwrap(), &model), 3);
    }

    #[test]
    fn rfc_mixed_receivers() {
        let c = ClassDecl::new("C")
            .with_method(
                MethodDecl::new("m1", 0)
                    .calling(MethodRef::on_type("X", "a", 0))
                    .calling(MethodRef::on_type("X", "b", 0)),
            )
            .with_method(MethodDecl::new("m2", 0).calling(MethodRef::on_type("Y", "a", 0)))
            .with_method(MethodDecl::new("m3", 0).calling(MethodRef::on_self("m1", 0)));
        let model = ClassModel::from_classes([c]);
        assert_eq!(compute_rfc(model.get("C").unwrap(), &model), 6);
    }

    #[test]
    fn rfc_call_to_own_method_by_class_name_is_not_new() {
        let c = ClassDecl::new("C")
            .with_method(MethodDecl::new("make", 0))
            .with_method(MethodDecl::new("use_it", 0).calling(MethodRef::on_type("C", "make", 0)));
        let model = ClassModel::from_classes([c]);
        assert_eq!(compute_rfc(model.get("C").unwrap(), &model), 2);
    }

    #[test]
    fn compute_all_orders_by_name_and_skips_externals() {
        let model = ClassModel::from_classes([
            ClassDecl::new("Zed").extending("Ext"),
            ClassDecl::new("Alpha"),
        ]);
        let names: Vec<_> = compute_all(&model, WmcMode::Count)
            .into_iter()
            .map(|v| v.class_name)
            .collect();
        assert_eq!(names, ["Alpha", "Zed"]);
        assert!(compute_all(&ClassModel::default(), WmcMode::Count).is_empty());
    }
}
