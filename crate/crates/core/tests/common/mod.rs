#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use ckdp_core::model::{finalize, ClassDecl, ClassModel, MethodDecl, MethodRef, Receiver};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Hand-counted (class, dit, rfc, wmc count, wmc cyclomatic) for the corpus.
pub const CORPUS_EXPECTED: &[(&str, u32, u32, u32, u32)] = &[
    ("Circle", 1, 5, 3, 4),
    ("Logger", 0, 2, 2, 5),
    ("Polygon", 1, 2, 2, 2),
    ("Rectangle", 2, 7, 4, 5),
    ("Shape", 0, 4, 3, 3),
    ("Square", 3, 7, 4, 6),
];

/// Straight-from-the-definition metrics, kept deliberately naive.
pub mod oracle {
    use super::*;

    pub fn wmc_count(c: &ClassDecl) -> u32 {
        c.methods.len() as u32
    }

    pub fn wmc_cyclomatic(c: &ClassDecl) -> u32 {
        let mut total = 0;
        for m in &c.methods {
            total += m.decision_points + 1;
        }
        total
    }

    /// Edges on the path to the root; an undeclared parent counts as one more
    /// edge and ends the path.
    pub fn dit(name: &str, model: &ClassModel) -> u32 {
        let parents: HashMap<&str, Option<&str>> = model
            .classes
            .values()
            .map(|c| (c.name.as_str(), c.superclass.as_deref()))
            .collect();
        let mut depth = 0;
        let mut current = name;
        loop {
            match parents.get(current) {
                Some(Some(parent)) => {
                    depth += 1;
                    current = parent;
                }
                Some(None) => return depth,
                // Undeclared parent: the edge to it was already counted.
                None => return depth,
            }
        }
    }

    /// Size of the response set: own methods plus distinct non-self callees,
    /// each keyed as `Owner::name/arity`.
    pub fn rfc(c: &ClassDecl) -> u32 {
        let mut response: HashSet<String> = HashSet::new();
        for m in &c.methods {
            response.insert(format!("{}::{}/{}", c.name, m.name, m.arity));
        }
        for m in &c.methods {
            for call in &m.invocations {
                if let Receiver::Type(owner) = &call.receiver {
                    response.insert(format!("{}::{}/{}", owner, call.method, call.arity));
                }
            }
        }
        response.len() as u32
    }
}

const METHOD_NAMES: &[&str] = &["run", "get", "set", "size", "init", "close"];
const EXTERNALS: &[&str] = &["Ext", "Lib", "Sys"];

/// A valid random model with at most 10 classes of at most 8 methods each.
/// Inheritance is acyclic by construction (parents have smaller indices).
pub fn random_model(rng: &mut ChaCha8Rng) -> ClassModel {
    let n = rng.gen_range(1..=10);
    let names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let mut classes = Vec::with_capacity(n);
    for (i, name) in names.iter().enumerate() {
        let mut class = ClassDecl::new(name.clone());
        match rng.gen_range(0..3) {
            0 if i > 0 => class = class.extending(names[rng.gen_range(0..i)].clone()),
            1 => class = class.extending(*EXTERNALS.choose(rng).unwrap()),
            _ => {}
        }
        let mut keys = HashSet::new();
        for _ in 0..rng.gen_range(0..=8) {
            let method = *METHOD_NAMES.choose(rng).unwrap();
            let arity = rng.gen_range(0..3);
            if !keys.insert((method, arity)) {
                continue;
            }
            let mut decl = MethodDecl::new(method, arity).with_decisions(rng.gen_range(0..5));
            for _ in 0..rng.gen_range(0..5) {
                let callee = *METHOD_NAMES.choose(rng).unwrap();
                let callee_arity = rng.gen_range(0..3);
                let call = match rng.gen_range(0..3) {
                    0 => MethodRef::on_self(callee, callee_arity),
                    1 => {
                        MethodRef::on_type(names.choose(rng).unwrap().clone(), callee, callee_arity)
                    }
                    _ => MethodRef::on_type(*EXTERNALS.choose(rng).unwrap(), callee, callee_arity),
                };
                decl = decl.calling(call);
            }
            class = class.with_method(decl);
        }
        classes.push(class);
    }
    finalize(classes).expect("generated models are valid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
