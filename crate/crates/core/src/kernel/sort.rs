use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A sort name. Built-in sorts are available through the associated
/// constructors; user sorts are declared on a [`Signature`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Sort(String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn agent() -> Self {
        Sort::new("Agent")
    }
    pub fn action_type() -> Self {
        Sort::new("ActionType")
    }
    pub fn action() -> Self {
        Sort::new("Action")
    }
    pub fn event() -> Self {
        Sort::new("Event")
    }
    pub fn moment() -> Self {
        Sort::new("Moment")
    }
    pub fn fluent() -> Self {
        Sort::new("Fluent")
    }
    pub fn boolean() -> Self {
        Sort::new("Boolean")
    }
    pub fn object() -> Self {
        Sort::new("Object")
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSig {
    pub args: Vec<Sort>,
    pub result: Sort,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("sort `{0}` is already declared")]
    DuplicateSort(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("declaring `{sort}` under `{parent}` would make the subsort relation cyclic")]
    CyclicSort { sort: String, parent: String },
    #[error("symbol `{name}` is already declared with a different signature")]
    Redeclared { name: String },
    #[error("`{0}` is a built-in symbol and cannot be redeclared")]
    Builtin(String),
}

/// Sort, constant, function and predicate declarations.
///
/// Subsorts form a forest: every sort has at most one parent, so any two
/// sorts that share an ancestor have a unique least upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    parents: BTreeMap<Sort, Option<Sort>>,
    constants: BTreeMap<String, Sort>,
    functions: BTreeMap<String, FunctionSig>,
    predicates: BTreeMap<String, Vec<Sort>>,
}

pub const EQUALITY: &str = "=";

const BUILTIN_SORTS: &[&str] = &[
    "Agent",
    "ActionType",
    "Action",
    "Event",
    "Moment",
    "Fluent",
    "Boolean",
    "Object",
];
const BUILTIN_FUNCTIONS: &[&str] = &["action", "admires"];
const BUILTIN_PREDICATES: &[&str] = &[
    "holds",
    "happens",
    "prior",
    "initiates",
    "terminates",
    "pleased",
    "exemplar",
    EQUALITY,
];

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    /// A signature holding the built-in sorts and event-calculus symbols.
    pub fn new() -> Self {
        let mut parents = BTreeMap::new();
        for s in [
            Sort::agent(),
            Sort::action_type(),
            Sort::event(),
            Sort::moment(),
            Sort::fluent(),
            Sort::boolean(),
            Sort::object(),
        ] {
            parents.insert(s, None);
        }
        parents.insert(Sort::action(), Some(Sort::event()));

        let mut functions = BTreeMap::new();
        functions.insert(
            "action".to_string(),
            FunctionSig {
                args: vec![Sort::agent(), Sort::action_type()],
                result: Sort::action(),
            },
        );
        functions.insert(
            "admires".to_string(),
            FunctionSig {
                args: vec![Sort::agent(), Sort::agent(), Sort::action_type()],
                result: Sort::fluent(),
            },
        );

        let mut predicates = BTreeMap::new();
        let m = Sort::moment;
        predicates.insert("holds".to_string(), vec![Sort::fluent(), m()]);
        predicates.insert("happens".to_string(), vec![Sort::event(), m()]);
        predicates.insert("prior".to_string(), vec![m(), m()]);
        predicates.insert(
            "initiates".to_string(),
            vec![Sort::event(), Sort::fluent(), m()],
        );
        predicates.insert(
            "terminates".to_string(),
            vec![Sort::event(), Sort::fluent(), m()],
        );
        predicates.insert("pleased".to_string(), vec![Sort::agent(), m()]);
        predicates.insert("exemplar".to_string(), vec![Sort::agent(), Sort::agent()]);

        Signature {
            parents,
            constants: BTreeMap::new(),
            functions,
            predicates,
        }
    }

    pub fn declare_sort(&mut self, sort: Sort, parent: Option<Sort>) -> Result<(), SignatureError> {
        if self.parents.contains_key(&sort) {
            return Err(SignatureError::DuplicateSort(sort.0));
        }
        if let Some(p) = &parent {
            if p == &sort {
                return Err(SignatureError::CyclicSort {
                    sort: sort.0.clone(),
                    parent: p.0.clone(),
                });
            }
            if !self.parents.contains_key(p) {
                return Err(SignatureError::UnknownSort(p.0.clone()));
            }
        }
        // A fresh sort cannot close a cycle: it has no descendants yet.
        self.parents.insert(sort, parent);
        Ok(())
    }

    pub fn declare_constant(&mut self, name: &str, sort: Sort) -> Result<(), SignatureError> {
        self.require_sort(&sort)?;
        match self.constants.get(name) {
            Some(existing) if *existing != sort => Err(SignatureError::Redeclared {
                name: name.to_string(),
            }),
            _ => {
                self.constants.insert(name.to_string(), sort);
                Ok(())
            }
        }
    }

    pub fn declare_function(
        &mut self,
        name: &str,
        args: Vec<Sort>,
        result: Sort,
    ) -> Result<(), SignatureError> {
        if BUILTIN_FUNCTIONS.contains(&name) {
            return Err(SignatureError::Builtin(name.to_string()));
        }
        for s in args.iter().chain(std::iter::once(&result)) {
            self.require_sort(s)?;
        }
        let sig = FunctionSig { args, result };
        match self.functions.get(name) {
            Some(existing) if *existing != sig => Err(SignatureError::Redeclared {
                name: name.to_string(),
            }),
            _ => {
                self.functions.insert(name.to_string(), sig);
                Ok(())
            }
        }
    }

    pub fn declare_predicate(&mut self, name: &str, args: Vec<Sort>) -> Result<(), SignatureError> {
        if BUILTIN_PREDICATES.contains(&name) {
            return Err(SignatureError::Builtin(name.to_string()));
        }
        for s in &args {
            self.require_sort(s)?;
        }
        match self.predicates.get(name) {
            Some(existing) if *existing != args => Err(SignatureError::Redeclared {
                name: name.to_string(),
            }),
            _ => {
                self.predicates.insert(name.to_string(), args);
                Ok(())
            }
        }
    }

    fn require_sort(&self, sort: &Sort) -> Result<(), SignatureError> {
        if self.parents.contains_key(sort) {
            Ok(())
        } else {
            Err(SignatureError::UnknownSort(sort.0.clone()))
        }
    }

    pub fn has_sort(&self, sort: &Sort) -> bool {
        self.parents.contains_key(sort)
    }

    pub fn parent(&self, sort: &Sort) -> Option<&Sort> {
        self.parents.get(sort).and_then(|p| p.as_ref())
    }

    /// Reflexive-transitive subsort test.
    pub fn is_subsort(&self, sub: &Sort, sup: &Sort) -> bool {
        let mut cur = Some(sub);
        while let Some(s) = cur {
            if s == sup {
                return true;
            }
            cur = self.parent(s);
        }
        false
    }

    fn ancestors<'a>(&'a self, sort: &'a Sort) -> Vec<&'a Sort> {
        let mut out = Vec::new();
        let mut cur = Some(sort);
        while let Some(s) = cur {
            out.push(s);
            cur = self.parent(s);
        }
        out
    }

    /// Least common supersort, if the two sorts share a root.
    pub fn join(&self, a: &Sort, b: &Sort) -> Option<Sort> {
        let up: BTreeSet<&Sort> = self.ancestors(b).into_iter().collect();
        self.ancestors(a)
            .into_iter()
            .find(|s| up.contains(s))
            .cloned()
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.parents.keys()
    }

    pub fn constant_sort(&self, name: &str) -> Option<&Sort> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &Sort)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Constants whose sort is `sort` or one of its subsorts.
    pub fn constants_of<'a>(&'a self, sort: &'a Sort) -> impl Iterator<Item = &'a str> + 'a {
        self.constants
            .iter()
            .filter(move |(_, s)| self.is_subsort(s, sort))
            .map(|(k, _)| k.as_str())
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSig> {
        self.functions.get(name)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &FunctionSig)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn predicate(&self, name: &str) -> Option<&[Sort]> {
        self.predicates.get(name).map(|v| v.as_slice())
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &[Sort])> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn is_builtin_predicate(name: &str) -> bool {
        BUILTIN_PREDICATES.contains(&name)
    }

    pub fn is_builtin_function(name: &str) -> bool {
        BUILTIN_FUNCTIONS.contains(&name)
    }

    pub fn is_builtin_sort(sort: &Sort) -> bool {
        BUILTIN_SORTS.contains(&sort.name())
    }
}
