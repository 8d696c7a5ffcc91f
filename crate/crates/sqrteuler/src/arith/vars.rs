use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Index of a variable inside a [`VarSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, PartialEq, Eq)]
struct VarSetInner {
    names: Vec<String>,
    degrees: Vec<i64>,
    by_name: BTreeMap<String, VarId>,
}

/// An ordered table of named variables with integer degrees.
///
/// Monomial degrees are always weighted by this table, so two polynomials
/// can only interact when they share the same table. Cloning is cheap
/// (`Arc`); equality is structural.
#[derive(Debug, Clone)]
pub struct VarSet(Arc<VarSetInner>);

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for VarSet {}

impl VarSet {
    /// Build a table from `(name, degree)` pairs. Panics on duplicate names.
    pub fn new(vars: &[(&str, i64)]) -> Self {
        let mut names = Vec::with_capacity(vars.len());
        let mut degrees = Vec::with_capacity(vars.len());
        let mut by_name = BTreeMap::new();
        for (i, (n, d)) in vars.iter().enumerate() {
            let prev = by_name.insert(n.to_string(), VarId(i as u32));
            assert!(prev.is_none(), "duplicate variable name {n}");
            names.push(n.to_string());
            degrees.push(*d);
        }
        VarSet(Arc::new(VarSetInner {
            names,
            degrees,
            by_name,
        }))
    }

    /// Empty table (constants only).
    pub fn empty() -> Self {
        VarSet::new(&[])
    }

    /// A new table with extra variables appended. Existing ids stay valid.
    pub fn extend(&self, extra: &[(&str, i64)]) -> Self {
        let mut all: Vec<(&str, i64)> = self
            .0
            .names
            .iter()
            .zip(&self.0.degrees)
            .map(|(n, d)| (n.as_str(), *d))
            .collect();
        all.extend_from_slice(extra);
        VarSet::new(&all)
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.0.by_name.get(name).copied()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.0.names[v.index()]
    }

    pub fn degree(&self, v: VarId) -> i64 {
        self.0.degrees[v.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.len() as u32).map(VarId)
    }

    /// Pairs `(name, degree)` in table order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, i64)> + '_ {
        self.0
            .names
            .iter()
            .map(|s| s.as_str())
            .zip(self.0.degrees.iter().copied())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .map(|(n, d)| format!("{n}:{d}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
