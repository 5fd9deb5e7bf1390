//! Finite product spaces and coordinate sets.
//!
//! A [`ProductSpace`] is an ordered list of named coordinates, each with a
//! finite, nonempty domain of value symbols. Everything else in the crate —
//! assignments, model sets, partitions — is defined relative to one. The
//! coordinate order declared here is *the* canonical order: it fixes how
//! assignments are ranked, how model-set members are enumerated, and how
//! partition blocks are displayed.
//!
//! | type            | role                                              |
//! |-----------------|---------------------------------------------------|
//! | [`CoordId`]     | index of a coordinate within its space            |
//! | [`ValueId`]     | index of a value within a coordinate's domain     |
//! | [`CoordSet`]    | sorted set of coordinates (a scope, or a block)   |
//! | [`ProductSpace`]| the ambient product                               |
//!
//! Internally an assignment over a scope is identified with its mixed-radix
//! rank: the first coordinate (in space order) is the most significant digit
//! and digits are domain indices. Ascending rank is therefore exactly
//! lexicographic order by coordinate order, then domain order. The rank
//! arithmetic lives in [`ScopeShape`], which the rest of the crate shares.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Upper bound on the bit-table size (in bits) a single scope may index.
///
/// This is a memory backstop, not a tuning knob: enumeration-heavy
/// operations take their own, much smaller bounds as parameters.
pub const MAX_TABLE_BITS: u128 = 1 << 28;

/// Index of a coordinate within its [`ProductSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordId(pub u32);

/// Index of a value symbol within one coordinate's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueId(pub u32);

impl CoordId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ValueId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Is `s` an identifier: `[A-Za-z_][A-Za-z0-9_']*`?
pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Is `s` usable as a value symbol in the text formats? Any non-whitespace
/// token that cannot be mistaken for a comment marker qualifies.
pub(crate) fn is_value_symbol(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('#') && s.chars().all(|c| !c.is_whitespace())
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Coordinate {
    name: String,
    domain: Vec<String>,
}

/// An ordered finite product of named coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    coords: Vec<Coordinate>,
}

impl ProductSpace {
    /// Builds a space from `(name, domain)` pairs.
    ///
    /// Names must be distinct identifiers; domains must be nonempty lists of
    /// distinct value symbols. Domain order is preserved and significant: it
    /// determines the canonical order of assignments.
    pub fn new<N, V>(coords: impl IntoIterator<Item = (N, Vec<V>)>) -> Result<Arc<Self>>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let mut out: Vec<Coordinate> = Vec::new();
        for (name, domain) in coords {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(Error::InvalidIdentifier(name));
            }
            if out.iter().any(|c| c.name == name) {
                return Err(Error::DuplicateCoordinate(name));
            }
            if domain.is_empty() {
                return Err(Error::EmptyDomain(name));
            }
            let mut values: Vec<String> = Vec::with_capacity(domain.len());
            for v in domain {
                let v = v.into();
                if !is_value_symbol(&v) {
                    return Err(Error::InvalidValueSymbol(v));
                }
                if values.contains(&v) {
                    return Err(Error::DuplicateValue { coord: name, value: v });
                }
                values.push(v);
            }
            out.push(Coordinate { name, domain: values });
        }
        Ok(Arc::new(ProductSpace { coords: out }))
    }

    /// Builds a space of Boolean coordinates, each with domain `0`, `1`.
    pub fn boolean<N: Into<String>>(names: impl IntoIterator<Item = N>) -> Result<Arc<Self>> {
        ProductSpace::new(names.into_iter().map(|n| (n.into(), vec!["0", "1"])))
    }

    /// Number of coordinates.
    pub fn coord_count(&self) -> usize {
        self.coords.len()
    }

    /// Name of coordinate `k`.
    pub fn coord_name(&self, k: CoordId) -> &str {
        &self.coords[k.index()].name
    }

    /// Domain of coordinate `k`, in declaration order.
    pub fn domain(&self, k: CoordId) -> &[String] {
        &self.coords[k.index()].domain
    }

    /// Looks up a coordinate by name.
    pub fn coord_id(&self, name: &str) -> Option<CoordId> {
        self.coords.iter().position(|c| c.name == name).map(|i| CoordId(i as u32))
    }

    /// Like [`coord_id`](Self::coord_id) but failing with
    /// [`Error::UnknownCoordinate`].
    pub fn require_coord(&self, name: &str) -> Result<CoordId> {
        self.coord_id(name).ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    /// Looks up a value symbol within the domain of `k`.
    pub fn value_id(&self, k: CoordId, symbol: &str) -> Result<ValueId> {
        self.coords[k.index()]
            .domain
            .iter()
            .position(|v| v == symbol)
            .map(|i| ValueId(i as u32))
            .ok_or_else(|| Error::ValueOutsideDomain {
                coord: self.coord_name(k).to_string(),
                value: symbol.to_string(),
            })
    }

    /// The symbol behind a `(coordinate, value)` pair.
    pub fn value_symbol(&self, k: CoordId, v: ValueId) -> &str {
        &self.coords[k.index()].domain[v.index()]
    }

    /// All coordinates of this space as a scope.
    pub fn full_scope(&self) -> CoordSet {
        CoordSet { ids: (0..self.coords.len() as u32).map(CoordId).collect() }
    }

    /// Resolves a list of names into a scope.
    pub fn scope_of<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<CoordSet> {
        let mut ids = Vec::new();
        for n in names {
            ids.push(self.require_coord(n)?);
        }
        Ok(CoordSet::from_ids(ids))
    }

    /// Does `other` denote the same product? Cheap pointer check first.
    pub(crate) fn same_space(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self == other
    }
}

pub(crate) fn ensure_same_space(a: &Arc<ProductSpace>, b: &Arc<ProductSpace>) -> Result<()> {
    if a.same_space(b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A set of coordinates, kept sorted in space order.
///
/// Doubles as a scope and as a partition block. `Ord` compares the sorted id
/// sequences lexicographically, which for disjoint blocks coincides with
/// ordering by least coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CoordSet {
    ids: Vec<CoordId>,
}

impl CoordSet {
    /// Builds a set from ids, sorting and deduplicating.
    pub fn from_ids(mut ids: Vec<CoordId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        CoordSet { ids }
    }

    pub fn empty() -> Self {
        CoordSet { ids: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Least coordinate, if the set is nonempty.
    pub fn first(&self) -> Option<CoordId> {
        self.ids.first().copied()
    }

    pub fn contains(&self, k: CoordId) -> bool {
        self.ids.binary_search(&k).is_ok()
    }

    /// Coordinates in space order.
    pub fn iter(&self) -> impl Iterator<Item = CoordId> + '_ {
        self.ids.iter().copied()
    }

    pub fn is_subset(&self, other: &CoordSet) -> bool {
        self.ids.iter().all(|k| other.contains(*k))
    }

    pub fn is_disjoint(&self, other: &CoordSet) -> bool {
        self.ids.iter().all(|k| !other.contains(*k))
    }

    pub fn intersection(&self, other: &CoordSet) -> CoordSet {
        CoordSet { ids: self.ids.iter().copied().filter(|k| other.contains(*k)).collect() }
    }

    pub fn union(&self, other: &CoordSet) -> CoordSet {
        let mut ids = self.ids.clone();
        ids.extend(other.ids.iter().copied());
        CoordSet::from_ids(ids)
    }

    /// Coordinates of `self` not in `other`.
    pub fn difference(&self, other: &CoordSet) -> CoordSet {
        CoordSet { ids: self.ids.iter().copied().filter(|k| !other.contains(*k)).collect() }
    }

    /// Renders the set as comma-separated coordinate names.
    pub fn to_text(&self, space: &ProductSpace) -> String {
        let names: Vec<&str> = self.ids.iter().map(|k| space.coord_name(*k)).collect();
        names.join(",")
    }
}

impl FromIterator<CoordId> for CoordSet {
    fn from_iter<T: IntoIterator<Item = CoordId>>(iter: T) -> Self {
        CoordSet::from_ids(iter.into_iter().collect())
    }
}

impl fmt::Display for CoordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Mixed-radix rank arithmetic for one scope of one space.
///
/// Digit `i` is the domain index of the scope's `i`-th coordinate (space
/// order); the first coordinate is the most significant digit. `size` is the
/// full product cardinality over the scope, checked against
/// [`MAX_TABLE_BITS`] at construction so that a bit table of that many bits
/// is always allocatable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ScopeShape {
    scope: CoordSet,
    radices: Vec<usize>,
    weights: Vec<usize>,
    size: usize,
}

impl ScopeShape {
    pub(crate) fn new(space: &ProductSpace, scope: CoordSet) -> Result<Self> {
        let radices: Vec<usize> = scope.iter().map(|k| space.domain(k).len()).collect();
        let mut size: u128 = 1;
        for r in &radices {
            size = size.saturating_mul(*r as u128);
            if size > MAX_TABLE_BITS {
                return Err(Error::ResourceLimit {
                    what: "model-set table size",
                    limit: MAX_TABLE_BITS as u64,
                    requested: u64::MAX,
                });
            }
        }
        let mut weights = vec![1usize; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * radices[i + 1];
        }
        Ok(ScopeShape { scope, radices, weights, size: size as usize })
    }

    pub(crate) fn scope(&self) -> &CoordSet {
        &self.scope
    }

    /// Product cardinality over the scope.
    pub(crate) fn size(&self) -> usize {
        self.size
    }

    /// Rank of an assignment given as values parallel to the scope order.
    pub(crate) fn rank_of(&self, values: &[ValueId]) -> usize {
        debug_assert_eq!(values.len(), self.weights.len());
        values.iter().zip(&self.weights).map(|(v, w)| v.index() * w).sum()
    }

    /// Values (parallel to the scope order) of the assignment with `rank`.
    pub(crate) fn values_at(&self, rank: usize) -> Vec<ValueId> {
        debug_assert!(rank < self.size);
        self.radices
            .iter()
            .zip(&self.weights)
            .map(|(radix, w)| ValueId(((rank / w) % radix) as u32))
            .collect()
    }

    /// Digit of `rank` at scope position `pos`.
    pub(crate) fn digit(&self, rank: usize, pos: usize) -> ValueId {
        ValueId(((rank / self.weights[pos]) % self.radices[pos]) as u32)
    }

    /// Position of coordinate `k` within this scope, if present.
    pub(crate) fn position(&self, k: CoordId) -> Option<usize> {
        self.scope.iter().position(|c| c == k)
    }

    /// Prepares rank projection from this scope onto `sub` (`sub ⊆ self`).
    pub(crate) fn projector(&self, sub: &ScopeShape) -> Result<Projector> {
        let mut terms = Vec::with_capacity(sub.scope.len());
        for (i, k) in sub.scope.iter().enumerate() {
            let pos = self.position(k).ok_or_else(|| {
                Error::OutsideScope(format!("{}", k))
            })?;
            terms.push(ProjTerm {
                div: self.weights[pos],
                modulus: self.radices[pos],
                mul: sub.weights[i],
            });
        }
        Ok(Projector { terms })
    }
}

#[derive(Debug, Clone, Copy)]
struct ProjTerm {
    div: usize,
    modulus: usize,
    mul: usize,
}

/// Maps ranks over a scope to ranks over a sub-scope by digit extraction.
#[derive(Debug, Clone)]
pub(crate) struct Projector {
    terms: Vec<ProjTerm>,
}

impl Projector {
    pub(crate) fn project(&self, rank: usize) -> usize {
        self.terms.iter().map(|t| ((rank / t.div) % t.modulus) * t.mul).sum()
    }
}
