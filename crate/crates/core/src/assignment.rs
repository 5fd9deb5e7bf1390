//! Partial assignments: one value per coordinate of a scope.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{ensure_same_space, CoordId, CoordSet, ProductSpace, ValueId};

/// A total map from the coordinates of a scope to values in their domains.
///
/// Assignments are immutable. Two assignments are equal when they agree on
/// space, scope and every value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    space: Arc<ProductSpace>,
    scope: CoordSet,
    /// Values parallel to `scope` in space order.
    values: Vec<ValueId>,
}

impl Assignment {
    /// Builds an assignment from `(coordinate name, value symbol)` pairs.
    pub fn new<'a>(
        space: &Arc<ProductSpace>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut bound: Vec<(CoordId, ValueId)> = Vec::new();
        for (name, symbol) in pairs {
            let k = space.require_coord(name)?;
            if bound.iter().any(|(b, _)| *b == k) {
                return Err(Error::DuplicateBinding(name.to_string()));
            }
            bound.push((k, space.value_id(k, symbol)?));
        }
        bound.sort_unstable_by_key(|(k, _)| *k);
        let scope = CoordSet::from_ids(bound.iter().map(|(k, _)| *k).collect());
        let values = bound.into_iter().map(|(_, v)| v).collect();
        Ok(Assignment { space: Arc::clone(space), scope, values })
    }

    /// The assignment with empty scope.
    pub fn empty(space: &Arc<ProductSpace>) -> Self {
        Assignment { space: Arc::clone(space), scope: CoordSet::empty(), values: Vec::new() }
    }

    pub(crate) fn from_parts(
        space: Arc<ProductSpace>,
        scope: CoordSet,
        values: Vec<ValueId>,
    ) -> Self {
        debug_assert_eq!(scope.len(), values.len());
        Assignment { space, scope, values }
    }

    pub fn space(&self) -> &Arc<ProductSpace> {
        &self.space
    }

    pub fn scope(&self) -> &CoordSet {
        &self.scope
    }

    /// Values parallel to the scope, in space order.
    pub fn values(&self) -> &[ValueId] {
        &self.values
    }

    /// The value at coordinate `k`, if `k` is in scope.
    pub fn get(&self, k: CoordId) -> Option<ValueId> {
        self.scope.iter().position(|c| c == k).map(|i| self.values[i])
    }

    /// The value symbol at coordinate `k`, if `k` is in scope.
    pub fn symbol(&self, k: CoordId) -> Option<&str> {
        self.get(k).map(|v| self.space.value_symbol(k, v))
    }

    /// Restriction to a sub-scope.
    ///
    /// Every coordinate of `sub` must lie in this assignment's scope.
    pub fn restrict(&self, sub: &CoordSet) -> Result<Assignment> {
        let mut values = Vec::with_capacity(sub.len());
        for k in sub.iter() {
            match self.get(k) {
                Some(v) => values.push(v),
                None => return Err(Error::OutsideScope(self.space.coord_name(k).to_string())),
            }
        }
        Ok(Assignment { space: Arc::clone(&self.space), scope: sub.clone(), values })
    }

    /// Combines two assignments with disjoint scopes into one over the union.
    pub fn union(&self, other: &Assignment) -> Result<Assignment> {
        ensure_same_space(&self.space, &other.space)?;
        if let Some(k) = self.scope.intersection(&other.scope).first() {
            return Err(Error::ScopesOverlap(self.space.coord_name(k).to_string()));
        }
        let scope = self.scope.union(&other.scope);
        let mut values = Vec::with_capacity(scope.len());
        for k in scope.iter() {
            values.push(self.get(k).or_else(|| other.get(k)).expect("covered by union"));
        }
        Ok(Assignment { space: Arc::clone(&self.space), scope, values })
    }

    /// Value symbols in scope order, space-separated: `1 0 a`.
    pub fn to_text(&self) -> String {
        let parts: Vec<&str> = self
            .scope
            .iter()
            .zip(&self.values)
            .map(|(k, v)| self.space.value_symbol(k, *v))
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
