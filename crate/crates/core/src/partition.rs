//! Partitions of a coordinate scope, with refinement order and meet.
//!
//! Blocks are pairwise-disjoint, nonempty coordinate sets; their union is
//! the partition's scope. The canonical form keeps blocks sorted by least
//! coordinate, so structural equality is partition equality. The meet (the
//! common refinement, computed blockwise as nonempty intersections) is the
//! lattice operation everything downstream relies on; joins are never
//! needed and not provided.
//!
//! Text syntax: blocks separated by `|`, coordinates within a block by `,`;
//! whitespace is insignificant. `p,q|r` denotes `{{p,q},{r}}`.

use crate::error::{Error, ParseError, Result};
use crate::space::{CoordSet, ProductSpace};

/// A partition of a scope into disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    scope: CoordSet,
    blocks: Vec<CoordSet>,
}

impl Partition {
    /// Builds a partition from its blocks; the scope is their union.
    ///
    /// Blocks must be nonempty and pairwise disjoint. An empty block list
    /// yields the (unique) partition of the empty scope.
    pub fn new(blocks: impl IntoIterator<Item = CoordSet>) -> Result<Self> {
        let mut blocks: Vec<CoordSet> = blocks.into_iter().collect();
        let mut scope = CoordSet::empty();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            if let Some(k) = scope.intersection(b).first() {
                return Err(Error::OverlappingBlocks(format!("{k}")));
            }
            scope = scope.union(b);
        }
        blocks.sort();
        Ok(Partition { scope, blocks })
    }

    /// The one-block partition of `scope` (no blocks when `scope` is empty).
    pub fn whole(scope: CoordSet) -> Self {
        if scope.is_empty() {
            Partition { scope, blocks: Vec::new() }
        } else {
            Partition { scope: scope.clone(), blocks: vec![scope] }
        }
    }

    /// The all-singletons partition of `scope`.
    pub fn singletons(scope: &CoordSet) -> Self {
        let blocks: Vec<CoordSet> =
            scope.iter().map(|k| CoordSet::from_ids(vec![k])).collect();
        Partition { scope: scope.clone(), blocks }
    }

    pub fn scope(&self) -> &CoordSet {
        &self.scope
    }

    /// Blocks in canonical order (by least coordinate).
    pub fn blocks(&self) -> &[CoordSet] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// True when there is at most one block.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// The block containing `k`, if `k` is in scope.
    pub fn block_of(&self, k: crate::space::CoordId) -> Option<&CoordSet> {
        self.blocks.iter().find(|b| b.contains(k))
    }

    /// Restriction to a sub-scope: intersects every block with `sub` and
    /// keeps the nonempty results.
    pub fn restrict(&self, sub: &CoordSet) -> Result<Partition> {
        if !sub.is_subset(&self.scope) {
            return Err(Error::OutsideScope(format!(
                "{}",
                sub.difference(&self.scope).first().expect("nonempty difference")
            )));
        }
        let blocks: Vec<CoordSet> = self
            .blocks
            .iter()
            .map(|b| b.intersection(sub))
            .filter(|b| !b.is_empty())
            .collect();
        // Intersections of disjoint sets stay disjoint; skip revalidation.
        let mut blocks = blocks;
        blocks.sort();
        Ok(Partition { scope: sub.clone(), blocks })
    }

    /// Is every block of `self` contained in some block of `other`?
    ///
    /// Both partitions must share a scope. Refinement is a partial order:
    /// the all-singletons partition refines everything, the one-block
    /// partition is refined by everything.
    pub fn is_refinement_of(&self, other: &Partition) -> Result<bool> {
        if self.scope != other.scope {
            return Err(Error::ScopeMismatch);
        }
        Ok(self
            .blocks
            .iter()
            .all(|a| other.blocks.iter().any(|b| a.is_subset(b))))
    }

    /// The common refinement: blocks are the nonempty pairwise
    /// intersections.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.scope != other.scope {
            return Err(Error::ScopeMismatch);
        }
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let c = a.intersection(b);
                if !c.is_empty() {
                    blocks.push(c);
                }
            }
        }
        blocks.sort();
        Ok(Partition { scope: self.scope.clone(), blocks })
    }

    /// Renders the partition in text syntax against `space` for names.
    pub fn to_text(&self, space: &ProductSpace) -> String {
        let blocks: Vec<String> = self.blocks.iter().map(|b| b.to_text(space)).collect();
        blocks.join("|")
    }
}

/// Meet of a nonempty family, folded left; the result is independent of
/// the order of the family.
pub fn meet_many(parts: &[Partition]) -> Result<Partition> {
    let (first, rest) = parts.split_first().ok_or(Error::EmptyFamily)?;
    let mut acc = first.clone();
    for p in rest {
        acc = acc.meet(p)?;
    }
    Ok(acc)
}

/// Parses the `p,q|r` syntax against `space`.
pub fn parse_partition(space: &ProductSpace, text: &str) -> Result<Partition> {
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for segment in text.split('|') {
        let mut ids = Vec::new();
        let mut inner = offset;
        for token in segment.split(',') {
            let name = token.trim();
            if name.is_empty() {
                return Err(Error::Parse(ParseError::new(inner, "empty coordinate name")));
            }
            let k = space.coord_id(name).ok_or_else(|| {
                Error::Parse(ParseError::new(
                    inner + (token.len() - token.trim_start().len()),
                    format!("unknown coordinate `{name}`"),
                ))
            })?;
            ids.push(k);
            inner += token.len() + 1;
        }
        if ids.is_empty() {
            return Err(Error::Parse(ParseError::new(offset, "empty block")));
        }
        let block = CoordSet::from_ids(ids.clone());
        if block.len() != ids.len() {
            return Err(Error::Parse(ParseError::new(offset, "coordinate repeated in block")));
        }
        blocks.push(block);
        offset += segment.len() + 1;
    }
    Partition::new(blocks)
}
