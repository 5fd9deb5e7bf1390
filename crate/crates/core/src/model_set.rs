//! Model sets: subsets of the product over a scope.
//!
//! A [`ModelSet`] holds the members as a bit table indexed by mixed-radix
//! rank, so membership is O(1) and iteration yields members in canonical
//! order (lexicographic by coordinate order, then domain order) for free.
//! The table covers the full product over the set's *scope*, which may be
//! any subset of the space's coordinates; the empty set and the empty scope
//! are both representable.
//!
//! The module also implements the plain-text interchange format:
//!
//! ```text
//! # comment lines start with '#'
//! p q r
//! 0 0 1
//! 1 1 0
//! ```
//!
//! The first effective line names the coordinates; every further line is one
//! member, value symbols in coordinate order. When a file is read without an
//! ambient space, domains are inferred per coordinate: if every symbol seen
//! is `0` or `1` the domain is `0 1`, otherwise it is the distinct symbols
//! seen, sorted. Output is always in canonical member order, so parsing and
//! re-emitting a file normalizes it.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::assignment::Assignment;
use crate::error::{Error, ParseError, Result};
use crate::space::{
    ensure_same_space, is_identifier, is_value_symbol, CoordId, CoordSet, ProductSpace,
    ScopeShape, ValueId,
};

/// A finite set of assignments sharing one scope.
#[derive(Debug, Clone)]
pub struct ModelSet {
    space: Arc<ProductSpace>,
    shape: ScopeShape,
    bits: FixedBitSet,
}

impl PartialEq for ModelSet {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_space(&other.space)
            && self.shape.scope() == other.shape.scope()
            && self.bits == other.bits
    }
}

impl Eq for ModelSet {}

impl ModelSet {
    /// The empty set over `scope`.
    pub fn empty(space: &Arc<ProductSpace>, scope: CoordSet) -> Result<Self> {
        let shape = ScopeShape::new(space, scope)?;
        let bits = FixedBitSet::with_capacity(shape.size());
        Ok(ModelSet { space: Arc::clone(space), shape, bits })
    }

    /// The full product over `scope`.
    pub fn full(space: &Arc<ProductSpace>, scope: CoordSet) -> Result<Self> {
        let mut s = ModelSet::empty(space, scope)?;
        s.bits.insert_range(..);
        Ok(s)
    }

    /// Collects members into a set. All must share `scope` and the space.
    pub fn from_members(
        space: &Arc<ProductSpace>,
        scope: CoordSet,
        members: impl IntoIterator<Item = Assignment>,
    ) -> Result<Self> {
        let mut s = ModelSet::empty(space, scope)?;
        for m in members {
            ensure_same_space(space, m.space())?;
            if m.scope() != s.shape.scope() {
                return Err(Error::ScopeMismatch);
            }
            let rank = s.shape.rank_of(m.values());
            s.bits.insert(rank);
        }
        Ok(s)
    }

    pub(crate) fn from_parts(space: Arc<ProductSpace>, shape: ScopeShape, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), shape.size());
        ModelSet { space, shape, bits }
    }

    pub(crate) fn shape(&self) -> &ScopeShape {
        &self.shape
    }

    pub(crate) fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn space(&self) -> &Arc<ProductSpace> {
        &self.space
    }

    pub fn scope(&self) -> &CoordSet {
        self.shape.scope()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cardinality of the full product over this set's scope.
    pub fn product_size(&self) -> usize {
        self.shape.size()
    }

    /// Members in canonical order.
    pub fn members(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.bits.ones().map(move |rank| self.member_at(rank))
    }

    pub(crate) fn member_at(&self, rank: usize) -> Assignment {
        Assignment::from_parts(
            Arc::clone(&self.space),
            self.shape.scope().clone(),
            self.shape.values_at(rank),
        )
    }

    /// Membership test. The candidate must live on the same scope.
    pub fn contains(&self, a: &Assignment) -> Result<bool> {
        ensure_same_space(&self.space, a.space())?;
        if a.scope() != self.shape.scope() {
            return Err(Error::ScopeMismatch);
        }
        Ok(self.bits.contains(self.shape.rank_of(a.values())))
    }

    /// Projection onto a sub-scope; distinct members may collapse.
    pub fn project(&self, sub: &CoordSet) -> Result<ModelSet> {
        if !sub.is_subset(self.shape.scope()) {
            let k = sub.difference(self.shape.scope()).first().expect("nonempty difference");
            return Err(Error::OutsideScope(self.space.coord_name(k).to_string()));
        }
        let sub_shape = ScopeShape::new(&self.space, sub.clone())?;
        let proj = self.shape.projector(&sub_shape)?;
        let mut bits = FixedBitSet::with_capacity(sub_shape.size());
        for rank in self.bits.ones() {
            bits.insert(proj.project(rank));
        }
        Ok(ModelSet { space: Arc::clone(&self.space), shape: sub_shape, bits })
    }

    /// First member (canonical order) whose restriction to `partial`'s scope
    /// equals `partial`.
    ///
    /// Fails with [`Error::EmptyModelSet`] when the set has no members at
    /// all, and with [`Error::NoCompletion`] when no member agrees with
    /// `partial`.
    pub fn complete(&self, partial: &Assignment) -> Result<Assignment> {
        ensure_same_space(&self.space, partial.space())?;
        if !partial.scope().is_subset(self.shape.scope()) {
            let k = partial
                .scope()
                .difference(self.shape.scope())
                .first()
                .expect("nonempty difference");
            return Err(Error::OutsideScope(self.space.coord_name(k).to_string()));
        }
        if self.is_empty() {
            return Err(Error::EmptyModelSet);
        }
        let sub_shape = ScopeShape::new(&self.space, partial.scope().clone())?;
        let proj = self.shape.projector(&sub_shape)?;
        let target = sub_shape.rank_of(partial.values());
        for rank in self.bits.ones() {
            if proj.project(rank) == target {
                return Ok(self.member_at(rank));
            }
        }
        Err(Error::NoCompletion)
    }

    /// The values coordinate `k` actually takes across the members, in
    /// domain order.
    pub fn coordinate_values(&self, k: CoordId) -> Result<Vec<ValueId>> {
        let pos = self
            .shape
            .position(k)
            .ok_or_else(|| Error::OutsideScope(self.space.coord_name(k).to_string()))?;
        let mut seen = vec![false; self.space.domain(k).len()];
        for rank in self.bits.ones() {
            seen[self.shape.digit(rank, pos).index()] = true;
        }
        Ok(seen
            .iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| ValueId(i as u32))
            .collect())
    }

    /// Intersection of two sets over the same scope.
    pub fn intersect(&self, other: &ModelSet) -> Result<ModelSet> {
        ensure_same_space(&self.space, &other.space)?;
        if self.shape.scope() != other.shape.scope() {
            return Err(Error::ScopeMismatch);
        }
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(ModelSet { space: Arc::clone(&self.space), shape: self.shape.clone(), bits })
    }

    /// Canonical order on sets over one scope: compares the member lists
    /// (which are already canonically ordered) lexicographically.
    pub fn canonical_cmp(&self, other: &ModelSet) -> Ordering {
        debug_assert!(self.space.same_space(&other.space));
        debug_assert_eq!(self.shape.scope(), other.shape.scope());
        let mut a = self.bits.ones();
        let mut b = other.bits.ones();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }

    /// Renders the set in the plain-text format (header plus one line per
    /// member, canonical order, `\n`-terminated).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> =
            self.shape.scope().iter().map(|k| self.space.coord_name(k)).collect();
        out.push_str(&names.join(" "));
        out.push('\n');
        for m in self.members() {
            out.push_str(&m.to_text());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Effective lines of a text input: trimmed, comment and blank lines dropped,
/// with their 1-based line numbers.
pub(crate) fn effective_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_err(line: usize, offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(offset, msg).at_line(line))
}

/// Parses the text format, inferring the space from the file itself.
///
/// Domain inference is per coordinate: symbols all within `{0,1}` give the
/// Boolean domain `0 1`; anything else gives the distinct symbols seen, in
/// sorted order. Duplicate member lines collapse (sets, not lists).
pub fn parse_model_set(text: &str) -> Result<ModelSet> {
    let (names, rows) = split_header_rows(text)?;
    let mut domains: Vec<Vec<String>> = vec![Vec::new(); names.len()];
    for (_, row) in &rows {
        for (i, symbol) in row.iter().enumerate() {
            if !domains[i].iter().any(|v| v == symbol) {
                domains[i].push(symbol.clone());
            }
        }
    }
    for dom in &mut domains {
        if dom.iter().all(|v| v == "0" || v == "1") {
            *dom = vec!["0".to_string(), "1".to_string()];
        } else {
            dom.sort();
        }
    }
    let space = ProductSpace::new(names.iter().cloned().zip(domains))?;
    build_set(&space, names, rows)
}

/// Parses the text format against an existing space.
///
/// The header must name exactly the coordinates of `scope` (in space order),
/// and every symbol must lie in the corresponding domain.
pub fn parse_model_set_in(
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
    text: &str,
) -> Result<ModelSet> {
    let (names, rows) = split_header_rows(text)?;
    let expected: Vec<&str> = scope.iter().map(|k| space.coord_name(k)).collect();
    if names != expected {
        return Err(Error::Parse(ParseError::new(
            0,
            format!("header names `{}`, expected `{}`", names.join(" "), expected.join(" ")),
        )));
    }
    build_set(space, names, rows)
}

/// A parsed data row: its 1-based line number and its value symbols.
type NumberedRow = (usize, Vec<String>);

fn split_header_rows(text: &str) -> Result<(Vec<String>, Vec<NumberedRow>)> {
    let mut lines = effective_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::Parse(ParseError::new(0, "input has no header line")))?;
    let names: Vec<String> = header.split_whitespace().map(str::to_string).collect();
    for n in &names {
        if !is_identifier(n) {
            return Err(parse_err(header_line, 0, format!("`{n}` is not a valid coordinate name")));
        }
    }
    let mut seen = names.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != names.len() {
        return Err(parse_err(header_line, 0, "duplicate coordinate name in header"));
    }
    let mut rows = Vec::new();
    for (line_no, line) in lines {
        let row: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        if row.len() != names.len() {
            return Err(parse_err(
                line_no,
                0,
                format!("row has {} values, header declares {}", row.len(), names.len()),
            ));
        }
        for v in &row {
            if !is_value_symbol(v) {
                return Err(parse_err(line_no, 0, format!("`{v}` is not a valid value symbol")));
            }
        }
        rows.push((line_no, row));
    }
    Ok((names, rows))
}

fn build_set(
    space: &Arc<ProductSpace>,
    names: Vec<String>,
    rows: Vec<NumberedRow>,
) -> Result<ModelSet> {
    let scope = space.scope_of(names.iter().map(String::as_str))?;
    // The header is required to list coordinates in space order so that the
    // row layout and the canonical output layout coincide.
    let in_order: Vec<&str> = scope.iter().map(|k| space.coord_name(k)).collect();
    if in_order != names.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(Error::Parse(ParseError::new(
            0,
            format!("coordinates must appear in space order (`{}`)", in_order.join(" ")),
        )));
    }
    let mut set = ModelSet::empty(space, scope.clone())?;
    for (line_no, row) in rows {
        let mut values = Vec::with_capacity(row.len());
        for (k, symbol) in scope.iter().zip(&row) {
            values.push(
                space
                    .value_id(k, symbol)
                    .map_err(|e| parse_err(line_no, 0, e.to_string()))?,
            );
        }
        let rank = set.shape.rank_of(&values);
        set.bits.insert(rank);
    }
    Ok(set)
}
