//! Factorization of model sets along partitions of their scope.
//!
//! A partition `A_1 | … | A_m` of the scope *factorizes* a model set `X`
//! when `X` contains exactly the assignments whose restriction to every
//! block lies in the corresponding projection of `X` — equivalently, when
//! recombining projections block-wise recreates `X` and nothing more. The
//! recombination (the *join* of the projections) always contains `X` and
//! always has exactly `∏ |X↾A_i|` members, because an assignment is freely
//! determined by one choice per block. That turns the check into a
//! cardinality comparison: the partition factorizes `X` iff
//! `|X| = ∏ |X↾A_i|`. The join is only materialized when a counterexample
//! is wanted.
//!
//! The finest factorization is computed as the meet of all factorizing
//! *bipartitions*: coarsening preserves factorization, so every block
//! structure a set admits is the meet of two-block ones, and the meet of
//! factorizations factorizes again. [`oracle_finest`] cross-checks the same
//! result by brute force over every partition of the scope (Bell-number
//! many), which is why it carries its own small coordinate bound.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::model_set::ModelSet;
use crate::partition::{meet_many, Partition};
use crate::space::{ensure_same_space, CoordSet, ProductSpace, ScopeShape};

/// Largest scope `oracle_finest` will enumerate partitions for by default.
pub const DEFAULT_ORACLE_COORD_BOUND: usize = 5;

/// Outcome of a factorization check.
///
/// `witness` is present exactly when `holds` is false: it is the
/// canonically first assignment that recombines block-projections of the
/// set without belonging to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub partition: Partition,
    pub holds: bool,
    pub witness: Option<Assignment>,
}

/// Builds the set of assignments over `scope` whose restriction to each
/// part's scope belongs to that part. With no parts, the full product.
fn join_blocks(
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
    parts: &[&ModelSet],
) -> Result<ModelSet> {
    let shape = ScopeShape::new(space, scope.clone())?;
    let mut proj = Vec::with_capacity(parts.len());
    for p in parts {
        ensure_same_space(space, p.space())?;
        let sub = ScopeShape::new(space, p.scope().clone())?;
        proj.push((shape.projector(&sub)?, p.bits()));
    }
    let mut bits = FixedBitSet::with_capacity(shape.size());
    'ranks: for rank in 0..shape.size() {
        for (pr, member_bits) in &proj {
            if !member_bits.contains(pr.project(rank)) {
                continue 'ranks;
            }
        }
        bits.insert(rank);
    }
    Ok(ModelSet::from_parts(Arc::clone(space), shape, bits))
}

/// `∏ |X↾A_i|` over the blocks — the size the join would have.
fn recombination_count(x: &ModelSet, partition: &Partition) -> Result<usize> {
    let mut prod: usize = 1;
    for block in partition.blocks() {
        // Projection sizes multiply to at most the scope's product size,
        // which the scope shape already bounds; no overflow to guard.
        prod *= x.project(block)?.len();
        if prod == 0 {
            break;
        }
    }
    Ok(prod)
}

/// Checks whether `partition` factorizes `x`; on failure the report carries
/// the canonically first violating recombination.
pub fn is_factorization(x: &ModelSet, partition: &Partition) -> Result<FactorizationReport> {
    if partition.scope() != x.scope() {
        return Err(Error::ScopeMismatch);
    }
    let holds = recombination_count(x, partition)? == x.len();
    let witness = if holds {
        None
    } else {
        let factors: Vec<ModelSet> = partition
            .blocks()
            .iter()
            .map(|b| x.project(b))
            .collect::<Result<_>>()?;
        let refs: Vec<&ModelSet> = factors.iter().collect();
        let join = join_blocks(x.space(), x.scope(), &refs)?;
        let rank = join
            .bits()
            .difference(x.bits())
            .next()
            .expect("join strictly contains a non-factorizing set");
        Some(join.member_at(rank))
    };
    Ok(FactorizationReport { partition: partition.clone(), holds, witness })
}

/// Recombines factors over disjoint scopes into one set over `scope`.
///
/// Every factor constrains exactly its own scope; the factor scopes must be
/// pairwise disjoint and together cover `scope`. The result has
/// `∏ |factor|` members.
pub fn compose_join(
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
    factors: &[&ModelSet],
) -> Result<ModelSet> {
    let mut covered = CoordSet::empty();
    for f in factors {
        if let Some(k) = covered.intersection(f.scope()).first() {
            return Err(Error::OverlappingBlocks(space.coord_name(k).to_string()));
        }
        covered = covered.union(f.scope());
    }
    if covered != *scope {
        let missing = scope.difference(&covered).first().or_else(|| covered.difference(scope).first());
        return Err(Error::BlocksDoNotCover(
            missing.map(|k| space.coord_name(k).to_string()).unwrap_or_default(),
        ));
    }
    join_blocks(space, scope, factors)
}

/// Extends `x` over additional, unconstrained coordinates.
///
/// The result lives on `x.scope() ∪ free` and contains every assignment
/// whose restriction to `x.scope()` is a member of `x`; its size is
/// `|x| · ∏ |domain(k)|` over the freed coordinates.
pub fn cylinder_extend(x: &ModelSet, free: &CoordSet) -> Result<ModelSet> {
    if let Some(k) = x.scope().intersection(free).first() {
        return Err(Error::ScopesOverlap(x.space().coord_name(k).to_string()));
    }
    let scope = x.scope().union(free);
    join_blocks(x.space(), &scope, &[x])
}

/// Canonical sides of every proper bipartition of `scope`: each side
/// contains the least coordinate, and its complement is nonempty. Order is
/// deterministic (ascending over the subset encoding of the remainder).
/// Empty for scopes with fewer than two coordinates.
pub(crate) fn bipartition_sides(scope: &CoordSet) -> Vec<CoordSet> {
    let coords: Vec<_> = scope.iter().collect();
    let Some((least, rest)) = coords.split_first() else {
        return Vec::new();
    };
    let full_mask: u64 = (1u64 << rest.len()) - 1;
    let mut sides = Vec::new();
    for mask in 0..full_mask {
        let mut ids = vec![*least];
        for (i, k) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                ids.push(*k);
            }
        }
        sides.push(CoordSet::from_ids(ids));
    }
    sides
}

/// All canonical sides `A` of factorizing bipartitions `{A, A′}` of
/// `x.scope()`: `A` contains the least coordinate and both sides are
/// proper. Order is deterministic (ascending over the subset encoding).
pub fn factorization_bipartitions(x: &ModelSet) -> Result<Vec<CoordSet>> {
    let scope = x.scope();
    if scope.is_empty() {
        return Err(Error::EmptyScope);
    }
    let n = x.len();
    let mut sides = Vec::new();
    for side in bipartition_sides(scope) {
        let co = scope.difference(&side);
        if x.project(&side)?.len() * x.project(&co)?.len() == n {
            sides.push(side);
        }
    }
    Ok(sides)
}

/// The finest partition of `x.scope()` that factorizes `x`: the meet of the
/// one-block partition with every factorizing bipartition.
///
/// Every factorization coarsens this one, and this one factorizes `x`
/// itself (meets of factorizations factorize). For the empty set every
/// bipartition factorizes vacuously, so the result degenerates to all
/// singletons.
pub fn finest_factorization(x: &ModelSet) -> Result<Partition> {
    let sides = factorization_bipartitions(x)?;
    let scope = x.scope().clone();
    let mut parts = vec![Partition::whole(scope.clone())];
    for side in sides {
        let co = scope.difference(&side);
        parts.push(Partition::new([side, co])?);
    }
    meet_many(&parts)
}

/// Brute-force reference for [`finest_factorization`]: enumerates *every*
/// partition of the scope, keeps the factorizing ones and returns their
/// meet. Exponential (Bell numbers) — refuses scopes larger than `bound`.
pub fn oracle_finest_with_bound(x: &ModelSet, bound: usize) -> Result<Partition> {
    let scope = x.scope();
    if scope.is_empty() {
        return Err(Error::EmptyScope);
    }
    if scope.len() > bound {
        return Err(Error::ResourceLimit {
            what: "oracle scope size",
            limit: bound as u64,
            requested: scope.len() as u64,
        });
    }
    let coords: Vec<_> = scope.iter().collect();
    let mut holding = Vec::new();
    for rgs in restricted_growth_strings(coords.len()) {
        let classes = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut groups: Vec<Vec<_>> = vec![Vec::new(); classes];
        for (pos, class) in rgs.iter().enumerate() {
            groups[*class].push(coords[pos]);
        }
        let partition = Partition::new(groups.into_iter().map(CoordSet::from_ids))?;
        if recombination_count(x, &partition)? == x.len() {
            holding.push(partition);
        }
    }
    // The one-block partition always factorizes, so the family is nonempty.
    meet_many(&holding)
}

/// [`oracle_finest_with_bound`] at [`DEFAULT_ORACLE_COORD_BOUND`].
pub fn oracle_finest(x: &ModelSet) -> Result<Partition> {
    oracle_finest_with_bound(x, DEFAULT_ORACLE_COORD_BOUND)
}

/// All restricted-growth strings of length `n`: `a[0] = 0`,
/// `a[i] ≤ max(a[..i]) + 1`. Each encodes one set partition of `0..n`.
fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut current = vec![0usize; n];
    fn grow(current: &mut Vec<usize>, pos: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..=max + 1 {
            current[pos] = v;
            grow(current, pos + 1, max.max(v), out);
        }
    }
    grow(&mut current, 1, 0, &mut out);
    out
}
