//! Recodings: bijective re-descriptions of a product, and the search for a
//! coding under which a given set factorizes.
//!
//! Whether a set splits is a property of how its points are *described*,
//! not of the set alone: a bijection of the product onto another (or the
//! same) coding can create or destroy factorizations. A [`Recoding`] is
//! such a bijection, represented as a permutation table on ranks. It can be
//! given directly ([`Recoding::from_permutation`]) or induced by defining
//! each target coordinate as a formula over the source coordinates
//! ([`Recoding::from_definitions`]); the latter is rejected unless the
//! induced map really is a bijection.
//!
//! [`exists_factorable_recoding`] answers the converse question — *is there
//! any* recoding under which this set splits? Since permutations act
//! transitively on equal-cardinality subsets, that reduces to: does any set
//! of the same cardinality factorize nontrivially? The search scans proper
//! bipartitions `{A, B}` of the scope and factorizations `|Y| = a · b` with
//! `a ≤ |prod(A)|`, `b ≤ |prod(B)|`, returning the canonically least
//! witness. Taking the lexicographically first `a` ranks of `prod(A)` and
//! first `b` ranks of `prod(B)` is optimal for a fixed `(A, B, a, b)`
//! choice — any other choice recombines to a pointwise-dominating rank
//! sequence — so the minimum over choices is the canonically first
//! factorable set of that cardinality overall.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::assignment::Assignment;
use crate::error::{Error, ParseError, Result};
use crate::factorize::{bipartition_sides, compose_join};
use crate::logic::{models_over, parse_formula, Formula};
use crate::model_set::{effective_lines, ModelSet};
use crate::space::{ensure_same_space, is_identifier, ProductSpace, ScopeShape, ValueId};

/// Largest product cardinality [`exists_factorable_recoding`] will search
/// by default.
pub const DEFAULT_PRODUCT_BOUND: usize = 4096;

/// A bijection between two product spaces of equal cardinality, acting on
/// full-scope model sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recoding {
    from: Arc<ProductSpace>,
    to: Arc<ProductSpace>,
    /// `perm[r]` is the target rank of source rank `r`.
    perm: Vec<usize>,
}

impl Recoding {
    /// The identity recoding of a space onto itself.
    pub fn identity(space: &Arc<ProductSpace>) -> Result<Self> {
        let shape = ScopeShape::new(space, space.full_scope())?;
        Ok(Recoding {
            from: Arc::clone(space),
            to: Arc::clone(space),
            perm: (0..shape.size()).collect(),
        })
    }

    /// A recoding of `space` onto itself given directly as a permutation of
    /// ranks: source rank `r` is sent to `perm[r]`.
    pub fn from_permutation(space: &Arc<ProductSpace>, perm: Vec<usize>) -> Result<Self> {
        let shape = ScopeShape::new(space, space.full_scope())?;
        if perm.len() != shape.size() {
            return Err(Error::InvalidPermutation);
        }
        let mut seen = vec![false; perm.len()];
        for &t in &perm {
            if t >= perm.len() || seen[t] {
                return Err(Error::InvalidPermutation);
            }
            seen[t] = true;
        }
        Ok(Recoding { from: Arc::clone(space), to: Arc::clone(space), perm })
    }

    /// The recoding induced by defining each target coordinate as a formula
    /// over the source coordinates.
    ///
    /// There must be exactly one definition per source coordinate; the
    /// target space is Boolean over the defined names, in definition order.
    /// The induced map sends a source assignment to the tuple of its
    /// definitions' truth values, and must be a bijection: a cardinality
    /// mismatch or a pair of source assignments receiving the same code is
    /// an error.
    pub fn from_definitions(
        from: &Arc<ProductSpace>,
        defs: &[(String, Formula)],
    ) -> Result<Self> {
        if defs.len() != from.coord_count() {
            return Err(Error::RecodingArity {
                expected: from.coord_count(),
                got: defs.len(),
            });
        }
        let to = ProductSpace::boolean(defs.iter().map(|(name, _)| name.clone()))?;
        let from_shape = ScopeShape::new(from, from.full_scope())?;
        let to_shape = ScopeShape::new(&to, to.full_scope())?;
        if from_shape.size() != to_shape.size() {
            return Err(Error::RecodingSizeMismatch);
        }
        let truth: Vec<ModelSet> = defs
            .iter()
            .map(|(_, f)| models_over(f, from, &from.full_scope()))
            .collect::<Result<_>>()?;
        let render = |rank: usize| {
            Assignment::from_parts(
                Arc::clone(from),
                from.full_scope(),
                from_shape.values_at(rank),
            )
            .to_text()
        };
        let mut perm = vec![0usize; from_shape.size()];
        let mut source_of = vec![usize::MAX; to_shape.size()];
        for (rank, slot) in perm.iter_mut().enumerate() {
            let code_digits: Vec<ValueId> = truth
                .iter()
                .map(|t| ValueId(t.bits().contains(rank) as u32))
                .collect();
            let code = to_shape.rank_of(&code_digits);
            if source_of[code] != usize::MAX {
                return Err(Error::RecodingCollision {
                    first: render(rank),
                    second: render(source_of[code]),
                });
            }
            source_of[code] = rank;
            *slot = code;
        }
        Ok(Recoding { from: Arc::clone(from), to, perm })
    }

    pub fn source(&self) -> &Arc<ProductSpace> {
        &self.from
    }

    pub fn target(&self) -> &Arc<ProductSpace> {
        &self.to
    }

    /// The underlying rank permutation (indexed by source rank).
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// The inverse bijection.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.perm.len()];
        for (r, &t) in self.perm.iter().enumerate() {
            inv[t] = r;
        }
        Recoding { from: Arc::clone(&self.to), to: Arc::clone(&self.from), perm: inv }
    }

    /// The image of a full-scope model set under the recoding.
    pub fn apply(&self, x: &ModelSet) -> Result<ModelSet> {
        ensure_same_space(x.space(), &self.from)?;
        if *x.scope() != self.from.full_scope() {
            return Err(Error::ScopeMismatch);
        }
        let to_shape = ScopeShape::new(&self.to, self.to.full_scope())?;
        let mut bits = FixedBitSet::with_capacity(to_shape.size());
        for r in x.bits().ones() {
            bits.insert(self.perm[r]);
        }
        Ok(ModelSet::from_parts(Arc::clone(&self.to), to_shape, bits))
    }
}

/// Searches for a recoding of `x`'s space under which the image of `x`
/// factorizes nontrivially, returning the canonically least such image (a
/// set of the same cardinality), or `None` when no recoding can help.
///
/// `x` must cover its space's full scope. Spaces with fewer than two
/// coordinates admit no partition with two blocks, hence never a witness.
/// Refuses products larger than `max_points`.
pub fn exists_factorable_recoding(
    x: &ModelSet,
    max_points: usize,
) -> Result<Option<ModelSet>> {
    if *x.scope() != x.space().full_scope() {
        return Err(Error::ScopeMismatch);
    }
    let size = x.product_size();
    if size > max_points {
        return Err(Error::ResourceLimit {
            what: "product cardinality",
            limit: max_points as u64,
            requested: size as u64,
        });
    }
    let scope = x.scope().clone();
    if scope.len() < 2 {
        return Ok(None);
    }
    let m = x.len();
    if m == 0 {
        // Every partition factorizes the empty set; the identity already
        // witnesses factorability.
        return Ok(Some(ModelSet::empty(x.space(), scope)?));
    }
    let space = x.space();
    let first_ranks = |block: &crate::space::CoordSet, count: usize| -> Result<ModelSet> {
        let shape = ScopeShape::new(space, block.clone())?;
        let mut bits = FixedBitSet::with_capacity(shape.size());
        bits.insert_range(..count);
        Ok(ModelSet::from_parts(Arc::clone(space), shape, bits))
    };
    let mut best: Option<ModelSet> = None;
    for side in bipartition_sides(&scope) {
        let co = scope.difference(&side);
        let na = ScopeShape::new(space, side.clone())?.size();
        let nb = ScopeShape::new(space, co.clone())?.size();
        for a in 1..=m.min(na) {
            if !m.is_multiple_of(a) {
                continue;
            }
            let b = m / a;
            if b > nb {
                continue;
            }
            let candidate =
                compose_join(space, &scope, &[&first_ranks(&side, a)?, &first_ranks(&co, b)?])?;
            let better = match &best {
                None => true,
                Some(current) => candidate.canonical_cmp(current).is_lt(),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    Ok(best)
}

/// Parses the recoding definition format: one `name := formula` per line,
/// `#` comments and blank lines ignored. Definition order is preserved.
pub fn parse_recoding_file(text: &str) -> Result<Vec<(String, Formula)>> {
    let mut defs = Vec::new();
    for (line_no, line) in effective_lines(text) {
        let Some(idx) = line.find(":=") else {
            return Err(Error::Parse(
                ParseError::new(0, "expected `name := formula`").at_line(line_no),
            ));
        };
        let name = line[..idx].trim();
        if !is_identifier(name) {
            return Err(Error::Parse(
                ParseError::new(0, format!("`{name}` is not a valid coordinate name"))
                    .at_line(line_no),
            ));
        }
        let body = &line[idx + 2..];
        let formula = match parse_formula(body) {
            Ok(f) => f,
            Err(Error::Parse(e)) => {
                return Err(Error::Parse(
                    ParseError::new(idx + 2 + e.offset, e.message).at_line(line_no),
                ));
            }
            Err(other) => return Err(other),
        };
        defs.push((name.to_string(), formula));
    }
    Ok(defs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::finest_factorization;
    use crate::model_set::parse_model_set_in;
    use crate::partition::Partition;

    fn bool_space(names: &[&str]) -> Arc<ProductSpace> {
        ProductSpace::boolean(names.iter().copied()).unwrap()
    }

    fn set(space: &Arc<ProductSpace>, text: &str) -> ModelSet {
        parse_model_set_in(space, &space.full_scope(), text).unwrap()
    }

    fn defs(pairs: &[(&str, &str)]) -> Vec<(String, Formula)> {
        pairs
            .iter()
            .map(|(n, f)| (n.to_string(), parse_formula(f).unwrap()))
            .collect()
    }

    #[test]
    fn permutation_tables_move_members_by_rank() {
        let s = bool_space(&["p", "q"]);
        // Swap ranks 0 and 1 (assignments 00 and 01), fix the rest.
        let rho = Recoding::from_permutation(&s, vec![1, 0, 2, 3]).unwrap();
        let x = set(&s, "p q\n0 0\n1 1\n");
        assert_eq!(rho.apply(&x).unwrap().to_text(), "p q\n0 1\n1 1\n");
    }

    #[test]
    fn bad_permutation_tables_are_rejected() {
        let s = bool_space(&["p", "q"]);
        assert!(matches!(
            Recoding::from_permutation(&s, vec![0, 1, 2]),
            Err(Error::InvalidPermutation)
        ));
        assert!(matches!(
            Recoding::from_permutation(&s, vec![0, 1, 1, 3]),
            Err(Error::InvalidPermutation)
        ));
        assert!(matches!(
            Recoding::from_permutation(&s, vec![0, 1, 2, 4]),
            Err(Error::InvalidPermutation)
        ));
    }

    #[test]
    fn definitions_recode_the_equality_pair_into_a_product() {
        let s = bool_space(&["p", "q"]);
        let rho =
            Recoding::from_definitions(&s, &defs(&[("p", "p"), ("q'", "p <-> q")])).unwrap();
        let x = set(&s, "p q\n0 0\n1 1\n");
        let image = rho.apply(&x).unwrap();
        assert_eq!(image.to_text(), "p q'\n0 1\n1 1\n");
        assert_eq!(
            finest_factorization(&image).unwrap(),
            Partition::singletons(&rho.target().full_scope())
        );
        // The original does not split; the image does.
        assert_eq!(
            finest_factorization(&x).unwrap(),
            Partition::whole(s.full_scope())
        );
    }

    #[test]
    fn chained_equivalences_recode_the_diagonal_pair() {
        let s = bool_space(&["p", "q", "r"]);
        let rho = Recoding::from_definitions(
            &s,
            &defs(&[("p", "p"), ("q'", "p <-> q"), ("r'", "q <-> r")]),
        )
        .unwrap();
        let x = set(&s, "p q r\n0 0 0\n1 1 1\n");
        let image = rho.apply(&x).unwrap();
        assert_eq!(image.to_text(), "p q' r'\n0 1 1\n1 1 1\n");
        assert_eq!(finest_factorization(&image).unwrap().block_count(), 3);
    }

    #[test]
    fn non_injective_definitions_report_the_colliding_pair() {
        let s = bool_space(&["p", "q"]);
        let err =
            Recoding::from_definitions(&s, &defs(&[("a", "p"), ("b", "p")])).unwrap_err();
        match err {
            Error::RecodingCollision { first, second } => {
                assert_eq!(first, "0 1");
                assert_eq!(second, "0 0");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn definition_count_must_match_the_coordinate_count() {
        let s = bool_space(&["p", "q"]);
        assert!(matches!(
            Recoding::from_definitions(&s, &defs(&[("a", "p")])),
            Err(Error::RecodingArity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn non_boolean_sources_cannot_be_recoded_by_definitions() {
        let s = ProductSpace::new([
            ("p", vec!["0", "1"]),
            ("k", vec!["a", "b", "c"]),
        ])
        .unwrap();
        assert!(matches!(
            Recoding::from_definitions(&s, &defs(&[("a", "p"), ("b", "true")])),
            Err(Error::RecodingSizeMismatch)
        ));
    }

    #[test]
    fn inverse_round_trips() {
        let s = bool_space(&["p", "q"]);
        let rho =
            Recoding::from_definitions(&s, &defs(&[("p", "p"), ("q'", "p <-> q")])).unwrap();
        let x = set(&s, "p q\n0 1\n1 1\n");
        let back = rho.inverse().apply(&rho.apply(&x).unwrap()).unwrap();
        assert_eq!(back, x);
        // Identity composes trivially.
        let id = Recoding::identity(&s).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn apply_requires_the_full_source_scope() {
        let s = bool_space(&["p", "q"]);
        let rho = Recoding::identity(&s).unwrap();
        let narrow = ModelSet::full(&s, s.scope_of(["p"]).unwrap()).unwrap();
        assert!(matches!(rho.apply(&narrow), Err(Error::ScopeMismatch)));
    }

    #[test]
    fn search_finds_the_canonically_least_factorable_image() {
        let s = bool_space(&["p", "q"]);
        let x = set(&s, "p q\n0 0\n1 1\n");
        let witness = exists_factorable_recoding(&x, DEFAULT_PRODUCT_BOUND).unwrap().unwrap();
        assert_eq!(witness.to_text(), "p q\n0 0\n0 1\n");
        assert!(finest_factorization(&witness).unwrap().block_count() > 1);
    }

    #[test]
    fn three_of_four_points_never_factorize() {
        let s = bool_space(&["p", "q"]);
        let x = set(&s, "p q\n0 0\n1 0\n1 1\n");
        assert_eq!(exists_factorable_recoding(&x, DEFAULT_PRODUCT_BOUND).unwrap(), None);
    }

    #[test]
    fn full_and_empty_sets_witness_themselves() {
        let s = bool_space(&["p", "q"]);
        let full = ModelSet::full(&s, s.full_scope()).unwrap();
        assert_eq!(
            exists_factorable_recoding(&full, DEFAULT_PRODUCT_BOUND).unwrap(),
            Some(full.clone())
        );
        let empty = ModelSet::empty(&s, s.full_scope()).unwrap();
        assert_eq!(
            exists_factorable_recoding(&empty, DEFAULT_PRODUCT_BOUND).unwrap(),
            Some(empty.clone())
        );
    }

    #[test]
    fn single_coordinate_spaces_admit_no_witness() {
        let s = bool_space(&["p"]);
        let x = ModelSet::full(&s, s.full_scope()).unwrap();
        assert_eq!(exists_factorable_recoding(&x, DEFAULT_PRODUCT_BOUND).unwrap(), None);
    }

    #[test]
    fn search_respects_the_product_bound() {
        let s = bool_space(&["p", "q", "r"]);
        let x = ModelSet::full(&s, s.full_scope()).unwrap();
        assert!(exists_factorable_recoding(&x, 4).unwrap_err().is_resource_limit());
    }

    #[test]
    fn search_handles_mixed_domain_sizes() {
        let s = ProductSpace::new([
            ("k", vec!["a", "b", "c"]),
            ("p", vec!["0", "1"]),
        ])
        .unwrap();
        // Cardinality 3 splits as 3·1 over {k}|{p} even though it cannot
        // split over two binary coordinates.
        let x = set(&s, "k p\na 0\na 1\nb 1\n");
        let witness = exists_factorable_recoding(&x, DEFAULT_PRODUCT_BOUND).unwrap().unwrap();
        assert_eq!(witness.to_text(), "k p\na 0\nb 0\nc 0\n");
    }

    #[test]
    fn definition_files_parse_in_order() {
        let text = "# rename\np := p\nq' := p <-> q\n";
        let defs = parse_recoding_file(text).unwrap();
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].0, "p");
        assert_eq!(defs[1].1.to_string(), "p <-> q");
    }

    #[test]
    fn definition_file_errors_locate_the_offending_line() {
        let err = parse_recoding_file("a := p\nb = q\n").unwrap_err();
        match err {
            Error::Parse(e) => {
                assert_eq!(e.line, Some(2));
                assert!(e.message.contains("name := formula"), "{}", e.message);
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_recoding_file("a := p &\n").unwrap_err();
        match err {
            Error::Parse(e) => {
                assert_eq!(e.line, Some(1));
                // Offset is within the whole line, not the formula text.
                assert_eq!(e.offset, 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
