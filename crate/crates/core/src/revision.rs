//! Minimal-change revision of a model set by new information.
//!
//! [`revise`] implements distance-minimizing revision: among the models of
//! the new information ψ, keep exactly those at minimal Hamming distance
//! from the current set X. Distance from a single assignment to X is the
//! minimum over members of X, so the whole operation is a double loop over
//! the two sets' members — exact, no heuristics.
//!
//! Revision is undefined when either side has no models: there is nothing
//! to measure distance from (or to), and returning ∅ or ψ silently would
//! paper over what is almost always an input mistake upstream.

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::logic::{models_over, Formula};
use crate::model_set::ModelSet;
use crate::space::ensure_same_space;

/// Number of coordinates on which two same-scope assignments disagree.
pub fn hamming_distance(a: &Assignment, b: &Assignment) -> Result<usize> {
    ensure_same_space(a.space(), b.space())?;
    if a.scope() != b.scope() {
        return Err(Error::ScopeMismatch);
    }
    Ok(a.values().iter().zip(b.values()).filter(|(x, y)| x != y).count())
}

/// Result of revising a model set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionOutcome {
    /// Models of the new information at minimal distance from the old set.
    pub revised: ModelSet,
    /// That minimal distance; `0` exactly when the two sets intersect.
    pub distance: usize,
    /// The revised members with their attained distances, in canonical
    /// order — one entry per member of [`revised`](Self::revised), every
    /// value equal to [`distance`](Self::distance) by construction.
    pub per_model_distance: Vec<(Assignment, usize)>,
}

/// Revises `x` by the new information `psi`, given as a model set over the
/// same space and scope.
pub fn revise(x: &ModelSet, psi: &ModelSet) -> Result<RevisionOutcome> {
    ensure_same_space(x.space(), psi.space())?;
    if x.scope() != psi.scope() {
        return Err(Error::ScopeMismatch);
    }
    if x.is_empty() {
        return Err(Error::RevisionUndefined("the set being revised has no models"));
    }
    if psi.is_empty() {
        return Err(Error::RevisionUndefined("the new information has no models"));
    }
    let shape = x.shape();
    let positions = shape.scope().len();
    let mut candidate_distance = Vec::with_capacity(psi.len());
    let mut best = usize::MAX;
    for m in psi.bits().ones() {
        let mut d = usize::MAX;
        for old in x.bits().ones() {
            let mut differing = 0;
            for pos in 0..positions {
                if shape.digit(m, pos) != shape.digit(old, pos) {
                    differing += 1;
                }
            }
            d = d.min(differing);
            if d == 0 {
                break;
            }
        }
        best = best.min(d);
        candidate_distance.push((m, d));
    }
    let mut bits = fixedbitset::FixedBitSet::with_capacity(shape.size());
    let mut per_model_distance = Vec::new();
    for (m, d) in candidate_distance {
        if d == best {
            bits.insert(m);
            per_model_distance.push((psi.member_at(m), d));
        }
    }
    let revised = ModelSet::from_parts(std::sync::Arc::clone(x.space()), shape.clone(), bits);
    Ok(RevisionOutcome { revised, distance: best, per_model_distance })
}

/// Revises `x` by a formula, first enumerating the formula's models over
/// `x`'s own space and scope.
pub fn revise_by_formula(x: &ModelSet, psi: &Formula) -> Result<RevisionOutcome> {
    let psi_models = models_over(psi, x.space(), x.scope())?;
    revise(x, &psi_models)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::model_set::parse_model_set_in;
    use crate::space::ProductSpace;

    fn rows(ms: &ModelSet) -> Vec<String> {
        ms.members().map(|m| m.to_text()).collect()
    }

    #[test]
    fn hamming_distance_counts_disagreements() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let a = Assignment::new(&s, [("p", "1"), ("q", "0")]).unwrap();
        let b = Assignment::new(&s, [("p", "0"), ("q", "1")]).unwrap();
        assert_eq!(hamming_distance(&a, &b).unwrap(), 2);
        assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
    }

    #[test]
    fn hamming_distance_requires_matching_scopes() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let a = Assignment::new(&s, [("p", "1"), ("q", "0")]).unwrap();
        let b = Assignment::new(&s, [("p", "1")]).unwrap();
        assert!(matches!(hamming_distance(&a, &b), Err(Error::ScopeMismatch)));
    }

    #[test]
    fn revising_a_single_model_moves_it_the_shortest_way() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let x = parse_model_set_in(&s, &s.full_scope(), "p q\n1 1\n").unwrap();
        let out = revise_by_formula(&x, &parse_formula("~p").unwrap()).unwrap();
        assert_eq!(rows(&out.revised), vec!["0 1"]);
        assert_eq!(out.distance, 1);
    }

    #[test]
    fn ties_keep_every_minimal_model() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let x = parse_model_set_in(&s, &s.full_scope(), "p q\n1 0\n1 1\n").unwrap();
        let out = revise_by_formula(&x, &parse_formula("~p").unwrap()).unwrap();
        assert_eq!(rows(&out.revised), vec!["0 0", "0 1"]);
        assert_eq!(out.distance, 1);
    }

    #[test]
    fn consistent_information_reduces_to_intersection() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let x = parse_model_set_in(&s, &s.full_scope(), "p q\n0 0\n1 1\n").unwrap();
        let out = revise_by_formula(&x, &parse_formula("p").unwrap()).unwrap();
        assert_eq!(rows(&out.revised), vec!["1 1"]);
        assert_eq!(out.distance, 0);
        let psi = models_over(&parse_formula("p").unwrap(), &s, &s.full_scope()).unwrap();
        assert_eq!(out.revised, x.intersect(&psi).unwrap());
    }

    #[test]
    fn per_model_distances_describe_the_revised_members() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let x = parse_model_set_in(&s, &s.full_scope(), "p q\n1 1\n").unwrap();
        let out = revise_by_formula(&x, &parse_formula("~p | ~q").unwrap()).unwrap();
        let described: Vec<(String, usize)> =
            out.per_model_distance.iter().map(|(a, d)| (a.to_text(), *d)).collect();
        assert_eq!(described, vec![("0 1".to_string(), 1), ("1 0".to_string(), 1)]);
        assert_eq!(rows(&out.revised), vec!["0 1", "1 0"]);
        assert!(out.per_model_distance.iter().all(|(_, d)| *d == out.distance));
    }

    #[test]
    fn revision_is_undefined_without_models_on_either_side() {
        let s = ProductSpace::boolean(["p"]).unwrap();
        let empty = ModelSet::empty(&s, s.full_scope()).unwrap();
        let full = ModelSet::full(&s, s.full_scope()).unwrap();
        assert!(matches!(revise(&empty, &full), Err(Error::RevisionUndefined(_))));
        assert!(matches!(revise(&full, &empty), Err(Error::RevisionUndefined(_))));
    }

    #[test]
    fn revision_requires_a_shared_scope() {
        let s = ProductSpace::boolean(["p", "q"]).unwrap();
        let x = ModelSet::full(&s, s.full_scope()).unwrap();
        let narrow = ModelSet::full(&s, s.scope_of(["p"]).unwrap()).unwrap();
        assert!(matches!(revise(&x, &narrow), Err(Error::ScopeMismatch)));
    }
}
