//! Random instance generators and independent reference oracles used by the
//! semfact test suites.
//!
//! Everything here is driven by a caller-supplied [`rand::Rng`], so test
//! files own their seeds and every failure is reproducible. The [`oracle`]
//! module deliberately avoids the library's rank/bit-table machinery: models
//! are enumerated by plain counting and compared as sets of symbol rows, so
//! agreement with the library is evidence, not circularity.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use semfact::{
    compose_join, dnf_of, CoordSet, Formula, ModelSet, Partition, ProductSpace, Theory,
};

/// Coordinate names used by generated spaces, in space order.
pub const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// A product space with `coords` coordinates (at most [`NAMES`] many), each
/// domain `0..d` for a random `d` in `2..=max_domain`.
pub fn space(rng: &mut impl Rng, coords: usize, max_domain: usize) -> Arc<ProductSpace> {
    assert!((1..=NAMES.len()).contains(&coords), "coords out of range");
    assert!(max_domain >= 2, "domains must have at least two values");
    let decl: Vec<(String, Vec<String>)> = NAMES[..coords]
        .iter()
        .map(|name| {
            let d = rng.random_range(2..=max_domain);
            (name.to_string(), (0..d).map(|v| v.to_string()).collect())
        })
        .collect();
    ProductSpace::new(decl).expect("generated space is valid")
}

/// A Boolean product space with `coords` coordinates.
pub fn boolean_space(coords: usize) -> Arc<ProductSpace> {
    assert!((1..=NAMES.len()).contains(&coords), "coords out of range");
    ProductSpace::boolean(NAMES[..coords].iter().copied()).expect("names are valid")
}

/// A uniformly random subset of the product over `scope` (each member kept
/// with probability 1/2) — possibly empty, possibly full.
pub fn model_set(rng: &mut impl Rng, space: &Arc<ProductSpace>, scope: &CoordSet) -> ModelSet {
    let full = ModelSet::full(space, scope.clone()).expect("scope fits");
    let members: Vec<_> = full.members().filter(|_| rng.random_bool(0.5)).collect();
    ModelSet::from_members(space, scope.clone(), members).expect("members fit the scope")
}

/// As [`model_set`], but guaranteed nonempty.
pub fn nonempty_model_set(
    rng: &mut impl Rng,
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
) -> ModelSet {
    let set = model_set(rng, space, scope);
    if !set.is_empty() {
        return set;
    }
    let full = ModelSet::full(space, scope.clone()).expect("scope fits");
    let all: Vec<_> = full.members().collect();
    let one = all.choose(rng).expect("products are never empty").clone();
    ModelSet::from_members(space, scope.clone(), [one]).expect("member fits")
}

/// As [`nonempty_model_set`], but also missing at least one member. Panics
/// on a one-point product, where no proper nonempty subset exists.
pub fn proper_model_set(
    rng: &mut impl Rng,
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
) -> ModelSet {
    let set = nonempty_model_set(rng, space, scope);
    if set.len() < set.product_size() {
        return set;
    }
    assert!(set.product_size() >= 2, "one-point products have no proper nonempty subset");
    let mut members: Vec<_> = set.members().collect();
    let drop = rng.random_range(0..members.len());
    members.swap_remove(drop);
    ModelSet::from_members(space, scope.clone(), members).expect("members fit")
}

/// A random partition of `scope`, drawn by assigning each coordinate a
/// class in restricted-growth fashion (not uniform over partitions, but
/// covers them all).
pub fn partition(rng: &mut impl Rng, scope: &CoordSet) -> Partition {
    let ids: Vec<_> = scope.iter().collect();
    assert!(!ids.is_empty(), "partitions need a nonempty scope");
    let mut classes = vec![0usize];
    let mut max_class = 0usize;
    for _ in 1..ids.len() {
        let c = rng.random_range(0..=max_class + 1);
        classes.push(c);
        max_class = max_class.max(c);
    }
    let mut groups: Vec<Vec<_>> = vec![Vec::new(); max_class + 1];
    for (i, c) in classes.into_iter().enumerate() {
        groups[c].push(ids[i]);
    }
    Partition::new(groups.into_iter().map(CoordSet::from_ids)).expect("groups partition the scope")
}

/// A random proper bipartition `(A, B)` of `scope`; both sides nonempty.
/// Requires at least two coordinates.
pub fn bipartition(rng: &mut impl Rng, scope: &CoordSet) -> (CoordSet, CoordSet) {
    let ids: Vec<_> = scope.iter().collect();
    assert!(ids.len() >= 2, "proper bipartitions need two coordinates");
    let mask = rng.random_range(1..(1usize << ids.len()) - 1);
    let side: Vec<_> =
        ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, k)| *k).collect();
    let a = CoordSet::from_ids(side);
    let b = scope.difference(&a);
    (a, b)
}

/// A random coarsening of `p`: blocks merged according to a random grouping
/// of the block indices. May return `p` itself or the one-block partition.
pub fn coarsening(rng: &mut impl Rng, p: &Partition) -> Partition {
    let b = p.block_count();
    assert!(b >= 1, "cannot coarsen an empty partition");
    let mut classes = vec![0usize];
    let mut max_class = 0usize;
    for _ in 1..b {
        let c = rng.random_range(0..=max_class + 1);
        classes.push(c);
        max_class = max_class.max(c);
    }
    let mut merged: Vec<CoordSet> = vec![CoordSet::empty(); max_class + 1];
    for (i, c) in classes.into_iter().enumerate() {
        merged[c] = merged[c].union(&p.blocks()[i]);
    }
    Partition::new(merged).expect("merged blocks partition the scope")
}

/// A `(partition, X)` pair where the partition factorizes `X` by
/// construction: `X` is the join of one random nonempty set per block.
pub fn factorized_instance(
    rng: &mut impl Rng,
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
) -> (Partition, ModelSet) {
    let p = partition(rng, scope);
    let factors: Vec<ModelSet> =
        p.blocks().iter().map(|b| nonempty_model_set(rng, space, b)).collect();
    let refs: Vec<&ModelSet> = factors.iter().collect();
    let x = compose_join(space, scope, &refs).expect("blocks cover the scope disjointly");
    (p, x)
}

/// A random formula over `vars` with nesting depth at most `depth`.
pub fn formula(rng: &mut impl Rng, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..8u8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(*vars.choose(rng).expect("vars nonempty")),
        };
    }
    let a = formula(rng, vars, depth - 1);
    match rng.random_range(0..5u8) {
        0 => Formula::negate(a),
        1 => Formula::and(a, formula(rng, vars, depth - 1)),
        2 => Formula::or(a, formula(rng, vars, depth - 1)),
        3 => Formula::implies(a, formula(rng, vars, depth - 1)),
        _ => Formula::iff(a, formula(rng, vars, depth - 1)),
    }
}

/// A random theory: `1..=max_vars` declared variables, `0..=max_formulas`
/// formulas of depth ≤ 3 over them.
pub fn theory(rng: &mut impl Rng, max_vars: usize, max_formulas: usize) -> Theory {
    let nv = rng.random_range(1..=max_vars.min(NAMES.len()));
    let names: Vec<&str> = NAMES[..nv].to_vec();
    let nf = rng.random_range(0..=max_formulas);
    let formulas = (0..nf).map(|_| formula(rng, &names, 3)).collect();
    Theory::new(names.iter().map(|n| n.to_string()).collect(), formulas)
        .expect("atoms drawn from the declared variables")
}

/// A revision-locality instance over a Boolean space of `coords ≥ 2`
/// coordinates: returns `(X, A, ψ)` where the bipartition `{A, A′}`
/// factorizes `X` nontrivially, `ψ` mentions only `A′`-coordinates, and
/// `M(ψ) ∩ X = ∅` — the premises under which revision must leave the
/// `A`-side of `X` intact.
pub fn locality_instance(
    rng: &mut impl Rng,
    coords: usize,
) -> (ModelSet, CoordSet, Formula) {
    let space = boolean_space(coords);
    let scope = space.full_scope();
    let (a, b) = bipartition(rng, &scope);
    let xa = nonempty_model_set(rng, &space, &a);
    // Proper on the B side so something outside X↾B exists for ψ to hold on.
    let xb = proper_model_set(rng, &space, &b);
    let x = compose_join(&space, &scope, &[&xa, &xb]).expect("two disjoint blocks");
    // ψ describes a nonempty set of B-assignments disjoint from X↾B.
    let full_b = ModelSet::full(&space, b).expect("scope fits");
    let outside: Vec<_> = full_b
        .members()
        .filter(|m| !xb.contains(m).expect("same scope"))
        .collect();
    let keep: Vec<_> = outside
        .iter()
        .enumerate()
        .filter(|(i, _)| *i == 0 || rng.random_bool(0.5))
        .map(|(_, m)| m.clone())
        .collect();
    let psi_models = ModelSet::from_members(&space, full_b.scope().clone(), keep)
        .expect("members fit the scope");
    let psi = dnf_of(&psi_models).expect("Boolean block");
    (x, a, psi)
}

/// Independent reference computations, free of the library's rank encoding.
pub mod oracle {
    use std::collections::BTreeSet;

    use semfact::{Formula, ModelSet, Theory};

    /// Truth of `f` under a variable valuation, by direct recursion.
    pub fn eval(f: &Formula, truth: &dyn Fn(&str) -> bool) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(name) => truth(name),
            Formula::Not(a) => !eval(a, truth),
            Formula::And(a, b) => eval(a, truth) && eval(b, truth),
            Formula::Or(a, b) => eval(a, truth) || eval(b, truth),
            Formula::Implies(a, b) => !eval(a, truth) || eval(b, truth),
            Formula::Iff(a, b) => eval(a, truth) == eval(b, truth),
        }
    }

    /// All satisfying rows of `t` as `"0"`/`"1"` symbols in declaration
    /// order, enumerated by plain counting over all `2^n` valuations.
    pub fn truth_table_models(t: &Theory) -> BTreeSet<Vec<String>> {
        let vars = t.vars();
        let n = vars.len();
        assert!(n < usize::BITS as usize, "too many variables to count");
        let mut rows = BTreeSet::new();
        for code in 0..1usize << n {
            let bit = |i: usize| code >> (n - 1 - i) & 1 == 1;
            let truth = |name: &str| {
                let i = vars.iter().position(|v| v == name).expect("declared variable");
                bit(i)
            };
            if t.formulas().iter().all(|f| eval(f, &truth)) {
                rows.insert(
                    (0..n).map(|i| if bit(i) { "1".to_string() } else { "0".to_string() }).collect(),
                );
            }
        }
        rows
    }

    /// The members of a model set as rows of value symbols, for comparison
    /// against [`truth_table_models`].
    pub fn rows_of(ms: &ModelSet) -> BTreeSet<Vec<String>> {
        ms.members()
            .map(|a| a.to_text().split_whitespace().map(str::to_string).collect())
            .collect()
    }

    /// Number of positions where two symbol rows differ.
    fn row_distance(a: &[String], b: &[String]) -> usize {
        a.iter().zip(b).filter(|(x, y)| x != y).count()
    }

    /// Minimal Hamming distance from any `psi`-member to `x`, by exhaustive
    /// double loop over symbol rows. `None` when either set is empty.
    pub fn min_revision_distance(x: &ModelSet, psi: &ModelSet) -> Option<usize> {
        let x_rows: Vec<Vec<String>> = rows_of(x).into_iter().collect();
        let psi_rows = rows_of(psi);
        psi_rows
            .iter()
            .map(|m| x_rows.iter().map(|o| row_distance(m, o)).min())
            .min()
            .flatten()
    }
}
