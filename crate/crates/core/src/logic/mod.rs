//! Propositional front-end: formulas, theories, model enumeration and
//! variable-disjoint splitting.
//!
//! A [`Theory`] is an ordered list of declared Boolean variables plus an
//! ordered list of formulas over them; its model set lives on the Boolean
//! product space built from the declaration order. [`models_of`] assembles
//! that set compositionally — each formula is evaluated over just its own
//! variables, extended cylindrically, and the results intersected — so the
//! enumeration cost of a formula is `2^|vars(φ)|`, not `2^|vars(ℒ)|`.
//! [`split_theory`] then reads the finest factorization off the model set
//! and renders each block back into syntax as a full DNF.

mod parser;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factorize::{cylinder_extend, finest_factorization};
use crate::model_set::{effective_lines, ModelSet};
use crate::partition::Partition;
use crate::space::{CoordSet, ProductSpace, ScopeShape};

/// Variable-count bound for whole-theory model enumeration.
pub const DEFAULT_VAR_BOUND: usize = 20;

/// A propositional formula. Structure is preserved exactly as parsed;
/// equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::True | Formula::False | Formula::Atom(_) => 6,
        }
    }

    fn fmt_prec(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let me = self.prec();
        if me < min {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(name) => write!(f, "{name}")?,
            Formula::Not(a) => {
                write!(f, "~")?;
                a.fmt_prec(me, f)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(me, f)?;
                write!(f, " & ")?;
                b.fmt_prec(me + 1, f)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(me, f)?;
                write!(f, " | ")?;
                b.fmt_prec(me + 1, f)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(me + 1, f)?;
                write!(f, " -> ")?;
                b.fmt_prec(me, f)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(me, f)?;
                write!(f, " <-> ")?;
                b.fmt_prec(me + 1, f)?;
            }
        }
        if me < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    /// Minimal parenthesization: re-parsing the output reproduces the tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

/// Parses a formula; see the grammar in [`parser`](self).
pub fn parse_formula(text: &str) -> Result<Formula> {
    parser::parse(text).map_err(Error::Parse)
}

/// Variables mentioned in `f`, deduplicated, in first-mention order.
pub fn variables_of(f: &Formula) -> Vec<String> {
    fn walk(f: &Formula, out: &mut Vec<String>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(name) => {
                if !out.iter().any(|n| n == name) {
                    out.push(name.clone());
                }
            }
            Formula::Not(a) => walk(a, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

fn eval(f: &Formula, lookup: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(name) => lookup(name),
        Formula::Not(a) => !eval(a, lookup),
        Formula::And(a, b) => eval(a, lookup) && eval(b, lookup),
        Formula::Or(a, b) => eval(a, lookup) || eval(b, lookup),
        Formula::Implies(a, b) => !eval(a, lookup) || eval(b, lookup),
        Formula::Iff(a, b) => eval(a, lookup) == eval(b, lookup),
    }
}

/// The members of `scope`'s product satisfying `f`.
///
/// Every variable of `f` must be a coordinate of `scope` with domain
/// exactly `0 1`; coordinates of `scope` that `f` does not mention vary
/// freely (and may have any domain).
pub fn models_over(
    f: &Formula,
    space: &Arc<ProductSpace>,
    scope: &CoordSet,
) -> Result<ModelSet> {
    let shape = ScopeShape::new(space, scope.clone())?;
    // Bind each mentioned variable to its digit position within the scope.
    let mut positions: Vec<(String, usize)> = Vec::new();
    for name in variables_of(f) {
        let k = space.require_coord(&name)?;
        let pos = shape
            .position(k)
            .ok_or_else(|| Error::OutsideScope(name.clone()))?;
        if space.domain(k) != ["0", "1"] {
            return Err(Error::NonBooleanCoordinate(name.clone()));
        }
        positions.push((name, pos));
    }
    let mut bits = fixedbitset::FixedBitSet::with_capacity(shape.size());
    for rank in 0..shape.size() {
        let lookup = |name: &str| -> bool {
            let pos = positions
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, p)| *p)
                .expect("variables pre-bound");
            shape.digit(rank, pos).index() == 1
        };
        if eval(f, &lookup) {
            bits.insert(rank);
        }
    }
    Ok(ModelSet::from_parts(Arc::clone(space), shape, bits))
}

/// An ordered list of Boolean variables and formulas over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    vars: Vec<String>,
    formulas: Vec<Formula>,
    space: Arc<ProductSpace>,
}

impl Theory {
    /// Builds a theory over explicitly declared variables.
    ///
    /// Declaration order becomes coordinate order. Every variable mentioned
    /// by a formula must be declared.
    pub fn new(vars: Vec<String>, formulas: Vec<Formula>) -> Result<Self> {
        let space = ProductSpace::boolean(vars.iter().cloned())?;
        for f in &formulas {
            for v in variables_of(f) {
                if !vars.contains(&v) {
                    return Err(Error::UndeclaredVariable(v));
                }
            }
        }
        Ok(Theory { vars, formulas, space })
    }

    /// Builds a theory whose variables are exactly those mentioned, in
    /// first-mention order.
    pub fn from_formulas(formulas: Vec<Formula>) -> Result<Self> {
        let mut vars = Vec::new();
        for f in &formulas {
            for v in variables_of(f) {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        Theory::new(vars, formulas)
    }

    /// Parses the theory file format: an optional `vars a b c` directive on
    /// the first effective line, then one formula per line. `#` lines are
    /// comments; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = effective_lines(text).peekable();
        let mut declared: Option<Vec<String>> = None;
        if let Some((_, first)) = lines.peek() {
            let mut toks = first.split_whitespace();
            if toks.next() == Some("vars") {
                declared = Some(toks.map(str::to_string).collect());
                lines.next();
            }
        }
        let mut formulas = Vec::new();
        for (line_no, line) in lines {
            let f = parser::parse(line).map_err(|e| Error::Parse(e.at_line(line_no)))?;
            formulas.push(f);
        }
        match declared {
            Some(vars) => Theory::new(vars, formulas),
            None => Theory::from_formulas(formulas),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// The Boolean product space over the declared variables.
    pub fn space(&self) -> &Arc<ProductSpace> {
        &self.space
    }
}

/// The model set of a theory over its full variable scope.
///
/// Computed as the intersection of the cylindrical extensions of each
/// formula's own model set; an empty theory yields the full product.
/// Refuses theories with more than `max_vars` variables.
pub fn models_of(t: &Theory, max_vars: usize) -> Result<ModelSet> {
    if t.vars.len() > max_vars {
        return Err(Error::ResourceLimit {
            what: "declared variable count",
            limit: max_vars as u64,
            requested: t.vars.len() as u64,
        });
    }
    let scope = t.space.full_scope();
    let mut acc = ModelSet::full(&t.space, scope.clone())?;
    for f in &t.formulas {
        let own_scope = t.space.scope_of(variables_of(f).iter().map(String::as_str))?;
        let local = models_over(f, &t.space, &own_scope)?;
        let extended = cylinder_extend(&local, &scope.difference(&own_scope))?;
        acc = acc.intersect(&extended)?;
    }
    Ok(acc)
}

/// One block of a split theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitComponent {
    pub block: CoordSet,
    /// Projection of the theory's models onto the block.
    pub models: ModelSet,
    /// The block's content as a formula (full DNF, or `true`/`false`).
    pub formula: Formula,
}

/// A theory split along the finest factorization of its model set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub partition: Partition,
    pub components: Vec<SplitComponent>,
}

/// Splits `t` into variable-disjoint components: the partition is the
/// finest factorization of `models_of(t)`, and each block carries its
/// projected model set plus an equivalent formula.
pub fn split_theory(t: &Theory, max_vars: usize) -> Result<SplitResult> {
    let models = models_of(t, max_vars)?;
    let partition = finest_factorization(&models)?;
    let mut components = Vec::with_capacity(partition.block_count());
    for block in partition.blocks() {
        let projected = models.project(block)?;
        let formula = dnf_of(&projected)?;
        components.push(SplitComponent { block: block.clone(), models: projected, formula });
    }
    Ok(SplitResult { partition, components })
}

/// Renders a model set over Boolean coordinates as a formula: `false` for
/// the empty set, `true` for the full product, otherwise the full DNF with
/// one conjunct per member, in canonical member order.
pub fn dnf_of(ms: &ModelSet) -> Result<Formula> {
    if ms.is_empty() {
        return Ok(Formula::False);
    }
    if ms.len() == ms.product_size() {
        return Ok(Formula::True);
    }
    for k in ms.scope().iter() {
        if ms.space().domain(k) != ["0", "1"] {
            return Err(Error::NonBooleanCoordinate(ms.space().coord_name(k).to_string()));
        }
    }
    let mut disjunction: Option<Formula> = None;
    for member in ms.members() {
        let mut conjunction: Option<Formula> = None;
        for (k, v) in member.scope().iter().zip(member.values()) {
            let atom = Formula::atom(ms.space().coord_name(k));
            let literal = if v.index() == 1 { atom } else { Formula::negate(atom) };
            conjunction = Some(match conjunction {
                None => literal,
                Some(c) => Formula::and(c, literal),
            });
        }
        let conjunct = conjunction.expect("nonempty scope: full/empty caught above");
        disjunction = Some(match disjunction {
            None => conjunct,
            Some(d) => Formula::or(d, conjunct),
        });
    }
    Ok(disjunction.expect("nonempty set"))
}
