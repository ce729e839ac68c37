use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::error::Error;

/// Surface syntax tree, kept exactly as written (or built).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Atom(String),
    Not(Box<Expr>),
    /// At least two conjuncts.
    And(Vec<Expr>),
    /// At least two disjuncts.
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Atom(_) | Expr::Not(_) => PREC_UNARY,
            Expr::And(_) => PREC_AND,
            Expr::Or(_) => PREC_OR,
            Expr::Implies(..) => PREC_IMPLIES,
            Expr::Iff(..) => PREC_IFF,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(name) => f.write_str(name),
            Expr::Not(inner) => {
                f.write_str("~")?;
                inner.write_child(f, inner.precedence() < PREC_UNARY)
            }
            Expr::And(args) | Expr::Or(args) => {
                let (sep, prec) = match self {
                    Expr::And(_) => (" & ", PREC_AND),
                    _ => (" | ", PREC_OR),
                };
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    arg.write_child(f, arg.precedence() <= prec)?;
                }
                Ok(())
            }
            // right-associative
            Expr::Implies(lhs, rhs) => {
                lhs.write_child(f, lhs.precedence() <= PREC_IMPLIES)?;
                f.write_str(" -> ")?;
                rhs.write_child(f, rhs.precedence() < PREC_IMPLIES)
            }
            // left-associative
            Expr::Iff(lhs, rhs) => {
                lhs.write_child(f, lhs.precedence() < PREC_IFF)?;
                f.write_str(" <-> ")?;
                rhs.write_child(f, rhs.precedence() <= PREC_IFF)
            }
        }
    }
}

/// Negation normal form with flattened, sorted and deduplicated
/// conjunctions and disjunctions. This is the canonical form behind
/// formula identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nnf {
    Lit { atom: String, positive: bool },
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Nnf {
    pub fn from_expr(expr: &Expr) -> Nnf {
        Self::build(expr, true)
    }

    fn build(expr: &Expr, positive: bool) -> Nnf {
        match expr {
            Expr::Atom(name) => Nnf::Lit {
                atom: name.clone(),
                positive,
            },
            Expr::Not(inner) => Self::build(inner, !positive),
            Expr::And(args) => {
                let parts = args.iter().map(|a| Self::build(a, positive)).collect();
                if positive {
                    Self::and(parts)
                } else {
                    Self::or(parts)
                }
            }
            Expr::Or(args) => {
                let parts = args.iter().map(|a| Self::build(a, positive)).collect();
                if positive {
                    Self::or(parts)
                } else {
                    Self::and(parts)
                }
            }
            Expr::Implies(lhs, rhs) => {
                if positive {
                    Self::or(alloc::vec![Self::build(lhs, false), Self::build(rhs, true)])
                } else {
                    Self::and(alloc::vec![Self::build(lhs, true), Self::build(rhs, false)])
                }
            }
            Expr::Iff(lhs, rhs) => {
                let both = Self::and(alloc::vec![Self::build(lhs, true), Self::build(rhs, positive)]);
                let neither =
                    Self::and(alloc::vec![Self::build(lhs, false), Self::build(rhs, !positive)]);
                Self::or(alloc::vec![both, neither])
            }
        }
    }

    pub fn and(parts: Vec<Nnf>) -> Nnf {
        Self::junction(parts, true)
    }

    pub fn or(parts: Vec<Nnf>) -> Nnf {
        Self::junction(parts, false)
    }

    fn junction(parts: Vec<Nnf>, conjunctive: bool) -> Nnf {
        let mut flat = Vec::with_capacity(parts.len());
        for part in parts {
            match part {
                Nnf::And(inner) if conjunctive => flat.extend(inner),
                Nnf::Or(inner) if !conjunctive => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        assert!(!flat.is_empty(), "empty junction");
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else if conjunctive {
            Nnf::And(flat)
        } else {
            Nnf::Or(flat)
        }
    }

    pub fn negate(&self) -> Nnf {
        match self {
            Nnf::Lit { atom, positive } => Nnf::Lit {
                atom: atom.clone(),
                positive: !positive,
            },
            Nnf::And(args) => Self::or(args.iter().map(Nnf::negate).collect()),
            Nnf::Or(args) => Self::and(args.iter().map(Nnf::negate).collect()),
        }
    }

    pub fn atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Nnf::Lit { atom, .. } => {
                out.insert(atom.as_str());
            }
            Nnf::And(args) | Nnf::Or(args) => args.iter().for_each(|a| a.atoms(out)),
        }
    }

    pub fn eval(&self, value_of: &impl Fn(&str) -> bool) -> bool {
        match self {
            Nnf::Lit { atom, positive } => value_of(atom) == *positive,
            Nnf::And(args) => args.iter().all(|a| a.eval(value_of)),
            Nnf::Or(args) => args.iter().any(|a| a.eval(value_of)),
        }
    }

    /// True if some conjunction in the tree holds both a subformula and its
    /// negation among its conjuncts. A compound negation that is itself a
    /// conjunction counts when all of its conjuncts are present, since
    /// flattening merges them into the parent.
    pub fn has_self_contradiction(&self) -> bool {
        match self {
            Nnf::Lit { .. } => false,
            Nnf::Or(args) => args.iter().any(Nnf::has_self_contradiction),
            Nnf::And(args) => {
                let clash = args.iter().any(|arg| match arg.negate() {
                    Nnf::And(parts) => parts.iter().all(|p| args.binary_search(p).is_ok()),
                    neg => args.binary_search(&neg).is_ok(),
                });
                clash || args.iter().any(Nnf::has_self_contradiction)
            }
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parent_and: bool) -> fmt::Result {
        // nested junctions in a canonical tree always alternate
        let parens = match self {
            Nnf::Lit { .. } => false,
            Nnf::And(_) => !parent_and,
            Nnf::Or(_) => true,
        };
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nnf::Lit { atom, positive } => {
                if !positive {
                    f.write_str("~")?;
                }
                f.write_str(atom)
            }
            Nnf::And(args) | Nnf::Or(args) => {
                let conj = matches!(self, Nnf::And(_));
                let sep = if conj { " & " } else { " | " };
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    arg.write_child(f, conj)?;
                }
                Ok(())
            }
        }
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A propositional sentence. Identity, ordering and hashing follow the
/// canonical key, so `a -> b` and `~a | b` are the same set element.
#[derive(Debug, Clone)]
pub struct Formula {
    expr: Expr,
    nnf: Nnf,
    key: String,
}

impl Formula {
    pub fn new(expr: Expr) -> Formula {
        let nnf = Nnf::from_expr(&expr);
        let key = alloc::format!("{nnf}");
        Formula { expr, nnf, key }
    }

    pub fn atom(name: &str) -> Result<Formula, Error> {
        if !is_identifier(name) {
            return Err(Error::Syntax {
                offset: 0,
                message: alloc::format!("`{name}` is not an identifier"),
            });
        }
        Ok(Self::var(name))
    }

    /// Caller guarantees `name` is an identifier.
    pub(crate) fn var(name: &str) -> Formula {
        debug_assert!(is_identifier(name));
        Formula::new(Expr::Atom(name.to_owned()))
    }

    pub fn negate(&self) -> Formula {
        Formula::new(Expr::Not(Box::new(self.expr.clone())))
    }

    pub fn implies(&self, other: &Formula) -> Formula {
        Formula::new(Expr::Implies(
            Box::new(self.expr.clone()),
            Box::new(other.expr.clone()),
        ))
    }

    /// Conjunction of the given formulas; a single formula is returned as is.
    pub fn all<'a>(parts: impl IntoIterator<Item = &'a Formula>) -> Option<Formula> {
        Self::junction(parts, Expr::And)
    }

    pub fn any<'a>(parts: impl IntoIterator<Item = &'a Formula>) -> Option<Formula> {
        Self::junction(parts, Expr::Or)
    }

    fn junction<'a>(
        parts: impl IntoIterator<Item = &'a Formula>,
        build: fn(Vec<Expr>) -> Expr,
    ) -> Option<Formula> {
        let mut exprs: Vec<Expr> = parts.into_iter().map(|f| f.expr.clone()).collect();
        match exprs.len() {
            0 => None,
            1 => Some(Formula::new(exprs.pop().unwrap())),
            _ => Some(Formula::new(build(exprs))),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn nnf(&self) -> &Nnf {
        &self.nnf
    }

    pub fn canonical_key(&self) -> &str {
        &self.key
    }

    /// The formula rebuilt from its canonical form.
    pub fn canonical(&self) -> Formula {
        Formula::new(nnf_to_expr(&self.nnf))
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.nnf.atoms(&mut out);
        out
    }

    pub fn eval(&self, value_of: &impl Fn(&str) -> bool) -> bool {
        self.nnf.eval(value_of)
    }

    /// Evaluates against an assignment; atoms missing from it are false.
    pub fn eval_map(&self, assignment: &BTreeMap<String, bool>) -> bool {
        self.nnf
            .eval(&|a: &str| assignment.get(a).copied().unwrap_or(false))
    }
}

fn nnf_to_expr(nnf: &Nnf) -> Expr {
    match nnf {
        Nnf::Lit { atom, positive: true } => Expr::Atom(atom.clone()),
        Nnf::Lit { atom, positive: false } => Expr::Not(Box::new(Expr::Atom(atom.clone()))),
        Nnf::And(args) => Expr::And(args.iter().map(nnf_to_expr).collect()),
        Nnf::Or(args) => Expr::Or(args.iter().map(nnf_to_expr).collect()),
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

impl core::str::FromStr for Formula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        super::parse(text)
    }
}

/// Insertion-ordered set of formulas, distinct by canonical key.
#[derive(Debug, Clone, Default)]
pub struct FormulaSet {
    members: Vec<Formula>,
    keys: BTreeSet<String>,
}

impl FormulaSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when an equal formula was already present.
    pub fn insert(&mut self, formula: Formula) -> bool {
        if self.keys.contains(formula.canonical_key()) {
            return false;
        }
        self.keys.insert(formula.key.clone());
        self.members.push(formula);
        true
    }

    pub fn contains(&self, formula: &Formula) -> bool {
        self.keys.contains(formula.canonical_key())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Formula> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.members
    }

    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        let mut out = self.clone();
        out.extend(other.iter().cloned());
        out
    }

    /// Members of `self` that also occur in `other`, in `self`'s order.
    pub fn intersection(&self, other: &FormulaSet) -> FormulaSet {
        self.iter().filter(|f| other.contains(f)).cloned().collect()
    }

    /// Order-insensitive equality.
    pub fn same_members(&self, other: &FormulaSet) -> bool {
        self.keys == other.keys
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for f in &self.members {
            f.nnf.atoms(&mut out);
        }
        out
    }
}

impl PartialEq for FormulaSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for FormulaSet {}

impl Extend<Formula> for FormulaSet {
    fn extend<T: IntoIterator<Item = Formula>>(&mut self, iter: T) {
        for f in iter {
            self.insert(f);
        }
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        let mut out = FormulaSet::new();
        out.extend(iter);
        out
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = core::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    fn p(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn identity_is_canonical() {
        assert_eq!(p("a -> b"), p("~a | b"));
        assert_eq!(p("b & a"), p("a & b"));
        assert_eq!(p("a & (b & c)"), p("(a & b) & c"));
        assert_eq!(p("~~a"), p("a"));
        assert_eq!(p("a & a"), p("a"));
        assert_ne!(p("a"), p("b"));
    }

    #[test]
    fn canonicalization_is_idempotent() {
        for text in ["a <-> b", "~(a -> (b | ~c))", "(a | b) & ~(a | b)", "x"] {
            let f = p(text);
            assert_eq!(f.canonical().canonical_key(), f.canonical_key());
            assert_eq!(p(f.canonical_key()), f);
        }
    }

    #[test]
    fn self_contradiction_detection() {
        assert!(p("s & ~s").nnf().has_self_contradiction());
        assert!(p("(a | b) & ~(a | b)").nnf().has_self_contradiction());
        assert!(p("c | (a & b & ~(a & b))").nnf().has_self_contradiction());
        assert!(!p("s | ~s").nnf().has_self_contradiction());
        assert!(!p("a & ~b").nnf().has_self_contradiction());
    }

    #[test]
    fn formula_set_dedups_by_key() {
        let mut set = FormulaSet::new();
        assert!(set.insert(p("a -> b")));
        assert!(!set.insert(p("~a | b")));
        assert!(set.insert(p("c")));
        assert_eq!(set.len(), 2);
        assert_eq!(set.as_slice()[1], p("c"));
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("wins_10"));
        assert!(is_identifier("_x"));
        assert!(!is_identifier("1a"));
        assert!(!is_identifier(""));
        assert!(Formula::atom("a b").is_err());
    }
}
