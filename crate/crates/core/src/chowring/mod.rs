//! Exact intersection numbers in small truncated graded quotient rings.
//!
//! A ring is given by generators with positive grades, a truncation grade
//! `n`, and a list of grade-preserving rewrite rules. Every monomial of grade
//! above `n` is zero; every grade-`n` monomial must reduce to a rational
//! multiple of the declared fundamental monomial, whose integral is fixed by
//! the presentation. All arithmetic is over arbitrary-precision rationals.
//!
//! Normal forms of every monomial of grade `<= n` are computed once when the
//! ring is built, so multiplication is a table lookup per pair of terms.

mod monomial;
mod presentation;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use monomial::{monomials_up_to, Monomial};
pub use presentation::{Generator, RewriteRule, RingPresentation};

pub type Rational = num_rational::BigRational;

/// Upper bound on rewrite steps while tabulating normal forms.
const REWRITE_BUDGET: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("invalid ring presentation: {0}")]
    Configuration(String),
    #[error("classes belong to different rings")]
    RingMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

type Terms = BTreeMap<Monomial, Rational>;

/// A validated presentation with its normal-form table.
#[derive(Debug)]
pub struct Ring {
    presentation: RingPresentation,
    grades: Vec<u32>,
    names: Vec<String>,
    normal_forms: HashMap<Monomial, Terms>,
}

pub fn make_ring(presentation: RingPresentation) -> Result<Arc<Ring>, ChowError> {
    Ring::new(presentation).map(Arc::new)
}

impl Ring {
    fn new(presentation: RingPresentation) -> Result<Ring, ChowError> {
        let cfg = |msg: String| ChowError::Configuration(msg);
        let k = presentation.generators.len();
        if k == 0 {
            return Err(cfg("no generators".into()));
        }
        if presentation.truncation == 0 {
            return Err(cfg("truncation grade must be positive".into()));
        }
        let grades = presentation.grades();
        let names = presentation.names();
        for (i, g) in presentation.generators.iter().enumerate() {
            if g.grade == 0 {
                return Err(cfg(format!("generator `{}` has grade 0", g.name)));
            }
            if names[..i].contains(&g.name) {
                return Err(cfg(format!("duplicate generator `{}`", g.name)));
            }
        }

        for (i, rule) in presentation.rules.iter().enumerate() {
            if rule.lhs.len() != k || rule.rhs.iter().any(|(_, m)| m.len() != k) {
                return Err(cfg(format!("rule {i} has the wrong number of exponents")));
            }
            if rule.lhs.is_one() {
                return Err(cfg(format!("rule {i} rewrites the unit")));
            }
            let lhs_grade = rule.lhs.grade(&grades);
            for (_, m) in &rule.rhs {
                if m.grade(&grades) != lhs_grade {
                    return Err(cfg(format!(
                        "rule {i} is not grade-preserving: {} -> {}",
                        rule.lhs.display(&names),
                        m.display(&names)
                    )));
                }
                if m.cmp_grlex(&rule.lhs, &grades) != Ordering::Less {
                    return Err(cfg(format!(
                        "rule {i} does not terminate: {} is not below {} in graded lex order",
                        m.display(&names),
                        rule.lhs.display(&names)
                    )));
                }
            }
            if presentation.rules[..i].iter().any(|r| r.lhs == rule.lhs) {
                return Err(cfg(format!(
                    "ambiguous rules: {} is rewritten twice",
                    rule.lhs.display(&names)
                )));
            }
        }

        let fundamental = &presentation.fundamental;
        if fundamental.len() != k || fundamental.grade(&grades) != presentation.truncation {
            return Err(cfg(
                "fundamental monomial must have the truncation grade".into()
            ));
        }
        if presentation
            .rules
            .iter()
            .any(|r| r.lhs.divides(fundamental))
        {
            return Err(cfg("fundamental monomial is reducible".into()));
        }

        let forward: Vec<usize> = (0..presentation.rules.len()).collect();
        let backward: Vec<usize> = forward.iter().rev().copied().collect();
        let monomials = monomials_up_to(&grades, presentation.truncation);

        let mut budget = REWRITE_BUDGET;
        let mut table = HashMap::new();
        for m in &monomials {
            normal_form(&presentation, &grades, &forward, m, &mut table, &mut budget)?;
        }
        let mut other = HashMap::new();
        for m in &monomials {
            let a = &table[m];
            let b = normal_form(
                &presentation,
                &grades,
                &backward,
                m,
                &mut other,
                &mut budget,
            )?;
            if *a != b {
                return Err(cfg(format!(
                    "ambiguous rules: {} has two different normal forms",
                    m.display(&names)
                )));
            }
        }
        for m in &monomials {
            if m.grade(&grades) != presentation.truncation {
                continue;
            }
            if table[m].keys().any(|r| r != fundamental) {
                return Err(cfg(format!(
                    "top-grade monomial {} does not reduce to a multiple of {}",
                    m.display(&names),
                    fundamental.display(&names)
                )));
            }
        }

        Ok(Ring {
            presentation,
            grades,
            names,
            normal_forms: table,
        })
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn truncation(&self) -> u32 {
        self.presentation.truncation
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn grade(&self, m: &Monomial) -> u32 {
        m.grade(&self.grades)
    }

    pub fn zero(self: &Arc<Self>) -> ChowClass {
        ChowClass {
            ring: Arc::clone(self),
            terms: Terms::new(),
        }
    }

    pub fn one(self: &Arc<Self>) -> ChowClass {
        self.monomial(&Monomial::one(self.names.len()))
    }

    pub fn constant(self: &Arc<Self>, c: Rational) -> ChowClass {
        self.one().scale(&c)
    }

    /// The reduced class of a monomial.
    pub fn monomial(self: &Arc<Self>, m: &Monomial) -> ChowClass {
        let terms = if m.grade(&self.grades) > self.truncation() {
            Terms::new()
        } else {
            self.normal_forms[m].clone()
        };
        ChowClass {
            ring: Arc::clone(self),
            terms,
        }
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<ChowClass, ChowError> {
        let idx = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ChowError::UnknownGenerator(name.to_string()))?;
        Ok(self.generator_at(idx))
    }

    pub fn generator_at(self: &Arc<Self>, index: usize) -> ChowClass {
        self.monomial(&Monomial::generator(self.names.len(), index, 1))
    }

    /// `sum coefficient_i * generator_i` over all generators.
    pub fn linear(self: &Arc<Self>, coefficients: &[i64]) -> ChowClass {
        assert_eq!(
            coefficients.len(),
            self.names.len(),
            "one coefficient per generator"
        );
        let mut out = self.zero();
        for (i, &c) in coefficients.iter().enumerate() {
            if c != 0 {
                out = out
                    .add(&self.generator_at(i).scale_int(c))
                    .expect("same ring");
            }
        }
        out
    }

    /// Reduce a monomial applying rules in the given priority order, bypassing
    /// the tabulated normal forms. Used to check confluence.
    pub fn reduce_with_priority(
        self: &Arc<Self>,
        m: &Monomial,
        priority: &[usize],
    ) -> Result<ChowClass, ChowError> {
        if priority.len() != self.presentation.rules.len()
            || priority.iter().any(|&i| i >= self.presentation.rules.len())
        {
            return Err(ChowError::Configuration(
                "priority must list rule indices".into(),
            ));
        }
        let mut cache = HashMap::new();
        let mut budget = REWRITE_BUDGET;
        let terms = normal_form(
            &self.presentation,
            &self.grades,
            priority,
            m,
            &mut cache,
            &mut budget,
        )?;
        Ok(ChowClass {
            ring: Arc::clone(self),
            terms,
        })
    }
}

fn normal_form(
    p: &RingPresentation,
    grades: &[u32],
    priority: &[usize],
    m: &Monomial,
    cache: &mut HashMap<Monomial, Terms>,
    budget: &mut usize,
) -> Result<Terms, ChowError> {
    if m.grade(grades) > p.truncation {
        return Ok(Terms::new());
    }
    if let Some(t) = cache.get(m) {
        return Ok(t.clone());
    }
    if *budget == 0 {
        return Err(ChowError::Configuration(
            "rewriting does not terminate".into(),
        ));
    }
    *budget -= 1;

    let rule = priority
        .iter()
        .map(|&i| &p.rules[i])
        .find(|r| r.lhs.divides(m));
    let out = match rule {
        None => {
            let mut t = Terms::new();
            t.insert(m.clone(), Rational::one());
            t
        }
        Some(rule) => {
            let q = rule.lhs.quotient_of(m);
            let mut acc = Terms::new();
            for (c, r) in &rule.rhs {
                let sub = normal_form(p, grades, priority, &r.mul(&q), cache, budget)?;
                for (mono, coeff) in sub {
                    add_term(&mut acc, mono, c * coeff);
                }
            }
            acc
        }
    };
    cache.insert(m.clone(), out.clone());
    Ok(out)
}

fn add_term(terms: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

/// An element of a ring: reduced monomials with nonzero rational coefficients.
#[derive(Clone, Debug)]
pub struct ChowClass {
    ring: Arc<Ring>,
    terms: Terms,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl ChowClass {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_ring(&self, other: &ChowClass) -> Result<(), ChowError> {
        if Arc::ptr_eq(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(ChowError::RingMismatch)
        }
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(ChowClass {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    pub fn sub(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChowClass {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> ChowClass {
        let terms = if c.is_zero() {
            Terms::new()
        } else {
            self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect()
        };
        ChowClass {
            ring: Arc::clone(&self.ring),
            terms,
        }
    }

    pub fn scale_int(&self, c: i64) -> ChowClass {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        multiply(self, other)
    }
}

/// Product of two classes, fully reduced.
pub fn multiply(a: &ChowClass, b: &ChowClass) -> Result<ChowClass, ChowError> {
    a.check_ring(b)?;
    let ring = &a.ring;
    let n = ring.truncation();
    let mut terms = Terms::new();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m = ma.mul(mb);
            if ring.grade(&m) > n {
                continue;
            }
            let coeff = ca * cb;
            for (r, c) in &ring.normal_forms[&m] {
                add_term(&mut terms, r.clone(), &coeff * c);
            }
        }
    }
    Ok(ChowClass {
        ring: Arc::clone(ring),
        terms,
    })
}

/// `c^k`; `c^0` is the identity of the ring.
pub fn power(c: &ChowClass, k: u32) -> ChowClass {
    let mut result = c.ring.one();
    let mut base = c.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = multiply(&result, &base).expect("same ring");
        }
        k >>= 1;
        if k > 0 {
            base = multiply(&base, &base).expect("same ring");
        }
    }
    result
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Degree of the top-grade component: coefficient of the fundamental
/// monomial times its declared integral.
pub fn integrate(c: &ChowClass) -> Rational {
    let p = &c.ring.presentation;
    c.coefficient(&p.fundamental) * Rational::from_integer(p.fundamental_integral.clone())
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", m.display(&self.ring.names))?;
            } else {
                write!(f, "{c}*{}", m.display(&self.ring.names))?;
            }
        }
        Ok(())
    }
}
