use std::cmp::Ordering;
use std::fmt;

/// Exponent vector over the generators of a ring presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    /// The monomial consisting of a single generator raised to `power`.
    pub fn generator(generators: usize, index: usize, power: u32) -> Self {
        let mut exps = vec![0; generators];
        exps[index] = power;
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn grade(&self, grades: &[u32]) -> u32 {
        self.0.iter().zip(grades).map(|(e, g)| e * g).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// Graded lexicographic comparison: total grade first, then exponents
    /// read in generator order.
    pub fn cmp_grlex(&self, other: &Monomial, grades: &[u32]) -> Ordering {
        self.grade(grades)
            .cmp(&other.grade(grades))
            .then_with(|| self.0.cmp(&other.0))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay {
            monomial: self,
            names,
        }
    }
}

pub struct MonomialDisplay<'a> {
    monomial: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomial.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (e, name) in self.monomial.0.iter().zip(self.names) {
            if *e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Every monomial of grade at most `max_grade`, in lexicographic exponent order.
pub fn monomials_up_to(grades: &[u32], max_grade: u32) -> Vec<Monomial> {
    fn rec(grades: &[u32], idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == grades.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let g = grades[idx];
        let mut e = 0;
        while e * g <= left {
            cur.push(e);
            rec(grades, idx + 1, left - e * g, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(grades, 0, max_grade, &mut Vec::new(), &mut out);
    out
}
