use num_bigint::BigInt;
use num_traits::One;

use super::monomial::Monomial;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub grade: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, grade: u32) -> Self {
        Generator {
            name: name.into(),
            grade,
        }
    }
}

/// `lhs -> sum(coefficient * monomial)`. An empty right-hand side sends the
/// monomial to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub lhs: Monomial,
    pub rhs: Vec<(Rational, Monomial)>,
}

impl RewriteRule {
    pub fn to_zero(lhs: Monomial) -> Self {
        RewriteRule {
            lhs,
            rhs: Vec::new(),
        }
    }
}

/// A truncated graded quotient ring together with its degree map.
///
/// Rules are applied with priority given by their position in `rules`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingPresentation {
    pub generators: Vec<Generator>,
    pub truncation: u32,
    pub rules: Vec<RewriteRule>,
    pub fundamental: Monomial,
    pub fundamental_integral: BigInt,
}

impl RingPresentation {
    /// `Q[h]/(h^{n+1})` with `∫ h^n = 1`.
    pub fn projective_space(n: u32) -> Self {
        RingPresentation {
            generators: vec![Generator::new("h", 1)],
            truncation: n,
            rules: vec![RewriteRule::to_zero(Monomial::new(vec![n + 1]))],
            fundamental: Monomial::new(vec![n]),
            fundamental_integral: BigInt::one(),
        }
    }

    /// Projective bundle of `O(a_1) + ... + O(a_n)` over the line, with `xi`
    /// the relative hyperplane class and `h` the class of a fibre.
    ///
    /// Only the sum of the twists enters the ring: `h^2 = 0` and
    /// `xi^n = (sum a_i) xi^{n-1} h`, with `∫ xi^{n-1} h = 1`.
    pub fn scroll(n: u32, twist_sum: u64) -> Self {
        let xi_n = Monomial::new(vec![n, 0]);
        let xi_h = Monomial::new(vec![n - 1, 1]);
        RingPresentation {
            generators: vec![Generator::new("xi", 1), Generator::new("h", 1)],
            truncation: n,
            rules: vec![
                RewriteRule::to_zero(Monomial::new(vec![0, 2])),
                RewriteRule {
                    lhs: xi_n,
                    rhs: vec![(
                        Rational::from_integer(BigInt::from(twist_sum)),
                        xi_h.clone(),
                    )],
                },
            ],
            fundamental: xi_h,
            fundamental_integral: BigInt::one(),
        }
    }

    /// Tensor product of projective-space rings, one generator `h_i` per factor.
    pub fn product(dims: &[u32]) -> Self {
        let k = dims.len();
        let generators = (0..k)
            .map(|i| Generator::new(format!("h{}", i + 1), 1))
            .collect();
        let rules = dims
            .iter()
            .enumerate()
            .map(|(i, &a)| RewriteRule::to_zero(Monomial::generator(k, i, a + 1)))
            .collect();
        RingPresentation {
            generators,
            truncation: dims.iter().sum(),
            rules,
            fundamental: Monomial::new(dims.to_vec()),
            fundamental_integral: BigInt::one(),
        }
    }

    pub fn grades(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.grade).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }
}
