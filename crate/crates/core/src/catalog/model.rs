use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::pair::{Family, PolarizedPair};
use super::CatalogError;
use crate::chowring::{
    integrate, make_ring, multiply, power, ChowClass, Rational, Ring, RingPresentation,
};

/// Intersection-theoretic model of a pair: a ring, the classes of `L` and
/// `K_M`, and the class `[M]` that pushes integrals on `M` forward to the
/// ring's fundamental class (`1` unless `M` is cut out of an ambient space).
pub(crate) struct ChowModel {
    pub n: u32,
    pub hyperplane: ChowClass,
    pub canonical: ChowClass,
    pub fundamental: ChowClass,
}

fn ring_cache() -> &'static Mutex<HashMap<RingPresentation, Arc<Ring>>> {
    static CACHE: OnceLock<Mutex<HashMap<RingPresentation, Arc<Ring>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn ring_for(p: RingPresentation) -> Result<Arc<Ring>, CatalogError> {
    if let Some(r) = ring_cache().lock().expect("ring cache poisoned").get(&p) {
        return Ok(Arc::clone(r));
    }
    let ring = make_ring(p.clone())?;
    let mut cache = ring_cache().lock().expect("ring cache poisoned");
    Ok(Arc::clone(cache.entry(p).or_insert(ring)))
}

fn to_i64(v: u64) -> Result<i64, CatalogError> {
    i64::try_from(v).map_err(|_| CatalogError::Overflow(format!("{v} does not fit in i64")))
}

impl ChowModel {
    pub fn build(pair: &PolarizedPair) -> Result<ChowModel, CatalogError> {
        let n = pair.dimension();
        let ni = n as i64;
        match pair.family() {
            Family::ProjectiveSpace { twist, .. } => {
                let ring = ring_for(RingPresentation::projective_space(n))?;
                Ok(ChowModel {
                    n,
                    hyperplane: ring.linear(&[*twist as i64]),
                    canonical: ring.linear(&[-(ni + 1)]),
                    fundamental: ring.one(),
                })
            }
            Family::Hypersurface { degree, .. } => Self::complete_intersection(n, &[*degree]),
            Family::CompleteIntersection { degrees, .. } => Self::complete_intersection(n, degrees),
            Family::Scroll { a } => {
                let sum: u64 = a.iter().map(|&x| x as u64).sum();
                let ring = ring_for(RingPresentation::scroll(n, sum))?;
                Ok(ChowModel {
                    n,
                    hyperplane: ring.linear(&[1, 0]),
                    canonical: ring.linear(&[-ni, to_i64(sum)? - 2]),
                    fundamental: ring.one(),
                })
            }
            Family::Product {
                factors,
                multidegree,
            } => {
                let ring = ring_for(RingPresentation::product(factors))?;
                let l: Vec<i64> = multidegree.iter().map(|&d| d as i64).collect();
                let k: Vec<i64> = factors.iter().map(|&a| -(a as i64 + 1)).collect();
                Ok(ChowModel {
                    n,
                    hyperplane: ring.linear(&l),
                    canonical: ring.linear(&k),
                    fundamental: ring.one(),
                })
            }
        }
    }

    /// `X` of multidegree `degrees` in `P^{n+c}`: integrals on `X` are
    /// `∫_P (prod d_i) h^c * (-)`, `K_X = (sum d_i - n - c - 1) h`, `L = h`.
    fn complete_intersection(n: u32, degrees: &[u32]) -> Result<ChowModel, CatalogError> {
        let c = degrees.len() as u32;
        let ring = ring_for(RingPresentation::projective_space(n + c))?;
        let h = ring.linear(&[1]);
        let prod: BigInt = degrees.iter().map(|&d| BigInt::from(d)).product();
        let sum: i64 = degrees.iter().map(|&d| d as i64).sum();
        Ok(ChowModel {
            n,
            fundamental: power(&h, c).scale(&Rational::from_integer(prod)),
            canonical: h.scale_int(sum - n as i64 - c as i64 - 1),
            hyperplane: h,
        })
    }

    pub fn integrate_on_m(&self, c: &ChowClass) -> Result<Rational, CatalogError> {
        Ok(integrate(&multiply(&self.fundamental, c)?))
    }

    /// `L^n`.
    pub fn degree(&self) -> Result<Rational, CatalogError> {
        self.integrate_on_m(&power(&self.hyperplane, self.n))
    }

    /// `(K_M + (n-1) L) . L^{n-1}`.
    pub fn canonical_intersection(&self) -> Result<Rational, CatalogError> {
        let adjoint = self
            .canonical
            .add(&self.hyperplane.scale_int(self.n as i64 - 1))?;
        self.integrate_on_m(&multiply(&adjoint, &power(&self.hyperplane, self.n - 1))?)
    }

    /// Whether `K_M = (1 - n) L` holds on `M`, compared after pushing forward.
    pub fn is_del_pezzo(&self) -> Result<bool, CatalogError> {
        let k = multiply(&self.fundamental, &self.canonical)?;
        let target = multiply(
            &self.fundamental,
            &self.hyperplane.scale_int(1 - self.n as i64),
        )?;
        Ok(k == target)
    }
}
