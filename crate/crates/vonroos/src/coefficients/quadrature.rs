//! Iterated Gauss-Legendre quadrature over the triangular region.
//!
//! The outer rule runs over `alpha`; the inner rule runs over `beta` with
//! alpha-dependent bounds, affinely mapped from the reference interval.
//! The integrands are smooth (polynomial or rational over the region), so
//! convergence under order doubling is spectral and the default order is
//! already exact for polynomial densities.

use crate::domain::Region;
use crate::weight::WeightSpec;

use super::{eta1_integrand, eta2_integrand, CoefficientError};

/// Hard ceiling for order-doubling refinement.
pub const MAX_QUADRATURE_ORDER: usize = 4096;

const DEFAULT_ORDER: usize = 64;
const DEFAULT_TOL: f64 = 1e-12;

/// Quadrature order and optional refinement tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    order: usize,
    refine_tol: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: DEFAULT_ORDER,
            refine_tol: Some(DEFAULT_TOL),
        }
    }
}

impl QuadratureConfig {
    /// `order` points per axis (at least 2); `refine_tol`, when set, enables
    /// order doubling until successive estimates differ by less than the
    /// tolerance.
    pub fn new(order: usize, refine_tol: Option<f64>) -> Result<Self, CoefficientError> {
        if order < 2 {
            return Err(CoefficientError::InvalidOrder(order));
        }
        if let Some(tol) = refine_tol {
            if !(tol > 0.0) {
                return Err(CoefficientError::InvalidTolerance(tol));
            }
        }
        Ok(QuadratureConfig { order, refine_tol })
    }

    /// Fixed order, no refinement.
    pub fn fixed(order: usize) -> Result<Self, CoefficientError> {
        Self::new(order, None)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn refine_tol(&self) -> Option<f64> {
        self.refine_tol
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Recurrence up to P_n and its derivative at z.
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / pp;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

pub(super) struct RawEstimate {
    pub eta1: f64,
    pub eta2: f64,
    pub total: f64,
}

/// One pass of the iterated rule at the given order.
pub(super) fn integrate(
    region: &Region,
    weight: &WeightSpec,
    order: usize,
) -> Result<RawEstimate, CoefficientError> {
    let (nodes, wts) = gauss_legendre(order);
    let (alo, ahi) = region.alpha_range();
    let a_half = 0.5 * (ahi - alo);
    let a_mid = 0.5 * (ahi + alo);

    let mut s_rho = 0.0;
    let mut s_one = 0.0;
    let mut s_two = 0.0;
    for (ta, wa) in nodes.iter().zip(&wts) {
        let alpha = a_mid + a_half * ta;
        let (blo, bhi) = region.beta_range(alpha);
        if bhi <= blo {
            continue;
        }
        let b_half = 0.5 * (bhi - blo);
        let b_mid = 0.5 * (bhi + blo);
        let mut r_rho = 0.0;
        let mut r_one = 0.0;
        let mut r_two = 0.0;
        for (tb, wb) in nodes.iter().zip(&wts) {
            let beta = b_mid + b_half * tb;
            let rho = weight.eval(alpha, beta)?;
            r_rho += wb * rho;
            r_one += wb * rho * eta1_integrand(alpha, beta);
            r_two += wb * rho * eta2_integrand(alpha, beta);
        }
        let scale = wa * b_half;
        s_rho += scale * r_rho;
        s_one += scale * r_one;
        s_two += scale * r_two;
    }

    let total = a_half * s_rho;
    if !(total > 0.0) {
        return Err(CoefficientError::NonPositiveWeight(total));
    }
    Ok(RawEstimate {
        eta1: s_one / s_rho,
        eta2: s_two / s_rho,
        total,
    })
}

/// The 2-D node set of the iterated rule: `(alpha, beta, combined weight)`
/// triples whose weighted sums reproduce the region integrals.
pub fn region_nodes(region: &Region, order: usize) -> Vec<(f64, f64, f64)> {
    let (nodes, wts) = gauss_legendre(order);
    let (alo, ahi) = region.alpha_range();
    let a_half = 0.5 * (ahi - alo);
    let a_mid = 0.5 * (ahi + alo);
    let mut out = Vec::with_capacity(order * order);
    for (ta, wa) in nodes.iter().zip(&wts) {
        let alpha = a_mid + a_half * ta;
        let (blo, bhi) = region.beta_range(alpha);
        if bhi <= blo {
            continue;
        }
        let b_half = 0.5 * (bhi - blo);
        let b_mid = 0.5 * (bhi + blo);
        for (tb, wb) in nodes.iter().zip(&wts) {
            let beta = b_mid + b_half * tb;
            out.push((alpha, beta, a_half * b_half * wa * wb));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights_have_gauss_properties() {
        for n in [2usize, 3, 5, 16, 64] {
            let (nodes, weights) = gauss_legendre(n);
            // weights sum to the interval length
            let total: f64 = weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}: {total}");
            // nodes are symmetric, ascending, inside (-1, 1)
            for i in 0..n {
                assert!(nodes[i].abs() < 1.0);
                assert!((nodes[i] + nodes[n - 1 - i]).abs() < 1e-14);
                if i > 0 {
                    assert!(nodes[i] > nodes[i - 1]);
                }
            }
            // exact for x^(2n-2)
            let p = 2 * n as i32 - 2;
            let quad: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * x.powi(p))
                .sum();
            let exact = 2.0 / (p as f64 + 1.0);
            assert!((quad - exact).abs() < 1e-12, "n={n}: {quad} vs {exact}");
        }
    }

    #[test]
    fn region_weight_of_uniform_is_the_area() {
        for b in [-0.5, 0.0, 1.0, 4.0] {
            let region = Region::new(b).unwrap();
            let est = integrate(&region, &WeightSpec::Uniform, 16).unwrap();
            assert!(
                (est.total - region.projected_area()).abs() < 1e-12,
                "b={b}: {} vs {}",
                est.total,
                region.projected_area()
            );
        }
    }

    #[test]
    fn node_weights_reproduce_the_integral() {
        let region = Region::new(0.0).unwrap();
        let est = integrate(&region, &WeightSpec::Uniform, 8).unwrap();
        let nodes = region_nodes(&region, 8);
        let total: f64 = nodes.iter().map(|(_, _, w)| w).sum();
        assert!((total - est.total).abs() < 1e-13);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(1, None).is_err());
        assert!(QuadratureConfig::new(2, Some(0.0)).is_err());
        assert!(QuadratureConfig::new(2, Some(-1.0)).is_err());
        let cfg = QuadratureConfig::default();
        assert_eq!(cfg.order(), 64);
        assert_eq!(cfg.refine_tol(), Some(1e-12));
    }
}
