//! Gauss-Legendre rules, product quadrature on the unit sphere, truncated
//! plane rules, and a deterministic pairwise summation used by all of them.

use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrkError};
use crate::geometry::Direction;
use crate::scalar::{lit, Linear, Real};

/// Sums `items` by recursive halving. The reduction tree depends only on the
/// slice length, so results are bit-reproducible.
pub fn pairwise_sum<V: Copy + Add<Output = V>>(items: &[V], zero: V) -> V {
    const BLOCK: usize = 8;
    if items.len() <= BLOCK {
        return items.iter().fold(zero, |acc, &v| acc + v);
    }
    let mid = items.len() / 2;
    pairwise_sum(&items[..mid], zero) + pairwise_sum(&items[mid..], zero)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, symmetric to the last bit.
///
/// Nodes are computed in `f64` by Newton iteration on the three-term
/// recurrence and then converted.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 {
        return Err(TrkError::QuadratureOrder("Gauss-Legendre order must be positive".into()));
    }
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        // Ascending order: node i from the left is -z.
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    Ok((
        x.into_iter().map(lit).collect(),
        w.into_iter().map(lit).collect(),
    ))
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_interval<T: Real>(n: usize, a: T, b: T) -> Result<(Vec<T>, Vec<T>)> {
    let (x, w) = gauss_legendre::<T>(n)?;
    let half = (b - a) / lit(2.0);
    let mid = (a + b) / lit(2.0);
    Ok((
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&t| half * t).collect(),
    ))
}

/// Product rule on S²: Gauss-Legendre in `cos θ` times uniform azimuth.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature<T: Real> {
    pub nodes: Vec<Direction<T>>,
    pub weights: Vec<T>,
    n_polar: usize,
    n_azimuth: usize,
    antipode: Option<Vec<usize>>,
}

impl<T: Real> SphereQuadrature<T> {
    /// Builds the `n_polar × n_azimuth` rule. With `antipodal` set the node
    /// set is closed under `κ → −κ` by construction (requires even
    /// `n_azimuth`), and every node knows the index of its antipode.
    pub fn new(n_polar: usize, n_azimuth: usize, antipodal: bool) -> Result<Self> {
        if n_polar < 2 || n_azimuth < 4 {
            return Err(TrkError::QuadratureOrder(format!(
                "sphere rule needs n_polar >= 2 and n_azimuth >= 4, got ({n_polar}, {n_azimuth})"
            )));
        }
        if antipodal && n_azimuth % 2 != 0 {
            return Err(TrkError::QuadratureOrder(
                "antipodal closure needs an even azimuthal count".into(),
            ));
        }
        let (t, w) = gauss_legendre::<f64>(n_polar)?;
        let dphi = std::f64::consts::TAU / n_azimuth as f64;
        let idx = |i: usize, j: usize| i * n_azimuth + j;
        let mut nodes = vec![Direction::<T>::ez(); n_polar * n_azimuth];
        let mut weights = vec![T::zero(); n_polar * n_azimuth];
        let mut antipode = vec![0usize; n_polar * n_azimuth];
        let half_az = n_azimuth / 2;
        for i in 0..n_polar {
            let s = (1.0 - t[i] * t[i]).max(0.0).sqrt();
            for j in 0..n_azimuth {
                let k = idx(i, j);
                weights[k] = lit(w[i] * dphi);
                let partner = if antipodal {
                    Some(idx(n_polar - 1 - i, (j + half_az) % n_azimuth))
                } else {
                    None
                };
                let primary = match partner {
                    Some(q) => k < q,
                    None => true,
                };
                if primary {
                    let phi = dphi * j as f64;
                    nodes[k] = Direction::from_unit_unchecked(
                        lit(s * phi.cos()),
                        lit(s * phi.sin()),
                        lit(t[i]),
                    );
                }
                if let Some(q) = partner {
                    antipode[k] = q;
                }
            }
        }
        if antipodal {
            for k in 0..nodes.len() {
                if antipode[k] < k {
                    nodes[k] = nodes[antipode[k]].antipode();
                }
            }
        }
        Ok(Self {
            nodes,
            weights,
            n_polar,
            n_azimuth,
            antipode: antipodal.then_some(antipode),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.n_polar, self.n_azimuth)
    }

    pub fn is_antipodal(&self) -> bool {
        self.antipode.is_some()
    }

    /// Index of the node at `−κ_k`, when the rule is antipodally closed.
    pub fn antipode_of(&self, k: usize) -> Option<usize> {
        self.antipode.as_ref().map(|a| a[k])
    }

    /// `∫ f dΩ` with pairwise summation.
    pub fn integrate<V: Linear<T>>(&self, f: impl Fn(&Direction<T>) -> V) -> V {
        let terms: Vec<V> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(n, &w)| f(n).scaled(w))
            .collect();
        pairwise_sum(&terms, V::zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaneRule {
    GaussLegendre,
    Trapezoid,
}

/// Tensor rule on the square `[-h, h]²` of a plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneQuadrature<T: Real> {
    half_width: T,
    nodes_per_axis: usize,
    rule: PlaneRule,
}

impl<T: Real> PlaneQuadrature<T> {
    pub fn new(half_width: T, nodes_per_axis: usize, rule: PlaneRule) -> Result<Self> {
        if !(half_width > T::zero()) {
            return Err(TrkError::QuadratureOrder("plane half-width must be positive".into()));
        }
        if nodes_per_axis < 2 {
            return Err(TrkError::QuadratureOrder("plane rule needs at least 2 nodes per axis".into()));
        }
        Ok(Self {
            half_width,
            nodes_per_axis,
            rule,
        })
    }

    /// Gauss-Legendre rule with half-width 8× the given decay scale.
    pub fn for_width(width: T, nodes_per_axis: usize) -> Result<Self> {
        Self::new(width * lit(8.0), nodes_per_axis, PlaneRule::GaussLegendre)
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }

    pub fn rule(&self) -> PlaneRule {
        self.rule
    }

    /// One-dimensional nodes and weights along an axis of the square.
    pub fn axis_rule(&self) -> (Vec<T>, Vec<T>) {
        let h = self.half_width;
        let n = self.nodes_per_axis;
        match self.rule {
            PlaneRule::GaussLegendre => {
                gauss_legendre_interval(n, -h, h).expect("order checked at construction")
            }
            PlaneRule::Trapezoid => {
                let step = h * lit(2.0) / lit((n - 1) as f64);
                let x = (0..n).map(|i| -h + step * lit(i as f64)).collect();
                let w = (0..n)
                    .map(|i| if i == 0 || i == n - 1 { step / lit(2.0) } else { step })
                    .collect();
                (x, w)
            }
        }
    }
}

impl<T: Real> Default for SphereQuadrature<T> {
    /// 16 × 32 antipodal product rule.
    fn default() -> Self {
        Self::new(16, 32, true).expect("valid default orders")
    }
}

impl<T: Real> Default for PlaneQuadrature<T> {
    fn default() -> Self {
        Self {
            half_width: lit(8.0),
            nodes_per_axis: 64,
            rule: PlaneRule::GaussLegendre,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre::<f64>(10).unwrap();
        for deg in 0..20 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - exact).abs() < 1e-14, "degree {deg}: {got} vs {exact}");
        }
    }

    #[test]
    fn gauss_legendre_rejects_zero_order() {
        assert!(gauss_legendre::<f64>(0).is_err());
    }

    #[test]
    fn sphere_rule_basic_moments() {
        let q = SphereQuadrature::<f64>::new(2, 4, false).unwrap();
        assert_eq!(q.len(), 8);
        let s: f64 = q.weights.iter().sum();
        assert!((s - 4.0 * PI).abs() < 1e-12);

        let q = SphereQuadrature::<f64>::new(8, 16, false).unwrap();
        let one = q.integrate(|_| 1.0);
        let z = q.integrate(|k| k.z());
        let z2 = q.integrate(|k| k.z() * k.z());
        assert!((one - 4.0 * PI).abs() < 1e-12);
        assert!(z.abs() < 1e-14);
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_rule_rejects_small_orders() {
        assert!(SphereQuadrature::<f64>::new(1, 8, false).is_err());
        assert!(SphereQuadrature::<f64>::new(4, 3, false).is_err());
        assert!(SphereQuadrature::<f64>::new(4, 6, true).is_ok());
        assert!(SphereQuadrature::<f64>::new(4, 5, true).is_err());
    }

    #[test]
    fn antipodal_closure_is_exact() {
        for &(np, na) in &[(2, 4), (5, 8), (8, 16), (7, 10)] {
            let q = SphereQuadrature::<f64>::new(np, na, true).unwrap();
            for k in 0..q.len() {
                let a = q.antipode_of(k).unwrap();
                assert_eq!(q.nodes[a], q.nodes[k].antipode());
                assert_eq!(q.weights[a], q.weights[k]);
            }
        }
    }

    #[test]
    fn sphere_rule_convergence() {
        // ∫ exp(κ_x) dΩ = 4π sinh(1)
        let exact = 4.0 * PI * 1f64.sinh();
        let err = |n: usize| {
            let q = SphereQuadrature::<f64>::new(n, 2 * n, false).unwrap();
            (q.integrate(|k| k.x().exp()) - exact).abs()
        };
        assert!(err(4) > err(8));
        assert!(err(8) < 1e-10);
    }

    #[test]
    fn trapezoid_plane_rule() {
        let q = PlaneQuadrature::<f64>::new(1.0, 3, PlaneRule::Trapezoid).unwrap();
        let (x, w) = q.axis_rule();
        assert_eq!(x, vec![-1.0, 0.0, 1.0]);
        assert_eq!(w, vec![0.5, 1.0, 0.5]);
        assert!(PlaneQuadrature::<f64>::new(0.0, 3, PlaneRule::Trapezoid).is_err());
        assert!(PlaneQuadrature::<f64>::new(1.0, 1, PlaneRule::Trapezoid).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_for_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v, 0.0), 500500.0);
    }
}
