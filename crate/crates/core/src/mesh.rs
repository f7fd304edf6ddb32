//! Base-interval meshes and the mapped reference grid of a thin domain.
//!
//! The thin domain `{(x, y) : a <= x <= b, 0 <= y <= eps f(x)}` is flattened
//! onto the rectangle `[a, b] x [0, 1]` by `(x, t) -> (x, eps f(x) t)`. The grid
//! stays a tensor grid as `eps -> 0` and as `f -> 0` at the ends.

use alloc::vec::Vec;

use crate::weight::{Height, Profile};
use crate::{Error, Result};

/// Abscissae of the two-point Gauss rule on `[0, 1]`.
pub(crate) const GAUSS2: [f64; 2] = [
    0.211_324_865_405_187_1, // (1 - 1/sqrt 3) / 2
    0.788_675_134_594_812_9,
];

/// The base manifold `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalDomain {
    a: f64,
    b: f64,
}

impl IntervalDomain {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain { a, b });
        }
        Ok(IntervalDomain { a, b })
    }

    pub fn unit() -> Self {
        IntervalDomain { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Diameter `b - a`.
    pub fn diameter(&self) -> f64 {
        self.b - self.a
    }

    /// `n + 1` equispaced points with the end points hit exactly.
    pub(crate) fn uniform_points(&self, n: usize) -> Vec<f64> {
        let d = self.diameter();
        let mut pts: Vec<f64> = (0..=n).map(|i| self.a + d * (i as f64) / (n as f64)).collect();
        pts[n] = self.b;
        pts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMesh {
    domain: IntervalDomain,
    nodes: Vec<f64>,
}

impl IntervalMesh {
    pub fn domain(&self) -> IntervalDomain {
        self.domain
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn element_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn elements(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Uniform mesh of `domain` with `n` elements.
pub fn build_interval_mesh(domain: IntervalDomain, n: usize) -> Result<IntervalMesh> {
    if n == 0 {
        return Err(Error::InvalidCount {
            what: "element count",
            value: n,
            min: 1,
        });
    }
    Ok(IntervalMesh {
        domain,
        nodes: domain.uniform_points(n),
    })
}

/// A thin domain `0 <= y <= eps * f(x)` over `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinDomainSpec {
    pub base: IntervalDomain,
    pub height: Height,
    pub epsilon: f64,
}

impl ThinDomainSpec {
    pub fn new(base: IntervalDomain, height: impl Into<Height>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        Ok(ThinDomainSpec {
            base,
            height: height.into(),
            epsilon,
        })
    }
}

/// Boundary parts of the thin domain: bottom `y = 0`, top `y = eps f(x)` and
/// the lateral sides over the ends of the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Bottom,
    Top,
    Lateral,
}

/// Tensor grid on the reference rectangle. Node `(i, j)` sits at `(x_i, t_j)`
/// and is stored at index `i * (nt + 1) + j`, so every column of constant `x`
/// is a contiguous run of indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedGrid {
    spec: ThinDomainSpec,
    xs: Vec<f64>,
    ts: Vec<f64>,
    heights: Vec<f64>,
    tags: Vec<Option<BoundaryTag>>,
}

impl MappedGrid {
    pub fn spec(&self) -> &ThinDomainSpec {
        &self.spec
    }

    pub fn epsilon(&self) -> f64 {
        self.spec.epsilon
    }

    pub fn nx(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn nt(&self) -> usize {
        self.ts.len() - 1
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn t_nodes(&self) -> &[f64] {
        &self.ts
    }

    pub fn node_count(&self) -> usize {
        self.xs.len() * self.ts.len()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ts.len() + j
    }

    /// `f(x_i)`, the unscaled height over base node `i`.
    pub fn height_at(&self, i: usize) -> f64 {
        self.heights[i]
    }

    /// Physical coordinates `(x, eps f(x) t)` of node `(i, j)`.
    pub fn physical(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.xs[i],
            self.spec.epsilon * self.heights[i] * self.ts[j],
        )
    }

    pub fn tag(&self, node: usize) -> Option<BoundaryTag> {
        self.tags[node]
    }

    pub fn tags(&self) -> &[Option<BoundaryTag>] {
        &self.tags
    }

    /// Area of the physical domain by two-point Gauss in `x` per element.
    /// The map is linear in `t`, so each cell contributes exactly
    /// `eps * dt * int f dx`.
    pub fn area(&self) -> Result<f64> {
        let mut total = 0.0;
        for w in self.xs.windows(2) {
            let h = w[1] - w[0];
            let mut cell = 0.0;
            for g in GAUSS2 {
                cell += 0.5 * self.spec.height.value(w[0] + g * h)?;
            }
            let column = cell * h * self.spec.epsilon;
            for tw in self.ts.windows(2) {
                total += column * (tw[1] - tw[0]);
            }
        }
        Ok(total)
    }
}

/// Reference grid with `nx` base elements and `nt` transverse layers.
pub fn build_mapped_grid(spec: ThinDomainSpec, nx: usize, nt: usize) -> Result<MappedGrid> {
    if nx < 2 {
        return Err(Error::InvalidCount {
            what: "nx",
            value: nx,
            min: 2,
        });
    }
    if nt < 2 {
        return Err(Error::InvalidCount {
            what: "nt",
            value: nt,
            min: 2,
        });
    }
    let xs = spec.base.uniform_points(nx);
    let ts = IntervalDomain::unit().uniform_points(nt);

    for w in xs.windows(2) {
        let h = w[1] - w[0];
        for g in GAUSS2 {
            spec.height.positive_value(w[0] + g * h)?;
        }
    }
    let heights = xs
        .iter()
        .map(|&x| spec.height.value(x))
        .collect::<Result<Vec<_>>>()?;

    let mut tags = Vec::with_capacity(xs.len() * ts.len());
    for i in 0..=nx {
        for j in 0..=nt {
            let tag = if i == 0 || i == nx {
                Some(BoundaryTag::Lateral)
            } else if j == 0 {
                Some(BoundaryTag::Bottom)
            } else if j == nt {
                Some(BoundaryTag::Top)
            } else {
                None
            };
            tags.push(tag);
        }
    }

    Ok(MappedGrid {
        spec,
        xs,
        ts,
        heights,
        tags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::WeightSpec;

    #[test]
    fn uniform_interval_meshes() {
        let m = build_interval_mesh(IntervalDomain::unit(), 4).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let m = build_interval_mesh(IntervalDomain::new(0.0, 2.0).unwrap(), 1).unwrap();
        assert_eq!(m.nodes(), &[0.0, 2.0]);
        assert!(matches!(
            IntervalDomain::new(1.0, 0.0),
            Err(Error::InvalidDomain { .. })
        ));
        assert!(build_interval_mesh(IntervalDomain::unit(), 0).is_err());
    }

    #[test]
    fn constant_height_grid() {
        let spec = ThinDomainSpec::new(IntervalDomain::unit(), WeightSpec::flat(), 0.1).unwrap();
        let g = build_mapped_grid(spec, 2, 2).unwrap();
        assert_eq!(g.node_count(), 9);
        for i in 0..=2 {
            let ys: Vec<f64> = (0..=2).map(|j| g.physical(i, j).1).collect();
            assert_eq!(ys, [0.0, 0.05, 0.1]);
        }
    }

    #[test]
    fn top_boundary_follows_height() {
        let w = WeightSpec::parse_f("sin(pi*x)^2").unwrap();
        let spec = ThinDomainSpec::new(IntervalDomain::unit(), w, 0.05).unwrap();
        let g = build_mapped_grid(spec, 4, 2).unwrap();
        let (x, y) = g.physical(2, 2);
        assert_eq!(x, 0.5);
        assert!((y - 0.05).abs() < 1e-15);
    }

    #[test]
    fn corner_tags_resolve_to_lateral() {
        let spec = ThinDomainSpec::new(IntervalDomain::unit(), WeightSpec::flat(), 0.1).unwrap();
        let g = build_mapped_grid(spec, 3, 2).unwrap();
        assert_eq!(g.tag(g.index(0, 2)), Some(BoundaryTag::Lateral));
        assert_eq!(g.tag(g.index(3, 0)), Some(BoundaryTag::Lateral));
        assert_eq!(g.tag(g.index(1, 0)), Some(BoundaryTag::Bottom));
        assert_eq!(g.tag(g.index(1, 2)), Some(BoundaryTag::Top));
        assert_eq!(g.tag(g.index(1, 1)), None);
    }

    #[test]
    fn tags_cover_exactly_the_boundary() {
        let spec = ThinDomainSpec::new(IntervalDomain::unit(), WeightSpec::flat(), 0.1).unwrap();
        let (nx, nt) = (5, 4);
        let g = build_mapped_grid(spec, nx, nt).unwrap();
        for i in 0..=nx {
            for j in 0..=nt {
                let on_boundary = i == 0 || i == nx || j == 0 || j == nt;
                assert_eq!(g.tag(g.index(i, j)).is_some(), on_boundary);
            }
        }
    }

    #[test]
    fn area_matches_integral_for_cubic_height() {
        // int_0^2 (1 + x + x^2 + x^3) dx = 2 + 2 + 8/3 + 4
        let w = WeightSpec::parse_f("1 + x + x^2 + x^3").unwrap();
        let spec = ThinDomainSpec::new(IntervalDomain::new(0.0, 2.0).unwrap(), w, 0.3).unwrap();
        let g = build_mapped_grid(spec, 7, 3).unwrap();
        let exact = 0.3 * (2.0 + 2.0 + 8.0 / 3.0 + 4.0);
        assert!((g.area().unwrap() - exact).abs() <= 1e-10 * exact);
    }

    #[test]
    fn rejects_nonpositive_height_and_bad_counts() {
        let w = WeightSpec::parse_f("x - 0.5").unwrap();
        let spec = ThinDomainSpec::new(IntervalDomain::unit(), w, 0.1).unwrap();
        assert!(matches!(
            build_mapped_grid(spec.clone(), 4, 2),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(build_mapped_grid(spec.clone(), 1, 2).is_err());
        assert!(build_mapped_grid(spec, 4, 1).is_err());
        assert!(ThinDomainSpec::new(IntervalDomain::unit(), WeightSpec::flat(), 0.0).is_err());
    }
}
