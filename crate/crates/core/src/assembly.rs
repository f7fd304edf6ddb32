//! Stiffness/mass pencils for the three model problems.
//!
//! * Drift Laplacian on an interval: `K_ij = int phi_i' phi_j' f dx`,
//!   `M_ij = int phi_i phi_j f dx` with `f = e^{-phi}`, linear elements and
//!   three-point Gauss quadrature.
//! * The same with homogeneous Dirichlet conditions (end rows eliminated).
//! * Neumann Laplacian of the thin domain in mapped coordinates. With
//!   `y = eps f(x) t`, `u_x = u_x - t (f'/f) u_t`, `u_y = u_t / (eps f)` and
//!   the area element is `eps f dx dt`. Bilinear elements, 2x2 Gauss.

use alloc::vec::Vec;

use crate::linalg::{dd_add_product, CsrMatrix, TripletBuilder};
use crate::mesh::{IntervalMesh, MappedGrid, GAUSS2};
use crate::weight::Profile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    Drift1d { bc: BoundaryCondition, elements: usize },
    Thin2d { epsilon: f64, nx: usize, nt: usize },
    Custom,
}

/// Symmetric pencil `(K, M)` of the generalized problem `K v = mu M v`.
#[derive(Debug, Clone)]
pub struct OperatorPencil {
    stiffness: CsrMatrix,
    mass: CsrMatrix,
    dof_to_node: Vec<usize>,
    kind: ProblemKind,
    lines: Vec<(usize, usize)>,
    /// Stiffness row sums of the discretization, accumulated from element
    /// contributions rather than from the rounded stored diagonal. Zero on
    /// every Neumann row.
    row_sums: Option<Vec<f64>>,
}

impl OperatorPencil {
    /// A pencil from explicit matrices. The iterative solver will use a
    /// plain diagonal preconditioner for it.
    pub fn new(stiffness: CsrMatrix, mass: CsrMatrix) -> Result<Self> {
        let n = stiffness.dim();
        if mass.dim() != n {
            return Err(Error::InvalidArgument("stiffness and mass sizes differ"));
        }
        if !stiffness.is_symmetric() || !mass.is_symmetric() {
            return Err(Error::InvalidArgument("pencil matrices must be symmetric"));
        }
        Ok(OperatorPencil {
            stiffness,
            mass,
            dof_to_node: (0..n).collect(),
            kind: ProblemKind::Custom,
            lines: (0..n).map(|i| (i, i + 1)).collect(),
            row_sums: None,
        })
    }

    fn assembled(
        stiffness: CsrMatrix,
        mass: CsrMatrix,
        dof_to_node: Vec<usize>,
        kind: ProblemKind,
        lines: Vec<(usize, usize)>,
        row_sums: Vec<f64>,
    ) -> Self {
        let pencil = OperatorPencil {
            stiffness,
            mass,
            dof_to_node,
            kind,
            lines,
            row_sums: Some(row_sums),
        };
        assert!(pencil.stiffness.is_symmetric(), "assembled K is not symmetric");
        assert!(pencil.mass.is_symmetric(), "assembled M is not symmetric");
        if pencil.is_neumann() {
            let defect = pencil.kernel_defect();
            assert!(
                defect <= 1e-12 * pencil.stiffness.norm_inf().max(f64::MIN_POSITIVE),
                "constants are not in the kernel of K (defect {defect:e})"
            );
        }
        pencil
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    pub fn mass(&self) -> &CsrMatrix {
        &self.mass
    }

    pub fn dof_count(&self) -> usize {
        self.stiffness.dim()
    }

    /// Mesh node carried by each degree of freedom.
    pub fn dof_to_node(&self) -> &[usize] {
        &self.dof_to_node
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Contiguous dof ranges coupled strongly enough to be inverted together
    /// by the block preconditioner: the whole line in 1D, one column of
    /// constant `x` on a thin grid, single dofs otherwise.
    pub fn lines(&self) -> &[(usize, usize)] {
        &self.lines
    }

    pub fn is_neumann(&self) -> bool {
        matches!(
            self.kind,
            ProblemKind::Drift1d {
                bc: BoundaryCondition::Neumann,
                ..
            } | ProblemKind::Thin2d { .. }
        )
    }

    /// `v^T K v` to nearly full relative accuracy.
    ///
    /// Assembled pencils use the edge form
    /// `sum_i s_i v_i^2 - 1/2 sum_{i != j} K_ij (v_i - v_j)^2` with the exact
    /// row sums `s_i`, which involves neither the rounded diagonal nor the
    /// cancellation of a plain product on smooth vectors. Explicit pencils
    /// fall back to a compensated bilinear form.
    pub fn stiffness_form(&self, v: &[f64]) -> f64 {
        let Some(row_sums) = &self.row_sums else {
            return self.stiffness.bilinear_compensated(v, v);
        };
        let mut acc = (0.0, 0.0);
        for (i, (&vi, &s)) in v.iter().zip(row_sums).enumerate() {
            if s != 0.0 {
                acc = dd_add_product(acc, s * vi, vi);
            }
            for (j, kij) in self.stiffness.row(i) {
                if j != i {
                    let d = vi - v[j];
                    acc = dd_add_product(acc, -0.5 * kij * d, d);
                }
            }
        }
        acc.0 + acc.1
    }

    /// `max_i |(K 1)_i|`.
    pub fn kernel_defect(&self) -> f64 {
        let ones = alloc::vec![1.0; self.dof_count()];
        self.stiffness
            .mul_vec(&ones)
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Abscissae and weights of the three-point Gauss rule on `[0, 1]`.
const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0), // (1 - sqrt(3/5)) / 2
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Drift Laplacian with weight `f = e^{-phi}` on a 1D mesh.
pub fn assemble_drift_1d(
    mesh: &IntervalMesh,
    weight: &dyn Profile,
    bc: BoundaryCondition,
) -> Result<OperatorPencil> {
    let n_el = mesh.element_count();
    let n_nodes = n_el + 1;
    let (dof_of, dof_to_node): (Vec<Option<usize>>, Vec<usize>) = match bc {
        BoundaryCondition::Neumann => ((0..n_nodes).map(Some).collect(), (0..n_nodes).collect()),
        BoundaryCondition::Dirichlet => {
            if n_el < 2 {
                return Err(Error::InvalidCount {
                    what: "element count for Dirichlet conditions",
                    value: n_el,
                    min: 2,
                });
            }
            let map = (0..n_nodes)
                .map(|i| (i > 0 && i < n_el).then(|| i - 1))
                .collect();
            (map, (1..n_el).collect())
        }
    };
    let n_dof = dof_to_node.len();
    let mut k = TripletBuilder::with_capacity(n_dof, 4 * n_el);
    let mut m = TripletBuilder::with_capacity(n_dof, 4 * n_el);
    let mut row_sums = alloc::vec![0.0; n_dof];

    for (e, (x0, x1)) in mesh.elements().enumerate() {
        let h = x1 - x0;
        let mut mass_w = 0.0; // int f dx over the element
        let mut m00 = 0.0;
        let mut m01 = 0.0;
        let mut m11 = 0.0;
        for (s, w) in GAUSS3 {
            let f = weight.positive_value(x0 + s * h)?;
            let wf = w * h * f;
            mass_w += wf;
            m00 += wf * (1.0 - s) * (1.0 - s);
            m01 += wf * (1.0 - s) * s;
            m11 += wf * s * s;
        }
        let kd = mass_w / (h * h);
        let ke = [[kd, -kd], [-kd, kd]];
        let me = [[m00, m01], [m01, m11]];
        let nodes = [e, e + 1];
        for a in 0..2 {
            let Some(ra) = dof_of[nodes[a]] else { continue };
            for b in 0..2 {
                match dof_of[nodes[b]] {
                    Some(cb) => {
                        k.push(ra, cb, ke[a][b]);
                        m.push(ra, cb, me[a][b]);
                    }
                    // Element rows sum to zero, so the retained part sums
                    // to minus the eliminated coupling.
                    None => row_sums[ra] -= ke[a][b],
                }
            }
        }
    }

    let lines = if n_dof > 0 { alloc::vec![(0, n_dof)] } else { Vec::new() };
    Ok(OperatorPencil::assembled(
        k.build(),
        m.build(),
        dof_to_node,
        ProblemKind::Drift1d { bc, elements: n_el },
        lines,
        row_sums,
    ))
}

/// Dirichlet problem for the (optionally weighted) interval Laplacian.
pub fn assemble_dirichlet_1d(mesh: &IntervalMesh, weight: &dyn Profile) -> Result<OperatorPencil> {
    assemble_drift_1d(mesh, weight, BoundaryCondition::Dirichlet)
}

/// Neumann Laplacian of the thin domain described by `grid`.
pub fn assemble_thin_2d(grid: &MappedGrid) -> Result<OperatorPencil> {
    let nx = grid.nx();
    let nt = grid.nt();
    let eps = grid.epsilon();
    let xs = grid.x_nodes();
    let ts = grid.t_nodes();
    let height = &grid.spec().height;
    let n_dof = grid.node_count();
    let mut k = TripletBuilder::with_capacity(n_dof, 16 * nx * nt);
    let mut m = TripletBuilder::with_capacity(n_dof, 16 * nx * nt);

    for i in 0..nx {
        let hx = xs[i + 1] - xs[i];
        // f and f'/f at the two Gauss abscissae of this column.
        let mut col = [(0.0, 0.0); 2];
        for (c, g) in col.iter_mut().zip(GAUSS2) {
            let x = xs[i] + g * hx;
            *c = (height.positive_value(x)?, height.log_derivative(x)?);
        }
        for j in 0..nt {
            let ht = ts[j + 1] - ts[j];
            let mut ke = [[0.0; 4]; 4];
            let mut me = [[0.0; 4]; 4];
            for (gx, &(f, logd)) in GAUSS2.iter().zip(&col) {
                let r = *gx;
                for s in GAUSS2 {
                    let t = ts[j] + s * ht;
                    let shape = [(1.0 - r) * (1.0 - s), r * (1.0 - s), (1.0 - r) * s, r * s];
                    let d_r = [-(1.0 - s), 1.0 - s, -s, s];
                    let d_s = [-(1.0 - r), -r, 1.0 - r, r];
                    let mut ux = [0.0; 4];
                    let mut uy = [0.0; 4];
                    for a in 0..4 {
                        let dt = d_s[a] / ht;
                        ux[a] = d_r[a] / hx - t * logd * dt;
                        uy[a] = dt / (eps * f);
                    }
                    let w = 0.25 * hx * ht * eps * f;
                    for a in 0..4 {
                        for b in a..4 {
                            ke[a][b] += w * (ux[a] * ux[b] + uy[a] * uy[b]);
                            me[a][b] += w * shape[a] * shape[b];
                        }
                    }
                }
            }
            let nodes = [
                grid.index(i, j),
                grid.index(i + 1, j),
                grid.index(i, j + 1),
                grid.index(i + 1, j + 1),
            ];
            for a in 0..4 {
                for b in 0..4 {
                    let (p, q) = if a <= b { (a, b) } else { (b, a) };
                    k.push(nodes[a], nodes[b], ke[p][q]);
                    m.push(nodes[a], nodes[b], me[p][q]);
                }
            }
        }
    }

    let lines = (0..=nx)
        .map(|i| (grid.index(i, 0), grid.index(i, nt) + 1))
        .collect();
    Ok(OperatorPencil::assembled(
        k.build(),
        m.build(),
        (0..n_dof).collect(),
        ProblemKind::Thin2d {
            epsilon: eps,
            nx,
            nt,
        },
        lines,
        alloc::vec![0.0; n_dof],
    ))
}
