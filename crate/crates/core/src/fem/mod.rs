//! P1 finite elements for the Laplacian (the p = 2 case).
//!
//! [`assemble_stiffness`] and [`assemble_mass`] build the Galerkin matrices;
//! [`solve_neumann_mu1`], [`solve_dirichlet_lambda1`] and [`solve_mixed_dn`]
//! return the first relevant eigenpair of `K v = λ M v`.

mod eigen;
pub mod sparse;

use alloc::vec::Vec;

pub use eigen::{
    richardson, solve_dirichlet_lambda1, solve_mixed_dn, solve_neumann_mu1, BoundaryCondition,
    EigenPair, SolverConfig,
};
pub use sparse::{conjugate_gradient, CgStats, SparseMatrix};

use crate::geometry::Mesh;
use crate::{Error, Result};

fn element_geometry(mesh: &Mesh, e: usize) -> Result<(f64, [[f64; 2]; 3])> {
    let area = mesh.element_area(e);
    if !(area > 0.0) {
        return Err(Error::DegenerateElement { element: e, area });
    }
    let [i, j, k] = mesh.elements[e];
    let (p0, p1, p2) = (mesh.nodes[i], mesh.nodes[j], mesh.nodes[k]);
    let inv = 0.5 / area;
    let grads = [
        [(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv],
        [(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv],
        [(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv],
    ];
    Ok((area, grads))
}

/// P1 stiffness matrix `K_ij = ∫ ∇φ_i · ∇φ_j`.
pub fn assemble_stiffness(mesh: &Mesh) -> Result<SparseMatrix> {
    let mut triplets = Vec::with_capacity(9 * mesh.num_elements());
    for (e, el) in mesh.elements.iter().enumerate() {
        let (area, g) = element_geometry(mesh, e)?;
        for a in 0..3 {
            for b in 0..3 {
                let v = area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
                triplets.push((el[a], el[b], v));
            }
        }
    }
    Ok(SparseMatrix::from_triplets(mesh.num_nodes(), triplets))
}

/// Consistent P1 mass matrix; element block `area/12 · [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn assemble_mass(mesh: &Mesh) -> Result<SparseMatrix> {
    let mut triplets = Vec::with_capacity(9 * mesh.num_elements());
    for (e, el) in mesh.elements.iter().enumerate() {
        let (area, _) = element_geometry(mesh, e)?;
        for a in 0..3 {
            for b in 0..3 {
                let w = if a == b { 2.0 } else { 1.0 };
                triplets.push((el[a], el[b], area * w / 12.0));
            }
        }
    }
    Ok(SparseMatrix::from_triplets(mesh.num_nodes(), triplets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_rhombus, triangulate, DomainSpec, EdgeTag};
    use alloc::vec;
    use approx::assert_relative_eq;

    fn right_triangle() -> Mesh {
        Mesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            elements: vec![[0, 1, 2]],
            boundary_edges: vec![
                ([0, 1], EdgeTag::Outer),
                ([1, 2], EdgeTag::Outer),
                ([2, 0], EdgeTag::Outer),
            ],
            refinement_level: 0,
        }
    }

    #[test]
    fn stiffness_of_reference_triangle() {
        let k = assemble_stiffness(&right_triangle()).unwrap();
        let expected = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((k.get(i, j) - v).abs() < 1e-15, "K[{i}][{j}]");
            }
        }
    }

    #[test]
    fn mass_of_single_triangle() {
        let m = assemble_mass(&right_triangle()).unwrap();
        let a = 0.5;
        assert_relative_eq!(m.get(0, 0), a / 6.0);
        assert_relative_eq!(m.get(1, 2), a / 12.0);
    }

    #[test]
    fn stiffness_kernel_and_symmetry() {
        for spec in [DomainSpec::unit_square(), make_rhombus(8).unwrap()] {
            let mesh = triangulate(&spec, 3);
            let k = assemble_stiffness(&mesh).unwrap();
            let scale = k.max_abs();
            assert!(k.row_sums().iter().all(|s| s.abs() <= 1e-12 * scale));
            assert!(k.asymmetry() <= 1e-14 * scale);
            let m = assemble_mass(&mesh).unwrap();
            let ones = vec![1.0; mesh.num_nodes()];
            assert_relative_eq!(m.bilinear(&ones, &ones), spec.area, max_relative = 1e-12);
            assert!(m.asymmetry() <= 1e-14);
        }
    }

    #[test]
    fn stiffness_is_exact_on_linear_functions() {
        // ∫ |∇(2x − 3y)|² over the unit square = 13.
        let mesh = triangulate(&DomainSpec::unit_square(), 2);
        let k = assemble_stiffness(&mesh).unwrap();
        let u: Vec<f64> = mesh.nodes.iter().map(|p| 2.0 * p[0] - 3.0 * p[1]).collect();
        assert_relative_eq!(k.bilinear(&u, &u), 13.0, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_element_is_reported() {
        let mut mesh = right_triangle();
        mesh.nodes[2] = [2.0, 0.0];
        assert!(matches!(
            assemble_stiffness(&mesh),
            Err(Error::DegenerateElement { element: 0, .. })
        ));
        assert!(matches!(
            assemble_mass(&mesh),
            Err(Error::DegenerateElement { .. })
        ));
    }
}
