use crate::error::{Error, Result};
use crate::field::{BoundaryScalarField, ScalarField};
use crate::mesh::SimplicialMesh;
use crate::problem::YamabeProblem;
use crate::sparse::{SparseOperator, TripletBuilder};

/// Lumped volume weights: entry i is the metric volume share of vertex i,
/// sum_{cells containing i} vol_g / (n+1).
pub fn lumped_volumes(mesh: &SimplicialMesh) -> Vec<f64> {
    let share = 1.0 / (mesh.dimension() as f64 + 1.0);
    let mut lv = vec![0.0; mesh.vertex_count()];
    for (ci, cell) in mesh.cells().iter().enumerate() {
        let w = mesh.cell_volume(ci) * share;
        for &v in cell {
            lv[v] += w;
        }
    }
    lv
}

/// Lumped boundary area weights on the full vertex index space: entry i is
/// sum_{boundary facets containing i} area_g / n (zero at interior vertices).
pub fn lumped_boundary_areas(mesh: &SimplicialMesh) -> Vec<f64> {
    let share = 1.0 / mesh.dimension() as f64;
    let mut ba = vec![0.0; mesh.vertex_count()];
    for facet in mesh.boundary_facets() {
        let w = mesh.facet_area(facet) * share;
        for &v in &facet.vertices {
            ba[v] += w;
        }
    }
    ba
}

/// P1 stiffness with unit coefficient: K_ij = sum_cells vol_g grad_i^T G^{-1} grad_j.
/// Assembles the upper triangle and mirrors it, so the result is exactly
/// symmetric.
pub fn stiffness_unit(mesh: &SimplicialMesh) -> Result<SparseOperator> {
    let n = mesh.dimension();
    let mut b = TripletBuilder::new(mesh.vertex_count());
    for (ci, cell) in mesh.cells().iter().enumerate() {
        let g = mesh.metric(ci);
        let (grads, euclid_vol) = mesh.cell_gradients(ci);
        let vol = g.sqrt_det() * euclid_vol;
        if !(vol > 0.0) {
            return Err(Error::DegenerateCell { cell: ci, volume: vol });
        }
        // G^{-1} grad_j, computed once per local basis function
        let inv_grads: Vec<Vec<f64>> = grads
            .iter()
            .map(|gr| g.solve(gr).expect("validated metric"))
            .collect();
        for i in 0..=n {
            for j in i..=n {
                let mut s = 0.0;
                for d in 0..n {
                    s += grads[i][d] * inv_grads[j][d];
                }
                b.push_sym(cell[i], cell[j], vol * s);
            }
        }
    }
    let mut k = b.build();
    k.symmetric = true;
    Ok(k)
}

/// Stiffness of the conformal Laplacian gradient term: a * stiffness_unit.
pub fn stiffness(problem: &YamabeProblem) -> Result<SparseOperator> {
    let mut k = stiffness_unit(&problem.mesh)?.scaled(problem.a);
    k.symmetric = true;
    Ok(k)
}

/// Weighted mass operator for the volume term. The lumped form is diagonal
/// with entry_i = lumpedvol_i * w_i; the consistent form uses exact P1
/// products with the vertex-averaged weight per cell.
pub fn mass(problem: &YamabeProblem, weight: &ScalarField, lumped: bool) -> Result<SparseOperator> {
    mass_on_mesh(&problem.mesh, weight, lumped)
}

pub fn mass_on_mesh(
    mesh: &SimplicialMesh,
    weight: &ScalarField,
    lumped: bool,
) -> Result<SparseOperator> {
    weight.validate(mesh.vertex_count())?;
    let n = mesh.dimension();
    if lumped {
        let lv = lumped_volumes(mesh);
        let diag: Vec<f64> = lv.iter().zip(&weight.0).map(|(v, w)| v * w).collect();
        return Ok(SparseOperator::diagonal(&diag));
    }
    let mut b = TripletBuilder::new(mesh.vertex_count());
    let n1 = (n + 1) as f64;
    // exact P1 products on a simplex: vol * (1 + delta_ij) / ((n+1)(n+2))
    let scale = 1.0 / (n1 * (n1 + 1.0));
    for (ci, cell) in mesh.cells().iter().enumerate() {
        let vol = mesh.cell_volume(ci);
        let wbar = cell.iter().map(|&v| weight[v]).sum::<f64>() / n1;
        for i in 0..=n {
            for j in i..=n {
                let factor = if i == j { 2.0 } else { 1.0 };
                b.push_sym(cell[i], cell[j], wbar * vol * factor * scale);
            }
        }
    }
    let mut m = b.build();
    m.symmetric = true;
    Ok(m)
}

/// Weighted boundary mass for the Robin term. `weight` is indexed by the
/// sorted boundary vertex list; the operator lives on the full vertex index
/// space and is supported on boundary vertices only.
pub fn boundary_mass(
    problem: &YamabeProblem,
    weight: &BoundaryScalarField,
    lumped: bool,
) -> Result<SparseOperator> {
    boundary_mass_on_mesh(&problem.mesh, weight, lumped)
}

pub fn boundary_mass_on_mesh(
    mesh: &SimplicialMesh,
    weight: &BoundaryScalarField,
    lumped: bool,
) -> Result<SparseOperator> {
    weight.validate(mesh.boundary_vertices().len())?;
    let n = mesh.dimension();
    let m = n as f64; // facet vertex count
    if lumped {
        let mut diag = vec![0.0; mesh.vertex_count()];
        for facet in mesh.boundary_facets() {
            let w = mesh.facet_area(facet) / m;
            for &v in &facet.vertices {
                let bi = mesh.boundary_position(v).expect("facet vertex on boundary");
                diag[v] += w * weight[bi];
            }
        }
        return Ok(SparseOperator::diagonal(&diag));
    }
    let mut b = TripletBuilder::new(mesh.vertex_count());
    // exact P1 products on an (n-1)-simplex: area * (1 + delta_ij) / (n(n+1))
    let scale = 1.0 / (m * (m + 1.0));
    for facet in mesh.boundary_facets() {
        let area = mesh.facet_area(facet);
        let wbar = facet
            .vertices
            .iter()
            .map(|&v| weight[mesh.boundary_position(v).unwrap()])
            .sum::<f64>()
            / m;
        for i in 0..n {
            for j in i..n {
                let factor = if i == j { 2.0 } else { 1.0 };
                b.push_sym(
                    facet.vertices[i],
                    facet.vertices[j],
                    wbar * area * factor * scale,
                );
            }
        }
    }
    let mut op = b.build();
    op.symmetric = true;
    Ok(op)
}

/// The discrete Robin bilinear form
///   a * stiffness + mass(zero_order, lumped) + boundary_mass(robin_coeff, lumped).
/// Positive definite whenever zero_order > 0 everywhere and robin_coeff >= 0.
pub fn robin_operator(
    problem: &YamabeProblem,
    zero_order: &ScalarField,
    robin_coeff: &BoundaryScalarField,
) -> Result<SparseOperator> {
    let k = stiffness(problem)?;
    let m = mass(problem, zero_order, true)?;
    let mb = boundary_mass(problem, robin_coeff, true)?;
    let mut op = k.add(&m)?.add(&mb)?;
    op.symmetric = true;
    Ok(op)
}

/// Diagnostics on positive off-diagonal entries, which break the discrete
/// comparison principle the monotone iteration relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct MMatrixReport {
    pub positive_offdiagonal_count: usize,
    pub max_positive_offdiagonal: f64,
    pub monotone_friendly: bool,
}

pub fn mmatrix_report(op: &SparseOperator) -> MMatrixReport {
    let mut count = 0usize;
    let mut max_pos: f64 = 0.0;
    for i in 0..op.dim {
        for k in op.row_offsets[i]..op.row_offsets[i + 1] {
            let j = op.column_indices[k];
            if j != i && op.values[k] > 1e-12 {
                count += 1;
                max_pos = max_pos.max(op.values[k]);
            }
        }
    }
    MMatrixReport {
        positive_offdiagonal_count: count,
        max_positive_offdiagonal: max_pos,
        monotone_friendly: count == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{unit_tet, BoundaryFacet, SimplicialMesh};
    use crate::metric::CellMetric;

    fn problem_on(mesh: SimplicialMesh, s: f64, h: f64) -> YamabeProblem {
        YamabeProblem::with_constants(mesh, s, h).unwrap()
    }

    #[test]
    fn stiffness_kills_constants() {
        let p = problem_on(unit_tet(), -6.0, 0.0);
        let k = stiffness(&p).unwrap();
        let ones = vec![1.0; 4];
        for v in k.matvec(&ones) {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn stiffness_metric_scaling_law() {
        // g -> t g scales K by t^{(n-2)/2}; t = 4, n = 3 gives factor 2
        let base = problem_on(unit_tet(), 0.0, 0.0);
        let scaled_mesh = base
            .mesh
            .with_metrics(vec![CellMetric::scaled_identity(3, 4.0)])
            .unwrap();
        let scaled = problem_on(scaled_mesh, 0.0, 0.0);
        let k1 = stiffness(&base).unwrap();
        let k2 = stiffness(&scaled).unwrap();
        for (a, b) in k1.values.iter().zip(&k2.values) {
            assert!((2.0 * a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn lumped_mass_unit_tet() {
        let p = problem_on(unit_tet(), 0.0, 0.0);
        let w = ScalarField::constant(1.0, 4);
        let m = mass(&p, &w, true).unwrap();
        for i in 0..4 {
            assert!((m.get(i, i) - 1.0 / 24.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_weight_gives_zero_operator() {
        let p = problem_on(unit_tet(), 0.0, 0.0);
        let m = mass(&p, &ScalarField::zeros(4), true).unwrap();
        assert_eq!(m.max_abs(), 0.0);
        let mb = boundary_mass(&p, &BoundaryScalarField::zeros(4), true).unwrap();
        assert_eq!(mb.max_abs(), 0.0);
    }

    #[test]
    fn mass_total_matches_integral_both_modes() {
        let p = problem_on(unit_tet(), 0.0, 0.0);
        let w = ScalarField(vec![1.0, 2.0, 3.0, 4.0]);
        let total = p.mesh.integrate(&w).unwrap();
        for lumped in [true, false] {
            let m = mass(&p, &w, lumped).unwrap();
            let ones = vec![1.0; 4];
            let s: f64 = m.matvec(&ones).iter().sum();
            assert!((s - total).abs() < 1e-12, "lumped={lumped}: {s} vs {total}");
        }
    }

    #[test]
    fn boundary_mass_total_matches_boundary_integral() {
        let p = problem_on(unit_tet(), 0.0, 0.0);
        let w = BoundaryScalarField(vec![0.5, 1.5, 2.0, -1.0]);
        let total = p.mesh.boundary_integrate(&w).unwrap();
        for lumped in [true, false] {
            let m = boundary_mass(&p, &w, lumped).unwrap();
            let ones = vec![1.0; 4];
            let s: f64 = m.matvec(&ones).iter().sum();
            assert!((s - total).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_mass_trace_is_total_area_when_lumped() {
        let p = problem_on(unit_tet(), 0.0, 1.0);
        let w = BoundaryScalarField::constant(1.0, 4);
        let m = boundary_mass(&p, &w, true).unwrap();
        let trace: f64 = m.diag().iter().sum();
        assert!((trace - p.mesh.total_boundary_area()).abs() < 1e-13);
    }

    #[test]
    fn robin_operator_on_constants_gives_lumped_weights() {
        // zero_order = 1, robin_coeff = 0: (K + M) 1 = M 1 = lumped volumes
        let p = problem_on(unit_tet(), 0.0, 0.0);
        let op = robin_operator(
            &p,
            &ScalarField::constant(1.0, 4),
            &BoundaryScalarField::zeros(4),
        )
        .unwrap();
        let lv = lumped_volumes(&p.mesh);
        let y = op.matvec(&vec![1.0; 4]);
        for i in 0..4 {
            assert!((y[i] - lv[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn negative_zero_order_not_positive() {
        let p = problem_on(unit_tet(), 0.0, 0.0);
        let op = robin_operator(
            &p,
            &ScalarField::constant(-1.0, 4),
            &BoundaryScalarField::zeros(4),
        )
        .unwrap();
        let ones = vec![1.0; 4];
        let quad: f64 = op
            .matvec(&ones)
            .iter()
            .zip(&ones)
            .map(|(a, b)| a * b)
            .sum();
        assert!(quad < 0.0);
    }

    #[test]
    fn additivity_of_forms() {
        let p = problem_on(unit_tet(), 0.0, 1.0);
        let a_field = ScalarField(vec![0.5, 1.0, 2.0, 3.0]);
        let c = p.robin_coefficient();
        let with_a = robin_operator(&p, &a_field, &c).unwrap();
        let without = robin_operator(&p, &ScalarField::zeros(4), &c).unwrap();
        let m = mass(&p, &a_field, true).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let diff = with_a.get(i, j) - without.get(i, j);
                assert!((diff - m.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coercivity_lower_bound() {
        let p = problem_on(unit_tet(), 0.0, 0.5);
        let a_field = ScalarField(vec![1.0, 2.0, 0.5, 1.5]);
        let op = robin_operator(&p, &a_field, &p.robin_coefficient()).unwrap();
        let lv = lumped_volumes(&p.mesh);
        let bound = a_field
            .0
            .iter()
            .zip(&lv)
            .map(|(a, v)| a * v)
            .fold(f64::INFINITY, f64::min);
        let mut rng = 123456789u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for _ in 0..50 {
            let v: Vec<f64> = (0..4).map(|_| next()).collect();
            let quad: f64 = op.matvec(&v).iter().zip(&v).map(|(a, b)| a * b).sum();
            let norm2: f64 = v.iter().map(|x| x * x).sum();
            assert!(quad >= bound * norm2 - 1e-12);
        }
    }

    #[test]
    fn stiffness_invariant_under_vertex_reordering() {
        // permuting the cell's local vertex order must not change entries
        let verts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let facets = |_: &Vec<usize>| {
            vec![
                BoundaryFacet { vertices: vec![0, 1, 2], cell: 0 },
                BoundaryFacet { vertices: vec![0, 1, 3], cell: 0 },
                BoundaryFacet { vertices: vec![0, 2, 3], cell: 0 },
                BoundaryFacet { vertices: vec![1, 2, 3], cell: 0 },
            ]
        };
        let reference: Vec<usize> = vec![0, 1, 2, 3];
        let mesh0 = SimplicialMesh::new(3, verts.clone(), vec![reference.clone()], facets(&reference), None).unwrap();
        let k0 = stiffness_unit(&mesh0).unwrap();
        let perms = [
            vec![0, 1, 2, 3], vec![0, 1, 3, 2], vec![0, 2, 1, 3], vec![0, 2, 3, 1],
            vec![0, 3, 1, 2], vec![0, 3, 2, 1], vec![1, 0, 2, 3], vec![1, 0, 3, 2],
            vec![1, 2, 0, 3], vec![1, 2, 3, 0], vec![1, 3, 0, 2], vec![1, 3, 2, 0],
            vec![2, 0, 1, 3], vec![2, 0, 3, 1], vec![2, 1, 0, 3], vec![2, 1, 3, 0],
            vec![2, 3, 0, 1], vec![2, 3, 1, 0], vec![3, 0, 1, 2], vec![3, 0, 2, 1],
            vec![3, 1, 0, 2], vec![3, 1, 2, 0], vec![3, 2, 0, 1], vec![3, 2, 1, 0],
        ];
        for perm in &perms {
            let mesh = SimplicialMesh::new(3, verts.clone(), vec![perm.clone()], facets(perm), None).unwrap();
            let k = stiffness_unit(&mesh).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert!(
                        (k.get(i, j) - k0.get(i, j)).abs() < 1e-13,
                        "perm {perm:?} entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn mmatrix_report_regular_tet() {
        // regular tetrahedron: all off-diagonals of the P1 stiffness are negative
        let s = 2f64.sqrt();
        let verts = vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ];
        let _ = s;
        let cells = vec![vec![0, 1, 2, 3]];
        let facets = vec![
            BoundaryFacet { vertices: vec![0, 1, 2], cell: 0 },
            BoundaryFacet { vertices: vec![0, 1, 3], cell: 0 },
            BoundaryFacet { vertices: vec![0, 2, 3], cell: 0 },
            BoundaryFacet { vertices: vec![1, 2, 3], cell: 0 },
        ];
        let mesh = SimplicialMesh::new(3, verts, cells, facets, None).unwrap();
        let k = stiffness_unit(&mesh).unwrap();
        let report = mmatrix_report(&k);
        assert!(report.monotone_friendly);
        assert_eq!(report.positive_offdiagonal_count, 0);
    }

    #[test]
    fn mmatrix_report_flags_positive_pair() {
        let mut b = TripletBuilder::new(3);
        b.push(0, 0, 1.0);
        b.push(1, 1, 1.0);
        b.push(2, 2, 1.0);
        b.push_sym(0, 1, 0.5);
        let op = b.build();
        let report = mmatrix_report(&op);
        assert!(!report.monotone_friendly);
        assert_eq!(report.positive_offdiagonal_count, 2);
        assert!((report.max_positive_offdiagonal - 0.5).abs() < 1e-15);
        let diag = mmatrix_report(&SparseOperator::diagonal(&[1.0, 2.0]));
        assert!(diag.monotone_friendly);
        assert_eq!(diag.positive_offdiagonal_count, 0);
    }
}
