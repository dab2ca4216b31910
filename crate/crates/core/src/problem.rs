use crate::error::{Error, Result};
use crate::field::{BoundaryScalarField, ScalarField};
use crate::io::MeshData;
use crate::mesh::SimplicialMesh;

/// Field name conventions used by mesh files and the gallery.
pub const SCALAR_CURVATURE_FIELD: &str = "scalar_curvature";
pub const MEAN_CURVATURE_FIELD: &str = "mean_curvature";

/// The data of the curvature prescription problem: a discrete manifold with
/// boundary, its scalar curvature, its boundary mean curvature, and the
/// dimensional constants a = 4(n-1)/(n-2), p = 2n/(n-2).
#[derive(Debug, Clone)]
pub struct YamabeProblem {
    pub mesh: SimplicialMesh,
    pub scalar_curvature: ScalarField,
    pub mean_curvature: BoundaryScalarField,
    pub n: usize,
    pub a: f64,
    pub p: f64,
}

impl YamabeProblem {
    pub fn new(
        mesh: SimplicialMesh,
        scalar_curvature: ScalarField,
        mean_curvature: BoundaryScalarField,
    ) -> Result<Self> {
        let n = mesh.dimension();
        scalar_curvature.validate(mesh.vertex_count())?;
        mean_curvature.validate(mesh.boundary_vertices().len())?;
        let nf = n as f64;
        let a = 4.0 * (nf - 1.0) / (nf - 2.0);
        let p = 2.0 * nf / (nf - 2.0);
        if !(a > 0.0 && p > 2.0) {
            return Err(Error::Precondition(format!(
                "dimensional constants out of range: a = {a}, p = {p}"
            )));
        }
        Ok(YamabeProblem {
            mesh,
            scalar_curvature,
            mean_curvature,
            n,
            a,
            p,
        })
    }

    /// Build from a loaded mesh file; absent curvature fields default to zero.
    pub fn from_mesh_data(data: &MeshData) -> Result<Self> {
        let nv = data.mesh.vertex_count();
        let nb = data.mesh.boundary_vertices().len();
        let s = data
            .fields
            .get(SCALAR_CURVATURE_FIELD)
            .cloned()
            .unwrap_or_else(|| ScalarField::zeros(nv));
        let h = data
            .boundary_fields
            .get(MEAN_CURVATURE_FIELD)
            .cloned()
            .unwrap_or_else(|| BoundaryScalarField::zeros(nb));
        YamabeProblem::new(data.mesh.clone(), s, h)
    }

    /// Constant-coefficient problem on a given mesh.
    pub fn with_constants(mesh: SimplicialMesh, s: f64, h: f64) -> Result<Self> {
        let nv = mesh.vertex_count();
        let nb = mesh.boundary_vertices().len();
        YamabeProblem::new(
            mesh,
            ScalarField::constant(s, nv),
            BoundaryScalarField::constant(h, nb),
        )
    }

    /// The same problem with scalar curvature shifted by the constant `beta`.
    pub fn shifted(&self, beta: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.scalar_curvature.0 {
            *v += beta;
        }
        out
    }

    /// Robin coefficient c = 2/(p-2) * h_g on boundary vertices.
    pub fn robin_coefficient(&self) -> BoundaryScalarField {
        let factor = 2.0 / (self.p - 2.0);
        BoundaryScalarField(self.mean_curvature.0.iter().map(|h| factor * h).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.mesh.vertex_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::unit_tet;

    #[test]
    fn dimensional_constants_for_n3() {
        let p = YamabeProblem::with_constants(unit_tet(), -6.0, 0.0).unwrap();
        assert_eq!(p.n, 3);
        assert!((p.a - 8.0).abs() < 1e-15);
        assert!((p.p - 6.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_adds_constant() {
        let p = YamabeProblem::with_constants(unit_tet(), -6.0, 0.0).unwrap();
        let q = p.shifted(2.5);
        for v in 0..4 {
            assert!((q.scalar_curvature[v] - (-3.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn robin_coefficient_scaling() {
        // 2/(p-2) = 1/2 for n = 3
        let p = YamabeProblem::with_constants(unit_tet(), 0.0, 3.0).unwrap();
        let c = p.robin_coefficient();
        for i in 0..c.len() {
            assert!((c[i] - 1.5).abs() < 1e-15);
        }
    }
}
