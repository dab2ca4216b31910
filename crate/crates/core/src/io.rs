use crate::error::{Error, Result};
use crate::field::{BoundaryScalarField, ScalarField};
use crate::mesh::{BoundaryFacet, SimplicialMesh};
use crate::metric::CellMetric;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// On-disk mesh document.
#[derive(Debug, Serialize, Deserialize)]
struct MeshFile {
    dimension: usize,
    vertices: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    boundary_facets: Vec<FacetRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cell_metric: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fields: Option<BTreeMap<String, Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary_fields: Option<BTreeMap<String, Vec<f64>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FacetRecord {
    vertices: Vec<usize>,
    cell: usize,
}

/// A mesh together with the named vertex and boundary-vertex data stored
/// alongside it. Boundary fields are indexed in sorted-boundary-vertex order.
#[derive(Debug, Clone)]
pub struct MeshData {
    pub mesh: SimplicialMesh,
    pub fields: BTreeMap<String, ScalarField>,
    pub boundary_fields: BTreeMap<String, BoundaryScalarField>,
}

impl MeshData {
    pub fn bare(mesh: SimplicialMesh) -> Self {
        MeshData {
            mesh,
            fields: BTreeMap::new(),
            boundary_fields: BTreeMap::new(),
        }
    }
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<MeshData> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text)
}

pub fn parse_mesh(text: &str) -> Result<MeshData> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let metrics = match file.cell_metric {
        Some(rows) => {
            if rows.len() != file.cells.len() {
                return Err(Error::Validation(format!(
                    "{} cell_metric rows for {} cells",
                    rows.len(),
                    file.cells.len()
                )));
            }
            Some(
                rows.into_iter()
                    .map(|upper| CellMetric::from_upper(file.dimension, upper))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        None => None,
    };
    let facets = file
        .boundary_facets
        .into_iter()
        .map(|f| BoundaryFacet {
            vertices: f.vertices,
            cell: f.cell,
        })
        .collect();
    let mesh = SimplicialMesh::new(file.dimension, file.vertices, file.cells, facets, metrics)?;
    let nv = mesh.vertex_count();
    let nb = mesh.boundary_vertices().len();
    let mut fields = BTreeMap::new();
    for (name, values) in file.fields.unwrap_or_default() {
        let f = ScalarField(values);
        f.validate(nv)
            .map_err(|e| Error::Validation(format!("field `{name}`: {e}")))?;
        fields.insert(name, f);
    }
    let mut boundary_fields = BTreeMap::new();
    for (name, values) in file.boundary_fields.unwrap_or_default() {
        let f = BoundaryScalarField(values);
        f.validate(nb)
            .map_err(|e| Error::Validation(format!("boundary field `{name}`: {e}")))?;
        boundary_fields.insert(name, f);
    }
    Ok(MeshData {
        mesh,
        fields,
        boundary_fields,
    })
}

pub fn mesh_to_string(data: &MeshData) -> String {
    let mesh = &data.mesh;
    let file = MeshFile {
        dimension: mesh.dimension(),
        vertices: mesh.vertices().to_vec(),
        cells: mesh.cells().to_vec(),
        boundary_facets: mesh
            .boundary_facets()
            .iter()
            .map(|f| FacetRecord {
                vertices: f.vertices.clone(),
                cell: f.cell,
            })
            .collect(),
        cell_metric: Some(mesh.metrics().iter().map(|m| m.upper.clone()).collect()),
        fields: if data.fields.is_empty() {
            None
        } else {
            Some(
                data.fields
                    .iter()
                    .map(|(k, v)| (k.clone(), v.0.clone()))
                    .collect(),
            )
        },
        boundary_fields: if data.boundary_fields.is_empty() {
            None
        } else {
            Some(
                data.boundary_fields
                    .iter()
                    .map(|(k, v)| (k.clone(), v.0.clone()))
                    .collect(),
            )
        },
    };
    serde_json::to_string_pretty(&file).expect("mesh serialization cannot fail")
}

/// Write atomically: serialize to a sibling temp file, then rename.
pub fn save_mesh(path: impl AsRef<Path>, data: &MeshData) -> Result<()> {
    let path = path.as_ref();
    let text = mesh_to_string(data);
    atomic_write(path, text.as_bytes())
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.to_path_buf();
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    tmp.set_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
