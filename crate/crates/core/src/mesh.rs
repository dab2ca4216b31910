use crate::error::{Error, Result};
use crate::field::{BoundaryScalarField, ScalarField};
use crate::metric::CellMetric;
use std::collections::{BTreeMap, HashMap};

/// An oriented boundary facet tagged with the unique cell it bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFacet {
    pub vertices: Vec<usize>,
    pub cell: usize,
}

/// A simplicial complex of dimension n >= 3 with boundary facets and a
/// per-cell constant SPD metric. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialMesh {
    dimension: usize,
    vertices: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    boundary_facets: Vec<BoundaryFacet>,
    cell_metric: Vec<CellMetric>,
    /// Sorted list of vertices incident to boundary facets.
    boundary_vertices: Vec<usize>,
    /// vertex index -> position in `boundary_vertices`, or usize::MAX.
    boundary_index: Vec<usize>,
}

/// Linear interpolation map from a mesh to its uniform refinement.
/// Every new vertex is either an old vertex or an edge midpoint.
#[derive(Debug, Clone)]
pub struct Prolongation {
    /// For each fine vertex, the coarse endpoints it averages.
    pub parents: Vec<(usize, usize)>,
    pub coarse_len: usize,
}

impl Prolongation {
    pub fn apply(&self, coarse: &ScalarField) -> Result<ScalarField> {
        coarse.validate(self.coarse_len)?;
        let vals = self
            .parents
            .iter()
            .map(|&(a, b)| 0.5 * (coarse[a] + coarse[b]))
            .collect();
        Ok(ScalarField(vals))
    }

    /// Interpolate a boundary field; both endpoints of every new boundary
    /// vertex lie on the coarse boundary.
    pub fn apply_boundary(
        &self,
        coarse_mesh: &SimplicialMesh,
        fine_mesh: &SimplicialMesh,
        coarse: &BoundaryScalarField,
    ) -> Result<BoundaryScalarField> {
        coarse.validate(coarse_mesh.boundary_vertices().len())?;
        let mut vals = Vec::with_capacity(fine_mesh.boundary_vertices().len());
        for &v in fine_mesh.boundary_vertices() {
            let (a, b) = self.parents[v];
            let ia = coarse_mesh.boundary_position(a).ok_or_else(|| {
                Error::Validation(format!("fine boundary vertex {v} has interior parent {a}"))
            })?;
            let ib = coarse_mesh.boundary_position(b).ok_or_else(|| {
                Error::Validation(format!("fine boundary vertex {v} has interior parent {b}"))
            })?;
            vals.push(0.5 * (coarse[ia] + coarse[ib]));
        }
        Ok(BoundaryScalarField(vals))
    }
}

fn sorted_key(v: &[usize]) -> Vec<usize> {
    let mut k = v.to_vec();
    k.sort_unstable();
    k
}

impl SimplicialMesh {
    pub fn new(
        dimension: usize,
        vertices: Vec<Vec<f64>>,
        cells: Vec<Vec<usize>>,
        boundary_facets: Vec<BoundaryFacet>,
        cell_metric: Option<Vec<CellMetric>>,
    ) -> Result<Self> {
        let metrics = match cell_metric {
            Some(m) => m,
            None => vec![CellMetric::identity(dimension); cells.len()],
        };
        let mut boundary_vertices: Vec<usize> = boundary_facets
            .iter()
            .flat_map(|f| f.vertices.iter().cloned())
            .collect();
        boundary_vertices.sort_unstable();
        boundary_vertices.dedup();
        let mut boundary_index = vec![usize::MAX; vertices.len()];
        for (i, &v) in boundary_vertices.iter().enumerate() {
            if v < boundary_index.len() {
                boundary_index[v] = i;
            }
        }
        let mesh = SimplicialMesh {
            dimension,
            vertices,
            cells,
            boundary_facets,
            cell_metric: metrics,
            boundary_vertices,
            boundary_index,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet] {
        &self.boundary_facets
    }

    pub fn metric(&self, cell: usize) -> &CellMetric {
        &self.cell_metric[cell]
    }

    pub fn metrics(&self) -> &[CellMetric] {
        &self.cell_metric
    }

    /// Sorted vertices incident to the boundary.
    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary_vertices
    }

    /// Position of vertex `v` in the sorted boundary list, if on the boundary.
    pub fn boundary_position(&self, v: usize) -> Option<usize> {
        match self.boundary_index.get(v) {
            Some(&i) if i != usize::MAX => Some(i),
            _ => None,
        }
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_position(v).is_some()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| !self.is_boundary_vertex(v))
            .collect()
    }

    /// Replace the per-cell metrics (used by conformal change); all other
    /// structure is shared.
    pub fn with_metrics(&self, metrics: Vec<CellMetric>) -> Result<Self> {
        SimplicialMesh::new(
            self.dimension,
            self.vertices.clone(),
            self.cells.clone(),
            self.boundary_facets.clone(),
            Some(metrics),
        )
    }

    /// Edge-connected vertex neighbourhoods (sorted, deduplicated).
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for cell in &self.cells {
            for (k, &a) in cell.iter().enumerate() {
                for &b in &cell[k + 1..] {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Cells incident to each vertex.
    pub fn vertex_cells(&self) -> Vec<Vec<usize>> {
        let mut vc = vec![Vec::new(); self.vertex_count()];
        for (ci, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                vc[v].push(ci);
            }
        }
        vc
    }

    // ------------------------------------------------------------------
    // Geometry
    // ------------------------------------------------------------------

    /// Euclidean (coordinate) volume of a cell: |det E| / n!.
    pub fn euclidean_cell_volume(&self, cell: usize) -> f64 {
        let n = self.dimension;
        let c = &self.cells[cell];
        let p0 = &self.vertices[c[0]];
        let mut e = vec![0.0; n * n];
        for j in 1..=n {
            let pj = &self.vertices[c[j]];
            for i in 0..n {
                e[i * n + (j - 1)] = pj[i] - p0[i];
            }
        }
        det_dense(&mut e, n).abs() / factorial(n)
    }

    /// Metric volume: sqrt(det g) times the Euclidean volume.
    pub fn cell_volume(&self, cell: usize) -> f64 {
        self.cell_metric[cell].sqrt_det() * self.euclidean_cell_volume(cell)
    }

    /// Total metric volume.
    pub fn total_volume(&self) -> f64 {
        (0..self.cell_count()).map(|c| self.cell_volume(c)).sum()
    }

    /// P1 hat-function gradients on a cell in coordinate components,
    /// one gradient per cell vertex, plus the Euclidean volume.
    pub fn cell_gradients(&self, cell: usize) -> (Vec<Vec<f64>>, f64) {
        let n = self.dimension;
        let c = &self.cells[cell];
        let p0 = &self.vertices[c[0]];
        let mut e = vec![0.0; n * n];
        for j in 1..=n {
            let pj = &self.vertices[c[j]];
            for i in 0..n {
                e[i * n + (j - 1)] = pj[i] - p0[i];
            }
        }
        let (inv, det) = invert_dense(&e, n);
        let vol = det.abs() / factorial(n);
        // gradient of barycentric j (j = 1..n) is row j-1 of E^{-1}
        let mut grads = vec![vec![0.0; n]; n + 1];
        for j in 1..=n {
            for i in 0..n {
                grads[j][i] = inv[(j - 1) * n + i];
            }
        }
        for i in 0..n {
            let mut s = 0.0;
            for j in 1..=n {
                s += grads[j][i];
            }
            grads[0][i] = -s;
        }
        (grads, vol)
    }

    /// Induced metric area of a boundary facet: sqrt(det Gram) / (n-1)!
    /// with Gram_ij = e_i^T g e_j over the facet edge vectors.
    pub fn facet_area(&self, facet: &BoundaryFacet) -> f64 {
        let n = self.dimension;
        let g = &self.cell_metric[facet.cell];
        let p0 = &self.vertices[facet.vertices[0]];
        let m = n - 1;
        let mut edges = vec![vec![0.0; n]; m];
        for (k, &v) in facet.vertices[1..].iter().enumerate() {
            for i in 0..n {
                edges[k][i] = self.vertices[v][i] - p0[i];
            }
        }
        let mut gram = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                gram[a * m + b] = g.inner(&edges[a], &edges[b]);
            }
        }
        let d = det_dense(&mut gram, m);
        if d <= 0.0 {
            return 0.0;
        }
        d.sqrt() / factorial(m)
    }

    /// Euclidean outward normal of a boundary facet relative to its parent
    /// cell (not normalized): minus the barycentric gradient of the parent
    /// vertex opposite to the facet.
    pub fn facet_outward_direction(&self, facet: &BoundaryFacet) -> Vec<f64> {
        let cell = &self.cells[facet.cell];
        let key = sorted_key(&facet.vertices);
        let opp_local = cell
            .iter()
            .position(|v| !key.binary_search(v).is_ok())
            .expect("facet must be a proper face of its parent cell");
        let (grads, _) = self.cell_gradients(facet.cell);
        grads[opp_local].iter().map(|v| -v).collect()
    }

    /// Normal derivative of a P1 field along the outward unit metric normal
    /// of a boundary facet: (grad u)^T G^{-1} n / sqrt(n^T G^{-1} n).
    pub fn facet_normal_derivative(&self, facet: &BoundaryFacet, u: &ScalarField) -> f64 {
        let n = self.dimension;
        let g = &self.cell_metric[facet.cell];
        let (grads, _) = self.cell_gradients(facet.cell);
        let cell = &self.cells[facet.cell];
        let mut grad_u = vec![0.0; n];
        for (k, &v) in cell.iter().enumerate() {
            for i in 0..n {
                grad_u[i] += u[v] * grads[k][i];
            }
        }
        let ne = self.facet_outward_direction(facet);
        let denom = g.inv_inner(&ne, &ne).sqrt();
        g.inv_inner(&grad_u, &ne) / denom
    }

    // ------------------------------------------------------------------
    // Integration
    // ------------------------------------------------------------------

    /// Vertex-average quadrature of a vertex field against the metric volume.
    pub fn integrate(&self, f: &ScalarField) -> Result<f64> {
        f.validate(self.vertex_count())?;
        let n1 = (self.dimension + 1) as f64;
        let mut total = 0.0;
        for (ci, cell) in self.cells.iter().enumerate() {
            let vol = self.cell_volume(ci);
            let mean = cell.iter().map(|&v| f[v]).sum::<f64>() / n1;
            total += vol * mean;
        }
        Ok(total)
    }

    /// Vertex-average quadrature of a boundary field against the induced
    /// boundary area.
    pub fn boundary_integrate(&self, f: &BoundaryScalarField) -> Result<f64> {
        f.validate(self.boundary_vertices.len())?;
        let m = self.dimension as f64;
        let mut total = 0.0;
        for facet in &self.boundary_facets {
            let area = self.facet_area(facet);
            let mean = facet
                .vertices
                .iter()
                .map(|&v| f[self.boundary_position(v).expect("facet vertex on boundary")])
                .sum::<f64>()
                / m;
            total += area * mean;
        }
        Ok(total)
    }

    pub fn total_boundary_area(&self) -> f64 {
        self.boundary_facets.iter().map(|f| self.facet_area(f)).sum()
    }

    // ------------------------------------------------------------------
    // Validation
    // ------------------------------------------------------------------

    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        if n < 3 {
            return Err(Error::Validation(format!(
                "dimension must be at least 3, got {n}"
            )));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != n {
                return Err(Error::Validation(format!(
                    "vertex {i} has {} coordinates, expected {n}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation(format!("vertex {i} has non-finite coordinate")));
            }
        }
        if self.cell_metric.len() != self.cells.len() {
            return Err(Error::Validation(format!(
                "{} cell metrics for {} cells",
                self.cell_metric.len(),
                self.cells.len()
            )));
        }
        for (ci, cell) in self.cells.iter().enumerate() {
            if cell.len() != n + 1 {
                return Err(Error::Validation(format!(
                    "cell {ci} has {} vertices, expected {}",
                    cell.len(),
                    n + 1
                )));
            }
            for &v in cell {
                if v >= self.vertices.len() {
                    return Err(Error::Validation(format!(
                        "cell {ci} references vertex {v} out of range"
                    )));
                }
            }
            let mut k = sorted_key(cell);
            k.dedup();
            if k.len() != n + 1 {
                return Err(Error::Validation(format!("cell {ci} repeats a vertex")));
            }
            if self.cell_metric[ci].dim != n {
                return Err(Error::Validation(format!(
                    "metric of cell {ci} has dimension {}, expected {n}",
                    self.cell_metric[ci].dim
                )));
            }
            self.cell_metric[ci]
                .validate()
                .map_err(|e| Error::Validation(format!("cell {ci}: {e}")))?;
            let vol = self.cell_volume(ci);
            if !(vol > 0.0) {
                return Err(Error::DegenerateCell { cell: ci, volume: vol });
            }
        }
        // boundary facets: each a face of exactly one cell, tag consistent,
        // and the facet set equals the set of faces incident to one cell.
        let mut face_count: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            for skip in 0..cell.len() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                face_count.entry(sorted_key(&face)).or_default().push(ci);
            }
        }
        let mut tagged: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (fi, facet) in self.boundary_facets.iter().enumerate() {
            if facet.vertices.len() != n {
                return Err(Error::Validation(format!(
                    "boundary facet {fi} has {} vertices, expected {n}",
                    facet.vertices.len()
                )));
            }
            for &v in &facet.vertices {
                if v >= self.vertices.len() {
                    return Err(Error::Validation(format!(
                        "boundary facet {fi} references vertex {v} out of range"
                    )));
                }
            }
            if facet.cell >= self.cells.len() {
                return Err(Error::Validation(format!(
                    "boundary facet {fi} references cell {} out of range",
                    facet.cell
                )));
            }
            let key = sorted_key(&facet.vertices);
            match face_count.get(&key) {
                Some(owners) if owners.len() == 1 => {
                    if owners[0] != facet.cell {
                        return Err(Error::Validation(format!(
                            "boundary facet {fi} tagged with cell {} but owned by cell {}",
                            facet.cell, owners[0]
                        )));
                    }
                }
                Some(owners) => {
                    return Err(Error::Validation(format!(
                        "boundary facet {fi} is shared by {} cells",
                        owners.len()
                    )));
                }
                None => {
                    return Err(Error::Validation(format!(
                        "boundary facet {fi} is not a face of any cell"
                    )));
                }
            }
            if tagged.insert(key, fi).is_some() {
                return Err(Error::Validation(format!("boundary facet {fi} is duplicated")));
            }
        }
        for (key, owners) in &face_count {
            if owners.len() == 1 && !tagged.contains_key(key) {
                return Err(Error::Validation(format!(
                    "face {key:?} of cell {} lies on the topological boundary but is not listed",
                    owners[0]
                )));
            }
            if owners.len() > 2 {
                return Err(Error::Validation(format!(
                    "face {key:?} is shared by {} cells; not a manifold",
                    owners.len()
                )));
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Uniform (red) refinement, n = 3 only
    // ------------------------------------------------------------------

    /// Split every tetrahedron into 8 via edge midpoints. Children inherit
    /// the parent metric; boundary facets split into 4. Returns the refined
    /// mesh and the linear prolongation of vertex data.
    pub fn refine_uniform(&self) -> Result<(SimplicialMesh, Prolongation)> {
        if self.dimension != 3 {
            return Err(Error::UnsupportedDimension(self.dimension));
        }
        let mut vertices = self.vertices.clone();
        let mut parents: Vec<(usize, usize)> = (0..vertices.len()).map(|i| (i, i)).collect();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec<f64>>, parents: &mut Vec<(usize, usize)>| {
            let key = if a < b { (a, b) } else { (b, a) };
            *midpoint.entry(key).or_insert_with(|| {
                let p: Vec<f64> = vertices[a]
                    .iter()
                    .zip(&vertices[b])
                    .map(|(x, y)| 0.5 * (x + y))
                    .collect();
                vertices.push(p);
                parents.push(key);
                vertices.len() - 1
            })
        };

        let mut cells: Vec<Vec<usize>> = Vec::with_capacity(self.cells.len() * 8);
        let mut metrics: Vec<CellMetric> = Vec::with_capacity(self.cells.len() * 8);
        // children of each parent cell occupy a contiguous block of 8
        for (ci, cell) in self.cells.iter().enumerate() {
            let (v0, v1, v2, v3) = (cell[0], cell[1], cell[2], cell[3]);
            let m01 = mid(v0, v1, &mut vertices, &mut parents);
            let m02 = mid(v0, v2, &mut vertices, &mut parents);
            let m03 = mid(v0, v3, &mut vertices, &mut parents);
            let m12 = mid(v1, v2, &mut vertices, &mut parents);
            let m13 = mid(v1, v3, &mut vertices, &mut parents);
            let m23 = mid(v2, v3, &mut vertices, &mut parents);
            cells.push(vec![v0, m01, m02, m03]);
            cells.push(vec![v1, m01, m12, m13]);
            cells.push(vec![v2, m02, m12, m23]);
            cells.push(vec![v3, m03, m13, m23]);
            // interior octahedron split along the shortest diagonal,
            // ties broken by candidate order
            let cand = [(m01, m23), (m02, m13), (m03, m12)];
            let len2 = |a: usize, b: usize| -> f64 {
                vertices[a]
                    .iter()
                    .zip(&vertices[b])
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum()
            };
            let mut best = 0;
            for k in 1..3 {
                if len2(cand[k].0, cand[k].1) < len2(cand[best].0, cand[best].1) - 1e-14 {
                    best = k;
                }
            }
            let (a, b) = cand[best];
            // ring of the remaining four midpoints, ordered so consecutive
            // entries share a parent vertex
            let all = [m01, m02, m03, m12, m13, m23];
            let parent_pair = |m: usize| -> (usize, usize) {
                if m == m01 {
                    (v0, v1)
                } else if m == m02 {
                    (v0, v2)
                } else if m == m03 {
                    (v0, v3)
                } else if m == m12 {
                    (v1, v2)
                } else if m == m13 {
                    (v1, v3)
                } else {
                    (v2, v3)
                }
            };
            let shares = |x: usize, y: usize| -> bool {
                let (a1, a2) = parent_pair(x);
                let (b1, b2) = parent_pair(y);
                a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2
            };
            let mut ring: Vec<usize> = all.iter().cloned().filter(|&m| m != a && m != b).collect();
            for k in 1..3 {
                if !shares(ring[k - 1], ring[k]) {
                    // find a later entry that shares and swap it in
                    for l in (k + 1)..4 {
                        if shares(ring[k - 1], ring[l]) {
                            ring.swap(k, l);
                            break;
                        }
                    }
                }
            }
            cells.push(vec![a, b, ring[0], ring[1]]);
            cells.push(vec![a, b, ring[1], ring[2]]);
            cells.push(vec![a, b, ring[2], ring[3]]);
            cells.push(vec![a, b, ring[3], ring[0]]);
            for _ in 0..8 {
                metrics.push(self.cell_metric[ci].clone());
            }
        }

        // child boundary facets: split each parent facet into 4 and find the
        // child cell (among the parent's 8 children) containing each piece
        let mut facets = Vec::with_capacity(self.boundary_facets.len() * 4);
        for facet in &self.boundary_facets {
            let (w0, w1, w2) = (facet.vertices[0], facet.vertices[1], facet.vertices[2]);
            let n01 = mid(w0, w1, &mut vertices, &mut parents);
            let n02 = mid(w0, w2, &mut vertices, &mut parents);
            let n12 = mid(w1, w2, &mut vertices, &mut parents);
            let pieces = [
                vec![w0, n01, n02],
                vec![w1, n01, n12],
                vec![w2, n02, n12],
                vec![n01, n02, n12],
            ];
            let block = facet.cell * 8;
            for piece in pieces {
                let mut owner = None;
                for child in block..block + 8 {
                    if piece.iter().all(|v| cells[child].contains(v)) {
                        owner = Some(child);
                        break;
                    }
                }
                let owner = owner.ok_or_else(|| {
                    Error::Validation(format!(
                        "refinement lost track of boundary facet piece {piece:?}"
                    ))
                })?;
                facets.push(BoundaryFacet {
                    vertices: piece,
                    cell: owner,
                });
            }
        }

        let fine = SimplicialMesh::new(3, vertices, cells, facets, Some(metrics))?;
        let prolongation = Prolongation {
            parents,
            coarse_len: self.vertex_count(),
        };
        Ok((fine, prolongation))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// In-place LU determinant with partial pivoting.
fn det_dense(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for k in 0..n {
        let mut p = k;
        for i in (k + 1)..n {
            if a[i * n + k].abs() > a[p * n + k].abs() {
                p = i;
            }
        }
        if a[p * n + k] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= a[k * n + k];
        for i in (k + 1)..n {
            let f = a[i * n + k] / a[k * n + k];
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    det
}

/// Dense inverse via Gauss-Jordan with partial pivoting; also returns det.
fn invert_dense(a: &[f64], n: usize) -> (Vec<f64>, f64) {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let mut det = 1.0;
    for k in 0..n {
        let mut p = k;
        for i in (k + 1)..n {
            if m[i * n + k].abs() > m[p * n + k].abs() {
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
                inv.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = m[k * n + k];
        det *= piv;
        if piv == 0.0 {
            return (inv, 0.0);
        }
        for j in 0..n {
            m[k * n + j] /= piv;
            inv[k * n + j] /= piv;
        }
        for i in 0..n {
            if i != k {
                let f = m[i * n + k];
                for j in 0..n {
                    m[i * n + j] -= f * m[k * n + j];
                    inv[i * n + j] -= f * inv[k * n + j];
                }
            }
        }
    }
    (inv, det)
}


#[cfg(test)]
pub use tests::unit_tet;
