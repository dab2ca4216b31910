use crate::error::{Error, Result};
use crate::sparse::SparseOperator;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Diagonally preconditioned conjugate gradients for SPD operators.
///
/// Converges when the true relative residual ||op x - rhs|| / ||rhs|| drops
/// below `tol`; errors on indefiniteness (non-positive curvature) or after
/// `max_iter` iterations.
pub fn cg_solve(
    op: &SparseOperator,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    cg_solve_from(op, rhs, None, tol, max_iter)
}

/// Same as `cg_solve` with an optional warm-start iterate.
pub fn cg_solve_from(
    op: &SparseOperator,
    rhs: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = op.dim;
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let rhs_norm = norm(rhs);
    if rhs_norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = match x0 {
        Some(x0) => x0.to_vec(),
        None => vec![0.0; n],
    };
    let diag = op.diag();
    let precond: Vec<f64> = diag
        .iter()
        .map(|&d| if d.abs() > 1e-300 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r: Vec<f64> = {
        let ax = op.matvec(&x);
        rhs.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };
    let mut z: Vec<f64> = r.iter().zip(&precond).map(|(ri, pi)| ri * pi).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut res = norm(&r);
    for iter in 0..max_iter {
        if res <= tol * rhs_norm {
            return Ok(x);
        }
        let ap = op.matvec(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            if norm(&p) == 0.0 {
                return Ok(x);
            }
            return Err(Error::IndefiniteOperator(iter));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        // periodic true-residual refresh against drift
        if iter % 50 == 49 {
            let ax = op.matvec(&x);
            for i in 0..n {
                r[i] = rhs[i] - ax[i];
            }
        }
        for i in 0..n {
            z[i] = r[i] * precond[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        res = norm(&r);
    }
    // final exact check: the recursion may have converged on the last step
    let ax = op.matvec(&x);
    let true_res = norm(
        &rhs.iter()
            .zip(&ax)
            .map(|(b, a)| b - a)
            .collect::<Vec<f64>>(),
    );
    if true_res <= tol * rhs_norm {
        return Ok(x);
    }
    Err(Error::CgNoConvergence {
        iterations: max_iter,
        residual: true_res / rhs_norm,
    })
}

/// Randomized positivity probe: true iff v^T op v > 1e-14 ||v||^2 for all
/// sampled v. Deterministic for a given seed.
pub fn spd_probe(op: &SparseOperator, trials: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v: Vec<f64> = (0..op.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let quad = dot(&op.matvec(&v), &v);
        let norm2 = dot(&v, &v);
        if !(quad > 1e-14 * norm2) {
            return false;
        }
    }
    // constant direction is the classical kernel witness; include it
    let ones = vec![1.0; op.dim];
    let quad = dot(&op.matvec(&ones), &ones);
    quad > 1e-14 * op.dim as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{lumped_volumes, robin_operator};
    use crate::field::{BoundaryScalarField, ScalarField};
    use crate::mesh::unit_tet;
    use crate::problem::YamabeProblem;

    #[test]
    fn identity_solves_in_one_step() {
        let op = SparseOperator::identity(5);
        let rhs = vec![1.0, -2.0, 3.0, 0.5, 4.0];
        let x = cg_solve(&op, &rhs, 1e-12, 2).unwrap();
        for (a, b) in x.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_solves_robin_system() {
        // (K + M) 1 = M 1: solving against lumped volumes returns the ones vector
        let p = YamabeProblem::with_constants(unit_tet(), 0.0, 0.0).unwrap();
        let op = robin_operator(
            &p,
            &ScalarField::constant(1.0, 4),
            &BoundaryScalarField::zeros(4),
        )
        .unwrap();
        let rhs = lumped_volumes(&p.mesh);
        let x = cg_solve(&op, &rhs, 1e-12, 100).unwrap();
        for v in &x {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn indefinite_detected() {
        let op = SparseOperator::diagonal(&[1.0, -1.0, 2.0]);
        let rhs = vec![1.0, 1.0, 1.0];
        match cg_solve(&op, &rhs, 1e-12, 50) {
            Err(Error::IndefiniteOperator(_)) => {}
            other => panic!("expected indefiniteness, got {other:?}"),
        }
    }

    #[test]
    fn probe_accepts_coercive_rejects_semidefinite() {
        let p = YamabeProblem::with_constants(unit_tet(), 0.0, 2.0).unwrap();
        let coercive = robin_operator(
            &p,
            &ScalarField::constant(1.0, 4),
            &BoundaryScalarField::constant(1.0, 4),
        )
        .unwrap();
        assert!(spd_probe(&coercive, 100, 42));
        let k = crate::assembly::stiffness(&p).unwrap();
        assert!(!spd_probe(&k, 100, 42), "stiffness has constants in kernel");
        let neg = crate::assembly::mass(&p, &ScalarField::constant(-1.0, 4), true).unwrap();
        assert!(!spd_probe(&neg, 10, 42));
    }

    #[test]
    fn probe_deterministic_given_seed() {
        let op = SparseOperator::diagonal(&[1.0, 2.0, 3.0]);
        assert_eq!(spd_probe(&op, 50, 7), spd_probe(&op, 50, 7));
    }
}
