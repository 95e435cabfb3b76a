use rmplate::solver::{gram_diagonal, reduced_eigenvalues, saddle_residual};
use rmplate::sparse::{self, to_dense};
use rmplate::*;

fn system(n: usize, t: f64, bc: BoundaryCondition, family: MultiplierFamily) -> BlockSystem {
    let disc = Discretization::new(Mesh::unit_square(n), bc, family).unwrap();
    let model = PlateModel::new(1.0, 0.3, t).unwrap();
    assemble(&disc, &model).unwrap()
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    sparse::norm(&d) / sparse::norm(b).max(f64::MIN_POSITIVE)
}

#[test]
fn saddle_and_condensed_agree() {
    for bc in [BoundaryCondition::Clamped, BoundaryCondition::SimplySupported] {
        for n in [2, 4] {
            for t in [0.1, 1e-3, 1e-6] {
                let sys = system(n, t, bc, MultiplierFamily::Dual);
                let a = solve_saddle(&sys).unwrap();
                let b = solve_condensed(&sys).unwrap();
                assert!(a.info.residual <= 1e-9 && b.info.residual <= 1e-9);
                let d = rel_diff(&b.stacked(), &a.stacked());
                assert!(d < 1e-8, "{bc:?} n={n} t={t}: {d:e}");
                let z = recover_shear(&a, &sys).unwrap();
                // the shear can vanish by symmetry, so measure against the whole solution
                let dz: Vec<f64> = z.iter().zip(&a.multiplier).map(|(x, y)| x - y).collect();
                assert!(sparse::norm(&dz) < 1e-8 * sparse::norm(&a.stacked()), "{bc:?} n={n} t={t}");
            }
        }
    }
}

#[test]
fn two_by_two_clamped_bookkeeping() {
    let sys = system(2, 0.1, BoundaryCondition::Clamped, MultiplierFamily::Dual);
    let sol = solve_saddle(&sys).unwrap();
    assert_eq!(sys.total_dim(), 12);
    assert_eq!(sol.info.dims, [2, 8, 2]);
    assert!(saddle_residual(&sys, &sol.stacked()) <= 1e-9);
    assert_eq!(condense(&sys).unwrap().dim(), 10);
}

#[test]
fn reduced_operator_is_positive_definite() {
    for n in [2, 4] {
        for t in [0.1, 1e-3] {
            let r = condense(&system(n, t, BoundaryCondition::Clamped, MultiplierFamily::Dual)).unwrap();
            let ev = reduced_eigenvalues(&r, 2000).unwrap();
            assert!(ev[0] > 0.0, "n={n} t={t} min eig {}", ev[0]);
            assert!(r.asymmetry <= 1e-10);
        }
    }
}

#[test]
fn operator_is_congruent_to_natural_elimination() {
    let sys = system(4, 0.1, BoundaryCondition::Clamped, MultiplierFamily::Dual);
    let r = condense(&sys).unwrap();
    let l = r.congruence(&sys);
    let nr = sys.dims()[0];
    let mut scale = vec![1.0; r.dim()];
    scale[..nr].iter_mut().for_each(|s| *s = 1.0 / r.scale);
    let lhs = sparse::product(&sparse::scale_rows(&scale, &r.natural), &sparse::transpose(&l));
    let diff = sparse::combine(1.0, &lhs, -1.0, &r.operator);
    assert!(sparse::max_abs(&diff) <= 1e-10 * sparse::max_abs(&r.operator));
    // the natural elimination itself is not symmetric
    assert!(sparse::asymmetry(&r.natural) > 1e-3 * sparse::max_abs(&r.natural));
}

#[test]
fn linear_multiplier_cannot_be_condensed() {
    let sys = system(4, 0.1, BoundaryCondition::Clamped, MultiplierFamily::Linear);
    assert_eq!(condense(&sys).unwrap_err(), PlateError::NonDiagonalGram);
    assert_eq!(gram_diagonal(&sys).unwrap_err(), PlateError::NonDiagonalGram);
    assert!(solve_saddle(&sys).is_ok());
    let dense = to_dense(&sys.gram);
    assert!(dense.nrows() == dense.ncols());
}

#[test]
fn zero_load_gives_zero_solution() {
    let disc = Discretization::new(Mesh::unit_square(4), BoundaryCondition::Clamped, MultiplierFamily::Dual).unwrap();
    let model = PlateModel::new(1.0, 0.3, 0.1).unwrap().with_load(|_| 0.0);
    let sys = assemble(&disc, &model).unwrap();
    for sol in [solve_saddle(&sys).unwrap(), solve_condensed(&sys).unwrap()] {
        assert!(sol.stacked().iter().all(|&v| v == 0.0));
        assert!(recover_shear(&sol, &sys).unwrap().iter().all(|&v| v == 0.0));
    }
}
