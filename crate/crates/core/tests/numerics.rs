use nalgebra::DVector;
use proptest::prelude::*;
use rkgeo::numerics::*;
use rkgeo::Error;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn diag(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_column_slice(values))
}

#[test]
fn eig_of_diagonal_is_sorted_permutation() {
    let h = diag(&[c64(3.0, 0.0), c64(1.0, 0.0), c64(2.0, 0.0)]);
    let e = hermitian_eig(&h).unwrap();
    assert_eq!(e.values.len(), 3);
    for (got, want) in e.values.iter().zip([1.0, 2.0, 3.0]) {
        assert!(close(*got, want, 1e-14));
    }
    // Each eigenvector is a unit coordinate vector up to phase.
    for j in 0..3 {
        let col = e.vectors.column(j);
        let big = col.iter().filter(|z| z.norm() > 0.5).count();
        assert_eq!(big, 1);
    }
}

#[test]
fn eig_of_zero_matrix() {
    let e = hermitian_eig(&CMatrix::zeros(3, 3)).unwrap();
    assert!(e.values.iter().all(|&v| v == 0.0));
    let defect = max_abs(&(e.vectors.adjoint() * &e.vectors - identity(3)));
    assert!(defect < 1e-14);
}

#[test]
fn eig_of_off_diagonal_two_by_two() {
    let x = 0.4;
    let h = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -x), c64(0.0, x), c64(0.0, 0.0)]);
    let e = hermitian_eig(&h).unwrap();
    assert!(close(e.values[0], -0.4, 1e-14));
    assert!(close(e.values[1], 0.4, 1e-14));
}

#[test]
fn eig_rejects_non_hermitian() {
    let h = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    assert!(matches!(hermitian_eig(&h), Err(Error::NotHermitian { .. })));
}

#[test]
fn svd_small_cases() {
    let s = svd(&identity(4)).unwrap();
    assert!(s.singular_values.iter().all(|&x| close(x, 1.0, 1e-14)));

    let u = DVector::from_column_slice(&[c64(2.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let v = DVector::from_column_slice(&[c64(0.0, 0.0), c64(0.0, 3.0), c64(0.0, 0.0)]);
    let m = &u * v.adjoint();
    let s = svd(&m).unwrap();
    assert!(close(s.singular_values[0], 6.0, 1e-13));
    assert!(s.singular_values[1] < 1e-13);

    let s = svd(&diag(&[c64(-2.0, 0.0), c64(1.0, 0.0)])).unwrap();
    assert!(close(s.singular_values[0], 2.0, 1e-14));
    assert!(close(s.singular_values[1], 1.0, 1e-14));
}

#[test]
fn svd_recomposes_rectangular() {
    let m = CMatrix::from_fn(3, 5, |i, j| c64((i * 5 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.3));
    let s = svd(&m).unwrap();
    assert!(op_norm(&(s.recompose() - &m)) < 1e-12 * s.singular_values[0]);
    assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn log_of_identity_and_diagonal() {
    let a = unitary_log_principal(&identity(3), LogOptions::default()).unwrap();
    assert!(max_abs(&a) < 1e-14);

    let s = diag(&[C64::from_polar(1.0, 0.3), C64::from_polar(1.0, -0.3)]);
    let a = unitary_log_principal(&s, LogOptions::default()).unwrap();
    assert!(close(a[(0, 0)].re, 0.3, 1e-14));
    assert!(close(a[(1, 1)].re, -0.3, 1e-14));
    assert!(a[(0, 1)].norm() < 1e-14);
}

#[test]
fn log_of_rotation_has_doubled_angle() {
    let x: f64 = 0.7;
    let (c, s) = ((2.0 * x).cos(), (2.0 * x).sin());
    let rot = CMatrix::from_row_slice(2, 2, &[c64(c, 0.0), c64(-s, 0.0), c64(s, 0.0), c64(c, 0.0)]);
    let a = unitary_log_principal(&rot, LogOptions::default()).unwrap();
    let e = hermitian_eig(&a).unwrap();
    assert!(close(e.values[0], -1.4, 1e-12));
    assert!(close(e.values[1], 1.4, 1e-12));
    let back = matrix_exp_i(&a, 1.0).unwrap();
    assert!(max_abs(&(back - rot)) < 1e-12);
}

#[test]
fn log_rejects_minus_one_unless_allowed() {
    let s = diag(&[c64(-1.0, 0.0), c64(1.0, 0.0)]);
    assert!(matches!(
        unitary_log_principal(&s, LogOptions::default()),
        Err(Error::BranchAmbiguity { .. })
    ));
    let a = unitary_log_principal(
        &s,
        LogOptions {
            allow_pi: true,
            ..LogOptions::default()
        },
    )
    .unwrap();
    assert!(close(a[(0, 0)].re, std::f64::consts::PI, 1e-14));
}

#[test]
fn log_rejects_non_unitary() {
    let s = diag(&[c64(2.0, 0.0)]);
    assert!(matches!(
        unitary_log_principal(&s, LogOptions::default()),
        Err(Error::NotUnitary { .. })
    ));
}

#[test]
fn exp_i_basic_cases() {
    let z = matrix_exp_i(&CMatrix::zeros(3, 3), 2.5).unwrap();
    assert!(max_abs(&(z - identity(3))) < 1e-15);
    let a = diag(&[c64(std::f64::consts::PI, 0.0)]);
    let e = matrix_exp_i(&a, 1.0).unwrap();
    assert!((e[(0, 0)] - c64(-1.0, 0.0)).norm() < 1e-15);
    let h = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.2, 0.5), c64(0.2, -0.5), c64(-0.3, 0.0)]);
    let e0 = matrix_exp_i(&h, 0.0).unwrap();
    assert!(max_abs(&(e0 - identity(2))) < 1e-15);
}

fn naive_permanent(m: &CMatrix) -> C64 {
    fn rec(m: &CMatrix, row: usize, used: &mut Vec<bool>) -> C64 {
        let n = m.nrows();
        if row == n {
            return c64(1.0, 0.0);
        }
        let mut acc = c64(0.0, 0.0);
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                acc += m[(row, j)] * rec(m, row + 1, used);
                used[j] = false;
            }
        }
        acc
    }
    rec(m, 0, &mut vec![false; m.nrows()])
}

#[test]
fn permanent_small_cases() {
    let ones = CMatrix::from_element(2, 2, c64(1.0, 0.0));
    assert!((permanent(&ones).unwrap() - c64(2.0, 0.0)).norm() < 1e-15);
    for n in 1..6 {
        assert!((permanent(&identity(n)).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
    }
    let m = CMatrix::from_row_slice(
        3,
        3,
        &[
            c64(0.3, 0.1), c64(-1.2, 0.4), c64(0.5, 0.0),
            c64(0.0, 2.0), c64(0.7, -0.7), c64(1.1, 0.3),
            c64(-0.4, 0.2), c64(0.9, 0.0), c64(0.2, -1.5),
        ],
    );
    let naive = naive_permanent(&m);
    let rel = (permanent(&m).unwrap() - naive).norm() / naive.norm();
    assert!(rel < 1e-12);
    assert!(matches!(
        permanent(&identity(15)),
        Err(Error::TooLarge { size: 15, max: 14 })
    ));
}

#[test]
fn roots_of_simple_polynomials() {
    let r = polynomial_roots(&[c64(-1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
    let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!(close(re[0], -1.0, 1e-14) && close(re[1], 1.0, 1e-14));

    let p = poly_mul(&[c64(0.0, -0.3), c64(1.0, 0.0)], &[c64(-0.5, 0.0), c64(1.0, 0.0)]);
    let r = polynomial_roots(&p).unwrap();
    for want in [c64(0.0, 0.3), c64(0.5, 0.0)] {
        assert!(r.iter().any(|z| (z - want).norm() < 1e-13));
    }
    assert_eq!(polynomial_roots(&[c64(3.0, 0.0), c64(1e-20, 0.0)]), Err(Error::DegreeZero));
}

#[test]
fn deflation_removes_known_root() {
    let p = poly_mul(&[c64(-0.2, 0.1), c64(1.0, 0.0)], &[c64(0.4, 0.0), c64(0.0, 1.0)]);
    let (q, rem) = poly_deflate(&p, c64(0.2, -0.1));
    assert!(rem.norm() < 1e-15);
    assert!((q[0] - c64(0.4, 0.0)).norm() < 1e-15 && (q[1] - c64(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn rank_tolerance_conventions() {
    let s = [1.0, 1e-3, 1e-17];
    assert_eq!(numerical_rank(&s, 3, 3, RankTolerance::Standard), 2);
    assert_eq!(numerical_rank(&s, 3, 3, RankTolerance::Relative(1e-2)), 1);
    assert_eq!(numerical_rank(&s, 3, 3, RankTolerance::Absolute(0.0)), 3);
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| CMatrix::from_fn(rows, cols, |i, j| c64(v[i * cols + j].0, v[i * cols + j].1)))
}

fn hermitian_strategy() -> impl Strategy<Value = CMatrix> {
    (1usize..=20).prop_flat_map(|n| matrix_strategy(n, n).prop_map(|m| hermitian_part(&m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(h in hermitian_strategy()) {
        let n = h.nrows();
        let e = hermitian_eig(&h).unwrap();
        let lam = diag(&e.values.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
        let scale = op_norm(&h).max(1e-300);
        prop_assert!(op_norm(&(&h * &e.vectors - &e.vectors * lam)) <= 1e-10 * scale);
        prop_assert!(max_abs(&(e.vectors.adjoint() * &e.vectors - identity(n))) <= 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn singular_values_match_gram_eigenvalues(m in (1usize..8, 1usize..8).prop_flat_map(|(r, c)| matrix_strategy(r, c))) {
        let s = singular_values(&m).unwrap();
        let g = m.adjoint() * &m;
        let mut ev: Vec<f64> = hermitian_eig(&g).unwrap().values.iter().map(|&x| x.max(0.0).sqrt()).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        for (k, sk) in s.iter().enumerate() {
            prop_assert!((sk - ev[k]).abs() <= 1e-9 * (1.0 + s[0]));
        }
        let full = svd(&m).unwrap();
        prop_assert!(op_norm(&(full.recompose() - &m)) <= 1e-10 * s[0].max(1e-300));
    }

    #[test]
    fn permanent_zero_row_and_permutation(m in (1usize..7).prop_flat_map(|n| matrix_strategy(n, n)), seed in any::<u64>()) {
        let n = m.nrows();
        let mut z = m.clone();
        let r = (seed as usize) % n;
        z.row_mut(r).fill(c64(0.0, 0.0));
        prop_assert!(permanent(&z).unwrap().norm() <= 1e-14);

        let p = permanent(&m).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let rows = CMatrix::from_fn(n, n, |i, j| m[(perm[i], j)]);
        let cols = CMatrix::from_fn(n, n, |i, j| m[(i, perm[j])]);
        let scale = 1.0 + p.norm();
        prop_assert!((permanent(&rows).unwrap() - p).norm() <= 1e-12 * scale);
        prop_assert!((permanent(&cols).unwrap() - p).norm() <= 1e-12 * scale);
    }

    #[test]
    fn log_exp_round_trip(h in hermitian_strategy()) {
        // Random unitary with spectrum well away from -1.
        let norm = op_norm(&h).max(1e-12);
        let u = matrix_exp_i(&h, 2.5 / norm).unwrap();
        let n = u.nrows();
        prop_assert!(max_abs(&(u.adjoint() * &u - identity(n))) <= 1e-10);
        let a = unitary_log_principal(&u, LogOptions::default()).unwrap();
        prop_assert!(max_abs(&(&a - a.adjoint())) <= 1e-12);
        let spec = hermitian_eig(&a).unwrap().values;
        prop_assert!(spec.iter().all(|&x| x > -std::f64::consts::PI && x <= std::f64::consts::PI));
        let back = matrix_exp_i(&a, 1.0).unwrap();
        prop_assert!(op_norm(&(back - &u)) <= 1e-9);
    }

    #[test]
    fn roots_have_small_residual(c in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..10)) {
        let coeffs: Vec<C64> = c.iter().map(|&(x, y)| c64(x, y)).collect();
        prop_assume!(coeffs.last().unwrap().norm() > 1e-3);
        let roots = polynomial_roots(&coeffs).unwrap();
        prop_assert_eq!(roots.len(), coeffs.len() - 1);
        for z in roots {
            let scale: f64 = coeffs.iter().enumerate().map(|(k, ck)| ck.norm() * z.norm().powi(k as i32)).sum();
            prop_assert!(poly_eval(&coeffs, z).norm() <= 1e-8 * scale);
        }
    }
}
