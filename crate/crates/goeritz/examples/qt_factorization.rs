//! Factoring an invertible matrix as orthogonal times upper triangular with
//! positive diagonal, the form the determinant scan needs its paths in.
//!
//! Run with: cargo run --example qt_factorization

use goeritz::numerics::mat::Mat;
use goeritz::numerics::{qt, NumericsError};

fn main() {
    let a = Mat::from_rows(&[
        vec![2.0, 1.0, 0.5],
        vec![-1.0, 1.5, 0.0],
        vec![0.5, -0.5, 3.0],
    ]);
    let (q, t) = qt(&a).expect("well conditioned");

    println!("A = Q T with");
    print_matrix("Q", &q);
    print_matrix("T", &t);

    // Q is orthogonal.
    let defect = q.transpose().mul(&q).sub(&Mat::identity(3)).frobenius();
    println!("|Q^T Q - I|_F = {defect:.3e}");
    assert!(defect < 1e-12);

    // T is upper triangular with positive diagonal.
    assert!(t.is_upper_triangular());
    for i in 0..3 {
        assert!(t.get(i, i) > 0.0);
    }

    // The factors multiply back to A.
    let residual = q.mul(&t).sub(&a).frobenius();
    println!("|Q T - A|_F = {residual:.3e}");
    assert!(residual < 1e-12);

    // Determinants agree: det A = det T = product of the diagonal.
    let diag_product: f64 = (0..3).map(|i| t.get(i, i)).product();
    println!("det A = {:.6}, prod diag(T) = {:.6}", a.det(), diag_product);
    assert!((a.det() - diag_product).abs() < 1e-9);

    // A rotation is already orthogonal, so T is the identity.
    let theta: f64 = 0.4;
    let rotation = Mat::from_rows(&[
        vec![theta.cos(), -theta.sin()],
        vec![theta.sin(), theta.cos()],
    ]);
    let (q2, t2) = qt(&rotation).expect("well conditioned");
    assert!(q2.sub(&rotation).frobenius() < 1e-12);
    assert!(t2.sub(&Mat::identity(2)).frobenius() < 1e-12);
    println!("rotations factor as themselves times the identity");

    // Singular input is refused rather than silently factored.
    let singular = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
    match qt(&singular) {
        Err(NumericsError::NearSingular { pivot }) => {
            println!("rank-deficient input refused (pivot {pivot:.3e})");
        }
        other => panic!("expected a near-singular error, got {other:?}"),
    }
}

fn print_matrix(name: &str, m: &Mat) {
    for i in 0..m.n() {
        let row: Vec<String> = (0..m.n()).map(|j| format!("{:8.4}", m.get(i, j))).collect();
        let prefix = if i == m.n() / 2 { name } else { " " };
        println!("{prefix}  [ {} ]", row.join(" "));
    }
}
