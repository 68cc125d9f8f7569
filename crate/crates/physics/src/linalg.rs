use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring a truncated Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i h t)` for Hermitian `h`, through its eigendecomposition.
pub fn propagator_eigen(h: &CMatrix, t: f64) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * t)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `exp(-i h t)` via [`expm`].
pub fn propagator(h: &CMatrix, t: f64) -> CMatrix {
    expm(&(h * C64::new(0.0, -t)))
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn pauli(which: char) -> CMatrix {
    let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let m = match which {
        'x' => [o, l, l, o],
        'y' => [o, -i, i, o],
        'z' => [l, o, o, -l],
        _ => [l, o, o, l],
    };
    CMatrix::from_row_slice(2, 2, &m)
}
