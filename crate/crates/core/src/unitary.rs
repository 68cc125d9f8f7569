use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;

use crate::error::{CoreError, Result};

/// Names accepted by [`named_unitary`].
pub const NAMED_GATES: [&str; 9] = ["I", "X", "Y", "Z", "H", "SZ", "U8", "U8dag", "W"];

/// Tolerance for accepting a matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

const NAME_MATCH_TOL: f64 = 1e-14;

/// A 2x2 complex matrix acting on one site, row-major.
///
/// Construction through [`Unitary2::new`] checks `U†U = I`; [`Unitary2::from_raw`]
/// skips the check so that malformed programs can still be represented and
/// reported by the validator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[C64; 2]; 2],
}

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl Unitary2 {
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let u = Self { m };
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(CoreError::NotUnitary { deviation });
        }
        Ok(u)
    }

    pub const fn from_raw(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    /// Eight reals, row-major with real/imaginary parts interleaved.
    pub fn from_reals(r: [f64; 8]) -> Self {
        Self::from_raw([[c(r[0], r[1]), c(r[2], r[3])], [c(r[4], r[5]), c(r[6], r[7])]])
    }

    pub fn to_reals(&self) -> [f64; 8] {
        let m = &self.m;
        [
            m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im,
        ]
    }

    pub const fn identity() -> Self {
        Self::from_raw([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]])
    }

    pub const fn pauli_x() -> Self {
        Self::from_raw([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
    }

    pub const fn pauli_y() -> Self {
        Self::from_raw([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
    }

    pub const fn pauli_z() -> Self {
        Self::from_raw([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
    }

    pub const fn hadamard() -> Self {
        Self::from_raw([
            [c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)],
            [c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.)],
        ])
    }

    /// `diag(1, i)`, the square root of σz.
    pub const fn sqrt_z() -> Self {
        Self::from_raw([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 1.)]])
    }

    /// `exp(-i σx π/8)`.
    pub fn u8() -> Self {
        Self::rx(PI / 4.0)
    }

    /// `U8† σz U8`, a reflection tilted π/4 away from the z axis.
    pub fn w() -> Self {
        let u = Self::u8();
        u.dagger() * Self::pauli_z() * u
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> Self {
        Self::from_raw([[c(1., 0.), c(0., 0.)], [c(0., 0.), C64::from_polar(1.0, phi)]])
    }

    /// `exp(-i θ σx / 2)`.
    pub fn rx(theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::from_raw([[c(co, 0.), c(0., -s)], [c(0., -s), c(co, 0.)]])
    }

    /// `exp(-i θ σy / 2)`.
    pub fn ry(theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::from_raw([[c(co, 0.), c(-s, 0.)], [c(s, 0.), c(co, 0.)]])
    }

    /// `exp(-i θ σz / 2)`.
    pub fn rz(theta: f64) -> Self {
        Self::from_raw([
            [C64::from_polar(1.0, -theta / 2.0), c(0., 0.)],
            [c(0., 0.), C64::from_polar(1.0, theta / 2.0)],
        ])
    }

    pub fn scaled(&self, z: C64) -> Self {
        let m = &self.m;
        Self::from_raw([[m[0][0] * z, m[0][1] * z], [m[1][0] * z, m[1][1] * z]])
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.m;
        Self::from_raw([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.dagger() * *self;
        let id = Self::identity();
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.m[i][j] - id.m[i][j]).norm());
            }
        }
        if worst.is_nan() {
            f64::INFINITY
        } else {
            worst
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Global phase `e^{iφ}` with `self ≈ e^{iφ} other`, if one exists.
    pub fn phase_relative_to(&self, other: &Self, tol: f64) -> Option<C64> {
        let overlap = (other.dagger() * *self).trace() / 2.0;
        if overlap.norm() < 0.5 {
            return None;
        }
        let phase = overlap / overlap.norm();
        other.scaled(phase).approx_eq(self, tol).then_some(phase)
    }

    pub fn eq_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        self.phase_relative_to(other, tol).is_some()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.m[0][1].norm() <= tol && self.m[1][0].norm() <= tol
    }

    /// If `U|b⟩ = z|b'⟩` exactly (up to `tol`), return `(b', z)`.
    pub fn basis_image(&self, b: usize, tol: f64) -> Option<(usize, C64)> {
        let col = [self.m[0][b], self.m[1][b]];
        if col[1].norm() <= tol {
            Some((0, col[0]))
        } else if col[0].norm() <= tol {
            Some((1, col[1]))
        } else {
            None
        }
    }

    /// Name from [`NAMED_GATES`] that matches this matrix exactly (to 1e-14).
    pub fn name(&self) -> Option<&'static str> {
        NAMED_GATES.iter().copied().find(|n| {
            named_unitary(n)
                .map(|u| u.approx_eq(self, NAME_MATCH_TOL))
                .unwrap_or(false)
        })
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Unitary2::from_raw(out)
    }
}

impl fmt::Display for Unitary2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => f.write_str(n),
            None => {
                let r = self.to_reals();
                let parts: Vec<String> = r.iter().map(|x| format!("{x:.16e}")).collect();
                f.write_str(&parts.join(" "))
            }
        }
    }
}

/// Look up one of the fixed gates in [`NAMED_GATES`].
pub fn named_unitary(name: &str) -> Result<Unitary2> {
    let u = match name {
        "I" => Unitary2::identity(),
        "X" => Unitary2::pauli_x(),
        "Y" => Unitary2::pauli_y(),
        "Z" => Unitary2::pauli_z(),
        "H" => Unitary2::hadamard(),
        "SZ" => Unitary2::sqrt_z(),
        "U8" => Unitary2::u8(),
        "U8dag" => Unitary2::u8().dagger(),
        "W" => Unitary2::w(),
        _ => {
            return Err(CoreError::UnknownGate {
                name: name.to_string(),
                valid: NAMED_GATES.join(", "),
            })
        }
    };
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_is_diag_one_minus_one() {
        let z = named_unitary("Z").unwrap();
        assert_eq!(z.get(0, 0), c(1., 0.));
        assert_eq!(z.get(1, 1), c(-1., 0.));
        assert_eq!(z.get(0, 1), c(0., 0.));
    }

    #[test]
    fn sz_squared_is_z() {
        let s = named_unitary("SZ").unwrap();
        assert!((s * s).approx_eq(&Unitary2::pauli_z(), 1e-12));
    }

    #[test]
    fn w_is_u8_conjugated_z() {
        // U8 = cos(π/8) I − i sin(π/8) σx written out by hand.
        let (s, co) = (PI / 8.0).sin_cos();
        let u8 = Unitary2::from_raw([[c(co, 0.), c(0., -s)], [c(0., -s), c(co, 0.)]]);
        assert!(u8.approx_eq(&named_unitary("U8").unwrap(), 1e-15));
        let w = u8.dagger() * Unitary2::pauli_z() * u8;
        assert!(w.approx_eq(&named_unitary("W").unwrap(), 1e-15));
        // W is a reflection: W² = I and tr W = 0.
        assert!((w * w).approx_eq(&Unitary2::identity(), 1e-12));
        assert!(w.trace().norm() < 1e-12);
    }

    #[test]
    fn all_named_gates_are_unitary() {
        for n in NAMED_GATES {
            let u = named_unitary(n).unwrap();
            assert!(u.is_unitary(1e-12), "{n}");
            assert_eq!(u.name(), Some(n));
        }
    }

    #[test]
    fn unknown_name_lists_valid_names() {
        let err = named_unitary("T").unwrap_err().to_string();
        assert!(err.contains("U8dag"), "{err}");
        assert!(err.contains("`T`"));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = [[c(1., 0.), c(1., 0.)], [c(0., 0.), c(1., 0.)]];
        assert!(matches!(Unitary2::new(m), Err(CoreError::NotUnitary { .. })));
    }

    #[test]
    fn basis_image_detects_permutations() {
        let x = Unitary2::pauli_x();
        assert_eq!(x.basis_image(0, 1e-14), Some((1, c(1., 0.))));
        assert!(Unitary2::hadamard().basis_image(0, 1e-14).is_none());
        let y = Unitary2::pauli_y();
        assert_eq!(y.basis_image(1, 1e-14), Some((0, c(0., -1.))));
    }

    #[test]
    fn phase_relative_to_finds_global_phase() {
        let z = Unitary2::pauli_z();
        let iz = z.scaled(C64::i());
        assert!((iz.phase_relative_to(&z, 1e-12).unwrap() - C64::i()).norm() < 1e-12);
        assert!(Unitary2::pauli_x().phase_relative_to(&z, 1e-12).is_none());
    }
}
