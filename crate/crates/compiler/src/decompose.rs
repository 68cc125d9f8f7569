//! Single-qubit decompositions used by the conjugation macro.

use glq_core::{named_unitary, Unitary2, C64};

const TOL: f64 = 1e-12;

/// `(alpha, beta, gamma, delta)` with `u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)`.
pub fn zyz(u: &Unitary2) -> (f64, f64, f64, f64) {
    let det = u.det();
    let alpha = det.arg() / 2.0;
    let s = u.scaled(C64::from_polar(1.0, -alpha));
    let (c, sn) = (s.get(0, 0).norm(), s.get(1, 0).norm());
    let gamma = 2.0 * sn.atan2(c);
    // s00 = e^{-i(b+d)/2} cos, s10 = e^{i(b-d)/2} sin
    let sum = if c > TOL { -2.0 * s.get(0, 0).arg() } else { 0.0 };
    let diff = if sn > TOL { 2.0 * s.get(1, 0).arg() } else { 0.0 };
    let beta = (sum + diff) / 2.0;
    let delta = (sum - diff) / 2.0;
    let rebuilt = Unitary2::rz(beta) * Unitary2::ry(gamma) * Unitary2::rz(delta);
    // sqrt(det) is only fixed up to sign
    if rebuilt.scaled(C64::from_polar(1.0, alpha)).approx_eq(u, 1e-9) {
        (alpha, beta, gamma, delta)
    } else {
        (alpha + std::f64::consts::PI, beta, gamma, delta)
    }
}

/// `(A, B, C)` with `A·B·C = I` and `u ∝ A·Z·B·Z·C`.
pub fn two_cp_form(u: &Unitary2) -> (Unitary2, Unitary2, Unitary2) {
    let (_, beta, gamma, delta) = zyz(u);
    let a = Unitary2::rz(beta) * Unitary2::ry(gamma / 2.0);
    let b = Unitary2::ry(-gamma / 2.0) * Unitary2::rz(-(delta + beta) / 2.0);
    let c = Unitary2::rz((delta - beta) / 2.0);
    // u ∝ A X B X C, and X = H Z H
    let h = Unitary2::hadamard();
    (a * h, h * b * h, h * c)
}

pub fn is_scalar(u: &Unitary2, tol: f64) -> bool {
    u.eq_up_to_phase(&Unitary2::identity(), tol)
}

/// A with `A† Z A ∝ u`, when `u` is a reflection up to phase.
pub fn reflection_frame(u: &Unitary2) -> Option<Unitary2> {
    if u.trace().norm() > 1e-9 {
        return None;
    }
    let z = Unitary2::pauli_z();
    for name in ["I", "H", "U8"] {
        let a = named_unitary(name).expect("named gate");
        if (a.dagger() * z * a).eq_up_to_phase(u, 1e-12) {
            return Some(a);
        }
    }
    // u / e^{i phi} is Hermitian with eigenvalues ±1
    let phase = (-u.det()).sqrt();
    let h = u.scaled(phase.conj() / phase.norm());
    let id = Unitary2::identity();
    let proj = [
        (h.get(0, 0) + id.get(0, 0)) / 2.0,
        (h.get(1, 0) + id.get(1, 0)) / 2.0,
        (h.get(0, 1) + id.get(0, 1)) / 2.0,
        (h.get(1, 1) + id.get(1, 1)) / 2.0,
    ];
    let col0 = [proj[0], proj[1]];
    let col1 = [proj[2], proj[3]];
    let n0 = (col0[0].norm_sqr() + col0[1].norm_sqr()).sqrt();
    let n1 = (col1[0].norm_sqr() + col1[1].norm_sqr()).sqrt();
    let v = if n0 >= n1 {
        [col0[0] / n0, col0[1] / n0]
    } else {
        [col1[0] / n1, col1[1] / n1]
    };
    // rows: <v+| and <v-| with v- orthogonal to v+
    let a = Unitary2::from_raw([[v[0].conj(), v[1].conj()], [-v[1], v[0]]]);
    let ok = (a.dagger() * z * a).eq_up_to_phase(u, 1e-9);
    ok.then_some(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use glq_sim::random::random_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zyz_rebuilds_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let u = random_unitary(&mut rng);
            let (a, b, g, d) = zyz(&u);
            let r = (Unitary2::rz(b) * Unitary2::ry(g) * Unitary2::rz(d)).scaled(C64::from_polar(1.0, a));
            assert!(r.approx_eq(&u, 1e-9), "{u:?}");
        }
    }

    #[test]
    fn two_cp_form_reproduces_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = Unitary2::pauli_z();
        for _ in 0..200 {
            let u = random_unitary(&mut rng);
            let (a, b, c) = two_cp_form(&u);
            assert!((a * b * c).approx_eq(&Unitary2::identity(), 1e-9));
            assert!((a * z * b * z * c).eq_up_to_phase(&u, 1e-9));
        }
    }

    #[test]
    fn named_reflections_use_named_frames() {
        let x = Unitary2::pauli_x();
        assert_eq!(reflection_frame(&x).unwrap().name(), Some("H"));
        let w = named_unitary("W").unwrap();
        assert_eq!(reflection_frame(&w).unwrap().name(), Some("U8"));
        assert_eq!(reflection_frame(&Unitary2::pauli_z()).unwrap().name(), Some("I"));
        assert!(reflection_frame(&Unitary2::sqrt_z()).is_none());
    }

    #[test]
    fn general_reflections_get_a_frame() {
        let y = Unitary2::pauli_y().scaled(C64::from_polar(1.0, 0.7));
        let a = reflection_frame(&y).unwrap();
        assert!((a.dagger() * Unitary2::pauli_z() * a).eq_up_to_phase(&y, 1e-12));
        let tilted = Unitary2::ry(0.4).dagger() * Unitary2::pauli_x() * Unitary2::ry(0.4);
        assert!(reflection_frame(&tilted).is_some());
    }
}
