//! Bose-Hubbard parameters of a deep lattice and the second-order spin
//! model they induce. Energies in recoil units, lengths in wavelengths.

use std::f64::consts::PI;

use crate::error::{non_negative, positive, Result};

/// Tunnelling rate for a barrier of depth `v0` recoil energies.
pub fn tunnelling_j(v0: f64) -> Result<f64> {
    let v = non_negative("V0/E_R", v0)?;
    let s = v.sqrt();
    Ok(0.5 * (-PI * PI / 4.0 * s).exp() * (s + v * s))
}

/// On-site collision energy for scattering length `as_over_lambda`.
pub fn collision_u(as_over_lambda: f64, v0: f64) -> Result<f64> {
    let a = non_negative("a_s/lambda", as_over_lambda)?;
    let v = non_negative("V0/E_R", v0)?;
    Ok(4.0 * a * v.powf(0.75))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BhParams {
    pub ja: f64,
    pub jb: f64,
    pub uaa: f64,
    pub ubb: f64,
    pub uab: f64,
}

impl BhParams {
    /// Same tunnelling and collision energy for both species.
    pub fn symmetric(j: f64, u: f64) -> Self {
        Self {
            ja: j,
            jb: j,
            uaa: u,
            ubb: u,
            uab: u,
        }
    }

    /// Both species from one lattice depth and scattering length.
    pub fn from_lattice(v0: f64, as_over_lambda: f64) -> Result<Self> {
        Ok(Self::symmetric(
            tunnelling_j(v0)?,
            collision_u(as_over_lambda, v0)?,
        ))
    }

    pub fn check(&self) -> Result<()> {
        non_negative("J_a", self.ja)?;
        non_negative("J_b", self.jb)?;
        positive("U_aa", self.uaa)?;
        positive("U_bb", self.ubb)?;
        positive("U_ab", self.uab)?;
        Ok(())
    }

    pub fn scaled_tunnelling(&self, factor: f64) -> Self {
        Self {
            ja: self.ja * factor,
            jb: self.jb * factor,
            ..*self
        }
    }
}

/// Coefficients of `lambda1 zz + lambda2 (xx + yy)` per bond and of the
/// chain's single-site `bz` term; `field` is an applied effective field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCouplings {
    pub lambda1: f64,
    pub lambda2: f64,
    pub bz: f64,
    pub field: [f64; 3],
}

impl SpinCouplings {
    pub fn new(lambda1: f64, lambda2: f64) -> Self {
        Self {
            lambda1,
            lambda2,
            bz: 0.0,
            field: [0.0; 3],
        }
    }
}

pub fn effective_couplings(p: &BhParams) -> Result<SpinCouplings> {
    p.check()?;
    let (ja2, jb2) = (p.ja * p.ja, p.jb * p.jb);
    Ok(SpinCouplings {
        lambda1: (ja2 + jb2) / (2.0 * p.uab) - ja2 / p.uaa - jb2 / p.ubb,
        lambda2: -p.ja * p.jb / p.uab,
        bz: -2.0 * ja2 / p.uaa + 2.0 * jb2 / p.ubb,
        field: [0.0; 3],
    })
}

pub const COUPLINGS_HEADER: &str = "v0_over_er,J,U,lambda1,lambda2,Bz";

/// One CSV row per depth for a symmetric two-species lattice.
pub fn couplings_table(depths: &[f64], as_over_lambda: f64) -> Result<String> {
    let mut out = format!("{COUPLINGS_HEADER}\n");
    for &v0 in depths {
        let p = BhParams::from_lattice(v0, as_over_lambda)?;
        let c = effective_couplings(&p)?;
        out.push_str(&format!(
            "{v0},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            p.ja, p.uaa, c.lambda1, c.lambda2, c.bz
        ));
    }
    Ok(out)
}
