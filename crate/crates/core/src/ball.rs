//! Jordan-triple geometry of the unit ball in `C^d`: Bergman operators,
//! quasi-inverses, transvections and the holomorphic cocycle.

use num_complex::Complex64;

use crate::linalg::{check_dim, cpow, inverse, norm_sq, outer, pairing, CMat, CVec, ONE};
use crate::{Result, SymdomError};

/// Default quasi-invertibility threshold on `|1 - (z|w)|`.
pub const EPS_QI: f64 = 1e-12;

/// Genus of the ball in `C^d`.
pub fn genus(d: usize) -> usize {
    d + 1
}

pub fn check_interior(z: &CVec) -> Result<()> {
    let r2 = norm_sq(z);
    if !(r2 < 1.0) {
        return Err(SymdomError::NotInterior(r2));
    }
    Ok(())
}

/// `{u v* w} = ((u|v) w + (w|v) u) / 2`.
pub fn triple_product(u: &CVec, v: &CVec, w: &CVec) -> CVec {
    (w * pairing(u, v) + u * pairing(w, v)) * Complex64::new(0.5, 0.0)
}

/// `Q_u z = {u z* u} = (u|z) u`, conjugate-linear in `z`.
pub fn quadratic(u: &CVec, z: &CVec) -> CVec {
    u * pairing(u, z)
}

/// `Δ_{z,w} = 1 - (z|w)`.
pub fn quasi_determinant(z: &CVec, w: &CVec) -> Complex64 {
    ONE - pairing(z, w)
}

fn checked_delta(z: &CVec, w: &CVec) -> Result<Complex64> {
    let delta = quasi_determinant(z, w);
    if delta.norm() <= EPS_QI {
        return Err(SymdomError::QuasiSingular(delta.norm()));
    }
    Ok(delta)
}

/// `B_{z,w} ζ = (1 - (z|w)) (ζ - (ζ|w) z)`.
pub fn bergman_apply(z: &CVec, w: &CVec, zeta: &CVec) -> CVec {
    (zeta - z * pairing(zeta, w)) * quasi_determinant(z, w)
}

/// Matrix of `B_{z,w} = Δ (I - z w^H)`.
pub fn bergman_matrix(z: &CVec, w: &CVec) -> CMat {
    let d = z.len();
    (CMat::identity(d, d) - outer(z, w)) * quasi_determinant(z, w)
}

/// `B^{-1}_{z,w} = Δ^{-1} (I + z w^H / Δ)`.
pub fn bergman_inverse(z: &CVec, w: &CVec) -> Result<CMat> {
    let d = z.len();
    let delta = checked_delta(z, w)?;
    Ok((CMat::identity(d, d) + outer(z, w) / delta) / delta)
}

/// `B^{-1}_{z,w} ζ`.
pub fn bergman_inverse_apply(z: &CVec, w: &CVec, zeta: &CVec) -> Result<CVec> {
    let delta = checked_delta(z, w)?;
    Ok((zeta + z * (pairing(zeta, w) / delta)) / delta)
}

/// `z^w = z / (1 - (z|w))`.
pub fn quasi_inverse(z: &CVec, w: &CVec) -> Result<CVec> {
    Ok(z / checked_delta(z, w)?)
}

/// Principal square root of `B_{z,w}`:
/// `Δ^{1/2} (I - z w^H / (1 + Δ^{1/2}))`.
///
/// `B_{z,w}` has eigenvalue `Δ` on `w^⊥` and `Δ²` on `z`; both must lie in
/// the open right half-plane.
pub fn bergman_sqrt(z: &CVec, w: &CVec) -> Result<CMat> {
    let d = z.len();
    let delta = checked_delta(z, w)?;
    for ev in [delta, delta * delta] {
        if ev.re <= 0.0 {
            return Err(SymdomError::BranchFailure(format!("{ev}")));
        }
    }
    let s = delta.sqrt();
    Ok((CMat::identity(d, d) - outer(z, w) / (ONE + s)) * s)
}

/// Inverse of [`bergman_sqrt`].
pub fn bergman_inv_sqrt(z: &CVec, w: &CVec) -> Result<CMat> {
    inverse(&bergman_sqrt(z, w)?)
}

/// `B^{1/2}_{x,x}`: `1 - (x|x)` on `span{x}`, `sqrt(1 - (x|x))` on `x^⊥`.
pub fn bergman_sqrt_diag(x: &CVec) -> Result<CMat> {
    check_interior(x)?;
    let d = x.len();
    let r2 = norm_sq(x);
    let s = (1.0 - r2).sqrt();
    Ok((CMat::identity(d, d) - outer(x, x) / Complex64::new(1.0 + s, 0.0)) * Complex64::new(s, 0.0))
}

/// `γ_x(z) = x + B^{1/2}_{x,x} (z^{-x})`.
pub fn transvection_apply(x: &CVec, z: &CVec) -> Result<CVec> {
    check_interior(x)?;
    check_interior(z)?;
    check_dim(z, x.len())?;
    transvection_eval(x, z)
}

/// `γ_x` on the dense chart (`1 + (z|x) ≠ 0`), no interiority check on `z`.
fn transvection_eval(x: &CVec, z: &CVec) -> Result<CVec> {
    let q = quasi_inverse(z, &(-x))?;
    Ok(x + bergman_sqrt_diag(x)? * q)
}

/// `∂_z γ_x = B^{1/2}_{x,x} B^{-1}_{z,-x}`.
pub fn transvection_derivative(x: &CVec, z: &CVec) -> Result<CMat> {
    check_dim(z, x.len())?;
    Ok(bergman_sqrt_diag(x)? * bergman_inverse(z, &(-x))?)
}

/// Automorphism `g = γ_x ∘ k` of the ball with `k` unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    pub x: CVec,
    pub k: CMat,
}

impl Automorphism {
    pub fn identity(d: usize) -> Self {
        Automorphism { x: CVec::zeros(d), k: CMat::identity(d, d) }
    }

    pub fn transvection(x: CVec) -> Result<Self> {
        check_interior(&x)?;
        let d = x.len();
        Ok(Automorphism { x, k: CMat::identity(d, d) })
    }

    /// Linear automorphism; `k` must be unitary.
    pub fn unitary(k: CMat) -> Result<Self> {
        let d = k.nrows();
        let defect = crate::linalg::max_abs(&(k.adjoint() * &k - CMat::identity(d, d)));
        if k.ncols() != d || defect > 1e-10 {
            return Err(SymdomError::InvalidParameter(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(Automorphism { x: CVec::zeros(d), k })
    }

    pub fn new(x: CVec, k: CMat) -> Result<Self> {
        let t = Self::transvection(x)?;
        let u = Self::unitary(k)?;
        Ok(t.compose(&u)?)
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `g(z)` wherever `1 + (kz|x) ≠ 0`.
    pub fn apply(&self, z: &CVec) -> Result<CVec> {
        check_dim(z, self.dim())?;
        transvection_eval(&self.x, &(&self.k * z))
    }

    /// `∂_z g = (∂_{kz} γ_x) k`.
    pub fn derivative(&self, z: &CVec) -> Result<CMat> {
        Ok(transvection_derivative(&self.x, &(&self.k * z))? * &self.k)
    }

    /// `det(∂_z g)^s`, continued holomorphically in `z` from the origin:
    /// `det(k)^s (1 - (x|x))^{ps/2} (1 + (kz|x))^{-ps}`.
    pub fn jacobian_det_pow(&self, z: &CVec, s: f64) -> Result<Complex64> {
        check_dim(z, self.dim())?;
        let p = genus(self.dim()) as f64;
        let a = ONE + pairing(&(&self.k * z), &self.x);
        if a.norm() <= EPS_QI {
            return Err(SymdomError::QuasiSingular(a.norm()));
        }
        let r2 = norm_sq(&self.x);
        let ps = p * s;
        let factor = if ps.fract() == 0.0 {
            crate::linalg::ipow(a, -(ps as i64))
        } else {
            cpow(a, -ps)
        };
        Ok(cpow(self.k.determinant(), s) * (1.0 - r2).powf(ps / 2.0) * factor)
    }

    pub fn inverse(&self) -> Self {
        let kh = self.k.adjoint();
        Automorphism { x: -(&kh * &self.x), k: kh }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Self> {
        check_dim(&other.x, self.dim())?;
        let x = self.apply(&other.apply(&CVec::zeros(self.dim()))?)?;
        check_interior(&x)?;
        let back = transvection_derivative(&(-&x), &x)?;
        let k = back * self.derivative(&other.x)? * other.derivative(&CVec::zeros(self.dim()))?;
        Ok(Automorphism { x, k })
    }

    /// `g^{-1}(0) = -k^H x`.
    pub fn preimage_of_zero(&self) -> CVec {
        -(self.k.adjoint() * &self.x)
    }

    /// The `K^C`-part `∂_z g` and the `P_+`-parameter `u = -(g^{-1}(0))^z`
    /// of the cocycle `[g]_z = (∂_z g) τ̄_u`.
    pub fn cocycle_translation_part(&self, z: &CVec) -> Result<(CMat, CVec)> {
        let y = self.preimage_of_zero();
        let u = -quasi_inverse(&y, z)?;
        Ok((self.derivative(z)?, u))
    }

    /// `[g]_z ζ = (∂_z g)(ζ^{-u})`; equals `g(z + ζ) - g(z)`.
    pub fn cocycle_apply(&self, z: &CVec, zeta: &CVec) -> Result<CVec> {
        let (dg, u) = self.cocycle_translation_part(z)?;
        Ok(dg * quasi_inverse(zeta, &(-u))?)
    }
}

/// Convenience: `∂_z g` and `u` for a group element.
pub fn cocycle_translation_part(g: &Automorphism, z: &CVec) -> Result<(CMat, CVec)> {
    check_interior(z)?;
    g.cocycle_translation_part(z)
}
