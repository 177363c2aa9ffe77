//! The complex Moses helicity frame on the unit sphere and the plane-wave
//! curl eigenfunctions built from it.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TrkError};
use crate::geometry::Direction;
use crate::scalar::{complexify, cplx, expi, hdot, lit, scale, CVec3, Cplx, RVec3, Real};

/// Below this value of `1 + κ_z` the frame is evaluated through the antipode.
pub const POLE_TOLERANCE: f64 = 1e-9;
/// Below this `|(κ_x, κ_y)|` the antipodal phase is considered undefined.
pub const AXIS_TOLERANCE: f64 = 1e-12;

/// Frame index `a` with its helicity: `a = 1 ↔ λ = +1`, `a = 2 ↔ λ = −1`,
/// `a = 3 ↔ λ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HelicityLabel {
    Plus,
    Minus,
    Longitudinal,
}

impl HelicityLabel {
    pub fn from_index(a: u8) -> Result<Self> {
        match a {
            1 => Ok(Self::Plus),
            2 => Ok(Self::Minus),
            3 => Ok(Self::Longitudinal),
            _ => Err(TrkError::InvalidParameter(format!("frame index must be 1, 2 or 3, got {a}"))),
        }
    }

    pub fn from_lambda(lambda: i8) -> Result<Self> {
        match lambda {
            1 => Ok(Self::Plus),
            -1 => Ok(Self::Minus),
            0 => Ok(Self::Longitudinal),
            _ => Err(TrkError::InvalidParameter(format!("helicity must be -1, 0 or 1, got {lambda}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::Plus => 1,
            Self::Minus => 2,
            Self::Longitudinal => 3,
        }
    }

    pub fn lambda(self) -> i8 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
            Self::Longitudinal => 0,
        }
    }

    pub const ALL: [HelicityLabel; 3] = [Self::Plus, Self::Minus, Self::Longitudinal];
}

/// How a frame vector was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleBranch {
    Direct,
    /// Near the south pole: evaluated at `−κ` and mapped back with the antipodal phase.
    Antipodal,
    /// Exactly at `−e_z`: the north-pole frame rotated by π about the x axis.
    SouthPole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameVector<T: Real> {
    pub value: CVec3<T>,
    pub at: Direction<T>,
    pub label: HelicityLabel,
    pub branch: PoleBranch,
}

fn frame_direct<T: Real>(k: &Direction<T>, lambda: T) -> CVec3<T> {
    let c = cplx(k.x(), lambda * k.y());
    let d = T::one() + k.z();
    let pre = -lambda / lit::<T>(2.0).sqrt();
    let one = cplx(T::one(), T::zero());
    Vector3::new(
        (c * k.x() / d - one) * pre,
        (c * k.y() / d - cplx(T::zero(), lambda)) * pre,
        c * pre,
    )
}

/// `Q_λ(κ)`, the vector dual of the frame form `ω^a(κ)`.
pub fn moses_frame<T: Real>(kappa: &Direction<T>, label: HelicityLabel) -> FrameVector<T> {
    let lambda: T = lit(label.lambda() as f64);
    let (value, branch) = match label {
        HelicityLabel::Longitudinal => (complexify(&(-kappa.as_vector())), PoleBranch::Direct),
        _ if T::one() + kappa.z() >= lit(POLE_TOLERANCE) => {
            (frame_direct(kappa, lambda), PoleBranch::Direct)
        }
        _ => match frame_antipodal_phase(kappa, label.lambda()) {
            Ok(phase) => {
                let q = frame_direct(&kappa.antipode(), lambda);
                (scale(&q.map(|c| c.conj()), phase), PoleBranch::Antipodal)
            }
            Err(_) => {
                let h = lambda / lit::<T>(2.0).sqrt();
                (
                    Vector3::new(cplx(h, T::zero()), cplx(T::zero(), -lambda * h), cplx(T::zero(), T::zero())),
                    PoleBranch::SouthPole,
                )
            }
        },
    };
    FrameVector {
        value,
        at: *kappa,
        label,
        branch,
    }
}

/// Shorthand for `moses_frame(κ, label).value` with `λ ∈ {−1, 0, 1}`.
pub fn q_lambda<T: Real>(kappa: &Direction<T>, lambda: i8) -> CVec3<T> {
    let label = HelicityLabel::from_lambda(lambda).expect("helicity in {-1, 0, 1}");
    moses_frame(kappa, label).value
}

/// The unimodular factor `φ = −(κ₁ + iλκ₂)/(κ₁ − iλκ₂)` with
/// `Q_λ(−κ) = φ · conj(Q_λ(κ))`.
pub fn frame_antipodal_phase<T: Real>(kappa: &Direction<T>, lambda: i8) -> Result<Cplx<T>> {
    let rho = kappa.x().hypot(kappa.y());
    if rho < lit(AXIS_TOLERANCE) {
        return Err(TrkError::PoleDegenerate);
    }
    let l: T = lit(lambda as f64);
    let num = cplx(kappa.x(), l * kappa.y());
    Ok(-(num / num.conj()))
}

/// `χ_λ(x|k) = (2π)^{-3/2} e^{ik·x} Q_λ(k/|k|)`.
pub fn eigenfunction<T: Real>(x: &RVec3<T>, k: &RVec3<T>, label: HelicityLabel) -> Result<CVec3<T>> {
    let dir = Direction::from_vector(k).map_err(|_| TrkError::ZeroWaveVector)?;
    let norm = lit::<T>(std::f64::consts::TAU).powf(lit(-1.5));
    let phase = expi(k.dot(x)) * norm;
    Ok(scale(&moses_frame(&dir, label).value, phase))
}

/// Largest deviation of the frame `{Q_+, Q_−, Q_0}` at `κ` from
/// orthonormality `⟨Q_a, Q_b⟩ = δ_ab` and completeness `Σ_a Q_a Q_a† = I`.
pub fn frame_defect<T: Real>(kappa: &Direction<T>) -> T {
    let qs = HelicityLabel::ALL.map(|l| moses_frame(kappa, l).value);
    let mut worst = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { T::one() } else { T::zero() };
            worst = worst.max((hdot(&qs[a], &qs[b]) - cplx(delta, T::zero())).norm());
            let sum = qs.iter().fold(cplx(T::zero(), T::zero()), |acc, q| acc + q[a] * q[b].conj());
            worst = worst.max((sum - cplx(delta, T::zero())).norm());
        }
    }
    worst
}

/// The pairing matrix `η` of the frame metric `η_ab ω^a ω^b`.
pub fn frame_metric<T: Real>() -> [[T; 3]; 3] {
    let (o, z) = (T::one(), T::zero());
    [[z, -o, z], [-o, z, z], [z, z, o]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_directions;
    use crate::scalar::{cnorm, rcross, rdot};

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn north_pole_values() {
        let ez = Direction::<f64>::ez();
        let q3 = moses_frame(&ez, HelicityLabel::Longitudinal).value;
        assert_eq!(q3, complexify(&Vector3::new(0.0, 0.0, -1.0)));
        let q1 = moses_frame(&ez, HelicityLabel::Plus).value;
        let want = Vector3::new(cplx(S2, 0.0), cplx(0.0, S2), cplx(0.0, 0.0));
        assert!(cnorm(&(q1 - want)) < 1e-15);
    }

    #[test]
    fn equator_values() {
        let q = moses_frame(&Direction::<f64>::ex(), HelicityLabel::Plus).value;
        let want = Vector3::new(cplx(0.0, 0.0), cplx(0.0, S2), cplx(-S2, 0.0));
        assert!(cnorm(&(q - want)) < 1e-15);
    }

    #[test]
    fn unit_and_transverse() {
        for k in sample_directions::<f64>(2000, 11) {
            for lam in [1, -1] {
                let q = q_lambda(&k, lam);
                assert!((cnorm(&q) - 1.0).abs() < 1e-12);
                assert!(rdot(&k.as_vector(), &q).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn curl_relation_in_transform_space() {
        for k in sample_directions::<f64>(500, 12) {
            for lam in [1i8, -1] {
                let q = q_lambda(&k, lam);
                let lhs = rcross(&k.as_vector(), &q);
                let rhs = scale(&q, cplx(0.0, -(lam as f64)));
                assert!(cnorm(&(lhs - rhs)) < 1e-12);
            }
        }
    }

    #[test]
    fn antipodal_phase_values() {
        let p = frame_antipodal_phase(&Direction::<f64>::ex(), 1).unwrap();
        assert!((p - cplx(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(
            frame_antipodal_phase(&Direction::<f64>::ez(), 1).unwrap_err(),
            TrkError::PoleDegenerate
        );
        for k in sample_directions::<f64>(100, 13) {
            for lam in [1i8, -1] {
                let phase = frame_antipodal_phase(&k, lam).unwrap();
                assert!((phase.norm() - 1.0).abs() < 1e-14);
                let lhs = q_lambda(&k.antipode(), lam);
                let rhs = scale(&q_lambda(&k, lam).map(|c| c.conj()), phase);
                assert!(cnorm(&(lhs - rhs)) < 1e-12);
            }
        }
    }

    #[test]
    fn pole_branches() {
        let south = Direction::<f64>::new(0.0, 0.0, -1.0).unwrap();
        for lam in [1i8, -1] {
            let f = moses_frame(&south, HelicityLabel::from_lambda(lam).unwrap());
            assert_eq!(f.branch, PoleBranch::SouthPole);
            let lhs = rcross(&south.as_vector(), &f.value);
            assert!(cnorm(&(lhs - scale(&f.value, cplx(0.0, -(lam as f64))))) < 1e-15);
            assert!((cnorm(&f.value) - 1.0).abs() < 1e-15);
        }
        let near = Direction::<f64>::new(1e-6, 2e-6, -1.0).unwrap();
        let f = moses_frame(&near, HelicityLabel::Plus);
        assert_eq!(f.branch, PoleBranch::Antipodal);
        assert!(rdot(&near.as_vector(), &f.value).norm() < 1e-12);
        let lhs = rcross(&near.as_vector(), &f.value);
        assert!(cnorm(&(lhs - scale(&f.value, cplx(0.0, -1.0)))) < 1e-12);
    }

    #[test]
    fn orthonormal_triad() {
        for k in sample_directions::<f64>(1000, 14) {
            let qs = HelicityLabel::ALL.map(|l| moses_frame(&k, l).value);
            for a in 0..3 {
                for b in 0..3 {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((hdot(&qs[a], &qs[b]) - cplx(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn frame_defect_is_rounding_level() {
        for k in sample_directions::<f64>(1000, 15) {
            assert!(frame_defect(&k) < 1e-14);
        }
        assert!(frame_defect(&Direction::<f64>::ez().antipode()) < 1e-15);
    }

    #[test]
    fn eigenfunction_at_origin_and_zero_wave_vector() {
        let v = eigenfunction::<f64>(&Vector3::zeros(), &Vector3::new(0.0, 0.0, 1.0), HelicityLabel::Longitudinal)
            .unwrap();
        let c = std::f64::consts::TAU.powf(-1.5);
        assert!((v.z - cplx(-c, 0.0)).norm() < 1e-16);
        assert_eq!(
            eigenfunction::<f64>(&Vector3::zeros(), &Vector3::zeros(), HelicityLabel::Plus).unwrap_err(),
            TrkError::ZeroWaveVector
        );
    }

    #[test]
    fn single_precision_frame() {
        let k = Direction::<f32>::new(0.2, 0.5, -0.3).unwrap();
        let q = q_lambda(&k, 1);
        assert!((cnorm(&q) - 1.0).abs() < 1e-5);
    }
}
