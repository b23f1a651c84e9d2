//! Three-body systems, particle arrangements and reduced-mass constants.

use thiserror::Error;

use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("charge of particle {index} is zero; charges must be nonzero integers")]
    ZeroCharge { index: usize },
    #[error("mass of particle {index} is {value}; masses must be finite and positive")]
    BadMass { index: usize, value: f64 },
}

/// Three point charges with masses in atomic units (electron mass = 1).
///
/// Charges are integer multiples of the elementary charge. Values are
/// immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeBodySystem<T> {
    charges: [i32; 3],
    masses: [T; 3],
    label: Option<String>,
}

impl<T: Real> ThreeBodySystem<T> {
    pub fn new(charges: [i32; 3], masses: [T; 3]) -> Result<Self, SystemError> {
        for (index, &z) in charges.iter().enumerate() {
            if z == 0 {
                return Err(SystemError::ZeroCharge { index });
            }
        }
        for (index, &m) in masses.iter().enumerate() {
            if !(m.is_finite() && m > T::zero()) {
                return Err(SystemError::BadMass { index, value: m.to_f64().unwrap_or(f64::NAN) });
            }
        }
        Ok(Self { charges, masses, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn charges(&self) -> [i32; 3] {
        self.charges
    }

    pub fn masses(&self) -> [T; 3] {
        self.masses
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn pair_couplings(&self) -> PairCouplings {
        PairCouplings::from_charges(self.charges)
    }

    pub fn kinetic_coefficients(&self) -> KineticCoefficients<T> {
        KineticCoefficients::from_masses(self.masses)
    }

    /// The system with particles reordered by `arrangement`. The label is kept.
    pub fn permuted(&self, arrangement: Arrangement) -> Self {
        Self {
            charges: arrangement.apply(self.charges),
            masses: arrangement.apply(self.masses),
            label: self.label.clone(),
        }
    }

    /// Distinct particle orderings, original first.
    ///
    /// Two orderings are considered the same when their (charge, mass)
    /// triples compare exactly equal.
    pub fn arrangements(&self) -> Vec<(Arrangement, Self)> {
        let mut out: Vec<(Arrangement, Self)> = Vec::with_capacity(6);
        for arrangement in Arrangement::ALL {
            let candidate = self.permuted(arrangement);
            let duplicate = out
                .iter()
                .any(|(_, s)| s.charges == candidate.charges && s.masses == candidate.masses);
            if !duplicate {
                out.push((arrangement, candidate));
            }
        }
        out
    }

    /// Relabel particles 1 and 3.
    pub fn mirrored(&self) -> Self {
        self.permuted(Arrangement::MIRROR)
    }
}

/// Pair products `Z_i Z_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairCouplings {
    pub z12: i64,
    pub z23: i64,
    pub z13: i64,
}

impl PairCouplings {
    pub fn from_charges([z1, z2, z3]: [i32; 3]) -> Self {
        let (z1, z2, z3) = (i64::from(z1), i64::from(z2), i64::from(z3));
        Self { z12: z1 * z2, z23: z2 * z3, z13: z1 * z3 }
    }
}

/// Reduced-mass constants of the kinetic energy in the `(r12, r23)` frame.
///
/// `alpha`, `beta`, `gamma` multiply `-Δ12`, `-Δ23` and the Hughes–Eckart
/// cross term; `xi`, `zeta`, `eta` are the remaining constants of the
/// transformed operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticCoefficients<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub xi: T,
    pub zeta: T,
    pub eta: T,
}

impl<T: Real> KineticCoefficients<T> {
    pub fn from_masses([m1, m2, m3]: [T; 3]) -> Self {
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let (i1, i2, i3) = (m1.recip(), m2.recip(), m3.recip());
        Self {
            alpha: half * (i2 + i3),
            beta: half * (i1 + i2),
            gamma: i2,
            xi: half * (i1 + four * i2 + i3),
            zeta: -(two * i2 + i3),
            eta: -(i1 + two * i2),
        }
    }
}

/// A reordering of particle indices, applied jointly to charges and masses.
///
/// `perm[i]` is the original index placed at position `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrangement {
    perm: [usize; 3],
}

impl Arrangement {
    pub const IDENTITY: Self = Self { perm: [0, 1, 2] };
    pub const MIRROR: Self = Self { perm: [2, 1, 0] };

    /// All six orderings; identity first.
    pub const ALL: [Self; 6] = [
        Self { perm: [0, 1, 2] },
        Self { perm: [0, 2, 1] },
        Self { perm: [1, 0, 2] },
        Self { perm: [1, 2, 0] },
        Self { perm: [2, 0, 1] },
        Self { perm: [2, 1, 0] },
    ];

    pub fn new(perm: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some(Self { perm })
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn apply<X: Copy>(&self, values: [X; 3]) -> [X; 3] {
        [values[self.perm[0]], values[self.perm[1]], values[self.perm[2]]]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0; 3];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self { perm: inv }
    }

    /// One-based ordering string, e.g. `"132"`.
    pub fn code(&self) -> String {
        self.perm.iter().map(|p| char::from(b'1' + *p as u8)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HE_NUCLEUS: f64 = 7294.299536;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn unit_masses_give_unit_coefficients() {
        let c = KineticCoefficients::from_masses([1.0, 1.0, 1.0]);
        assert_eq!((c.alpha, c.beta, c.gamma), (1.0, 1.0, 1.0));
        assert_eq!(c.xi, 3.0);
        assert_eq!(c.zeta, -3.0);
        assert_eq!(c.eta, -3.0);
    }

    #[test]
    fn helium_and_hydrogen_like_coefficients() {
        let c = KineticCoefficients::from_masses([1.0, 1.0, HE_NUCLEUS]);
        assert!(close(c.alpha, 0.500_068_55, 1e-8));
        assert_eq!(c.beta, 1.0);
        assert_eq!(c.gamma, 1.0);

        let c = KineticCoefficients::from_masses([1.0, 1.0, 1836.1527]);
        assert!(close(c.alpha, 0.500_272_3, 1e-7));
        assert_eq!(c.beta, 1.0);
    }

    #[test]
    fn coefficient_signs() {
        let c = KineticCoefficients::from_masses([3.0, 0.2, 11.0]);
        assert!(c.alpha > 0.0 && c.beta > 0.0 && c.gamma > 0.0 && c.xi > 0.0);
        assert!(c.zeta < 0.0 && c.eta < 0.0);
    }

    #[test]
    fn couplings_are_exact_products() {
        let p = PairCouplings::from_charges([-1, -1, 2]);
        assert_eq!((p.z12, p.z23, p.z13), (1, -2, -2));
        let p = PairCouplings::from_charges([-1, 1, -1]);
        assert_eq!((p.z12, p.z23, p.z13), (-1, -1, 1));
        let p = PairCouplings::from_charges([1, -1, 1]);
        assert_eq!((p.z12, p.z23, p.z13), (-1, -1, 1));
    }

    #[test]
    fn construction_rejects_invalid_input() {
        assert_eq!(
            ThreeBodySystem::new([0, 1, -1], [1.0, 1.0, 1.0]),
            Err(SystemError::ZeroCharge { index: 0 })
        );
        assert!(matches!(
            ThreeBodySystem::new([1, 1, -1], [1.0, -2.0, 1.0]),
            Err(SystemError::BadMass { index: 1, .. })
        ));
        assert!(ThreeBodySystem::new([1, 1, -1], [1.0, 1.0, f64::NAN]).is_err());
    }

    #[test]
    fn arrangement_counts() {
        let he = ThreeBodySystem::new([-1, -1, 2], [1.0, 1.0, HE_NUCLEUS]).unwrap();
        let arr = he.arrangements();
        assert_eq!(arr.len(), 3);
        assert_eq!(arr[0].1, he);
        assert_eq!(arr[1].1.charges(), [-1, 2, -1]);
        assert_eq!(arr[2].1.charges(), [2, -1, -1]);

        let ps = ThreeBodySystem::new([-1, 1, -1], [1.0, 1.0, 1.0]).unwrap();
        assert_eq!(ps.arrangements().len(), 3);

        let generic = ThreeBodySystem::new([1, -2, 3], [1.0, 2.0, 3.0]).unwrap();
        assert_eq!(generic.arrangements().len(), 6);

        // distinct masses break the charge degeneracy
        let split = ThreeBodySystem::new([-1, -1, 2], [1.0, 1.5, HE_NUCLEUS]).unwrap();
        assert_eq!(split.arrangements().len(), 6);
    }

    #[test]
    fn arrangement_inverse_restores() {
        let s = ThreeBodySystem::new([1, -2, 3], [1.0, 2.0, 3.0]).unwrap();
        for a in Arrangement::ALL {
            assert_eq!(s.permuted(a).permuted(a.inverse()), s);
        }
        assert_eq!(Arrangement::new([0, 0, 1]), None);
        assert_eq!(Arrangement::MIRROR.code(), "321");
    }

    #[test]
    fn mirror_swaps_alpha_and_beta() {
        let s = ThreeBodySystem::new([2, -1, -3], [0.7, 4.0, 19.0]).unwrap();
        let m = s.mirrored();
        let (c, cm) = (s.kinetic_coefficients(), m.kinetic_coefficients());
        assert_eq!(c.alpha, cm.beta);
        assert_eq!(c.beta, cm.alpha);
        let (p, pm) = (s.pair_couplings(), m.pair_couplings());
        assert_eq!((p.z12, p.z23, p.z13), (pm.z23, pm.z12, pm.z13));
    }

    #[test]
    fn generic_over_f32() {
        let c = KineticCoefficients::<f32>::from_masses([1.0, 1.0, 1.0]);
        assert_eq!(c.alpha, 1.0f32);
    }
}
