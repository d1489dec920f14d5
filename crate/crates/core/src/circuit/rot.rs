use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

/// Exact dyadic phase `R_j^k = diag(1, exp(-2πi k / 2^j))`.
///
/// Always stored reduced: `k` odd and `k < 2^j`, or `(0, 0)` for the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rot {
    k: u64,
    j: u32,
}

pub const MAX_ROT_LEVEL: u32 = 62;

impl Rot {
    pub const IDENTITY: Rot = Rot { k: 0, j: 0 };

    /// `R_j`.
    pub fn r(j: u32) -> Rot {
        Rot::new(1, j)
    }

    pub fn new(k: u64, j: u32) -> Rot {
        assert!(j <= MAX_ROT_LEVEL, "rotation level {j} too fine");
        let mut k = if j == 0 { 0 } else { k & ((1u64 << j) - 1) };
        let mut j = j;
        if k == 0 {
            return Rot::IDENTITY;
        }
        while k % 2 == 0 {
            k /= 2;
            j -= 1;
        }
        Rot { k, j }
    }

    /// Phase `exp(+2πi a / 2^j)`, the rotation used by Fourier-space addition.
    pub fn add_phase(a: u64, j: u32) -> Rot {
        Rot::new(a, j).inverse()
    }

    pub fn numerator(self) -> u64 {
        self.k
    }

    /// Level `j` of the reduced form; 0 means identity.
    pub fn level(self) -> u32 {
        self.j
    }

    pub fn is_identity(self) -> bool {
        self.k == 0
    }

    pub fn inverse(self) -> Rot {
        if self.is_identity() {
            self
        } else {
            Rot::new((1u64 << self.j) - self.k, self.j)
        }
    }

    pub fn compose(self, other: Rot) -> Rot {
        let j = self.j.max(other.j);
        let a = self.k << (j - self.j);
        let b = other.k << (j - other.j);
        Rot::new(a.wrapping_add(b), j)
    }

    pub fn phase(self) -> Complex64 {
        if self.is_identity() {
            return Complex64::new(1.0, 0.0);
        }
        let angle = -TAU * (self.k as f64) / ((1u64 << self.j) as f64);
        Complex64::from_polar(1.0, angle)
    }
}

impl fmt::Display for Rot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "R{}", self.j)
        } else {
            write!(f, "R{}^{}", self.j, self.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(Rot::new(2, 3), Rot::r(2));
        assert_eq!(Rot::new(8, 3), Rot::IDENTITY);
        assert_eq!(Rot::new(9, 3), Rot::r(3));
        assert_eq!(Rot::r(1).inverse(), Rot::r(1));
        assert_eq!(Rot::r(3).compose(Rot::r(3)), Rot::r(2));
        assert_eq!(Rot::r(2).compose(Rot::r(2).inverse()), Rot::IDENTITY);
    }

    #[test]
    fn phases() {
        let z = Rot::r(2).phase();
        assert!((z - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let z = Rot::add_phase(1, 2).phase();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let z = Rot::r(1).phase();
        assert!((z + 1.0).norm() < 1e-15);
    }
}
