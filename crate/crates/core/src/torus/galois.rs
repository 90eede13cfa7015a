use num_integer::Integer;

use super::{AbsoluteSet, TorusError};

/// `σ_u ∈ Gal(ℚ(ζ_N)/ℚ)`, acting on `N`-th roots of unity by `ζ ↦ ζ^u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisElement {
    level: u64,
    unit: u64,
}

impl GaloisElement {
    pub fn new(level: u64, unit: u64) -> Result<Self, TorusError> {
        if level == 0 {
            return Err(TorusError::NotAUnit { unit, level });
        }
        let unit = unit % level;
        if unit.gcd(&level) != 1 {
            return Err(TorusError::NotAUnit { unit, level });
        }
        Ok(GaloisElement { level, unit })
    }

    pub fn identity(level: u64) -> Self {
        GaloisElement { level, unit: 1 % level.max(1) }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GaloisElement) -> Result<Self, TorusError> {
        if self.level != other.level {
            return Err(TorusError::Shape(format!("levels {} and {} differ", self.level, other.level)));
        }
        Ok(GaloisElement {
            level: self.level,
            unit: ((self.unit as u128 * other.unit as u128) % self.level as u128) as u64,
        })
    }
}

/// The units of `ℤ/N`, ascending.
pub fn units(level: u64) -> Vec<u64> {
    if level == 1 {
        return vec![0];
    }
    (1..level).filter(|u| u.gcd(&level) == 1).collect()
}

fn check_level(s: &AbsoluteSet, level: u64) -> Result<(), TorusError> {
    for c in s.cosets() {
        if let Some(bad) = c.phi().iter().find(|v| !v.order_divides(level)) {
            return Err(TorusError::LevelViolation { level, order: bad.order() });
        }
    }
    Ok(())
}

/// Maps each coset `(Λ, φ)` to `(Λ, u·φ)`.
pub fn galois_apply(g: &GaloisElement, s: &AbsoluteSet) -> Result<AbsoluteSet, TorusError> {
    check_level(s, g.level)?;
    let u = num_bigint::BigInt::from(g.unit);
    Ok(s.map_cosets(|c| c.map_phi(|x| x.scale(&u))))
}

/// The first unit `u` mod `level` with `σ_u(s) ≠ s`, or `None` if `s` is invariant.
pub fn galois_witness(s: &AbsoluteSet, level: u64) -> Result<Option<GaloisElement>, TorusError> {
    check_level(s, level)?;
    for u in units(level) {
        let g = GaloisElement { level, unit: u };
        if !galois_apply(&g, s)?.is_equal(s)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn galois_invariant(s: &AbsoluteSet, level: u64) -> Result<bool, TorusError> {
    Ok(galois_witness(s, level)?.is_none())
}

/// The distinct images of `s` under every unit, with the units producing each.
pub fn galois_orbit(s: &AbsoluteSet, level: u64) -> Result<Vec<(Vec<u64>, AbsoluteSet)>, TorusError> {
    check_level(s, level)?;
    let mut orbit: Vec<(Vec<u64>, AbsoluteSet)> = Vec::new();
    for u in units(level) {
        let img = galois_apply(&GaloisElement { level, unit: u }, s)?;
        match orbit.iter_mut().find(|(_, t)| t == &img) {
            Some((us, _)) => us.push(u),
            None => orbit.push((vec![u], img)),
        }
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RatMod1;
    use crate::torus::TorsionCoset;

    fn x6(a: i64) -> AbsoluteSet {
        AbsoluteSet::from_coset(TorsionCoset::coordinate(1, 0, RatMod1::new(a, 6)))
    }

    #[test]
    fn identity_and_conjugation() {
        let s = x6(1);
        assert_eq!(galois_apply(&GaloisElement::new(6, 1).unwrap(), &s).unwrap(), s);
        assert_eq!(galois_apply(&GaloisElement::new(6, 5).unwrap(), &s).unwrap(), x6(5));
        let untwisted = AbsoluteSet::from_coset(TorsionCoset::full(2));
        for u in units(12) {
            let g = GaloisElement::new(12, u).unwrap();
            assert_eq!(galois_apply(&g, &untwisted).unwrap(), untwisted);
        }
    }

    #[test]
    fn invariance_examples() {
        let pair = x6(1).union(&x6(5)).unwrap();
        assert!(galois_invariant(&pair, 6).unwrap());
        assert_eq!(galois_witness(&x6(1), 6).unwrap(), Some(GaloisElement::new(6, 5).unwrap()));
        assert!(galois_invariant(&AbsoluteSet::full(3), 5).unwrap());
    }

    #[test]
    fn level_violation() {
        let g = GaloisElement::new(4, 3).unwrap();
        assert!(matches!(galois_apply(&g, &x6(1)), Err(TorusError::LevelViolation { .. })));
        assert!(GaloisElement::new(6, 2).is_err());
    }

    #[test]
    fn orbit_of_primitive_sixth_root() {
        let orbit = galois_orbit(&x6(1), 6).unwrap();
        assert_eq!(orbit.len(), 2);
        assert_eq!(orbit[1].0, vec![5]);
    }
}
