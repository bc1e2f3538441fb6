//! Adding machines truncated at a finite depth, and verification that a
//! sampled orbit family carries a given adding-machine cylinder structure.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::classifiers::{successor_map, ClassifierError};
use crate::hyperspace::SetFamily;
use crate::metric::DistanceTable;
use crate::systems::{System, SystemError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdometerError {
    #[error("bases must be non-empty and each at least 2, got {0:?}")]
    InvalidBases(Vec<u64>),
    #[error("digit {digit} at position {position} is not below base {base}")]
    DigitOutOfRange { position: usize, digit: u64, base: u64 },
    #[error("addresses have different bases: {0:?} vs {1:?}")]
    BaseMismatch(Vec<u64>, Vec<u64>),
    #[error("the product of the bases overflows")]
    Overflow,
    #[error("sample of {available} members is too small; depth needs at least {required}")]
    SampleTooSmall { required: u64, available: usize },
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    System(#[from] SystemError),
}

fn check_bases(bases: &[u64]) -> Result<u64, OdometerError> {
    if bases.is_empty() || bases.iter().any(|&j| j < 2) {
        return Err(OdometerError::InvalidBases(bases.to_vec()));
    }
    bases
        .iter()
        .try_fold(1u64, |m, &j| m.checked_mul(j))
        .ok_or(OdometerError::Overflow)
}

/// A depth-`k` prefix `(x_1, ..., x_k)` with `0 <= x_i < j_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OdometerAddress {
    bases: Vec<u64>,
    digits: Vec<u64>,
}

impl OdometerAddress {
    pub fn new(bases: Vec<u64>, digits: Vec<u64>) -> Result<Self, OdometerError> {
        check_bases(&bases)?;
        if digits.len() != bases.len() {
            return Err(OdometerError::BaseMismatch(bases, digits));
        }
        for (position, (&digit, &base)) in digits.iter().zip(&bases).enumerate() {
            if digit >= base {
                return Err(OdometerError::DigitOutOfRange { position, digit, base });
            }
        }
        Ok(Self { bases, digits })
    }

    pub fn zero(bases: Vec<u64>) -> Result<Self, OdometerError> {
        let digits = alloc::vec![0; bases.len()];
        Self::new(bases, digits)
    }

    /// `(1, 0, ..., 0)`.
    pub fn unit(bases: Vec<u64>) -> Result<Self, OdometerError> {
        let mut a = Self::zero(bases)?;
        a.digits[0] = 1 % a.bases[0];
        Ok(a)
    }

    /// The address of `t mod prod(bases)` in mixed radix, least digit first.
    pub fn from_index(bases: Vec<u64>, t: u64) -> Result<Self, OdometerError> {
        check_bases(&bases)?;
        let mut rest = t;
        let digits = bases
            .iter()
            .map(|&j| {
                let d = rest % j;
                rest /= j;
                d
            })
            .collect();
        Ok(Self { bases, digits })
    }

    /// Every address of the given depth, in index order.
    pub fn all(bases: &[u64]) -> Result<Vec<Self>, OdometerError> {
        let m = check_bases(bases)?;
        (0..m).map(|t| Self::from_index(bases.to_vec(), t)).collect()
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn index(&self) -> u64 {
        self.digits
            .iter()
            .zip(&self.bases)
            .rev()
            .fold(0u64, |acc, (&d, &j)| acc * j + d)
    }

    fn same_bases(&self, other: &Self) -> Result<(), OdometerError> {
        if self.bases != other.bases {
            return Err(OdometerError::BaseMismatch(self.bases.clone(), other.bases.clone()));
        }
        Ok(())
    }
}

impl core::fmt::Display for OdometerAddress {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_char('(')?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{d}")?;
        }
        f.write_char(')')
    }
}

/// Digit-wise sum with carry to the right; the carry out of the last digit is
/// dropped.
pub fn odo_add(x: &OdometerAddress, y: &OdometerAddress) -> Result<OdometerAddress, OdometerError> {
    x.same_bases(y)?;
    let mut carry = 0;
    let digits = x
        .digits
        .iter()
        .zip(&y.digits)
        .zip(&x.bases)
        .map(|((&a, &b), &j)| {
            let s = a + b + carry;
            carry = s / j;
            s % j
        })
        .collect();
    Ok(OdometerAddress {
        bases: x.bases.clone(),
        digits,
    })
}

/// `x + (1, 0, ..., 0)`.
pub fn f_alpha(x: &OdometerAddress) -> OdometerAddress {
    let unit = OdometerAddress::unit(x.bases.clone()).expect("bases of a valid address");
    odo_add(x, &unit).expect("same bases")
}

/// `sum_i [x_i != y_i] 2^-i`.
pub fn d_alpha(x: &OdometerAddress, y: &OdometerAddress) -> Result<f64, OdometerError> {
    x.same_bases(y)?;
    let mut w = 1.0;
    let mut sum = 0.0;
    for (a, b) in x.digits.iter().zip(&y.digits) {
        w *= 0.5;
        if a != b {
            sum += w;
        }
    }
    Ok(sum)
}

/// The depth-`k` adding machine as a permutation system: point `i` is the
/// address with index `i`, the map is `f_alpha` and the metric `d_alpha`.
pub fn odometer_system(bases: &[u64]) -> Result<System, OdometerError> {
    let addresses = OdometerAddress::all(bases)?;
    let m = addresses.len();
    let table = DistanceTable::from_fn(m, |i, j| d_alpha(&addresses[i], &addresses[j]).unwrap_or(f64::NAN))
        .map_err(SystemError::from)?;
    let images = (0..m).map(|i| (i + 1) % m).collect();
    let mut name = String::from("odometer");
    let _ = write!(name, "{bases:?}");
    Ok(System::from_permutation(m, images, table)?.with_descriptor(name))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdometerSignature {
    pub depth: usize,
    pub bases: Vec<u64>,
    pub eps: f64,
    /// Length of the cycle of the induced map through member 0, when the
    /// successor walk closes up.
    pub period: Option<usize>,
    /// Digit prefix of each member: its return time along the cycle written
    /// in mixed radix. `None` for members off the cycle.
    pub cylinder_assignment: Vec<Option<Vec<u64>>>,
    /// Every level `m_k = j_1 ... j_k` splits the cycle into `m_k` residue
    /// classes that the map permutes as one `m_k`-cycle.
    pub verified_cyclic: bool,
}

/// Reads the induced map through `family` at scale `eps` and checks whether
/// the members form one cycle whose residue classes refine along `bases`.
pub fn signature_match(
    family: &SetFamily,
    bases: &[u64],
    system: &System,
    eps: f64,
) -> Result<OdometerSignature, OdometerError> {
    let m = check_bases(bases)?;
    if (family.len() as u64) < m {
        return Err(OdometerError::SampleTooSmall {
            required: m,
            available: family.len(),
        });
    }
    let successor = successor_map(family, system, eps)?;
    let mut time = alloc::vec![None::<u64>; family.len()];
    let mut t = 0u64;
    let mut v = 0usize;
    let period = loop {
        if let Some(t0) = time[v] {
            // closed back onto an earlier member
            break (t0 == 0).then_some(t as usize);
        }
        time[v] = Some(t);
        t += 1;
        match successor[v] {
            Some(w) => v = w,
            None => break None,
        }
    };
    if period.is_none() {
        time.iter_mut().for_each(|x| *x = None);
    }
    let mut verified = period.is_some();
    if let Some(p) = period {
        let mut level = 1u64;
        for &j in bases {
            level *= j;
            verified &= (p as u64).is_multiple_of(level);
        }
    }
    let cylinder_assignment = time
        .iter()
        .map(|t| t.map(|t| OdometerAddress::from_index(bases.to_vec(), t).map(|a| a.digits)))
        .map(Option::transpose)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OdometerSignature {
        depth: bases.len(),
        bases: bases.to_vec(),
        eps,
        period,
        cylinder_assignment,
        verified_cyclic: verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperspace::omega_sample;
    use crate::metric::{FiniteSet, Point};

    fn addr(bases: &[u64], digits: &[u64]) -> OdometerAddress {
        OdometerAddress::new(bases.to_vec(), digits.to_vec()).unwrap()
    }

    #[test]
    fn addition_examples() {
        let s = odo_add(&addr(&[2, 2], &[0, 0]), &addr(&[2, 2], &[1, 0])).unwrap();
        assert_eq!(s.digits(), &[1, 0]);
        let s = odo_add(&addr(&[2, 2], &[1, 1]), &addr(&[2, 2], &[1, 0])).unwrap();
        assert_eq!(s.digits(), &[0, 0]);
        let s = odo_add(&addr(&[3, 2], &[2, 1]), &addr(&[3, 2], &[1, 0])).unwrap();
        assert_eq!(s.digits(), &[0, 0]);
        assert!(odo_add(&addr(&[2], &[0]), &addr(&[3], &[0])).is_err());
    }

    #[test]
    fn successor_examples() {
        let mut x = addr(&[2, 2], &[0, 0]);
        let mut seen = Vec::new();
        for _ in 0..4 {
            x = f_alpha(&x);
            seen.push(x.digits().to_vec());
        }
        assert_eq!(
            seen,
            alloc::vec![
                alloc::vec![1, 0],
                alloc::vec![0, 1],
                alloc::vec![1, 1],
                alloc::vec![0, 0]
            ]
        );
        assert_eq!(f_alpha(&addr(&[2], &[1])).digits(), &[0]);
    }

    #[test]
    fn distance_examples() {
        let x = addr(&[2, 2], &[1, 0]);
        assert_eq!(d_alpha(&x, &x).unwrap(), 0.0);
        assert_eq!(d_alpha(&x, &addr(&[2, 2], &[0, 0])).unwrap(), 0.5);
        assert_eq!(d_alpha(&addr(&[2, 2], &[0, 1]), &addr(&[2, 2], &[0, 0])).unwrap(), 0.25);
    }

    #[test]
    fn invalid_addresses() {
        assert!(OdometerAddress::new(alloc::vec![1, 2], alloc::vec![0, 0]).is_err());
        assert!(OdometerAddress::new(alloc::vec![2, 2], alloc::vec![0, 2]).is_err());
        assert!(OdometerAddress::new(alloc::vec![], alloc::vec![]).is_err());
    }

    fn cycle_family(n: usize) -> (System, SetFamily) {
        let images = (0..n).map(|i| (i + 1) % n).collect();
        let s = System::from_permutation(n, images, DistanceTable::discrete(n)).unwrap();
        let fam = omega_sample(&s, &FiniteSet::singleton(Point::Abstract(0)), 0, 2 * n as u64, 0.5).unwrap();
        (s, fam)
    }

    #[test]
    fn signatures_of_cycles() {
        let (s, fam) = cycle_family(4);
        let sig = signature_match(&fam, &[2, 2], &s, 0.5).unwrap();
        assert!(sig.verified_cyclic);
        assert_eq!(sig.cylinder_assignment[3], Some(alloc::vec![1, 1]));
        let (s, fam) = cycle_family(6);
        assert!(!signature_match(&fam, &[2, 2], &s, 0.5).unwrap().verified_cyclic);
        let (s, fam) = cycle_family(3);
        assert!(matches!(
            signature_match(&fam, &[2, 2], &s, 0.5),
            Err(OdometerError::SampleTooSmall {
                required: 4,
                available: 3
            })
        ));
    }

    #[test]
    fn odometer_recognises_itself() {
        for bases in [&[2u64, 2][..], &[3, 2], &[2, 2, 2]] {
            let s = odometer_system(bases).unwrap();
            assert!(s.validate().is_ok());
            let m: u64 = bases.iter().product();
            let fam = omega_sample(&s, &FiniteSet::singleton(Point::Abstract(0)), 0, m, 1e-9).unwrap();
            let sig = signature_match(&fam, bases, &s, 1e-9).unwrap();
            assert!(sig.verified_cyclic, "{bases:?}");
            assert_eq!(sig.period, Some(m as usize));
        }
    }
}
