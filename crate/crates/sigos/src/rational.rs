//! Exact rational scalars, extended with a distinguished infinity.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;

pub type Rat = Ratio<i64>;

/// `a/b` as an exact rational. Panics on `b == 0`; use [`ExtRat`] where an
/// infinite value is meaningful.
pub fn rat(a: i64, b: i64) -> Rat {
    Ratio::new(a, b)
}

pub fn int(a: i64) -> Rat {
    Ratio::from_integer(a)
}

/// A rational extended by a single point at +infinity, ordered above every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
}

impl ExtRat {
    /// `num/den`, mapping a zero denominator (with positive numerator) to
    /// infinity.
    pub fn ratio_or_inf(num: i64, den: i64) -> ExtRat {
        if den == 0 {
            ExtRat::Infinity
        } else {
            ExtRat::Finite(rat(num, den))
        }
    }

    pub fn finite(self) -> Option<Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtRat::Finite(r) => rat_to_f64(r),
            ExtRat::Infinity => f64::INFINITY,
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
            (ExtRat::Infinity, _) => Ordering::Greater,
            (_, ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", r),
            ExtRat::Infinity => write!(f, "inf"),
        }
    }
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_orders_above_all_rationals() {
        assert!(ExtRat::Infinity > ExtRat::Finite(rat(1 << 40, 1)));
        assert!(ExtRat::Finite(rat(-7, 3)) < ExtRat::Infinity);
        assert_eq!(ExtRat::Infinity, ExtRat::Infinity);
    }

    #[test]
    fn zero_denominator_maps_to_infinity() {
        assert_eq!(ExtRat::ratio_or_inf(5, 0), ExtRat::Infinity);
        assert_eq!(ExtRat::ratio_or_inf(10, 4), ExtRat::Finite(rat(5, 2)));
    }
}
