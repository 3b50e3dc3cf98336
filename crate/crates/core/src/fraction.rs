use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Reduced fraction over `i128`, serialized as `{"num": .., "den": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(Ratio<i128>);

impl Fraction {
    /// Panics if `den` is zero.
    pub fn new(num: i128, den: i128) -> Self {
        Fraction(Ratio::new(num, den))
    }

    pub fn from_integer(n: i128) -> Self {
        Fraction(Ratio::from_integer(n))
    }

    pub fn num(&self) -> i128 {
        *self.0.numer()
    }

    pub fn den(&self) -> i128 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident) => {
        impl $tr for Fraction {
            type Output = Fraction;
            fn $method(self, rhs: Fraction) -> Fraction {
                Fraction(self.0.$method(rhs.0))
            }
        }
    };
}

forward_op!(Add, add);
forward_op!(Sub, sub);
forward_op!(Mul, mul);
forward_op!(Div, div);

#[derive(Serialize, Deserialize)]
struct Wire {
    num: i128,
    den: i128,
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            num: self.num(),
            den: self.den(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Fraction::new(w.num, w.den))
    }
}
