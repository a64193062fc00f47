//! Exact scalars for the formal algebra: complex rationals and polynomials
//! in a single formal symbol `V`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Complex number with arbitrary-precision rational parts.
pub type CRational = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn real(num: i64, den: i64) -> CRational {
    Complex::new(rational(num, den), BigRational::zero())
}

pub fn imag(num: i64, den: i64) -> CRational {
    Complex::new(BigRational::zero(), rational(num, den))
}

/// Parses `"p/q"` (real) or `"p/q,r/s"` (real, imaginary).
pub fn parse_crational(s: &str) -> Result<CRational> {
    let parse = |part: &str| {
        BigRational::from_str(part.trim()).map_err(|e| Error::invalid(format!("cannot parse rational {part:?}: {e}")))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex::new(parse(re)?, parse(im)?)),
        None => Ok(Complex::new(parse(s)?, BigRational::zero())),
    }
}

/// Lossy conversion for reporting.
pub fn to_f64_pair(z: &CRational) -> (f64, f64) {
    use num_traits::ToPrimitive;
    (z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Renders a complex rational as `3/4`, `-i`, `1/2i` or `(1/2-1/3i)`.
pub fn fmt_crational(z: &CRational) -> String {
    let imag_part = |im: &BigRational| {
        if im.is_one() {
            "i".to_string()
        } else if (-im).is_one() {
            "-i".to_string()
        } else {
            format!("{im}i")
        }
    };
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => imag_part(&z.im),
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("({}{}{})", z.re, sign, imag_part(&z.im.abs()))
        }
    }
}

/// Polynomial in the formal symbol `V` with complex-rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<u32, CRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CRational::one())
    }

    pub fn constant(c: CRational) -> Self {
        Self::monomial(c, 0)
    }

    /// The formal symbol `V`.
    pub fn var() -> Self {
        Self::monomial(CRational::one(), 1)
    }

    pub fn monomial(c: CRational, degree: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(degree, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, degree: u32) -> CRational {
        self.terms.get(&degree).cloned().unwrap_or_else(CRational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// `(degree, coefficient)` pairs in ascending degree.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &CRational)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn scale(&self, c: &CRational) -> Self {
        let mut out = Poly::zero();
        for (d, a) in &self.terms {
            out.add_term(*d, a * c);
        }
        out
    }

    fn add_term(&mut self, degree: u32, c: CRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(degree).or_insert_with(CRational::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&degree);
        }
    }
}

impl From<CRational> for Poly {
    fn from(c: CRational) -> Self {
        Poly::constant(c)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-CRational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (da, a) in &self.terms {
            for (db, b) in &rhs.terms {
                out.add_term(da + db, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.terms.iter().rev() {
            let mut body = match *d {
                0 => fmt_crational(c),
                _ => {
                    let var = if *d == 1 { "V".to_string() } else { format!("V^{d}") };
                    if c.is_one() {
                        var
                    } else if (-c).is_one() {
                        format!("-{var}")
                    } else {
                        format!("{}·{var}", fmt_crational(c))
                    }
                }
            };
            if !first {
                if let Some(rest) = body.strip_prefix('-') {
                    body = format!(" - {rest}");
                } else {
                    body = format!(" + {body}");
                }
            }
            f.write_str(&body)?;
            first = false;
        }
        Ok(())
    }
}
