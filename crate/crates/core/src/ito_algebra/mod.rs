//! Exact formal Itô calculus on the closed basis
//! `{1, dt, dW, |dW|, sign(dW), sign(dW)·dt}`.
//!
//! Every basis element factors as `sign(dW)^s · |dW|^h` with `s ∈ {0, 1}`
//! and `h ∈ {0, 1, 2}`, using `dW = sign(dW)|dW|` and `|dW|² = dt`.
//! Multiplication adds the `|dW|` exponents and xors the sign exponents;
//! anything above `|dW|²` (order `dt`) is discarded. This reproduces the
//! usual table `dW·dW = dt`, `dW·dt = 0` and closes it over `|dW|` and
//! `sign(dW)`.
//!
//! Coefficients are polynomials in a formal symbol `V` with exact
//! complex-rational scalars, so identities are checked symbolically.

mod scalar;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use scalar::{fmt_crational, imag, parse_crational, rational, real, to_f64_pair, CRational, Poly};

/// Basis monomials of the formal algebra. The declaration order is the
/// display order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisMonomial {
    One,
    SignDW,
    DW,
    AbsDW,
    Dt,
    /// `sign(dW)·dt`, a null-measure term kept explicit.
    SignDt,
}

impl BasisMonomial {
    pub const ALL: [BasisMonomial; 6] = [
        BasisMonomial::One,
        BasisMonomial::SignDW,
        BasisMonomial::DW,
        BasisMonomial::AbsDW,
        BasisMonomial::Dt,
        BasisMonomial::SignDt,
    ];

    /// `(sign exponent, |dW| exponent)`.
    fn factors(self) -> (bool, u8) {
        match self {
            BasisMonomial::One => (false, 0),
            BasisMonomial::SignDW => (true, 0),
            BasisMonomial::AbsDW => (false, 1),
            BasisMonomial::DW => (true, 1),
            BasisMonomial::Dt => (false, 2),
            BasisMonomial::SignDt => (true, 2),
        }
    }

    fn from_factors(sign: bool, half_order: u8) -> Option<Self> {
        Some(match (sign, half_order) {
            (false, 0) => BasisMonomial::One,
            (true, 0) => BasisMonomial::SignDW,
            (false, 1) => BasisMonomial::AbsDW,
            (true, 1) => BasisMonomial::DW,
            (false, 2) => BasisMonomial::Dt,
            (true, 2) => BasisMonomial::SignDt,
            _ => return None,
        })
    }

    /// Order in units of `dt^(1/2)`: 0 for `1`/`sign(dW)`, 1 for `dW`/`|dW|`,
    /// 2 for `dt`/`sign(dW)·dt`.
    pub fn half_order(self) -> u8 {
        self.factors().1
    }

    /// Terms whose Itô integral vanishes.
    pub fn is_null_measure(self) -> bool {
        matches!(self, BasisMonomial::SignDW | BasisMonomial::SignDt)
    }

    /// Product of two basis elements; `None` when the product is of order
    /// higher than `dt`.
    pub fn product(self, other: BasisMonomial) -> Option<BasisMonomial> {
        let (sa, ha) = self.factors();
        let (sb, hb) = other.factors();
        Self::from_factors(sa ^ sb, ha + hb)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BasisMonomial::One => "1",
            BasisMonomial::SignDW => "sign(dW)",
            BasisMonomial::DW => "dW",
            BasisMonomial::AbsDW => "|dW|",
            BasisMonomial::Dt => "dt",
            BasisMonomial::SignDt => "sign(dW)·dt",
        }
    }
}

/// A formal stochastic differential: a finite combination of basis
/// monomials with polynomial coefficients. Zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ItoExpr {
    coeffs: BTreeMap<BasisMonomial, Poly>,
}

impl ItoExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: BasisMonomial) -> Self {
        Self::term(m, Poly::one())
    }

    pub fn term(m: BasisMonomial, coeff: Poly) -> Self {
        let mut e = Self::zero();
        e.add_term(m, coeff);
        e
    }

    pub fn scalar(c: CRational) -> Self {
        Self::term(BasisMonomial::One, Poly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: BasisMonomial) -> Poly {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn monomials(&self) -> impl Iterator<Item = BasisMonomial> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisMonomial, &Poly)> {
        self.coeffs.iter().map(|(m, p)| (*m, p))
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero();
        for (m, p) in &self.coeffs {
            out.add_term(*m, p * c);
        }
        out
    }

    pub fn square(&self) -> Self {
        mul(self, self)
    }

    /// Drops null-measure monomials, i.e. the expression "modulo a null
    /// measure process".
    pub fn without_null_measure(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|m, _| !m.is_null_measure());
        out
    }

    fn add_term(&mut self, m: BasisMonomial, c: Poly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }
}

/// Bilinear product under the truncated multiplication table.
pub fn mul(a: &ItoExpr, b: &ItoExpr) -> ItoExpr {
    let mut out = ItoExpr::zero();
    for (ma, pa) in &a.coeffs {
        for (mb, pb) in &b.coeffs {
            if let Some(m) = ma.product(*mb) {
                out.add_term(m, pa * pb);
            }
        }
    }
    out
}

impl Add for &ItoExpr {
    type Output = ItoExpr;
    fn add(self, rhs: &ItoExpr) -> ItoExpr {
        let mut out = self.clone();
        for (m, p) in &rhs.coeffs {
            out.add_term(*m, p.clone());
        }
        out
    }
}

impl Add for ItoExpr {
    type Output = ItoExpr;
    fn add(self, rhs: ItoExpr) -> ItoExpr {
        &self + &rhs
    }
}

impl Mul for &ItoExpr {
    type Output = ItoExpr;
    fn mul(self, rhs: &ItoExpr) -> ItoExpr {
        mul(self, rhs)
    }
}

impl Mul for ItoExpr {
    type Output = ItoExpr;
    fn mul(self, rhs: ItoExpr) -> ItoExpr {
        mul(&self, &rhs)
    }
}

impl From<BasisMonomial> for ItoExpr {
    fn from(m: BasisMonomial) -> Self {
        ItoExpr::basis(m)
    }
}

impl fmt::Display for ItoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, p)) in self.coeffs.iter().enumerate() {
            let single_term = p.terms().count() == 1;
            let mut body = if p.is_one() {
                m.symbol().to_string()
            } else if *m == BasisMonomial::One {
                if single_term {
                    p.to_string()
                } else {
                    format!("({p})")
                }
            } else if (-p).is_one() {
                format!("-{}", m.symbol())
            } else if single_term {
                format!("{p}·{}", m.symbol())
            } else {
                format!("({p})·{}", m.symbol())
            };
            if i > 0 {
                body = match body.strip_prefix('-') {
                    Some(rest) => format!(" - {rest}"),
                    None => format!(" + {body}"),
                };
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}

/// The `dt` coefficient inside the square-root bracket:
/// `plain(V) + signed(V)·sign(dW)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Drift {
    pub plain: Poly,
    pub signed: Poly,
}

impl Drift {
    pub fn constant(c: CRational) -> Self {
        Drift {
            plain: Poly::constant(c),
            signed: Poly::zero(),
        }
    }

    pub fn to_expr(&self) -> ItoExpr {
        &ItoExpr::term(BasisMonomial::One, self.plain.clone())
            + &ItoExpr::term(BasisMonomial::SignDW, self.signed.clone())
    }
}

/// Coefficients of the ansatz `dX = [μ₀ + μ₁|dW| + drift·dt]·Φ`.
///
/// `mu2` records the constant the coefficient solver produced; the bracket
/// itself always uses `drift` as its `dt` coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtAnsatzCoefficients {
    pub mu0: CRational,
    pub mu1: CRational,
    pub mu2: CRational,
    pub drift: Drift,
}

impl SqrtAnsatzCoefficients {
    /// Coefficients from [`solve_sqrt_coefficients`], with `drift = μ₂`.
    pub fn solved(mu0: CRational) -> Result<Self> {
        let (mu1, mu2) = solve_sqrt_coefficients(&mu0)?;
        let drift = Drift::constant(mu2.clone());
        Ok(Self { mu0, mu1, mu2, drift })
    }

    /// The free-particle bracket `1/2 + |dW| + (-1 + β·sign(dW))dt`.
    pub fn free(beta: CRational) -> Self {
        Self {
            mu0: real(1, 2),
            mu1: real(1, 1),
            mu2: real(-1, 1),
            drift: Drift {
                plain: Poly::constant(real(-1, 1)),
                signed: Poly::constant(beta),
            },
        }
    }

    /// The interacting bracket `1/2 + |dW| + (-1 + V·sign(dW))dt` with `V`
    /// kept formal.
    pub fn interacting() -> Self {
        Self {
            mu0: real(1, 2),
            mu1: real(1, 1),
            mu2: real(-1, 1),
            drift: Drift {
                plain: Poly::constant(real(-1, 1)),
                signed: Poly::var(),
            },
        }
    }

    pub fn bracket(&self) -> ItoExpr {
        let constant = ItoExpr::scalar(self.mu0.clone());
        let abs = ItoExpr::term(BasisMonomial::AbsDW, Poly::constant(self.mu1.clone()));
        let drift = mul(&self.drift.to_expr(), &ItoExpr::basis(BasisMonomial::Dt));
        &(&constant + &abs) + &drift
    }
}

/// `μ₁ = 1/(2μ₀)`, `μ₂ = -1/(8μ₀³)`.
pub fn solve_sqrt_coefficients(mu0: &CRational) -> Result<(CRational, CRational)> {
    if mu0.is_zero() {
        return Err(Error::Domain("mu0 must be nonzero".into()));
    }
    let mu1 = CRational::one() / (mu0 * real(2, 1));
    let mu2 = -(CRational::one() / (mu0 * mu0 * mu0 * real(8, 1)));
    Ok((mu1, mu2))
}

/// Squares the ansatz bracket and multiplies by `Φ² = sign(dW)`.
pub fn reduce_ansatz_square(c: &SqrtAnsatzCoefficients) -> ItoExpr {
    mul(&c.bracket().square(), &ItoExpr::basis(BasisMonomial::SignDW))
}

/// `μ₀²·sign(dW) + dW`.
pub fn theorem_target(mu0: &CRational) -> ItoExpr {
    &ItoExpr::term(BasisMonomial::SignDW, Poly::constant(mu0 * mu0)) + &ItoExpr::basis(BasisMonomial::DW)
}

/// `1/4·sign(dW) + dW + V·dt`.
pub fn corollary_target() -> ItoExpr {
    &(&ItoExpr::term(BasisMonomial::SignDW, Poly::constant(real(1, 4))) + &ItoExpr::basis(BasisMonomial::DW))
        + &ItoExpr::term(BasisMonomial::Dt, Poly::var())
}
