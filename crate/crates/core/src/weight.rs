//! Weights `f = e^{-phi}` on the base interval.
//!
//! The same function plays two roles: it is the density of the weighted
//! measure for the one-dimensional drift problem and the height profile of
//! the thin domain `0 <= y <= eps * f(x)`.

use alloc::vec::Vec;

use crate::expr::{parse_expr, Expr};
use crate::{Error, Result};

/// Pointwise access to a positive profile and its logarithmic derivative.
pub trait Profile {
    /// `f(x)`.
    fn value(&self, x: f64) -> Result<f64>;

    /// `f'(x) / f(x)`, which equals `-phi'(x)`.
    fn log_derivative(&self, x: f64) -> Result<f64>;

    /// `f(x)` checked to be strictly positive.
    fn positive_value(&self, x: f64) -> Result<f64> {
        let value = self.value(x)?;
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonPositiveWeight { x, value })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    PhiGiven,
    FGiven,
}

/// An analytic weight, given either by its exponent `phi` or directly as `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    mode: WeightMode,
    phi: Expr,
    f: Expr,
    dphi: Expr,
    df: Expr,
}

impl WeightSpec {
    pub fn from_phi(phi: Expr) -> Self {
        let f = Expr::func(crate::expr::Func::Exp, Expr::negate(phi.clone()));
        let dphi = phi.diff();
        let df = f.diff();
        WeightSpec {
            mode: WeightMode::PhiGiven,
            phi,
            f,
            dphi,
            df,
        }
    }

    pub fn from_f(f: Expr) -> Self {
        let phi = Expr::negate(Expr::func(crate::expr::Func::Log, f.clone()));
        let dphi = phi.diff();
        let df = f.diff();
        WeightSpec {
            mode: WeightMode::FGiven,
            phi,
            f,
            dphi,
            df,
        }
    }

    pub fn parse_phi(text: &str) -> Result<Self> {
        Ok(Self::from_phi(parse_expr(text)?))
    }

    pub fn parse_f(text: &str) -> Result<Self> {
        Ok(Self::from_f(parse_expr(text)?))
    }

    /// The flat weight `phi = 0`.
    pub fn flat() -> Self {
        Self::from_phi(Expr::Const(0.0))
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn phi_expr(&self) -> &Expr {
        &self.phi
    }

    pub fn f_expr(&self) -> &Expr {
        &self.f
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        Ok(self.phi.eval(x)?)
    }

    pub fn dphi(&self, x: f64) -> Result<f64> {
        Ok(self.dphi.eval(x)?)
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        Ok(self.f.eval(x)?)
    }

    pub fn df(&self, x: f64) -> Result<f64> {
        Ok(self.df.eval(x)?)
    }
}

impl Profile for WeightSpec {
    fn value(&self, x: f64) -> Result<f64> {
        self.f(x)
    }

    fn log_derivative(&self, x: f64) -> Result<f64> {
        match self.mode {
            WeightMode::PhiGiven => Ok(-self.dphi(x)?),
            WeightMode::FGiven => {
                let f = self.positive_value(x)?;
                Ok(self.df(x)? / f)
            }
        }
    }
}

/// `f = g^2` for a continuous piecewise-linear `g` given by nodal samples.
///
/// Used to feed a numerically computed ground state back in as a height
/// profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSquare {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl SampledSquare {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidArgument("node and value counts differ"));
        }
        if nodes.len() < 2 {
            return Err(Error::InvalidCount {
                what: "sample count",
                value: nodes.len(),
                min: 2,
            });
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("sample nodes must increase strictly"));
        }
        Ok(SampledSquare { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The interpolated `(g, g')` at `x`.
    fn locate(&self, x: f64) -> Result<(f64, f64)> {
        let n = self.nodes.len();
        if !(x >= self.nodes[0] && x <= self.nodes[n - 1]) {
            return Err(Error::InvalidArgument("sample point outside the sampled interval"));
        }
        let i = match self.nodes.partition_point(|&node| node <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let (g0, g1) = (self.values[i], self.values[i + 1]);
        let slope = (g1 - g0) / (x1 - x0);
        Ok((g0 + slope * (x - x0), slope))
    }

    /// The interpolant `g` itself.
    pub fn base_value(&self, x: f64) -> Result<f64> {
        Ok(self.locate(x)?.0)
    }
}

impl Profile for SampledSquare {
    fn value(&self, x: f64) -> Result<f64> {
        let (g, _) = self.locate(x)?;
        Ok(g * g)
    }

    fn log_derivative(&self, x: f64) -> Result<f64> {
        let (g, slope) = self.locate(x)?;
        if g == 0.0 {
            return Err(Error::NonPositiveWeight { x, value: 0.0 });
        }
        Ok(2.0 * slope / g)
    }
}

/// Height profile of a thin domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Height {
    Analytic(WeightSpec),
    Sampled(SampledSquare),
}

impl Profile for Height {
    fn value(&self, x: f64) -> Result<f64> {
        match self {
            Height::Analytic(w) => w.value(x),
            Height::Sampled(s) => s.value(x),
        }
    }

    fn log_derivative(&self, x: f64) -> Result<f64> {
        match self {
            Height::Analytic(w) => w.log_derivative(x),
            Height::Sampled(s) => s.log_derivative(x),
        }
    }
}

impl From<WeightSpec> for Height {
    fn from(w: WeightSpec) -> Self {
        Height::Analytic(w)
    }
}

impl From<SampledSquare> for Height {
    fn from(s: SampledSquare) -> Self {
        Height::Sampled(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_given_derives_f() {
        let w = WeightSpec::parse_phi("x").unwrap();
        assert_eq!(w.mode(), WeightMode::PhiGiven);
        assert!((w.f(1.0).unwrap() - libm::exp(-1.0)).abs() < 1e-16);
        assert_eq!(w.log_derivative(0.3).unwrap(), -1.0);
    }

    #[test]
    fn f_given_log_derivative() {
        let w = WeightSpec::parse_f("sin(pi*x)^2").unwrap();
        let x = 0.25;
        let expected = 2.0 * core::f64::consts::PI / libm::tan(core::f64::consts::PI * x);
        assert!((w.log_derivative(x).unwrap() - expected).abs() < 1e-12);
        assert!(matches!(
            w.positive_value(0.0),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn sampled_square_interpolates() {
        let s = SampledSquare::new(alloc::vec![0.0, 1.0, 2.0], alloc::vec![0.0, 2.0, 1.0]).unwrap();
        assert_eq!(s.value(0.5).unwrap(), 1.0);
        assert_eq!(s.log_derivative(0.5).unwrap(), 4.0);
        assert_eq!(s.value(1.5).unwrap(), 2.25);
        assert_eq!(s.value(2.0).unwrap(), 1.0);
        assert!(s.value(2.5).is_err());
        assert!(s.log_derivative(0.0).is_err());
    }
}
