//! Scalar expressions in one variable `x`.
//!
//! Weights are written as text such as `x^2/2` or `sin(pi*x)^2`, parsed into an
//! [`Expr`] tree, evaluated in double precision and differentiated
//! symbolically so that assembly sees exact `f`, `f'` and `phi'` values at its
//! quadrature points.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' '-'? number)?
//! atom   := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')' | '-' atom
//! func   := sin | cos | tan | exp | log | sqrt | abs
//! ```
//!
//! Unary minus binds to an atom, so `-x^2` reads as `(-x)^2`.

mod diff;
mod parse;

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use core::fmt;

use crate::math;

pub use parse::{parse_expr, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Expression tree. The exponent of [`Expr::Pow`] is a constant by
/// construction, which keeps differentiation total.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Pi,
    X,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    DivisionByZero,
    LogNonPositive,
    SqrtNegative,
    PowUndefined,
    NonFinite,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::LogNonPositive => "log of a non-positive value",
            DomainKind::SqrtNegative => "sqrt of a negative value",
            DomainKind::PowUndefined => "power undefined",
            DomainKind::NonFinite => "non-finite result",
        })
    }
}

/// Evaluation outside the domain of some subexpression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind} in `{subexpr}` at x = {x}")]
pub struct EvalError {
    pub kind: DomainKind,
    /// The offending subexpression, pretty-printed.
    pub subexpr: String,
    pub x: f64,
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn func(func: Func, arg: Expr) -> Expr {
        Expr::Func(func, Box::new(arg))
    }

    pub fn pow(base: Expr, exponent: f64) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }

    pub fn negate(inner: Expr) -> Expr {
        Expr::Neg(Box::new(inner))
    }

    /// Evaluate at `x`. Pure: the same `(self, x)` always yields the same bits.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let fail = |kind| EvalError {
            kind,
            subexpr: self.to_string(),
            x,
        };
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Pi => math::PI,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(fail(DomainKind::DivisionByZero));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(base, c) => {
                let b = base.eval(x)?;
                if b == 0.0 && *c < 0.0 {
                    return Err(fail(DomainKind::DivisionByZero));
                }
                let v = math::powf(b, *c);
                if v.is_nan() {
                    return Err(fail(DomainKind::PowUndefined));
                }
                v
            }
            Expr::Func(func, arg) => {
                let a = arg.eval(x)?;
                match func {
                    Func::Sin => math::sin(a),
                    Func::Cos => math::cos(a),
                    Func::Tan => math::tan(a),
                    Func::Exp => math::exp(a),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(fail(DomainKind::LogNonPositive));
                        }
                        math::ln(a)
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(fail(DomainKind::SqrtNegative));
                        }
                        math::sqrt(a)
                    }
                    Func::Abs => a.abs(),
                }
            }
        };
        if !value.is_finite() {
            return Err(fail(DomainKind::NonFinite));
        }
        Ok(value)
    }

    /// Symbolic derivative with respect to `x`.
    pub fn diff(&self) -> Expr {
        diff::derivative(self)
    }

    /// True when the tree mentions `x`.
    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Pi => false,
            Expr::X => true,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Func(_, e) => e.depends_on_x(),
            Expr::Binary(_, l, r) => l.depends_on_x() || r.depends_on_x(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Const(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Pi => f.write_str("pi"),
            Expr::X => f.write_str("x"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_prec(f, 4)
            }
            Expr::Binary(op, l, r) => {
                let (sym, level) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                l.write_prec(f, level)?;
                f.write_str(sym)?;
                r.write_prec(f, level + 1)
            }
            Expr::Pow(base, c) => {
                base.write_prec(f, 4)?;
                write!(f, "^{c}")
            }
            Expr::Func(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.write_prec(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}
