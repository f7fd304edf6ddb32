//! Symbolic differentiation.
//!
//! The builders below fold literal-only subtrees and drop terms that are
//! structurally zero or one; nothing else is simplified.

use super::{BinOp, Expr, Func};

pub(super) fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Pi => Expr::Const(0.0),
        Expr::X => Expr::Const(1.0),
        Expr::Neg(u) => neg(derivative(u)),
        Expr::Binary(op, u, v) => {
            let du = derivative(u);
            let dv = derivative(v);
            match op {
                BinOp::Add => add(du, dv),
                BinOp::Sub => sub(du, dv),
                BinOp::Mul => add(mul(du, (**v).clone()), mul((**u).clone(), dv)),
                BinOp::Div => {
                    let numer = sub(mul(du, (**v).clone()), mul((**u).clone(), dv));
                    div(numer, Expr::pow((**v).clone(), 2.0))
                }
            }
        }
        Expr::Pow(u, c) => {
            let c = *c;
            let du = derivative(u);
            if c == 0.0 {
                return Expr::Const(0.0);
            }
            let base = (**u).clone();
            // Exponents stay non-negative so every derivative prints in the
            // input grammar: u^(c-1) is written u^c/u when c < 1.
            let power = if c == 1.0 {
                Expr::Const(1.0)
            } else if c == 2.0 {
                base
            } else if c > 1.0 {
                Expr::pow(base, c - 1.0)
            } else {
                div(Expr::pow(base.clone(), c), base)
            };
            mul(mul(Expr::Const(c), power), du)
        }
        Expr::Func(func, u) => {
            let du = derivative(u);
            let arg = (**u).clone();
            let outer = match func {
                Func::Sin => Expr::func(Func::Cos, arg),
                Func::Cos => neg(Expr::func(Func::Sin, arg)),
                Func::Tan => add(
                    Expr::Const(1.0),
                    Expr::pow(Expr::func(Func::Tan, arg), 2.0),
                ),
                Func::Exp => Expr::func(Func::Exp, arg),
                Func::Log => return div(du, arg),
                Func::Sqrt => {
                    return div(du, mul(Expr::Const(2.0), Expr::func(Func::Sqrt, arg)));
                }
                // u/|u| is undefined at u = 0, which is where |u| has no derivative.
                Func::Abs => div(arg.clone(), Expr::func(Func::Abs, arg)),
            };
            mul(outer, du)
        }
    }
}

fn is_const(e: &Expr, value: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == value)
}

fn neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::negate(other),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (a, b) if is_const(&a, 0.0) => b,
        (a, b) if is_const(&b, 0.0) => a,
        (a, b) => Expr::binary(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, b) if is_const(&b, 0.0) => a,
        (a, b) if is_const(&a, 0.0) => neg(b),
        (a, b) => Expr::binary(BinOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (a, b) if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(0.0),
        (a, b) if is_const(&a, 1.0) => b,
        (a, b) if is_const(&b, 1.0) => a,
        (a, b) => Expr::binary(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) if y != 0.0 => Expr::Const(x / y),
        (a, _) if is_const(&a, 0.0) => Expr::Const(0.0),
        (a, b) if is_const(&b, 1.0) => a,
        (a, b) => Expr::binary(BinOp::Div, a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_expr;
    use alloc::string::ToString;

    fn d(text: &str) -> alloc::string::String {
        parse_expr(text).unwrap().diff().to_string()
    }

    #[test]
    fn textbook_rules() {
        assert_eq!(d("x^2"), "2*x");
        assert_eq!(d("sin(pi*x)"), "cos(pi*x)*pi");
        assert_eq!(d("7"), "0");
        assert_eq!(d("x"), "1");
    }

    #[test]
    fn exp_of_negative_x_at_one() {
        let de = parse_expr("exp(-x)").unwrap().diff();
        let v = de.eval(1.0).unwrap();
        assert!((v + libm::exp(-1.0)).abs() < 1e-15);
        assert!((v + 0.367879).abs() < 1e-6);
    }

    #[test]
    fn fractional_powers_keep_printable_exponents() {
        let de = parse_expr("x^0.5").unwrap().diff();
        let printed = de.to_string();
        assert_eq!(parse_expr(&printed).unwrap(), de);
        assert!((de.eval(4.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(de.eval(0.0).is_err());
    }

    #[test]
    fn abs_derivative_undefined_at_zero() {
        let de = parse_expr("abs(x)").unwrap().diff();
        assert_eq!(de.eval(2.0).unwrap(), 1.0);
        assert_eq!(de.eval(-2.0).unwrap(), -1.0);
        assert!(de.eval(0.0).is_err());
    }
}
