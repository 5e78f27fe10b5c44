//! Closed-form scalar functions as composition trees over the jet module's
//! elementary set.
//!
//! Generator functions are never arbitrary user code: they are built from
//! this small grammar so that jets (and hence exact higher derivatives) are
//! always available. Trees can be differentiated symbolically, which is how
//! derived pairs such as `(f', g')` or `φ'·S_b∘φ` are produced.
//!
//! The JSON encoding is prefix notation over the same grammar:
//! `"x"`, numbers, `["log", e]`, `["pow", r, e]`, `["mul", e1, e2]`, ….

use crate::jet::{Elementary, Jet, JetError};
use serde_json::Value;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// The independent variable.
    Var,
    Const(f64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Apply(Elementary, Box<Expr>),
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn apply(el: Elementary, e: Expr) -> Expr {
        Expr::Apply(el, Box::new(e))
    }

    /// Jet of the function at `x`, valid to `order`.
    pub fn jet(&self, x: f64, order: usize) -> Result<Jet, JetError> {
        let j = self.jet_inner(Jet::variable(x).truncated(order))?;
        Ok(j)
    }

    fn jet_inner(&self, x: Jet) -> Result<Jet, JetError> {
        match self {
            Expr::Var => Ok(x),
            Expr::Const(c) => Ok(Jet::constant(*c).truncated(x.order())),
            Expr::Neg(e) => Ok(-e.jet_inner(x)?),
            Expr::Add(a, b) => Ok(a.jet_inner(x)? + b.jet_inner(x)?),
            Expr::Sub(a, b) => Ok(a.jet_inner(x)? - b.jet_inner(x)?),
            Expr::Mul(a, b) => Ok(a.jet_inner(x)? * b.jet_inner(x)?),
            Expr::Div(a, b) => a.jet_inner(x)?.try_div(b.jet_inner(x)?),
            Expr::Apply(el, e) => el.apply(e.jet_inner(x)?),
        }
    }

    /// Scalar value at `x`.
    pub fn eval(&self, x: f64) -> Result<f64, JetError> {
        Ok(self.jet(x, 0)?.value())
    }

    /// Symbolic derivative. Constant subtrees are folded so repeated
    /// differentiation stays cheap to evaluate.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Var => Expr::Const(1.0),
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Neg(e) => neg(e.derivative()),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                mul((**b).clone(), (**b).clone()),
            ),
            Expr::Apply(el, e) => {
                let outer = match el {
                    Elementary::Exp => Expr::apply(Elementary::Exp, (**e).clone()),
                    Elementary::Log => div(Expr::Const(1.0), (**e).clone()),
                    Elementary::Sin => Expr::apply(Elementary::Cos, (**e).clone()),
                    Elementary::Cos => neg(Expr::apply(Elementary::Sin, (**e).clone())),
                    Elementary::Sinh => Expr::apply(Elementary::Cosh, (**e).clone()),
                    Elementary::Cosh => Expr::apply(Elementary::Sinh, (**e).clone()),
                    Elementary::Sqrt => div(
                        Expr::Const(0.5),
                        Expr::apply(Elementary::Sqrt, (**e).clone()),
                    ),
                    Elementary::Pow(r) => mul(
                        Expr::Const(*r),
                        Expr::apply(Elementary::Pow(r - 1.0), (**e).clone()),
                    ),
                    // d/dx |u|^r = r |u|^(r-2) u u'
                    Elementary::AbsPow(r) => mul(
                        Expr::Const(*r),
                        mul(
                            Expr::apply(Elementary::AbsPow(r - 2.0), (**e).clone()),
                            (**e).clone(),
                        ),
                    ),
                };
                mul(outer, e.derivative())
            }
        }
    }

    /// Prefix-notation JSON encoding.
    pub fn to_json(&self) -> Value {
        match self {
            Expr::Var => Value::String("x".into()),
            Expr::Const(c) => serde_json::json!(c),
            Expr::Neg(e) => serde_json::json!(["neg", e.to_json()]),
            Expr::Add(a, b) => serde_json::json!(["add", a.to_json(), b.to_json()]),
            Expr::Sub(a, b) => serde_json::json!(["sub", a.to_json(), b.to_json()]),
            Expr::Mul(a, b) => serde_json::json!(["mul", a.to_json(), b.to_json()]),
            Expr::Div(a, b) => serde_json::json!(["div", a.to_json(), b.to_json()]),
            Expr::Apply(el, e) => match el {
                Elementary::Pow(r) => serde_json::json!(["pow", r, e.to_json()]),
                Elementary::AbsPow(r) => serde_json::json!(["abspow", r, e.to_json()]),
                other => serde_json::json!([other.name(), e.to_json()]),
            },
        }
    }

    /// Parses the prefix-notation JSON encoding.
    pub fn from_json(v: &Value) -> Result<Expr, ExprParseError> {
        match v {
            Value::String(s) if s == "x" => Ok(Expr::Var),
            Value::String(s) => Err(ExprParseError(format!("unknown symbol {s:?}"))),
            Value::Number(n) => n
                .as_f64()
                .map(Expr::Const)
                .ok_or_else(|| ExprParseError(format!("non-finite constant {n}"))),
            Value::Array(items) => Self::from_json_array(items),
            other => Err(ExprParseError(format!("expected expression, got {other}"))),
        }
    }

    fn from_json_array(items: &[Value]) -> Result<Expr, ExprParseError> {
        let op = items
            .first()
            .and_then(Value::as_str)
            .ok_or_else(|| ExprParseError("expression array must start with an operator".into()))?;
        let unary = |el: Elementary| -> Result<Expr, ExprParseError> {
            if items.len() != 2 {
                return Err(ExprParseError(format!("{op} takes one argument")));
            }
            Ok(Expr::apply(el, Expr::from_json(&items[1])?))
        };
        let binary = |mk: fn(Expr, Expr) -> Expr| -> Result<Expr, ExprParseError> {
            if items.len() != 3 {
                return Err(ExprParseError(format!("{op} takes two arguments")));
            }
            Ok(mk(Expr::from_json(&items[1])?, Expr::from_json(&items[2])?))
        };
        let powlike = |mk: fn(f64) -> Elementary| -> Result<Expr, ExprParseError> {
            if items.len() != 3 {
                return Err(ExprParseError(format!("{op} takes an exponent and an argument")));
            }
            let r = items[1]
                .as_f64()
                .ok_or_else(|| ExprParseError(format!("{op} exponent must be a number")))?;
            Ok(Expr::apply(mk(r), Expr::from_json(&items[2])?))
        };
        match op {
            "neg" => {
                if items.len() != 2 {
                    return Err(ExprParseError("neg takes one argument".into()));
                }
                Ok(neg(Expr::from_json(&items[1])?))
            }
            "add" => binary(add),
            "sub" => binary(sub),
            "mul" => binary(mul),
            "div" => binary(div),
            "exp" => unary(Elementary::Exp),
            "log" => unary(Elementary::Log),
            "sin" => unary(Elementary::Sin),
            "cos" => unary(Elementary::Cos),
            "sinh" => unary(Elementary::Sinh),
            "cosh" => unary(Elementary::Cosh),
            "sqrt" => unary(Elementary::Sqrt),
            "pow" => powlike(Elementary::Pow),
            "abspow" => powlike(Elementary::AbsPow),
            other => Err(ExprParseError(format!("unknown operator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid expression: {0}")]
pub struct ExprParseError(pub String);

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        Expr::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

// Smart constructors with constant folding for the trivial cases produced by
// differentiation.

pub fn neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (Expr::Const(0.0), e) => e,
        (e, Expr::Const(0.0)) => e,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (e, Expr::Const(0.0)) => e,
        (Expr::Const(0.0), e) => neg(e),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (Expr::Const(0.0), _) | (_, Expr::Const(0.0)) => Expr::Const(0.0),
        (Expr::Const(1.0), e) => e,
        (e, Expr::Const(1.0)) => e,
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(0.0), _) => Expr::Const(0.0),
        (e, Expr::Const(1.0)) => e,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}
