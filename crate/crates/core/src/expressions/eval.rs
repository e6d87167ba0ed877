//! Log-space evaluation.
//!
//! Intermediate values carry a sign next to their log10 magnitude so that
//! formulas like `2^-1` or `n - 1` evaluate; only the final result must be
//! nonnegative.

use super::ast::{BinOp, Func, Node, Var};
use super::EvalError;
use crate::logvalue::LogValue;
use crate::scalar::Scalar;

/// Variable values for one evaluation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bindings<T> {
    pub n: Option<LogValue<T>>,
    pub procs: Option<LogValue<T>>,
    pub q: Option<LogValue<T>>,
}

impl<T: Scalar> Bindings<T> {
    pub fn new() -> Self {
        Self {
            n: None,
            procs: None,
            q: None,
        }
    }

    pub fn with(mut self, var: Var, value: LogValue<T>) -> Self {
        match var {
            Var::N => self.n = Some(value),
            Var::Procs => self.procs = Some(value),
            Var::Q => self.q = Some(value),
        }
        self
    }

    pub fn get(&self, var: Var) -> Option<LogValue<T>> {
        match var {
            Var::N => self.n,
            Var::Procs => self.procs,
            Var::Q => self.q,
        }
    }
}

/// `(-1)^neg * 10^log10`; zero is `log10 == -inf` with `neg == false`.
#[derive(Clone, Copy, Debug)]
struct Signed<T> {
    neg: bool,
    log10: T,
}

impl<T: Scalar> Signed<T> {
    fn zero() -> Self {
        Self {
            neg: false,
            log10: T::neg_infinity(),
        }
    }

    fn is_zero(self) -> bool {
        self.log10 == T::neg_infinity()
    }

    fn from_linear(x: T) -> Self {
        if x == T::zero() {
            return Self::zero();
        }
        Self {
            neg: x < T::zero(),
            log10: x.abs().log10(),
        }
    }

    fn checked(neg: bool, log10: T) -> Result<Self, EvalError> {
        if log10.is_nan() {
            return Err(EvalError::Domain("undefined intermediate value".into()));
        }
        if log10 == T::infinity() {
            return Err(EvalError::Overflow);
        }
        if log10 == T::neg_infinity() {
            return Ok(Self::zero());
        }
        Ok(Self { neg, log10 })
    }

    /// Linear value; may be infinite for magnitudes beyond the scalar range.
    fn linear(self) -> T {
        if self.is_zero() {
            return T::zero();
        }
        let m = T::lit(10.0).powf(self.log10);
        if self.neg {
            -m
        } else {
            m
        }
    }

    fn add(self, rhs: Self) -> Result<Self, EvalError> {
        if self.is_zero() {
            return Ok(rhs);
        }
        if rhs.is_zero() {
            return Ok(self);
        }
        let (big, small) = if self.log10 >= rhs.log10 {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = T::lit(10.0).powf(small.log10 - big.log10);
        if big.neg == small.neg {
            return Self::checked(big.neg, big.log10 + gap.ln_1p() / T::LN_10());
        }
        // log-diff-exp
        let log10 = big.log10 + (-gap).ln_1p() / T::LN_10();
        if log10 == T::neg_infinity() || log10.is_nan() {
            return Err(EvalError::Domain(
                "subtraction cancels to zero; result cannot stay positive".into(),
            ));
        }
        Self::checked(big.neg, log10)
    }

    fn mul(self, rhs: Self) -> Result<Self, EvalError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        Self::checked(self.neg != rhs.neg, self.log10 + rhs.log10)
    }

    fn div(self, rhs: Self) -> Result<Self, EvalError> {
        if rhs.is_zero() {
            return Err(EvalError::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        Self::checked(self.neg != rhs.neg, self.log10 - rhs.log10)
    }

    fn pow(self, exponent: Self) -> Result<Self, EvalError> {
        let e = exponent.linear();
        if self.is_zero() {
            return if exponent.is_zero() {
                Ok(Self::from_linear(T::one()))
            } else if !exponent.neg {
                Ok(Self::zero())
            } else {
                Err(EvalError::Domain("zero raised to a negative power".into()))
            };
        }
        if exponent.is_zero() || self.log10 == T::zero() && !self.neg {
            return Ok(Self::from_linear(T::one()));
        }
        let neg = if self.neg {
            if e.is_infinite() || e.fract() != T::zero() {
                return Err(EvalError::Domain(
                    "negative base raised to a non-integer power".into(),
                ));
            }
            (e / T::lit(2.0)).fract() != T::zero()
        } else {
            false
        };
        Self::checked(neg, e * self.log10)
    }

    fn require_positive(self, what: &str) -> Result<T, EvalError> {
        if self.is_zero() || self.neg {
            return Err(EvalError::Domain(format!("{what} of a non-positive value")));
        }
        Ok(self.log10)
    }

    fn call(self, func: Func) -> Result<Self, EvalError> {
        match func {
            Func::Exp => Self::from_linear(T::E()).pow(self),
            Func::Ln => Ok(Self::from_linear(self.require_positive("ln")? * T::LN_10())),
            Func::Log2 => Ok(Self::from_linear(
                self.require_positive("log2")? / T::LOG10_2(),
            )),
            Func::Log10 => Ok(Self::from_linear(self.require_positive("log10")?)),
            Func::Sqrt => {
                if self.neg {
                    return Err(EvalError::Domain("sqrt of a negative value".into()));
                }
                Self::checked(false, self.log10 / T::lit(2.0))
            }
        }
    }
}

pub(super) fn eval<T: Scalar>(node: &Node<T>, b: &Bindings<T>) -> Result<LogValue<T>, EvalError> {
    let v = eval_signed(node, b)?;
    if v.neg {
        return Err(EvalError::Domain("expression evaluates to a negative value".into()));
    }
    Ok(if v.is_zero() {
        LogValue::zero()
    } else {
        LogValue::from_log10(v.log10)
    })
}

fn eval_signed<T: Scalar>(node: &Node<T>, b: &Bindings<T>) -> Result<Signed<T>, EvalError> {
    match node {
        Node::Const(c) => Ok(Signed::from_linear(*c)),
        Node::Var(v) => {
            let value = b.get(*v).ok_or(EvalError::Unbound(*v))?;
            Ok(Signed {
                neg: false,
                log10: value.log10_magnitude(),
            })
        }
        Node::Neg(x) => {
            let v = eval_signed(x, b)?;
            Ok(if v.is_zero() {
                v
            } else {
                Signed {
                    neg: !v.neg,
                    log10: v.log10,
                }
            })
        }
        Node::Call(f, x) => eval_signed(x, b)?.call(*f),
        Node::Binary(op, lhs, rhs) => {
            let a = eval_signed(lhs, b)?;
            let c = eval_signed(rhs, b)?;
            match op {
                BinOp::Add => a.add(c),
                BinOp::Sub => a.add(Signed {
                    neg: !c.neg && !c.is_zero(),
                    log10: c.log10,
                }),
                BinOp::Mul => a.mul(c),
                BinOp::Div => a.div(c),
                BinOp::Pow => a.pow(c),
            }
        }
    }
}
