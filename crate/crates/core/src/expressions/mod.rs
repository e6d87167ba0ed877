//! Closed-form runtime, work and penalty formulas.
//!
//! Formulas are parsed once and evaluated many times in log10 space, so sizes
//! like `10^40` bits or `2^q` for hundreds of qubits never materialize as
//! linear floats.

mod ast;
mod eval;
mod parser;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use ast::{BinOp, Func, Node, Var, VarSet};
pub use eval::Bindings;

use crate::logvalue::LogValue;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at {position} (allowed: {allowed})")]
    UnknownVariable {
        position: usize,
        name: String,
        allowed: String,
    },
    #[error("unknown function '{name}' at {position}")]
    UnknownFunction { position: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("log10 magnitude exceeds the representable range")]
    Overflow,
    #[error("variable '{0}' is not bound")]
    Unbound(Var),
}

/// A parsed formula together with the text it came from.
#[derive(Clone, Debug)]
pub struct Expression<T> {
    ast: Node<T>,
    source: String,
}

impl<T: Scalar> Expression<T> {
    pub fn parse(source: &str, allowed: VarSet) -> Result<Self, ParseError> {
        let ast = parser::parse(source, allowed)?;
        Ok(Self {
            ast,
            source: source.to_string(),
        })
    }

    pub fn from_ast(ast: Node<T>) -> Self {
        let source = ast.to_string();
        Self { ast, source }
    }

    pub fn ast(&self) -> &Node<T> {
        &self.ast
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn variables(&self) -> VarSet {
        self.ast.variables()
    }

    /// `log10` of the formula's value at the bound variables.
    pub fn eval_log10(&self, bindings: &Bindings<T>) -> Result<LogValue<T>, EvalError> {
        eval::eval(&self.ast, bindings)
    }

    pub fn substitute(&self, var: Var, value: T) -> Self {
        Self::from_ast(self.ast.substitute(var, value))
    }

    /// `(self) * rhs`, used to derive quantum work from a runtime.
    pub fn times_var(&self, var: Var) -> Self {
        Self::from_ast(Node::binary(BinOp::Mul, self.ast.clone(), Node::Var(var)))
    }
}

/// Two expressions are equal when their trees are; source spacing is ignored.
impl<T: PartialEq> PartialEq for Expression<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl<T> fmt::Display for Expression<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl<T> Serialize for Expression<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}
