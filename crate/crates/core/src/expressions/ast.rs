use std::fmt;

use crate::scalar::Scalar;

/// Free variables a runtime formula may reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Problem size.
    N,
    /// Classical processor count, `10^p` adjusted over time.
    Procs,
    /// Logical qubits, `QPS^-1(n)`.
    Q,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::N, Var::Procs, Var::Q];

    pub fn name(self) -> &'static str {
        match self {
            Var::N => "n",
            Var::Procs => "procs",
            Var::Q => "q",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "n" => Some(Var::N),
            "procs" => Some(Var::Procs),
            "q" => Some(Var::Q),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Var::N => 1,
            Var::Procs => 2,
            Var::Q => 4,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Set of variables allowed in one formula slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);
    /// Classical runtime `C(n, procs)`.
    pub const CLASSICAL_RUNTIME: VarSet = VarSet(1 | 2);
    /// Quantum runtime `Q(n)` and classical work `C_w(n)`.
    pub const SIZE_ONLY: VarSet = VarSet(1);
    /// Quantum work `Q_w(n, q)`.
    pub const QUANTUM_WORK: VarSet = VarSet(1 | 4);
    /// Connectivity penalty `P(q)`.
    pub const PENALTY: VarSet = VarSet(4);
    pub const ALL: VarSet = VarSet(1 | 2 | 4);

    pub fn of(vars: &[Var]) -> VarSet {
        VarSet(vars.iter().fold(0, |acc, v| acc | v.bit()))
    }

    pub fn contains(self, var: Var) -> bool {
        self.0 & var.bit() != 0
    }

    pub fn with(self, var: Var) -> VarSet {
        VarSet(self.0 | var.bit())
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        Var::ALL.into_iter().filter(move |v| self.contains(*v))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(Var::name).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Log2,
    Log10,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Log2 => "log2",
            Func::Log10 => "log10",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "log2" => Some(Func::Log2),
            "log10" => Some(Func::Log10),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

#[derive(Clone, Debug, PartialEq)]
pub enum Node<T> {
    Const(T),
    Var(Var),
    Neg(Box<Node<T>>),
    Binary(BinOp, Box<Node<T>>, Box<Node<T>>),
    Call(Func, Box<Node<T>>),
}

impl<T: Scalar> Node<T> {
    pub fn binary(op: BinOp, lhs: Node<T>, rhs: Node<T>) -> Self {
        Node::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Node<T>) -> Self {
        Node::Call(func, Box::new(arg))
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Const(c) if *c < T::zero() => PREC_NEG,
            Node::Const(_) | Node::Var(_) | Node::Call(..) => PREC_ATOM,
            Node::Neg(_) => PREC_NEG,
            Node::Binary(op, ..) => op.precedence(),
        }
    }

    /// Every variable the tree references.
    pub fn variables(&self) -> VarSet {
        match self {
            Node::Const(_) => VarSet::EMPTY,
            Node::Var(v) => VarSet::EMPTY.with(*v),
            Node::Neg(x) | Node::Call(_, x) => x.variables(),
            Node::Binary(_, a, b) => VarSet(a.variables().0 | b.variables().0),
        }
    }

    /// Replaces `var` by a constant.
    pub fn substitute(&self, var: Var, value: T) -> Node<T> {
        match self {
            Node::Var(v) if *v == var => Node::Const(value),
            Node::Const(_) | Node::Var(_) => self.clone(),
            Node::Neg(x) => Node::Neg(Box::new(x.substitute(var, value))),
            Node::Call(f, x) => Node::call(*f, x.substitute(var, value)),
            Node::Binary(op, a, b) => {
                Node::binary(*op, a.substitute(var, value), b.substitute(var, value))
            }
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the minimum parentheses needed to parse back into the same tree.
impl<T: Scalar> fmt::Display for Node<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(v) => write!(f, "{v}"),
            Node::Neg(x) => {
                f.write_str("-")?;
                x.fmt_child(f, PREC_NEG)
            }
            Node::Call(func, x) => write!(f, "{}({x})", func.name()),
            Node::Binary(BinOp::Pow, a, b) => {
                a.fmt_child(f, PREC_ATOM)?;
                f.write_str("^")?;
                b.fmt_child(f, PREC_NEG)
            }
            Node::Binary(op, a, b) => {
                let p = op.precedence();
                a.fmt_child(f, p)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_child(f, p + 1)
            }
        }
    }
}
