use serde::{Deserialize, Serialize};

use crate::expressions::EvalError;
use crate::logvalue::LogValue;
use crate::scalar::Scalar;

/// Qubit-to-problem-size map: the largest problem `q` logical qubits can hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QpsKind {
    /// `n = 2^q`, e.g. search over `2^q` items.
    Exponential,
    /// `n = q`, e.g. factoring an `n`-bit number.
    Linear,
    /// `n = log2(q)`.
    Logarithmic,
}

impl QpsKind {
    /// Problem size reachable with `q` logical qubits.
    ///
    /// The logarithmic map yields zero for `q <= 1` (no problem fits).
    pub fn forward<T: Scalar>(self, q: LogValue<T>) -> Result<LogValue<T>, EvalError> {
        match self {
            QpsKind::Exponential => {
                let log10_n = q.to_linear() * T::LOG10_2();
                if log10_n.is_infinite() {
                    return Err(EvalError::Overflow);
                }
                Ok(LogValue::from_log10(log10_n))
            }
            QpsKind::Linear => Ok(q),
            QpsKind::Logarithmic => {
                if q.log10_magnitude() <= T::zero() {
                    return Ok(LogValue::zero());
                }
                let log2_q = q.log10_magnitude() / T::LOG10_2();
                Ok(LogValue::from_log10(log2_q.log10()))
            }
        }
    }

    /// Logical qubits needed for a size-`n` problem, `n >= 1`.
    pub fn inverse<T: Scalar>(self, n: LogValue<T>) -> Result<LogValue<T>, EvalError> {
        match self {
            QpsKind::Exponential => {
                let log2_n = n.log10_magnitude().max(T::zero()) / T::LOG10_2();
                Ok(LogValue::from_linear(log2_n).expect("finite nonnegative"))
            }
            QpsKind::Linear => Ok(n),
            QpsKind::Logarithmic => {
                let log10_q = n.to_linear() * T::LOG10_2();
                if log10_q.is_infinite() {
                    return Err(EvalError::Overflow);
                }
                Ok(LogValue::from_log10(log10_q))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_values() {
        let ten = LogValue::from_linear(10.0_f64).unwrap();
        let e = QpsKind::Exponential.forward(ten).unwrap();
        assert!((e.to_linear() - 1024.0).abs() < 1e-9);
        assert_eq!(QpsKind::Linear.forward(ten).unwrap(), ten);
        let l = QpsKind::Logarithmic
            .forward(LogValue::from_linear(1024.0_f64).unwrap())
            .unwrap();
        assert!((l.to_linear() - 10.0).abs() < 1e-12);
        assert!(QpsKind::Logarithmic
            .forward(LogValue::from_linear(1.0_f64).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn inverse_values() {
        let n = LogValue::from_linear(1024.0_f64).unwrap();
        assert!((QpsKind::Exponential.inverse(n).unwrap().to_linear() - 10.0).abs() < 1e-12);
        assert!(QpsKind::Exponential
            .inverse(LogValue::<f64>::one())
            .unwrap()
            .is_zero());
        let q = QpsKind::Logarithmic
            .inverse(LogValue::from_linear(10.0_f64).unwrap())
            .unwrap();
        assert!((q.to_linear() - 1024.0).abs() < 1e-9);
        assert!(matches!(
            QpsKind::Logarithmic.inverse(LogValue::from_log10(400.0_f64)),
            Err(EvalError::Overflow)
        ));
    }
}
