use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on mantissa width during escalation.
pub const DEFAULT_CAP_BITS: u32 = 4096;

/// Working mantissa width for extended-precision sign decisions.
///
/// A computed value is trusted only when it exceeds
/// `decision_margin * scale`, where `scale` is the largest intermediate
/// term and `decision_margin = 2^(-bits/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    mantissa_bits: u32,
    cap_bits: u32,
}

impl PrecisionContext {
    pub fn new(mantissa_bits: u32) -> Result<Self> {
        if mantissa_bits < 53 {
            return Err(Error::InvalidInput(format!(
                "precision of {mantissa_bits} bits is below double precision"
            )));
        }
        Ok(PrecisionContext {
            mantissa_bits,
            cap_bits: DEFAULT_CAP_BITS.max(mantissa_bits),
        })
    }

    /// 256 bits up to degree 200, 1024 bits up to 1500, 2048 beyond.
    pub fn for_degree(n: usize) -> Self {
        let bits = if n <= 200 {
            256
        } else if n <= 1500 {
            1024
        } else {
            2048
        };
        PrecisionContext {
            mantissa_bits: bits,
            cap_bits: DEFAULT_CAP_BITS,
        }
    }

    pub fn with_cap(mut self, cap_bits: u32) -> Self {
        self.cap_bits = cap_bits.max(self.mantissa_bits);
        self
    }

    pub fn bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    /// `log2` of the decision margin.
    pub fn margin_log2(&self) -> i32 {
        -((self.mantissa_bits / 4) as i32)
    }

    /// The decision margin as an `f64`; underflows to zero past ~4200 bits.
    pub fn decision_margin(&self) -> f64 {
        2f64.powi(self.margin_log2())
    }

    /// The decision margin at working precision.
    pub fn margin(&self) -> Float {
        Float::with_val(self.mantissa_bits, 1) << self.margin_log2()
    }

    /// Doubles the mantissa width, or `None` once past the cap.
    pub fn escalate(&self) -> Option<Self> {
        let next = self.mantissa_bits.checked_mul(2)?;
        (next <= self.cap_bits).then_some(PrecisionContext {
            mantissa_bits: next,
            cap_bits: self.cap_bits,
        })
    }

    /// Sign of `value` if it clears the margin relative to `scale`.
    pub fn decide(&self, value: &Float, scale: &Float) -> Result<i8> {
        let threshold = Float::with_val(self.mantissa_bits, scale.clone().abs() * self.margin());
        if value.clone().abs() > threshold {
            Ok(if value.is_sign_negative() { -1 } else { 1 })
        } else {
            Err(Error::NeedsMorePrecision {
                bits: self.mantissa_bits,
                magnitude: value.to_f64().abs(),
            })
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            mantissa_bits: 256,
            cap_bits: DEFAULT_CAP_BITS,
        }
    }
}
