//! Signed log-domain scalars.
//!
//! Coefficient products in the series expansions multiply factorials,
//! gamma-function ratios, and powers of rates; for moderate parameters these
//! overflow `f64` long before the final (order-one) result is assembled.
//! [`LogNum`] carries the natural log of the magnitude together with a sign,
//! so products are additions and sums go through log-sum-exp.

use std::cmp::Ordering;

/// A real number stored as `sign * exp(ln_mag)`.
///
/// `sign == 0` means exactly zero and `ln_mag` is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNum {
    pub ln_mag: f64,
    pub sign: i8,
}

impl LogNum {
    pub const ZERO: LogNum = LogNum {
        ln_mag: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogNum = LogNum { ln_mag: 0.0, sign: 1 };

    pub fn new(ln_mag: f64, sign: i8) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 || ln_mag == f64::NEG_INFINITY {
            LogNum::ZERO
        } else {
            LogNum { ln_mag, sign }
        }
    }

    /// Positive number from its natural log.
    pub fn from_ln(ln_mag: f64) -> Self {
        Self::new(ln_mag, 1)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            LogNum::ZERO
        } else if x > 0.0 {
            LogNum { ln_mag: x.ln(), sign: 1 }
        } else {
            LogNum { ln_mag: (-x).ln(), sign: -1 }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            1 => self.ln_mag.exp(),
            _ => -self.ln_mag.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            LogNum::ZERO
        } else {
            LogNum { ln_mag: self.ln_mag, sign: 1 }
        }
    }

    pub fn neg(self) -> Self {
        LogNum { ln_mag: self.ln_mag, sign: -self.sign }
    }

    pub fn mul(self, other: Self) -> Self {
        let sign = self.sign * other.sign;
        if sign == 0 {
            LogNum::ZERO
        } else {
            LogNum { ln_mag: self.ln_mag + other.ln_mag, sign }
        }
    }

    pub fn div(self, other: Self) -> Self {
        debug_assert!(other.sign != 0, "division by log-domain zero");
        let sign = self.sign * other.sign;
        if sign == 0 {
            LogNum::ZERO
        } else {
            LogNum { ln_mag: self.ln_mag - other.ln_mag, sign }
        }
    }

    /// Integer power; `0^0 = 1`.
    pub fn powi(self, k: u32) -> Self {
        if k == 0 {
            return LogNum::ONE;
        }
        if self.sign == 0 {
            return LogNum::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 == 1 { -1 } else { 1 };
        LogNum { ln_mag: self.ln_mag * k as f64, sign }
    }

    /// Signed addition via log-sum-exp / log-diff-exp.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        // Order by magnitude so the exp argument is <= 0.
        let (big, small) = if self.ln_mag >= other.ln_mag {
            (self, other)
        } else {
            (other, self)
        };
        let d = small.ln_mag - big.ln_mag; // <= 0
        if big.sign == small.sign {
            LogNum {
                ln_mag: big.ln_mag + d.exp().ln_1p(),
                sign: big.sign,
            }
        } else {
            // |big| - |small|
            let t = -d.exp(); // in (-1, 0]
            if t == -1.0 {
                LogNum::ZERO
            } else {
                LogNum {
                    ln_mag: big.ln_mag + t.ln_1p(),
                    sign: big.sign,
                }
            }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Magnitude comparison, ignoring signs.
    pub fn cmp_mag(self, other: Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .ln_mag
                .partial_cmp(&other.ln_mag)
                .unwrap_or(Ordering::Equal),
        }
    }
}

/// Log-sum-exp of a slice of positive log-magnitudes. Returns the natural
/// log of the sum. Empty input yields `-inf`.
pub fn ln_sum_exp(lns: &[f64]) -> f64 {
    let m = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = lns.iter().map(|&l| (l - m).exp()).sum();
    m + s.ln()
}

/// Sign-segregated sum of signed log-domain values: positives and negatives
/// are each accumulated by log-sum-exp, then combined with one subtraction.
/// Order-independent up to rounding in the two accumulations.
pub fn signed_sum(vals: &[LogNum]) -> LogNum {
    let pos: Vec<f64> = vals
        .iter()
        .filter(|v| v.sign > 0)
        .map(|v| v.ln_mag)
        .collect();
    let neg: Vec<f64> = vals
        .iter()
        .filter(|v| v.sign < 0)
        .map(|v| v.ln_mag)
        .collect();
    let p = LogNum::new(ln_sum_exp(&pos), if pos.is_empty() { 0 } else { 1 });
    let n = LogNum::new(ln_sum_exp(&neg), if neg.is_empty() { 0 } else { 1 });
    p.sub(n)
}
