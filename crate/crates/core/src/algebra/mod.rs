//! Real-exponent power sums in one variable and certified sign checks.

mod certify;
mod interval;
mod power_sum;

pub use certify::{certify_sign, CertifyOptions, SignClaim, SignVerdict, VerdictKind};
pub use interval::{Interval, ABS_INFLATION, REL_INFLATION};
pub use power_sum::{PowerSum, Term};
