//! Shared exact-arithmetic helpers: big-integer to float conversions that
//! stay accurate for moduli far beyond 64 bits, plus bit/index utilities.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Fractional bits used when converting an exact ratio to `f64`.
///
/// `r/m` is computed as `floor(r * 2^127 / m) / 2^127`; the truncation error
/// is far below half an ulp of any `f64` in [0,1), so the result is the
/// correctly rounded quotient for all practical inputs, including moduli
/// with hundreds of bits.
const RATIO_FRACTION_BITS: usize = 127;

/// Exact `r/m` as `f64`, for `0 <= r < m`.
pub(crate) fn ratio_to_f64(r: &BigUint, m: &BigUint) -> f64 {
    debug_assert!(r < m, "ratio_to_f64 expects a reduced residue");
    let q = (r << RATIO_FRACTION_BITS) / m;
    let q = q
        .to_u128()
        .expect("quotient of a reduced residue fits in 128 bits");
    (q as f64) * (2f64).powi(-(RATIO_FRACTION_BITS as i32))
}

/// `cos` and `sin` of `2*pi*r/m` with the ratio taken exactly.
pub(crate) fn trig_of_residue(r: &BigUint, m: &BigUint) -> (f64, f64) {
    let angle = std::f64::consts::TAU * ratio_to_f64(r, m);
    (angle.cos(), angle.sin())
}

/// `cos(2*pi*r/m)` with the ratio taken exactly.
pub(crate) fn cos_of_residue(r: &BigUint, m: &BigUint) -> f64 {
    trig_of_residue(r, m).0
}

/// Base-2 logarithm of an arbitrary-precision natural, accurate to f64
/// precision even when the value overflows `f64`.
pub(crate) fn log2_biguint(m: &BigUint) -> f64 {
    let bits = m.bits();
    if bits <= 53 {
        return m.to_f64().expect("fits f64").log2();
    }
    let shift = bits - 53;
    let top = (m >> shift).to_f64().expect("53-bit value fits f64");
    top.log2() + shift as f64
}

/// `ceil(log2(d))` for `d >= 1`.
pub(crate) fn ceil_log2(d: usize) -> u32 {
    debug_assert!(d >= 1);
    usize::BITS - (d - 1).leading_zeros().min(usize::BITS)
}

/// Unpacks assignment index `idx` into a bit vector of length `n`:
/// bit `i` (0-based) is variable `x_{i+1}`.
pub(crate) fn index_to_bits(idx: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (idx >> i) & 1 == 1).collect()
}
