//! Lower-bound calculators for read-once programs.
//!
//! The deterministic-OBDD side is computed exactly by subfunction counting:
//! for a fixed variable order, the minimal deterministic width is the
//! largest number of distinct restrictions of `f` obtained by fixing the
//! first `j` variables, maximized over `j`. A quantum program computing the
//! same function with bounded error can then be no narrower than
//! `log(width) / (2*log(1 + 1/margin))` (the log ratio is base-invariant).
//!
//! Exact minimization over variable orders is exponential; callers either
//! supply an order (any fixed order upper-bounds the minimal width, which
//! can only weaken the resulting quantum bound) or request the exhaustive
//! search, which is limited to 8 variables.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qbp::QbpProgram;

/// Cap on subfunction counting (truth table of 2^20 entries).
pub const DET_WIDTH_CAP: usize = 20;

/// Cap on exhaustive order search (8! orders).
pub const ORDER_SEARCH_CAP: usize = 8;

fn validate_order(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: order.len(),
        });
    }
    let mut seen = vec![false; n + 1];
    for &v in order {
        if v < 1 || v > n {
            return Err(Error::VariableOutOfRange(v));
        }
        if seen[v] {
            return Err(Error::DuplicateVariable(v));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Truth table of `f` with the order's first variable as the most
/// significant index bit.
fn ordered_truth_table<F>(f: F, n: usize, order: &[usize]) -> Vec<bool>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    let total = 1usize << n;
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut input = vec![false; n];
            for (k, &var) in order.iter().enumerate() {
                input[var - 1] = (idx >> (n - 1 - k)) & 1 == 1;
            }
            f(&input)
        })
        .collect()
}

/// Distinct-subfunction count per level (level `j` fixes the first `j`
/// variables of the order; level 0 is the whole function).
pub fn det_obdd_profile<F>(f: F, n: usize, order: &[usize]) -> Result<Vec<usize>>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    if n > DET_WIDTH_CAP {
        return Err(Error::EnumerationCapExceeded { n, cap: DET_WIDTH_CAP });
    }
    validate_order(order, n)?;
    let table = ordered_truth_table(f, n, order);
    let mut profile = Vec::with_capacity(n + 1);
    for level in 0..=n {
        let chunk = 1usize << (n - level);
        let distinct: HashSet<&[bool]> = table.chunks(chunk).collect();
        profile.push(distinct.len());
    }
    Ok(profile)
}

/// Minimal deterministic OBDD width for the given order: the maximum of the
/// per-level subfunction counts.
pub fn det_obdd_width<F>(f: F, n: usize, order: &[usize]) -> Result<usize>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    Ok(det_obdd_profile(f, n, order)?.into_iter().max().unwrap_or(1))
}

/// Exhaustive minimization of [`det_obdd_width`] over all `n!` orders
/// (`n <= 8`). Ties resolve to the lexicographically smallest order.
pub fn det_obdd_width_min_over_orders<F>(f: F, n: usize) -> Result<(usize, Vec<usize>)>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    if n > ORDER_SEARCH_CAP {
        return Err(Error::EnumerationCapExceeded { n, cap: ORDER_SEARCH_CAP });
    }
    let mut orders = Vec::new();
    let mut current: Vec<usize> = (1..=n).collect();
    permutations(&mut current, 0, &mut orders);
    orders.sort_unstable();
    let f_ref = &f;
    let best = orders
        .into_par_iter()
        .map(|order| {
            let width = det_obdd_width(f_ref, n, &order).expect("validated order");
            (width, order)
        })
        .min()
        .expect("at least one order");
    Ok(best)
}

fn permutations(items: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, out);
        items.swap(start, i);
    }
}

/// Width every bounded-error quantum read-once program must reach:
/// `log2(det_width) / (2*log2(1 + 1/margin))` for a margin in (0, 1/2).
pub fn qobdd_width_lower_bound(det_width: usize, margin: f64) -> Result<f64> {
    if det_width < 1 {
        return Err(Error::invalid("deterministic width must be at least 1"));
    }
    if !(margin > 0.0 && margin < 0.5) {
        return Err(Error::invalid(format!("margin {margin} outside (0, 1/2)")));
    }
    Ok((det_width as f64).log2() / (2.0 * (1.0 + 1.0 / margin).log2()))
}

/// Asymptotic qubit witness `log2(bits)` for a deterministic implementation
/// using `bits` bits of memory. This reports the scale of an Omega bound,
/// not a constant-factor guarantee.
pub fn qubit_bound_witness(bits: u64) -> Result<f64> {
    if bits < 1 {
        return Err(Error::invalid("bit count must be at least 1"));
    }
    Ok((bits as f64).log2())
}

/// Evaluates `q(p(n))` exactly: the size transfer along a read-once
/// projection with blowup `p` applied to a family of OBDD size `q`.
/// Coefficients are ascending in degree.
pub fn rop_size_transfer(q_coeffs: &[BigUint], p_coeffs: &[BigUint], n: u64) -> BigUint {
    let eval = |coeffs: &[BigUint], x: &BigUint| -> BigUint {
        let mut acc = BigUint::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let inner = eval(p_coeffs, &BigUint::from(n));
    eval(q_coeffs, &inner)
}

/// Consistency check: the program's measured width respects the quantum
/// lower bound induced by the deterministic width of `f` under the given
/// order and margin. Any correct bounded-error program satisfies this.
pub fn check_width_bound<F>(
    program: &QbpProgram,
    f: F,
    order: &[usize],
    margin: f64,
) -> Result<bool>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    let det = det_obdd_width(f, program.n_vars(), order)?;
    let bound = qobdd_width_lower_bound(det, margin)?;
    Ok(program.measures().width as f64 >= bound)
}
