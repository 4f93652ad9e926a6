//! Exact arithmetic for linear and multilinear polynomials over Z_m.
//!
//! A polynomial `g` over Z_m is a *characteristic polynomial* of a Boolean
//! function `f` when `g(sigma) = 0` exactly on `f^{-1}(1)`. This module holds
//! the polynomial types, the sum-of-products construction that produces a
//! characteristic polynomial for any function, and exhaustive verifiers.
//!
//! All coefficients are canonical residues in `[0, m)`; subtraction is
//! encoded as `m - c`. Moduli are arbitrary-precision (they reach `2^n` and
//! `(n+1)^{2n}` in practice), so every evaluation is exact.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::index_to_bits;
use crate::error::{Error, Result};

/// Default cap on exhaustive enumeration (2^22 evaluations).
pub const DEFAULT_ENUM_CAP: usize = 22;

/// Cap on the number of terms a multilinear expansion may grow to.
pub const TERM_CAP: usize = 1 << 20;

/// A modulus `m >= 2`, arbitrary precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(BigUint);

impl Modulus {
    pub fn new(m: BigUint) -> Result<Self> {
        if m < BigUint::from(2u8) {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        Ok(Modulus(m))
    }

    pub fn from_u64(m: u64) -> Result<Self> {
        Self::new(BigUint::from(m))
    }

    /// `2^n` as a modulus; requires `n >= 1`.
    pub fn two_pow(n: usize) -> Result<Self> {
        Self::new(BigUint::one() << n)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn reduce(&self, v: &BigUint) -> BigUint {
        v % &self.0
    }

    /// Reduces a signed value into the canonical residue range `[0, m)`.
    pub fn reduce_signed(&self, v: &BigInt) -> BigUint {
        let m = BigInt::from(self.0.clone());
        v.mod_floor(&m)
            .to_biguint()
            .expect("mod_floor of a positive modulus is non-negative")
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Common surface of the polynomial representations over Z_m.
pub trait Poly {
    fn n_vars(&self) -> usize;
    fn modulus(&self) -> &Modulus;
    /// Exact evaluation at a 0/1 point; `input[i]` is variable `x_{i+1}`.
    fn eval(&self, input: &[bool]) -> Result<BigUint>;
}

/// `c0 + c_1 x_1 + ... + c_n x_n` over Z_m, coefficients stored reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearPoly {
    modulus: Modulus,
    c0: BigUint,
    coeffs: Vec<BigUint>,
}

impl LinearPoly {
    pub fn new(modulus: Modulus, c0: BigUint, coeffs: Vec<BigUint>) -> Self {
        let c0 = modulus.reduce(&c0);
        let coeffs = coeffs.iter().map(|c| modulus.reduce(c)).collect();
        LinearPoly { modulus, c0, coeffs }
    }

    /// Builds from signed coefficients; negatives land on `m - c`.
    pub fn from_signed(modulus: Modulus, c0: BigInt, coeffs: Vec<BigInt>) -> Self {
        let c0 = modulus.reduce_signed(&c0);
        let coeffs = coeffs.iter().map(|c| modulus.reduce_signed(c)).collect();
        LinearPoly { modulus, c0, coeffs }
    }

    /// The zero polynomial on `n` variables (vanishes everywhere).
    pub fn zero(modulus: Modulus, n: usize) -> Self {
        LinearPoly {
            c0: BigUint::zero(),
            coeffs: vec![BigUint::zero(); n],
            modulus,
        }
    }

    pub fn c0(&self) -> &BigUint {
        &self.c0
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Coefficient of variable `x_j`, 1-based.
    pub fn coeff(&self, j: usize) -> &BigUint {
        &self.coeffs[j - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Integer value `c0 + sum of selected coefficients`, without the final
    /// reduction. Used where the unreduced accumulation matters.
    pub(crate) fn eval_unreduced(&self, input: &[bool]) -> Result<BigUint> {
        if input.len() != self.coeffs.len() {
            return Err(Error::LengthMismatch {
                expected: self.coeffs.len(),
                got: input.len(),
            });
        }
        let mut acc = self.c0.clone();
        for (c, &bit) in self.coeffs.iter().zip(input) {
            if bit {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// Re-embeds into a larger modulus that the current one divides,
    /// scaling all coefficients by `new/m` so the zero set is preserved.
    pub fn lift_to(&self, new_modulus: &Modulus) -> Result<LinearPoly> {
        let (scale, rem) = new_modulus.value().div_rem(self.modulus.value());
        if !rem.is_zero() {
            return Err(Error::invalid(format!(
                "cannot lift: {} does not divide {}",
                self.modulus, new_modulus
            )));
        }
        Ok(LinearPoly {
            modulus: new_modulus.clone(),
            c0: &self.c0 * &scale,
            coeffs: self.coeffs.iter().map(|c| c * &scale).collect(),
        })
    }
}

impl Poly for LinearPoly {
    fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    fn eval(&self, input: &[bool]) -> Result<BigUint> {
        Ok(self.modulus.reduce(&self.eval_unreduced(input)?))
    }
}

/// Sum of terms `coeff * prod_{j in vars} x_j` over Z_m. Variable sets are
/// distinct, coefficients reduced and nonzero; the empty set is the constant
/// term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    modulus: Modulus,
    n: usize,
    terms: BTreeMap<Vec<usize>, BigUint>,
}

impl MultilinearPoly {
    pub fn new(
        modulus: Modulus,
        n: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, BigUint)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
        for (mut vars, coeff) in terms {
            vars.sort_unstable();
            vars.dedup();
            for &v in &vars {
                if v < 1 || v > n {
                    return Err(Error::VariableOutOfRange(v));
                }
            }
            let entry = map.entry(vars).or_default();
            *entry = modulus.reduce(&(&*entry + coeff));
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultilinearPoly { modulus, n, terms: map })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &BigUint)> {
        self.terms.iter().map(|(v, c)| (v.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Maximum variable-set size across terms.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|v| v.len()).max().unwrap_or(0)
    }

    /// The linear form, if every term touches at most one variable.
    pub fn try_as_linear(&self) -> Option<LinearPoly> {
        if self.degree() > 1 {
            return None;
        }
        let mut c0 = BigUint::zero();
        let mut coeffs = vec![BigUint::zero(); self.n];
        for (vars, c) in &self.terms {
            match vars.as_slice() {
                [] => c0 = c.clone(),
                [j] => coeffs[j - 1] = c.clone(),
                _ => unreachable!(),
            }
        }
        Some(LinearPoly {
            modulus: self.modulus.clone(),
            c0,
            coeffs,
        })
    }
}

impl Poly for MultilinearPoly {
    fn n_vars(&self) -> usize {
        self.n
    }

    fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    fn eval(&self, input: &[bool]) -> Result<BigUint> {
        if input.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: input.len(),
            });
        }
        let mut acc = BigUint::zero();
        for (vars, coeff) in &self.terms {
            if vars.iter().all(|&j| input[j - 1]) {
                acc += coeff;
            }
        }
        Ok(self.modulus.reduce(&acc))
    }
}

/// One literal of a DNF clause: a variable index (1-based) and a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }
}

/// A disjunction of conjunctive clauses. Each clause is a list of literals
/// over distinct variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfFormula {
    clauses: Vec<Vec<Literal>>,
}

impl DnfFormula {
    pub fn new(clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for clause in &clauses {
            let mut seen = HashSet::new();
            for lit in clause {
                if lit.var < 1 {
                    return Err(Error::VariableOutOfRange(lit.var));
                }
                if !seen.insert(lit.var) {
                    return Err(Error::DuplicateVariable(lit.var));
                }
            }
        }
        Ok(DnfFormula { clauses })
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Evaluates the formula itself (true iff some clause is satisfied).
    pub fn eval(&self, input: &[bool]) -> bool {
        self.clauses.iter().any(|clause| {
            clause
                .iter()
                .all(|lit| input[lit.var - 1] == lit.positive)
        })
    }
}

/// Builds a characteristic polynomial of `f` over `Z_{2^n}` from a DNF of
/// the *negation* of `f`: each clause becomes a product of its literals with
/// negated literals replaced by `(1 - x_j)`, and the clause products are
/// summed and expanded to multilinear normal form.
///
/// Distinct clauses are summed at most once: at any point at most `2^n - 1`
/// distinct products evaluate to 1 simultaneously, so the sum can never wrap
/// to 0 mod `2^n` on an input where the negation holds.
///
/// An empty clause list denotes the constant-false negation (`f == 1`) and
/// yields the zero polynomial. A clause with no literals would make `f`
/// constant-false; that case is rejected rather than guessed.
pub fn dnf_to_char_poly(dnf: &DnfFormula, n: usize) -> Result<MultilinearPoly> {
    let modulus = Modulus::two_pow(n.max(1))?;
    for clause in dnf.clauses() {
        if clause.is_empty() {
            return Err(Error::invalid(
                "empty clause makes the function constant-false; no characteristic polynomial is constructed for constants",
            ));
        }
        for lit in clause {
            if lit.var > n {
                return Err(Error::VariableOutOfRange(lit.var));
            }
        }
    }

    // Normalize and deduplicate clauses.
    let mut normalized: Vec<Vec<Literal>> = dnf
        .clauses()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    normalized.sort_unstable();
    normalized.dedup();

    let m = modulus.value().clone();
    let mut acc: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
    for clause in &normalized {
        // Expand the clause product term by term.
        let mut product: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
        product.insert(Vec::new(), BigUint::one());
        for lit in clause {
            let mut next: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
            for (vars, coeff) in &product {
                let mut with_var = vars.clone();
                with_var.push(lit.var);
                with_var.sort_unstable();
                if lit.positive {
                    let e = next.entry(with_var).or_default();
                    *e = (&*e + coeff) % &m;
                } else {
                    // (1 - x_j): keep the term and subtract the term * x_j.
                    let e = next.entry(vars.clone()).or_default();
                    *e = (&*e + coeff) % &m;
                    let neg = (&m - coeff % &m) % &m;
                    let e = next.entry(with_var).or_default();
                    *e = (&*e + neg) % &m;
                }
            }
            next.retain(|_, c| !c.is_zero());
            if next.len() > TERM_CAP {
                return Err(Error::TermCapExceeded { cap: TERM_CAP });
            }
            product = next;
        }
        for (vars, coeff) in product {
            let e = acc.entry(vars).or_default();
            *e = (&*e + coeff) % &m;
        }
        acc.retain(|_, c| !c.is_zero());
        if acc.len() > TERM_CAP {
            return Err(Error::TermCapExceeded { cap: TERM_CAP });
        }
    }

    MultilinearPoly::new(modulus, n, acc)
}

/// Returns the linear form of `p` when its degree is at most one.
pub fn try_as_linear(p: &MultilinearPoly) -> Option<LinearPoly> {
    p.try_as_linear()
}

/// True iff `g(sigma) = 0 <=> f(sigma) = 1` over all `2^n` inputs, with the
/// default enumeration cap.
pub fn is_characteristic<P, F>(g: &P, f: F) -> Result<bool>
where
    P: Poly + Sync,
    F: Fn(&[bool]) -> bool + Sync,
{
    is_characteristic_capped(g, f, DEFAULT_ENUM_CAP)
}

/// As [`is_characteristic`] with an explicit cap on the variable count.
pub fn is_characteristic_capped<P, F>(g: &P, f: F, cap: usize) -> Result<bool>
where
    P: Poly + Sync,
    F: Fn(&[bool]) -> bool + Sync,
{
    let n = g.n_vars();
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let total: u64 = 1u64 << n;
    Ok((0..total).into_par_iter().all(|idx| {
        let input = index_to_bits(idx, n);
        let vanishes = g.eval(&input).expect("length is consistent").is_zero();
        vanishes == f(&input)
    }))
}

/// A set of linear polynomials over one modulus whose *common* zero set is
/// meant to be exactly `f^{-1}(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characteristic {
    modulus: Modulus,
    polys: Vec<LinearPoly>,
}

impl Characteristic {
    pub fn new(polys: Vec<LinearPoly>) -> Result<Self> {
        let first = polys
            .first()
            .ok_or_else(|| Error::invalid("characteristic set must be nonempty"))?;
        let modulus = first.modulus().clone();
        let n = first.n_vars();
        for p in &polys {
            if p.modulus() != &modulus {
                return Err(Error::ModulusMismatch);
            }
            if p.n_vars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: p.n_vars(),
                });
            }
        }
        Ok(Characteristic { modulus, polys })
    }

    pub fn from_single(poly: LinearPoly) -> Self {
        Characteristic {
            modulus: poly.modulus().clone(),
            polys: vec![poly],
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn n_vars(&self) -> usize {
        self.polys[0].n_vars()
    }

    pub fn polys(&self) -> &[LinearPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one member
    }
}

/// True iff for every input: all members vanish exactly when `f` is 1.
pub fn verify_characteristic_set<F>(chi: &Characteristic, f: F) -> Result<bool>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    verify_characteristic_set_capped(chi, f, DEFAULT_ENUM_CAP)
}

/// As [`verify_characteristic_set`] with an explicit enumeration cap.
pub fn verify_characteristic_set_capped<F>(chi: &Characteristic, f: F, cap: usize) -> Result<bool>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    let n = chi.n_vars();
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let total: u64 = 1u64 << n;
    Ok((0..total).into_par_iter().all(|idx| {
        let input = index_to_bits(idx, n);
        let all_vanish = chi.polys().iter().all(|p| {
            p.eval(&input)
                .expect("length is consistent")
                .is_zero()
        });
        all_vanish == f(&input)
    }))
}

/// Unions characteristic sets sharing a modulus and arity. When the inputs
/// are characteristics of `f_1, ..., f_s`, the union is a characteristic of
/// the conjunction `f_1 & ... & f_s`.
pub fn conjoin_characteristics(parts: &[Characteristic]) -> Result<Characteristic> {
    let first = parts
        .first()
        .ok_or_else(|| Error::invalid("need at least one characteristic"))?;
    let modulus = first.modulus().clone();
    let n = first.n_vars();
    let mut polys: Vec<LinearPoly> = Vec::new();
    let mut seen = HashSet::new();
    for part in parts {
        if part.modulus() != &modulus {
            return Err(Error::ModulusMismatch);
        }
        if part.n_vars() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: part.n_vars(),
            });
        }
        for p in part.polys() {
            if seen.insert(p.clone()) {
                polys.push(p.clone());
            }
        }
    }
    Characteristic::new(polys)
}

// --- JSON interchange ------------------------------------------------------
//
// Big values travel as decimal strings since moduli routinely exceed 64 bits.

#[derive(Serialize, Deserialize)]
struct LinearPolyDto {
    m: String,
    c0: String,
    coeffs: Vec<String>,
}

fn parse_biguint(s: &str) -> std::result::Result<BigUint, String> {
    s.parse::<BigUint>()
        .map_err(|e| format!("bad decimal string {s:?}: {e}"))
}

impl Serialize for LinearPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LinearPolyDto {
            m: self.modulus.to_string(),
            c0: self.c0.to_string(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = LinearPolyDto::deserialize(deserializer)?;
        let m = parse_biguint(&dto.m).map_err(D::Error::custom)?;
        let modulus = Modulus::new(m).map_err(D::Error::custom)?;
        let c0 = parse_biguint(&dto.c0).map_err(D::Error::custom)?;
        let coeffs = dto
            .coeffs
            .iter()
            .map(|c| parse_biguint(c))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(LinearPoly::new(modulus, c0, coeffs))
    }
}

#[derive(Serialize, Deserialize)]
struct MultilinearTermDto {
    coeff: String,
    vars: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MultilinearPolyDto {
    m: String,
    n: usize,
    terms: Vec<MultilinearTermDto>,
}

impl Serialize for MultilinearPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MultilinearPolyDto {
            m: self.modulus.to_string(),
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(vars, coeff)| MultilinearTermDto {
                    coeff: coeff.to_string(),
                    vars: vars.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultilinearPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = MultilinearPolyDto::deserialize(deserializer)?;
        let m = parse_biguint(&dto.m).map_err(D::Error::custom)?;
        let modulus = Modulus::new(m).map_err(D::Error::custom)?;
        let terms = dto
            .terms
            .into_iter()
            .map(|t| Ok((t.vars, parse_biguint(&t.coeff)?)))
            .collect::<std::result::Result<Vec<_>, String>>()
            .map_err(D::Error::custom)?;
        MultilinearPoly::new(modulus, dto.n, terms).map_err(D::Error::custom)
    }
}

impl Serialize for Characteristic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.polys.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Characteristic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let polys = Vec::<LinearPoly>::deserialize(deserializer)?;
        Characteristic::new(polys).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn m(v: u64) -> Modulus {
        Modulus::from_u64(v).unwrap()
    }

    #[test]
    fn modulus_rejects_small_values() {
        assert!(Modulus::from_u64(0).is_err());
        assert!(Modulus::from_u64(1).is_err());
        assert!(Modulus::from_u64(2).is_ok());
    }

    #[test]
    fn linear_eval_wraps_mod_m() {
        // x1 + x2 over Z_2 at 11 -> 0
        let p = LinearPoly::new(m(2), 0u8.into(), vec![1u8.into(), 1u8.into()]);
        assert_eq!(p.eval(&bits("11")).unwrap(), BigUint::zero());
    }

    #[test]
    fn linear_eval_direct_case() {
        // 3 x1 + 5 x2 + 1 over Z_7 at 10 -> 4
        let p = LinearPoly::new(m(7), 1u8.into(), vec![3u8.into(), 5u8.into()]);
        assert_eq!(p.eval(&bits("10")).unwrap(), BigUint::from(4u8));
    }

    #[test]
    fn equality_poly_vanishes_on_equal_strings() {
        // sum x_i 2^{i-1} - sum y_i 2^{i-1} over Z_{2^n}, x = y -> 0
        let n = 4;
        let modulus = Modulus::two_pow(n).unwrap();
        let mut coeffs = Vec::new();
        for i in 0..n {
            coeffs.push(BigInt::from(1) << i);
        }
        for i in 0..n {
            coeffs.push(-(BigInt::from(1) << i));
        }
        let p = LinearPoly::from_signed(modulus, BigInt::from(0), coeffs);
        assert_eq!(p.eval(&bits("10111011")).unwrap(), BigUint::zero());
        assert_ne!(p.eval(&bits("10111010")).unwrap(), BigUint::zero());
    }

    #[test]
    fn linear_eval_checks_length() {
        let p = LinearPoly::new(m(5), 0u8.into(), vec![1u8.into()]);
        assert!(matches!(
            p.eval(&bits("10")),
            Err(Error::LengthMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn multilinear_eval_product_form() {
        // (1-x1)(1-x2) over Z_4: {} -> 1, {1} -> -1, {2} -> -1, {1,2} -> 1
        let p = MultilinearPoly::new(
            m(4),
            2,
            vec![
                (vec![], BigUint::from(1u8)),
                (vec![1], BigUint::from(3u8)),
                (vec![2], BigUint::from(3u8)),
                (vec![1, 2], BigUint::from(1u8)),
            ],
        )
        .unwrap();
        assert_eq!(p.eval(&bits("00")).unwrap(), BigUint::one());
        assert_eq!(p.eval(&bits("11")).unwrap(), BigUint::zero());
    }

    #[test]
    fn dnf_of_negated_and_gives_two_minus_sum() {
        // not f = not x1 or not x2 (f = x1 and x2), n = 2: g = 2 - x1 - x2 over Z_4
        let dnf = DnfFormula::new(vec![vec![Literal::neg(1)], vec![Literal::neg(2)]]).unwrap();
        let g = dnf_to_char_poly(&dnf, 2).unwrap();
        assert_eq!(g.eval(&bits("11")).unwrap(), BigUint::zero());
        assert_eq!(g.eval(&bits("00")).unwrap(), BigUint::from(2u8));
        assert_eq!(g.eval(&bits("01")).unwrap(), BigUint::one());
        let lin = g.try_as_linear().expect("degree 1");
        assert_eq!(lin.c0(), &BigUint::from(2u8));
        assert_eq!(lin.coeff(1), &BigUint::from(3u8)); // -1 mod 4
        assert_eq!(lin.coeff(2), &BigUint::from(3u8));
    }

    #[test]
    fn dnf_single_positive_literal() {
        // not f = x1 (f = not x1), n = 1: g = x1 over Z_2
        let dnf = DnfFormula::new(vec![vec![Literal::pos(1)]]).unwrap();
        let g = dnf_to_char_poly(&dnf, 1).unwrap();
        let lin = g.try_as_linear().unwrap();
        assert_eq!(lin.c0(), &BigUint::zero());
        assert_eq!(lin.coeff(1), &BigUint::one());
    }

    #[test]
    fn disjunction_has_no_linear_characteristic_via_this_route() {
        // f = x1 or ... or xn via not f = (not x1 and ... and not xn):
        // the product expansion is genuinely nonlinear.
        let n = 4;
        let clause: Vec<Literal> = (1..=n).map(Literal::neg).collect();
        let dnf = DnfFormula::new(vec![clause]).unwrap();
        let g = dnf_to_char_poly(&dnf, n).unwrap();
        assert!(g.degree() > 1);
        assert!(g.try_as_linear().is_none());
        let f = |input: &[bool]| input.iter().any(|&b| b);
        assert!(is_characteristic(&g, f).unwrap());
    }

    #[test]
    fn dnf_rejects_constant_false_function() {
        let dnf = DnfFormula::new(vec![vec![]]).unwrap();
        assert!(dnf_to_char_poly(&dnf, 3).is_err());
    }

    #[test]
    fn dnf_empty_clause_list_is_zero_poly_of_constant_true() {
        let dnf = DnfFormula::new(vec![]).unwrap();
        let g = dnf_to_char_poly(&dnf, 3).unwrap();
        assert_eq!(g.term_count(), 0);
        assert!(is_characteristic(&g, |_: &[bool]| true).unwrap());
    }

    #[test]
    fn dnf_rejects_duplicate_variable_in_clause() {
        assert!(matches!(
            DnfFormula::new(vec![vec![Literal::pos(1), Literal::neg(1)]]),
            Err(Error::DuplicateVariable(1))
        ));
    }

    #[test]
    fn weight_sum_characterizes_negated_disjunction() {
        // g = sum x_i over Z_{n+1} vanishes only on the all-zero input.
        let n = 3;
        let p = LinearPoly::new(m((n + 1) as u64), 0u8.into(), vec![1u8.into(); n]);
        let f = |input: &[bool]| !input.iter().any(|&b| b);
        assert!(is_characteristic(&p, f).unwrap());
    }

    #[test]
    fn identity_is_not_its_own_characteristic() {
        // g = x1 over Z_2 vs f = x1: g(1) = 1 but f(1) = 1.
        let p = LinearPoly::new(m(2), 0u8.into(), vec![1u8.into()]);
        assert!(!is_characteristic(&p, |input: &[bool]| input[0]).unwrap());
    }

    #[test]
    fn palindrome_polynomial_brute_force() {
        // n = 5 over Z_4: x1 + 2 x2 - 2 x4 - x5 (middle bit drops out).
        let p = LinearPoly::from_signed(
            m(4),
            0.into(),
            vec![1.into(), 2.into(), 0.into(), (-2).into(), (-1).into()],
        );
        let f = |input: &[bool]| {
            (0..input.len() / 2).all(|i| input[i] == input[input.len() - 1 - i])
        };
        assert!(is_characteristic(&p, f).unwrap());
    }

    #[test]
    fn enumeration_cap_guards_cost() {
        let p = LinearPoly::new(m(2), 0u8.into(), vec![1u8.into(); 30]);
        assert!(matches!(
            is_characteristic(&p, |_: &[bool]| false),
            Err(Error::EnumerationCapExceeded { n: 30, cap: 22 })
        ));
    }

    #[test]
    fn characteristic_set_of_mod6_from_mod2_and_mod3() {
        // 3*(sum x_i) over Z_6 vanishes iff weight even; 2*(sum x_i) iff
        // weight divisible by 3; together iff weight divisible by 6.
        let n = 6;
        let p2 = LinearPoly::new(m(6), 0u8.into(), vec![3u8.into(); n]);
        let p3 = LinearPoly::new(m(6), 0u8.into(), vec![2u8.into(); n]);
        let chi = Characteristic::new(vec![p2, p3]).unwrap();
        let f = |input: &[bool]| input.iter().filter(|&&b| b).count() % 6 == 0;
        assert!(verify_characteristic_set(&chi, f).unwrap());
    }

    #[test]
    fn zero_polynomial_characterizes_constant_true() {
        let chi = Characteristic::from_single(LinearPoly::zero(m(4), 3));
        assert!(verify_characteristic_set(&chi, |_: &[bool]| true).unwrap());
    }

    #[test]
    fn characteristic_set_eq_and_even_weight() {
        // Over Z_4, n = 4 (x1 x2 y1 y2): equality poly and the lifted
        // even-weight poly of the x block.
        let eq = LinearPoly::from_signed(
            m(4),
            0.into(),
            vec![1.into(), 2.into(), (-1).into(), (-2).into()],
        );
        let even_x = LinearPoly::new(
            m(4),
            0u8.into(),
            vec![2u8.into(), 2u8.into(), 0u8.into(), 0u8.into()],
        );
        let chi = Characteristic::new(vec![eq, even_x]).unwrap();
        let f = |input: &[bool]| {
            input[0] == input[2]
                && input[1] == input[3]
                && (input[0] as usize + input[1] as usize).is_multiple_of(2)
        };
        assert!(verify_characteristic_set(&chi, f).unwrap());
    }

    #[test]
    fn conjoin_requires_matching_modulus() {
        let a = Characteristic::from_single(LinearPoly::zero(m(4), 2));
        let b = Characteristic::from_single(LinearPoly::zero(m(6), 2));
        assert!(matches!(
            conjoin_characteristics(&[a, b]),
            Err(Error::ModulusMismatch)
        ));
    }

    #[test]
    fn conjoin_unions_and_dedupes() {
        let p = LinearPoly::new(m(4), 1u8.into(), vec![1u8.into(), 0u8.into()]);
        let q = LinearPoly::new(m(4), 0u8.into(), vec![2u8.into(), 2u8.into()]);
        let a = Characteristic::new(vec![p.clone(), q.clone()]).unwrap();
        let b = Characteristic::new(vec![q, p]).unwrap();
        let joined = conjoin_characteristics(&[a, b]).unwrap();
        assert_eq!(joined.len(), 2);
    }

    #[test]
    fn lift_preserves_zero_set() {
        let p = LinearPoly::new(m(2), 0u8.into(), vec![1u8.into(), 1u8.into()]);
        let lifted = p.lift_to(&m(6)).unwrap();
        for idx in 0..4u64 {
            let input = index_to_bits(idx, 2);
            assert_eq!(
                p.eval(&input).unwrap().is_zero(),
                lifted.eval(&input).unwrap().is_zero()
            );
        }
        assert!(p.lift_to(&m(5)).is_err());
    }

    #[test]
    fn json_round_trip_linear() {
        let p = LinearPoly::from_signed(
            Modulus::two_pow(64).unwrap(),
            (-7).into(),
            vec![1.into(), (-2).into()],
        );
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"m\""));
        let back: LinearPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn json_round_trip_multilinear() {
        let p = MultilinearPoly::new(
            m(8),
            3,
            vec![(vec![], 5u8.into()), (vec![1, 3], 7u8.into())],
        )
        .unwrap();
        let back: MultilinearPoly =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, back);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_dnf(n: usize) -> impl Strategy<Value = DnfFormula> {
            let clause = proptest::collection::btree_map(1..=n, any::<bool>(), 1..=n)
                .prop_map(|map| {
                    map.into_iter()
                        .map(|(var, positive)| Literal { var, positive })
                        .collect::<Vec<_>>()
                });
            proptest::collection::vec(clause, 1..5)
                .prop_map(|clauses| DnfFormula::new(clauses).unwrap())
        }

        proptest! {
            #[test]
            fn eval_is_reduction_invariant(
                c0 in 0u64..1000,
                coeffs in proptest::collection::vec(0u64..1000, 1..6),
                lambda in 0u64..5,
                modulus in 2u64..50,
                point in 0u64..64,
            ) {
                let m = Modulus::from_u64(modulus).unwrap();
                let n = coeffs.len();
                let shifted: Vec<BigUint> = coeffs
                    .iter()
                    .map(|&c| BigUint::from(c + lambda * modulus))
                    .collect();
                let p1 = LinearPoly::new(m.clone(), BigUint::from(c0), coeffs.iter().map(|&c| BigUint::from(c)).collect());
                let p2 = LinearPoly::new(m, BigUint::from(c0 + lambda * modulus), shifted);
                let input = index_to_bits(point & ((1 << n) - 1), n);
                prop_assert_eq!(p1.eval(&input).unwrap(), p2.eval(&input).unwrap());
            }

            #[test]
            fn dnf_construction_yields_characteristic(dnf in (2usize..=8).prop_flat_map(|n| (Just(n), arb_dnf(n)))) {
                let (n, dnf) = dnf;
                let g = dnf_to_char_poly(&dnf, n).unwrap();
                // The DNF describes the negation of f.
                let f = |input: &[bool]| !dnf.eval(input);
                prop_assert!(is_characteristic_capped(&g, f, 12).unwrap());
            }

            #[test]
            fn linear_extraction_agrees_with_multilinear_eval(
                dnf in (1usize..=6).prop_flat_map(|n| (Just(n), arb_dnf(n)))
            ) {
                let (n, dnf) = dnf;
                let g = dnf_to_char_poly(&dnf, n).unwrap();
                if let Some(lin) = g.try_as_linear() {
                    for idx in 0..(1u64 << n) {
                        let input = index_to_bits(idx, n);
                        prop_assert_eq!(lin.eval(&input).unwrap(), g.eval(&input).unwrap());
                    }
                }
            }

            #[test]
            fn conjoining_verified_sets_verifies_conjunction(
                seed_a in 0u64..16,
                seed_b in 0u64..16,
            ) {
                // Build characteristics of "weight = a mod 4" style functions
                // over Z_8 and check the union against the conjunction.
                let n = 4;
                let m8 = Modulus::from_u64(8).unwrap();
                let pa = LinearPoly::from_signed(
                    m8.clone(),
                    BigInt::from((seed_a % 4) as i64) * 2,
                    vec![2.into(); n],
                );
                let pb = LinearPoly::from_signed(
                    m8.clone(),
                    BigInt::from((seed_b % 4) as i64),
                    vec![1.into(); n],
                );
                let fa = {
                    let pa = pa.clone();
                    move |input: &[bool]| pa.eval(input).unwrap().is_zero()
                };
                let fb = {
                    let pb = pb.clone();
                    move |input: &[bool]| pb.eval(input).unwrap().is_zero()
                };
                let chi = conjoin_characteristics(&[
                    Characteristic::from_single(pa),
                    Characteristic::from_single(pb),
                ]).unwrap();
                let both = move |input: &[bool]| fa(input) && fb(input);
                prop_assert!(verify_characteristic_set(&chi, both).unwrap());
            }
        }
    }
}
