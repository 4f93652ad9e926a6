//! Catalogue of Boolean functions with known linear characteristic
//! polynomials, each packaged as a truth oracle plus its polynomial:
//!
//! | name         | inputs | polynomial                                   | modulus        |
//! |--------------|--------|----------------------------------------------|----------------|
//! | `mod`        | n      | sum x_i                                      | m              |
//! | `modw`       | n      | sum x_i 2^{i-1}                              | m              |
//! | `eq`         | 2n     | sum x_i 2^{i-1} - sum y_i 2^{i-1}            | 2^n            |
//! | `palindrome` | n      | sum_{i<=n/2} x_i 2^{i-1} - sum_{i>=n/2} x_i 2^{n-i} | 2^{floor(n/2)} |
//! | `perm`       | n^2    | sum x_ij ((n+1)^{i-1} + (n+1)^{n+j-1}) - sum_{i<=2n} (n+1)^{i-1} | (n+1)^{2n} |

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::zmod::{conjoin_characteristics, Characteristic, LinearPoly, Modulus, Poly};

type Oracle = Arc<dyn Fn(&[bool]) -> bool + Send + Sync>;

/// A named function family member: truth oracle plus linear characteristic
/// polynomial over the family's modulus.
#[derive(Clone)]
pub struct ZooEntry {
    name: String,
    family_n: usize,
    poly: LinearPoly,
    oracle: Oracle,
}

impl std::fmt::Debug for ZooEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZooEntry")
            .field("name", &self.name)
            .field("family_n", &self.family_n)
            .field("vars", &self.vars())
            .field("modulus", &self.modulus().to_string())
            .finish()
    }
}

impl ZooEntry {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Family parameter `n` (the input may have `n`, `2n`, or `n^2` bits).
    pub fn family_n(&self) -> usize {
        self.family_n
    }

    /// Actual number of input bits.
    pub fn vars(&self) -> usize {
        self.poly.n_vars()
    }

    pub fn poly(&self) -> &LinearPoly {
        &self.poly
    }

    pub fn modulus(&self) -> &Modulus {
        self.poly.modulus()
    }

    /// Evaluates the truth oracle.
    pub fn truth(&self, input: &[bool]) -> bool {
        (self.oracle)(input)
    }

    /// The oracle as a shareable closure.
    pub fn oracle(&self) -> Oracle {
        Arc::clone(&self.oracle)
    }
}

fn require_min(name: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::invalid(format!("{name} requires n >= {min}, got {n}")));
    }
    Ok(())
}

/// Weight test: true iff the number of ones is divisible by m.
/// Polynomial `sum x_i` over Z_m.
pub fn mod_m(n: usize, m: &Modulus) -> Result<ZooEntry> {
    require_min("mod", n, 1)?;
    let poly = LinearPoly::new(m.clone(), BigUint::zero(), vec![BigUint::one(); n]);
    let modulus = m.value().clone();
    Ok(ZooEntry {
        name: "mod".into(),
        family_n: n,
        poly,
        oracle: Arc::new(move |input: &[bool]| {
            let weight = input.iter().filter(|&&b| b).count();
            (BigUint::from(weight) % &modulus).is_zero()
        }),
    })
}

/// Positionally weighted test: true iff `sum x_i 2^{i-1} = 0 mod m`.
pub fn mod_m_weighted(n: usize, m: &Modulus) -> Result<ZooEntry> {
    require_min("modw", n, 1)?;
    let coeffs: Vec<BigUint> = (0..n).map(|i| BigUint::one() << i).collect();
    let poly = LinearPoly::new(m.clone(), BigUint::zero(), coeffs);
    let modulus = m.value().clone();
    Ok(ZooEntry {
        name: "modw".into(),
        family_n: n,
        poly,
        oracle: Arc::new(move |input: &[bool]| {
            let mut acc = BigUint::zero();
            for (i, &bit) in input.iter().enumerate() {
                if bit {
                    acc += BigUint::one() << i;
                }
            }
            (acc % &modulus).is_zero()
        }),
    })
}

/// Equality of two n-bit strings (variables x_1..x_n then y_1..y_n).
/// Polynomial `sum x_i 2^{i-1} - sum y_i 2^{i-1}` over Z_{2^n}.
pub fn eq(n: usize) -> Result<ZooEntry> {
    require_min("eq", n, 1)?;
    let modulus = Modulus::two_pow(n)?;
    let mut coeffs = Vec::with_capacity(2 * n);
    for i in 0..n {
        coeffs.push(BigInt::one() << i);
    }
    for i in 0..n {
        coeffs.push(-(BigInt::one() << i));
    }
    let poly = LinearPoly::from_signed(modulus, BigInt::zero(), coeffs);
    Ok(ZooEntry {
        name: "eq".into(),
        family_n: n,
        poly,
        oracle: Arc::new(move |input: &[bool]| input[..n] == input[n..]),
    })
}

/// Palindrome test on n bits. Polynomial
/// `sum_{i <= floor(n/2)} x_i 2^{i-1} - sum_{i >= ceil(n/2)} x_i 2^{n-i}`
/// over Z_{2^{floor(n/2)}}; for n = 1 the function is constant-true and the
/// polynomial degenerates to zero (carried over Z_2).
pub fn palindrome(n: usize) -> Result<ZooEntry> {
    require_min("palindrome", n, 1)?;
    let half = n / 2;
    let modulus = Modulus::two_pow(half.max(1))?;
    let mut coeffs = vec![BigInt::zero(); n];
    // n = 1 degenerates to the trivial ring Z_1 where every value is zero;
    // the zero polynomial over Z_2 keeps the same (empty) constraint.
    if half > 0 {
        for i in 1..=half {
            coeffs[i - 1] += BigInt::one() << (i - 1);
        }
        for i in n.div_ceil(2)..=n {
            coeffs[i - 1] -= BigInt::one() << (n - i);
        }
    }
    let poly = LinearPoly::from_signed(modulus, BigInt::zero(), coeffs);
    Ok(ZooEntry {
        name: "palindrome".into(),
        family_n: n,
        poly,
        oracle: Arc::new(move |input: &[bool]| {
            (0..n / 2).all(|i| input[i] == input[n - 1 - i])
        }),
    })
}

/// Permutation-matrix test on n^2 bits, `x_ij` serialized row-major as
/// variable `(i-1)*n + j`. Polynomial
/// `sum_ij x_ij ((n+1)^{i-1} + (n+1)^{n+j-1}) - sum_{i=1}^{2n} (n+1)^{i-1}`
/// over Z_{(n+1)^{2n}}: row and column sums become base-(n+1) digits, all of
/// which must hit exactly one.
pub fn perm(n: usize) -> Result<ZooEntry> {
    require_min("perm", n, 2)?;
    let base = BigUint::from(n + 1);
    let modulus = Modulus::new(base.pow(2 * n as u32))?;
    let mut coeffs = vec![BigInt::zero(); n * n];
    for i in 1..=n {
        for j in 1..=n {
            let c = BigInt::from(base.pow(i as u32 - 1)) + BigInt::from(base.pow((n + j - 1) as u32));
            coeffs[(i - 1) * n + (j - 1)] = c;
        }
    }
    let mut c0 = BigInt::zero();
    for i in 1..=(2 * n) {
        c0 -= BigInt::from(base.pow(i as u32 - 1));
    }
    let poly = LinearPoly::from_signed(modulus, c0, coeffs);
    Ok(ZooEntry {
        name: "perm".into(),
        family_n: n,
        poly,
        oracle: Arc::new(move |input: &[bool]| {
            for i in 0..n {
                if input[i * n..(i + 1) * n].iter().filter(|&&b| b).count() != 1 {
                    return false;
                }
            }
            for j in 0..n {
                if (0..n).filter(|&i| input[i * n + j]).count() != 1 {
                    return false;
                }
            }
            true
        }),
    })
}

/// Looks an entry up by its CLI name. `mod` and `modw` take the modulus as a
/// parameter; the rest derive it from `n`.
pub fn by_name(name: &str, n: usize, m: Option<&Modulus>) -> Result<ZooEntry> {
    match name {
        "mod" | "modw" => {
            let m = m.ok_or_else(|| {
                Error::invalid(format!("function {name:?} needs an explicit modulus"))
            })?;
            if name == "mod" {
                mod_m(n, m)
            } else {
                mod_m_weighted(n, m)
            }
        }
        "eq" => eq(n),
        "palindrome" => palindrome(n),
        "perm" => perm(n),
        other => Err(Error::invalid(format!(
            "unknown function {other:?}; expected mod, modw, eq, palindrome, or perm"
        ))),
    }
}

/// Characteristic set of the conjunction of several entries over the same
/// input bits. Polynomials over different moduli are lifted into the least
/// common multiple by coefficient scaling, which preserves each zero set.
pub fn zoo_conjunction(entries: &[ZooEntry]) -> Result<Characteristic> {
    let first = entries
        .first()
        .ok_or_else(|| Error::invalid("need at least one entry"))?;
    let vars = first.vars();
    let mut lcm = first.modulus().value().clone();
    for e in entries {
        if e.vars() != vars {
            return Err(Error::LengthMismatch {
                expected: vars,
                got: e.vars(),
            });
        }
        lcm = num_integer::lcm(lcm, e.modulus().value().clone());
    }
    let target = Modulus::new(lcm)?;
    let parts: Vec<Characteristic> = entries
        .iter()
        .map(|e| Ok(Characteristic::from_single(e.poly().lift_to(&target)?)))
        .collect::<Result<_>>()?;
    conjoin_characteristics(&parts)
}

/// Conjunction of the entries as a truth oracle.
pub fn conjunction_oracle(entries: &[ZooEntry]) -> Oracle {
    let oracles: Vec<Oracle> = entries.iter().map(|e| e.oracle()).collect();
    Arc::new(move |input: &[bool]| oracles.iter().all(|o| o(input)))
}
