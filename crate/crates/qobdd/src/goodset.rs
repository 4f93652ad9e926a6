//! Rotation parameter sets K = {k_1, ..., k_t} over Z_m.
//!
//! A set is "good" for a nonzero residue `b` when the squared average of
//! `cos(2*pi*k_i*b/m)` stays below epsilon; a set good for every achievable
//! nonzero residue bounds the false-accept probability of the fingerprint
//! programs built on top of it. Existence is guaranteed at size
//! `O(log(m)/epsilon)`, so a seeded uniform sampler with explicit
//! re-verification is the construction of choice here.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{cos_of_residue, log2_biguint};
use crate::error::{Error, Result};
use crate::zmod::Modulus;

/// Default ceiling on full-range scans over all residues `b` in `[1, m)`.
pub const DEFAULT_FULL_SCAN_CAP: u64 = 1_000_000;

/// Largest modulus for which the full scan precomputes a cosine table.
const TABLE_LIMIT: u64 = 1 << 26;

/// What a [`GoodSet`] has been checked against.
#[derive(Debug, Clone, PartialEq)]
pub enum VerifiedScope {
    /// Every residue `b` in `[1, m)` passed the inequality.
    FullRange,
    /// Only the listed nonzero residues passed (the achievable images of a
    /// specific polynomial, typically).
    Image(Vec<BigUint>),
    Unverified,
}

/// Parameters `{k_1, ..., k_t}` drawn from `[1, m)`, with the epsilon they
/// are meant to be good for and the scope of what has been verified.
/// Repetition is permitted; the defining inequality does not need
/// distinctness.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodSet {
    modulus: Modulus,
    epsilon: f64,
    ks: Vec<BigUint>,
    scope: VerifiedScope,
    seed: Option<u64>,
}

impl GoodSet {
    pub fn new(modulus: Modulus, epsilon: f64, ks: Vec<BigUint>) -> Result<Self> {
        validate_epsilon(epsilon)?;
        if ks.is_empty() {
            return Err(Error::invalid("parameter set must be nonempty"));
        }
        for k in &ks {
            if k.is_zero() || k >= modulus.value() {
                return Err(Error::invalid(format!(
                    "parameter {k} outside [1, {})",
                    modulus
                )));
            }
        }
        Ok(GoodSet {
            modulus,
            epsilon,
            ks,
            scope: VerifiedScope::Unverified,
            seed: None,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn ks(&self) -> &[BigUint] {
        &self.ks
    }

    /// Set size `t`.
    pub fn t(&self) -> usize {
        self.ks.len()
    }

    pub fn scope(&self) -> &VerifiedScope {
        &self.scope
    }

    pub fn is_verified(&self) -> bool {
        !matches!(self.scope, VerifiedScope::Unverified)
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `(1/t) * sum_i cos(2*pi*k_i*b/m)` with `k_i*b` reduced exactly before
    /// any floating-point enters. The square of this value is the quantity
    /// the goodness inequality bounds.
    pub fn cosine_average(&self, b: &BigUint) -> Result<f64> {
        if b >= self.modulus.value() {
            return Err(Error::invalid(format!(
                "residue {b} outside [0, {})",
                self.modulus
            )));
        }
        let m = self.modulus.value();
        let mut sum = 0.0;
        for k in &self.ks {
            let r = (k * b) % m;
            sum += cos_of_residue(&r, m);
        }
        Ok(sum / self.ks.len() as f64)
    }

    /// True iff the squared cosine average at `b` is strictly below epsilon.
    pub fn is_good_for(&self, b: &BigUint, epsilon: f64) -> Result<bool> {
        let avg = self.cosine_average(b)?;
        Ok(avg * avg < epsilon)
    }

    /// Checks goodness for every `b` in `[1, m)` and records the result.
    /// Refuses moduli above `cap`.
    pub fn verify_full(&mut self, epsilon: f64, cap: u64) -> Result<bool> {
        validate_epsilon(epsilon)?;
        let (ok, _) = self.scan_full(epsilon, cap)?;
        if ok {
            self.epsilon = epsilon;
            self.scope = VerifiedScope::FullRange;
        }
        Ok(ok)
    }

    /// Checks goodness for each listed nonzero residue (zero entries are
    /// skipped: goodness is only defined away from zero) and records the
    /// verified image. An empty list verifies vacuously, which is the right
    /// reading for polynomials whose image contains no nonzero residue.
    pub fn verify_image(&mut self, epsilon: f64, residues: &[BigUint]) -> Result<bool> {
        validate_epsilon(epsilon)?;
        let m = self.modulus.value();
        let mut image: Vec<BigUint> = residues
            .iter()
            .map(|b| b % m)
            .filter(|b| !b.is_zero())
            .collect();
        image.sort();
        image.dedup();
        for b in &image {
            if !self.is_good_for(b, epsilon)? {
                return Ok(false);
            }
        }
        self.epsilon = epsilon;
        self.scope = VerifiedScope::Image(image);
        Ok(true)
    }

    /// Full-range scan; returns (all good, worst squared average seen).
    fn scan_full(&self, epsilon: f64, cap: u64) -> Result<(bool, f64)> {
        let m = self.modulus.value();
        let m_u64 = match m.to_u64() {
            Some(v) if v <= cap => v,
            _ => {
                return Err(Error::FullScanCapExceeded {
                    m: m.to_string(),
                    cap,
                })
            }
        };
        let t = self.ks.len() as f64;

        let worst = if m_u64 <= TABLE_LIMIT {
            // Cosine table indexed by exact residue; identical values to
            // cosine_average by construction.
            let table: Vec<f64> = (0..m_u64)
                .into_par_iter()
                .map(|r| cos_of_residue(&BigUint::from(r), m))
                .collect();
            let ks: Vec<u64> = self
                .ks
                .iter()
                .map(|k| k.to_u64().expect("k < m fits u64"))
                .collect();
            (1..m_u64)
                .into_par_iter()
                .map(|b| {
                    let mut sum = 0.0;
                    for &k in &ks {
                        let r = ((k as u128 * b as u128) % m_u64 as u128) as usize;
                        sum += table[r];
                    }
                    let avg = sum / t;
                    avg * avg
                })
                .reduce(|| 0.0, f64::max)
        } else {
            (1..m_u64)
                .into_par_iter()
                .map(|b| {
                    let avg = self
                        .cosine_average(&BigUint::from(b))
                        .expect("b below modulus");
                    avg * avg
                })
                .reduce(|| 0.0, f64::max)
        };
        Ok((worst < epsilon, worst))
    }
}

fn validate_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok(())
}

/// Recommended set size: `ceil((2/epsilon) * ln(2m))` rounded up to the next
/// power of two. The logarithmic growth matches the known existence bound;
/// every set produced here is re-verified explicitly, so correctness never
/// rests on this estimate. The power-of-two rounding keeps the control
/// register of the generated programs an exact number of qubits.
pub fn recommended_size(m: &Modulus, epsilon: f64) -> Result<usize> {
    validate_epsilon(epsilon)?;
    let ln_2m = std::f64::consts::LN_2 * (1.0 + log2_biguint(m.value()));
    let t = ((2.0 / epsilon) * ln_2m).ceil() as usize;
    Ok(t.max(1).next_power_of_two())
}

/// Draws `recommended_size` parameters uniformly from `[1, m)` (with
/// replacement) and keeps the first draw that verifies over the full range.
/// Deterministic for a fixed seed.
pub fn sample_good_set(
    m: &Modulus,
    epsilon: f64,
    seed: u64,
    max_attempts: u32,
) -> Result<GoodSet> {
    sample_impl(m, epsilon, seed, max_attempts, None)
}

/// As [`sample_good_set`], but verifies only over the supplied residues
/// (the achievable images of a polynomial). This is the route for moduli too
/// large to scan in full.
pub fn sample_good_set_with_image(
    m: &Modulus,
    epsilon: f64,
    seed: u64,
    max_attempts: u32,
    residues: &[BigUint],
) -> Result<GoodSet> {
    sample_impl(m, epsilon, seed, max_attempts, Some(residues))
}

fn sample_impl(
    m: &Modulus,
    epsilon: f64,
    seed: u64,
    max_attempts: u32,
    image: Option<&[BigUint]>,
) -> Result<GoodSet> {
    validate_epsilon(epsilon)?;
    let t = recommended_size(m, epsilon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigUint::one();
    let mut best = f64::INFINITY;

    for _ in 0..max_attempts {
        let ks: Vec<BigUint> = (0..t)
            .map(|_| rng.gen_biguint_range(&one, m.value()))
            .collect();
        let mut candidate = GoodSet::new(m.clone(), epsilon, ks)?;
        candidate.seed = Some(seed);
        let ok = match image {
            Some(residues) => candidate.verify_image(epsilon, residues)?,
            None => {
                let (ok, worst) = candidate.scan_full(epsilon, DEFAULT_FULL_SCAN_CAP)?;
                best = best.min(worst);
                if ok {
                    candidate.epsilon = epsilon;
                    candidate.scope = VerifiedScope::FullRange;
                }
                ok
            }
        };
        if ok {
            return Ok(candidate);
        }
    }
    Err(Error::GoodSetSearchExhausted {
        attempts: max_attempts,
        best_max_sq_avg: if best.is_finite() { best } else { f64::NAN },
    })
}

/// Smallest-cardinality subset of `[1, m)` passing the full-range check,
/// found by exhaustive subset search. A test oracle for tiny moduli only:
/// `m <= 64`, `t_max <= 4`.
pub fn exhaustive_smallest_good_set(
    m: &Modulus,
    epsilon: f64,
    t_max: usize,
) -> Result<Option<GoodSet>> {
    validate_epsilon(epsilon)?;
    let m_u64 = match m.value().to_u64() {
        Some(v) if v <= 64 => v,
        _ => return Err(Error::invalid("exhaustive search is limited to m <= 64")),
    };
    if t_max == 0 || t_max > 4 {
        return Err(Error::invalid("exhaustive search is limited to 1 <= t_max <= 4"));
    }

    let table: Vec<f64> = (0..m_u64)
        .map(|r| cos_of_residue(&BigUint::from(r), m.value()))
        .collect();
    let values: Vec<u64> = (1..m_u64).collect();
    let passes = |ks: &[u64]| -> bool {
        let t = ks.len() as f64;
        (1..m_u64).all(|b| {
            let mut sum = 0.0;
            for &k in ks {
                sum += table[((k * b) % m_u64) as usize];
            }
            let avg = sum / t;
            avg * avg < epsilon
        })
    };

    let mut found: Option<Vec<u64>> = None;
    for t in 1..=t_max.min(values.len()) {
        let mut indices: Vec<usize> = (0..t).collect();
        'combos: loop {
            let ks: Vec<u64> = indices.iter().map(|&i| values[i]).collect();
            if passes(&ks) {
                found = Some(ks);
                break 'combos;
            }
            // advance lexicographically
            let mut i = t;
            loop {
                if i == 0 {
                    break 'combos;
                }
                i -= 1;
                if indices[i] != i + values.len() - t {
                    indices[i] += 1;
                    for j in i + 1..t {
                        indices[j] = indices[j - 1] + 1;
                    }
                    break;
                }
            }
        }
        if found.is_some() {
            break;
        }
    }

    match found {
        None => Ok(None),
        Some(ks) => {
            let mut set = GoodSet::new(
                m.clone(),
                epsilon,
                ks.into_iter().map(BigUint::from).collect(),
            )?;
            set.scope = VerifiedScope::FullRange;
            Ok(Some(set))
        }
    }
}

// --- JSON interchange ------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GoodSetDto {
    m: String,
    epsilon: f64,
    ks: Vec<String>,
    verified: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl Serialize for GoodSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GoodSetDto {
            m: self.modulus.to_string(),
            epsilon: self.epsilon,
            ks: self.ks.iter().map(|k| k.to_string()).collect(),
            verified: match self.scope {
                VerifiedScope::FullRange => "full".into(),
                VerifiedScope::Image(_) => "image".into(),
                VerifiedScope::Unverified => "none".into(),
            },
            seed: self.seed,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GoodSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = GoodSetDto::deserialize(deserializer)?;
        let m = dto
            .m
            .parse::<BigUint>()
            .map_err(|e| D::Error::custom(format!("bad modulus: {e}")))?;
        let modulus = Modulus::new(m).map_err(D::Error::custom)?;
        let ks = dto
            .ks
            .iter()
            .map(|k| k.parse::<BigUint>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(format!("bad parameter: {e}")))?;
        let mut set = GoodSet::new(modulus, dto.epsilon, ks).map_err(D::Error::custom)?;
        set.seed = dto.seed;
        set.scope = match dto.verified.as_str() {
            "full" => VerifiedScope::FullRange,
            // The residue list is not carried in the interchange format.
            "image" => VerifiedScope::Image(Vec::new()),
            "none" => VerifiedScope::Unverified,
            other => {
                return Err(D::Error::custom(format!(
                    "unknown verification scope {other:?}"
                )))
            }
        };
        Ok(set)
    }
}
