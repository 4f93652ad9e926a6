//! Synthesis of fingerprinting programs.
//!
//! Given a linear polynomial `g` over Z_m and a good parameter set
//! `K = {k_1, ..., k_t}` (t a power of two), the single-polynomial builder
//! emits a read-once program of width `2t`: a control register holds a
//! uniform superposition of `t` subspaces, and reading `x_j = 1` rotates the
//! target qubit in subspace `i` by `4*pi*k_i*c_j/m` about the y axis, so the
//! target amplitudes accumulate `cos/sin(2*pi*k_i*g(sigma)/m)`. The constant
//! rotation and the final Hadamard layer on the controls are folded into
//! both branches of the last instruction, keeping every layer attached to a
//! variable read; acceptance is the all-zeros outcome, hit with probability
//! `((1/t) * sum_i cos(2*pi*k_i*g(sigma)/m))^2`.
//!
//! The set-of-polynomials builder allocates one target qubit per polynomial
//! and uses the *half* rotation `2*pi*k_i*c_j/m`, measuring all targets
//! against zero with no final Hadamard layer; acceptance becomes
//! `(1/t) * sum_i prod_r cos^2(pi*k_i*g_r(sigma)/m)`. Half-angle rotations
//! are 2m-periodic rather than m-periodic in the accumulated integer, so
//! rotation data is reduced modulo `2m`; this pins the sign convention of
//! the produced states without affecting any probability.

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{cos_of_residue, trig_of_residue};
use crate::error::{Error, Result};
use crate::goodset::GoodSet;
use crate::qbp::{Instruction, QbpProgram, Unitary};
use crate::zmod::{Characteristic, LinearPoly, Poly};

/// A buildable fingerprint description: the polynomials, the parameter set,
/// and the order in which variables are read.
#[derive(Debug, Clone)]
pub struct FingerprintSpec {
    characteristic: Characteristic,
    good_set: GoodSet,
    /// Permutation of `1..=n`; position `j` names the variable read at
    /// step `j`.
    order: Vec<usize>,
    allow_unverified: bool,
}

impl FingerprintSpec {
    /// Bundles a characteristic with a good set, reading variables in
    /// identity order. The moduli must match and `t` must be a power of two
    /// (it indexes a whole control register).
    pub fn new(characteristic: Characteristic, good_set: GoodSet) -> Result<Self> {
        if characteristic.modulus() != good_set.modulus() {
            return Err(Error::ModulusMismatch);
        }
        if !good_set.t().is_power_of_two() {
            return Err(Error::invalid(format!(
                "parameter set size {} is not a power of two",
                good_set.t()
            )));
        }
        let n = characteristic.n_vars();
        Ok(FingerprintSpec {
            characteristic,
            good_set,
            order: (1..=n).collect(),
            allow_unverified: false,
        })
    }

    /// Replaces the variable order; must be a permutation of `1..=n`.
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let n = self.characteristic.n_vars();
        if order.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: order.len(),
            });
        }
        let mut seen = vec![false; n + 1];
        for &v in &order {
            if v < 1 || v > n {
                return Err(Error::VariableOutOfRange(v));
            }
            if seen[v] {
                return Err(Error::DuplicateVariable(v));
            }
            seen[v] = true;
        }
        self.order = order;
        Ok(self)
    }

    /// Permits building on top of an unverified parameter set. Without this
    /// the builders refuse: an unverified set carries no false-accept bound.
    pub fn allow_unverified(mut self) -> Self {
        self.allow_unverified = true;
        self
    }

    pub fn characteristic(&self) -> &Characteristic {
        &self.characteristic
    }

    pub fn good_set(&self) -> &GoodSet {
        &self.good_set
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Number of polynomials (target qubits in the general construction).
    pub fn l(&self) -> usize {
        self.characteristic.len()
    }

    /// Parameter set size (control subspaces).
    pub fn t(&self) -> usize {
        self.good_set.t()
    }

    fn n(&self) -> usize {
        self.characteristic.n_vars()
    }

    fn single_poly(&self) -> Result<&LinearPoly> {
        if self.l() != 1 {
            return Err(Error::invalid(format!(
                "single-polynomial construction needs exactly one polynomial, got {}",
                self.l()
            )));
        }
        Ok(&self.characteristic.polys()[0])
    }

    fn check_buildable(&self) -> Result<()> {
        if !self.good_set.is_verified() && !self.allow_unverified {
            return Err(Error::UnverifiedGoodSet);
        }
        if self.n() == 0 {
            return Err(Error::invalid(
                "programs need at least one variable to attach the folded layers to",
            ));
        }
        Ok(())
    }
}

/// Width and qubit accounting of the general construction (`l = 1` recovers
/// the single-polynomial numbers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub width: usize,
    pub qubits: u32,
    pub t: usize,
    pub l: usize,
}

/// `width = t * 2^l`, `qubits = log2(t) + l`.
pub fn width_qubits_report(spec: &FingerprintSpec) -> WidthReport {
    let t = spec.t();
    let l = spec.l();
    WidthReport {
        width: t << l,
        qubits: t.trailing_zeros() + l as u32,
        t,
        l,
    }
}

/// Uniform superposition of the control register with all targets zero.
fn initial_state(t: usize, l: usize) -> Vec<Complex64> {
    let dim = t << l;
    let amp = 1.0 / (t as f64).sqrt();
    let mut psi0 = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..t {
        psi0[i << l] = Complex64::new(amp, 0.0);
    }
    psi0
}

/// Builds the width-`2t` read-once program for a single linear polynomial.
pub fn build_single(spec: &FingerprintSpec) -> Result<QbpProgram> {
    spec.check_buildable()?;
    let p = spec.single_poly()?;
    let m = p.modulus().value();
    let ks = spec.good_set.ks();
    let t = spec.t();
    let n = spec.n();

    // Half-angle data for one coefficient: (cos, sin) of 2*pi*(k*c mod m)/m.
    let rotation_row = |c: &BigUint| -> Vec<(f64, f64)> {
        ks.iter()
            .map(|k| trig_of_residue(&((k * c) % m), m))
            .collect()
    };

    let mut instructions = Vec::with_capacity(n);
    for (pos, &var) in spec.order.iter().enumerate() {
        let c_j = p.coeff(var);
        if pos + 1 < n {
            let u1 = Unitary::block_rotations(t, 1, rotation_row(c_j))?;
            instructions.push(Instruction::new(var, Unitary::identity(2 * t), u1)?);
        } else {
            // Fold the constant rotation and the Hadamard layer into both
            // branches of the last instruction.
            let u0 = Unitary::block_rotations_then_hadamard(t, 1, rotation_row(p.c0()))?;
            let with_var = (c_j + p.c0()) % m;
            let u1 = Unitary::block_rotations_then_hadamard(t, 1, rotation_row(&with_var))?;
            instructions.push(Instruction::new(var, u0, u1)?);
        }
    }

    QbpProgram::new(2 * t, n, initial_state(t, 1), instructions, vec![0])
}

/// Builds the width-`t*2^l` read-once program for a characteristic set,
/// one target qubit per polynomial.
pub fn build_general(spec: &FingerprintSpec) -> Result<QbpProgram> {
    spec.check_buildable()?;
    let chi = &spec.characteristic;
    let m = chi.modulus().value();
    let two_m = m * 2u8;
    let ks = spec.good_set.ks();
    let t = spec.t();
    let l = spec.l();
    let n = spec.n();

    // Half-angle data across all targets for one variable: entry (i, r) is
    // (cos, sin) of pi*(k_i*c mod 2m)/m, the 2m-periodic reduction.
    let rotation_rows = |coeff_of: &dyn Fn(&LinearPoly) -> BigUint| -> Vec<(f64, f64)> {
        let mut cs = Vec::with_capacity(t * l);
        for k in ks {
            for poly in chi.polys() {
                let r2 = (k * coeff_of(poly)) % &two_m;
                cs.push(trig_of_residue(&r2, &two_m));
            }
        }
        cs
    };

    let dim = t << l;
    let mut instructions = Vec::with_capacity(n);
    for (pos, &var) in spec.order.iter().enumerate() {
        if pos + 1 < n {
            let u1 = Unitary::block_rotations(t, l, rotation_rows(&|p| p.coeff(var).clone()))?;
            instructions.push(Instruction::new(var, Unitary::identity(dim), u1)?);
        } else {
            let u0 = Unitary::block_rotations(t, l, rotation_rows(&|p| p.c0().clone()))?;
            let u1 = Unitary::block_rotations(
                t,
                l,
                rotation_rows(&|p| (p.coeff(var) + p.c0()) % m),
            )?;
            instructions.push(Instruction::new(var, u0, u1)?);
        }
    }

    // Accept any control value with every target qubit measured zero.
    let accept: Vec<usize> = (0..t).map(|i| i << l).collect();
    QbpProgram::new(dim, n, initial_state(t, l), instructions, accept)
}

/// `((1/t) * sum_i cos(2*pi*k_i*g(sigma)/m))^2`, the exact acceptance
/// probability of [`build_single`].
pub fn closed_form_single(spec: &FingerprintSpec, input: &[bool]) -> Result<f64> {
    let p = spec.single_poly()?;
    let m = p.modulus().value();
    let g = p.eval(input)?;
    let mut sum = 0.0;
    for k in spec.good_set.ks() {
        sum += cos_of_residue(&((k * &g) % m), m);
    }
    let avg = sum / spec.t() as f64;
    Ok(avg * avg)
}

/// `(1/t) * sum_i prod_r cos^2(pi*k_i*g_r(sigma)/m)`, the exact acceptance
/// probability of [`build_general`].
pub fn closed_form_general(spec: &FingerprintSpec, input: &[bool]) -> Result<f64> {
    let chi = &spec.characteristic;
    let m = chi.modulus().value();
    let two_m = m * 2u8;
    let values: Vec<BigUint> = chi
        .polys()
        .iter()
        .map(|p| p.eval(input))
        .collect::<Result<_>>()?;
    let mut sum = 0.0;
    for k in spec.good_set.ks() {
        let mut prod = 1.0;
        for g in &values {
            let c = cos_of_residue(&((k * g) % &two_m), &two_m);
            prod *= c * c;
        }
        sum += prod;
    }
    Ok(sum / spec.t() as f64)
}

/// The fingerprint state of the single-polynomial construction: what the
/// program holds after all rotations (constant included), before the folded
/// Hadamard layer.
pub fn fingerprint_state_single(spec: &FingerprintSpec, input: &[bool]) -> Result<Vec<Complex64>> {
    let p = spec.single_poly()?;
    let m = p.modulus().value();
    let g = p.eval(input)?;
    let t = spec.t();
    let amp = 1.0 / (t as f64).sqrt();
    let mut state = vec![Complex64::new(0.0, 0.0); 2 * t];
    for (i, k) in spec.good_set.ks().iter().enumerate() {
        let (c, s) = trig_of_residue(&((k * &g) % m), m);
        state[2 * i] = Complex64::new(amp * c, 0.0);
        state[2 * i + 1] = Complex64::new(amp * s, 0.0);
    }
    Ok(state)
}

/// The fingerprint state of the general construction, which is also its
/// final state (nothing follows the rotations). Uses the same mod-2m sign
/// convention as the circuit, applied to the unreduced integer value of
/// each polynomial.
pub fn fingerprint_state_general(spec: &FingerprintSpec, input: &[bool]) -> Result<Vec<Complex64>> {
    let chi = &spec.characteristic;
    let m = chi.modulus().value();
    let two_m = m * 2u8;
    let values: Vec<BigUint> = chi
        .polys()
        .iter()
        .map(|p| p.eval_unreduced(input))
        .collect::<Result<_>>()?;
    let t = spec.t();
    let l = spec.l();
    let amp = 1.0 / (t as f64).sqrt();
    let mut state = vec![Complex64::new(0.0, 0.0); t << l];
    for (i, k) in spec.good_set.ks().iter().enumerate() {
        let trig: Vec<(f64, f64)> = values
            .iter()
            .map(|g| trig_of_residue(&((k * g) % &two_m), &two_m))
            .collect();
        for low in 0..(1usize << l) {
            let mut a = amp;
            for (r_idx, &(c, s)) in trig.iter().enumerate() {
                let bit = (low >> (l - 1 - r_idx)) & 1;
                a *= if bit == 0 { c } else { s };
            }
            state[(i << l) | low] = Complex64::new(a, 0.0);
        }
    }
    Ok(state)
}
