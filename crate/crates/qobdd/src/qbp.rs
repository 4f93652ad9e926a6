//! The quantum branching program model: a sequence of instructions, each
//! reading one classical input bit and applying one of two unitaries to a
//! state vector, followed by a single projective measurement against an
//! accepting set of basis indices.
//!
//! States are dense complex vectors over the standard computational basis,
//! index 0 being the all-zeros ket. Control qubits occupy the high-order
//! bits, target qubits the low-order bits. Instructions carry either a dense
//! matrix or one of two structured forms (block-diagonal rotations, with an
//! optional trailing Hadamard layer on the control qubits) that apply in
//! near-linear time; structure never changes semantics, only cost.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{ceil_log2, index_to_bits};
use crate::error::{Error, Result};

/// Construction-time tolerance on `U^dag U = I`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Construction-time tolerance on the initial state norm.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Acceptance-probability slack used when classifying one-sided error.
pub const ONE_SIDED_TOL: f64 = 1e-9;

/// Default cap on exhaustive input sweeps.
pub const DEFAULT_SWEEP_CAP: usize = 22;

/// Rotation data for one block-diagonal instruction: for control value `i`
/// and target qubit index `r`, the pair `(cos(theta/2), sin(theta/2))` of the
/// rotation applied to that target within the control-`i` subspace.
#[derive(Debug, Clone)]
struct BlockRy {
    t: usize,
    l: usize,
    /// `t * l` entries, row-major by control value.
    cos_sin: Vec<(f64, f64)>,
}

impl BlockRy {
    fn dim(&self) -> usize {
        self.t << self.l
    }

    fn apply(&self, state: &mut [Complex64]) {
        let block = 1usize << self.l;
        for i in 0..self.t {
            let base = i * block;
            for r_idx in 0..self.l {
                let (c, s) = self.cos_sin[i * self.l + r_idx];
                if c == 1.0 && s == 0.0 {
                    continue;
                }
                let stride = 1usize << (self.l - 1 - r_idx);
                for low in 0..block {
                    if low & stride == 0 {
                        let a = state[base + low];
                        let b = state[base + low + stride];
                        state[base + low] = a * c - b * s;
                        state[base + low + stride] = a * s + b * c;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
enum UnitaryForm {
    Identity,
    /// Row-major `d x d` matrix.
    Dense(Vec<Complex64>),
    Rotations(BlockRy),
    /// Rotations followed by a Hadamard on every control qubit.
    RotationsThenHadamard(BlockRy),
}

/// A unitary transformation of the `d`-dimensional state space.
#[derive(Debug, Clone)]
pub struct Unitary {
    dim: usize,
    form: UnitaryForm,
}

impl Unitary {
    pub fn identity(dim: usize) -> Self {
        Unitary {
            dim,
            form: UnitaryForm::Identity,
        }
    }

    /// Builds a dense unitary from row-major entries; rejects matrices whose
    /// unitarity defect exceeds [`UNITARITY_TOL`].
    pub fn dense(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let u = Unitary {
            dim,
            form: UnitaryForm::Dense(entries),
        };
        let defect = u.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                defect,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(u)
    }

    /// Block-diagonal rotations: control value `i` applies, on each target
    /// qubit `r`, the rotation with the given `(cos, sin)` half-angle pair.
    pub(crate) fn block_rotations(t: usize, l: usize, cos_sin: Vec<(f64, f64)>) -> Result<Self> {
        Self::block_form(t, l, cos_sin, false)
    }

    /// As [`Unitary::block_rotations`] followed by a Hadamard layer on the
    /// control qubits (`t` must be a power of two).
    pub(crate) fn block_rotations_then_hadamard(
        t: usize,
        l: usize,
        cos_sin: Vec<(f64, f64)>,
    ) -> Result<Self> {
        Self::block_form(t, l, cos_sin, true)
    }

    fn block_form(t: usize, l: usize, cos_sin: Vec<(f64, f64)>, hadamard: bool) -> Result<Self> {
        if t == 0 || l == 0 || cos_sin.len() != t * l {
            return Err(Error::invalid("inconsistent block rotation shape"));
        }
        if hadamard && !t.is_power_of_two() {
            return Err(Error::invalid(
                "Hadamard layer requires a power-of-two control count",
            ));
        }
        for &(c, s) in &cos_sin {
            let defect = (c * c + s * s - 1.0).abs();
            if defect > UNITARITY_TOL {
                return Err(Error::NotUnitary {
                    defect,
                    tolerance: UNITARITY_TOL,
                });
            }
        }
        let block = BlockRy { t, l, cos_sin };
        let dim = block.dim();
        let form = if hadamard {
            UnitaryForm::RotationsThenHadamard(block)
        } else {
            UnitaryForm::Rotations(block)
        };
        Ok(Unitary { dim, form })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies the transformation in place.
    pub fn apply(&self, state: &mut [Complex64]) {
        debug_assert_eq!(state.len(), self.dim);
        match &self.form {
            UnitaryForm::Identity => {}
            UnitaryForm::Dense(entries) => {
                let d = self.dim;
                let mut out = vec![Complex64::new(0.0, 0.0); d];
                for (row, slot) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for col in 0..d {
                        acc += entries[row * d + col] * state[col];
                    }
                    *slot = acc;
                }
                state.copy_from_slice(&out);
            }
            UnitaryForm::Rotations(block) => block.apply(state),
            UnitaryForm::RotationsThenHadamard(block) => {
                block.apply(state);
                hadamard_controls(state, block.t, block.l);
            }
        }
    }

    /// Materializes the dense row-major matrix (columns are the images of
    /// the basis vectors).
    pub fn to_dense(&self) -> Vec<Complex64> {
        let d = self.dim;
        if let UnitaryForm::Dense(entries) = &self.form {
            return entries.clone();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        let mut basis = vec![Complex64::new(0.0, 0.0); d];
        for col in 0..d {
            basis.fill(Complex64::new(0.0, 0.0));
            basis[col] = Complex64::new(1.0, 0.0);
            self.apply(&mut basis);
            for row in 0..d {
                out[row * d + col] = basis[row];
            }
        }
        out
    }

    /// `max |(U^dag U - I)_{jk}|` over the dense materialization.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let u = self.to_dense();
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for k in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for row in 0..d {
                    acc += u[row * d + j].conj() * u[row * d + k];
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }
}

/// Hadamard on each of the `log2(t)` control qubits, acting across blocks of
/// size `2^l`.
fn hadamard_controls(state: &mut [Complex64], t: usize, l: usize) {
    let block = 1usize << l;
    let stages = t.trailing_zeros();
    for stage in 0..stages {
        let ctrl_stride = 1usize << stage;
        let stride = ctrl_stride * block;
        for i in 0..t {
            if i & ctrl_stride == 0 {
                let base = i * block;
                for low in 0..block {
                    let a = state[base + low];
                    let b = state[base + low + stride];
                    state[base + low] = (a + b) * std::f64::consts::FRAC_1_SQRT_2;
                    state[base + low + stride] = (a - b) * std::f64::consts::FRAC_1_SQRT_2;
                }
            }
        }
    }
}

/// One step: reads `x_var` and applies `u0` or `u1`.
#[derive(Debug, Clone)]
pub struct Instruction {
    var: usize,
    u0: Unitary,
    u1: Unitary,
}

impl Instruction {
    pub fn new(var: usize, u0: Unitary, u1: Unitary) -> Result<Self> {
        if var == 0 {
            return Err(Error::VariableOutOfRange(0));
        }
        if u0.dim() != u1.dim() {
            return Err(Error::invalid("branch unitaries differ in dimension"));
        }
        Ok(Instruction { var, u0, u1 })
    }

    /// 1-based index of the variable this instruction reads.
    pub fn var(&self) -> usize {
        self.var
    }

    pub fn u0(&self) -> &Unitary {
        &self.u0
    }

    pub fn u1(&self) -> &Unitary {
        &self.u1
    }
}

/// Complexity measures of a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measures {
    /// State-space dimension `d`.
    pub width: usize,
    /// Number of instructions.
    pub length: usize,
    /// `width * length`.
    pub size: usize,
    /// `ceil(log2(width))`.
    pub qubits: u32,
}

/// A quantum branching program: initial state, instruction sequence, and the
/// set of accepting basis indices (0-based; index 0 is the all-zeros ket).
#[derive(Debug, Clone)]
pub struct QbpProgram {
    d: usize,
    n: usize,
    psi0: Vec<Complex64>,
    instructions: Vec<Instruction>,
    accept: Vec<usize>,
}

impl QbpProgram {
    pub fn new(
        d: usize,
        n: usize,
        psi0: Vec<Complex64>,
        instructions: Vec<Instruction>,
        accept: Vec<usize>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("state space must have positive dimension"));
        }
        if psi0.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: psi0.len(),
            });
        }
        let norm = psi0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tolerance: STATE_NORM_TOL,
            });
        }
        for instr in &instructions {
            if instr.u0.dim() != d {
                return Err(Error::invalid("instruction dimension mismatch"));
            }
            if instr.var > n {
                return Err(Error::VariableOutOfRange(instr.var));
            }
        }
        let mut accept = accept;
        accept.sort_unstable();
        accept.dedup();
        if accept.last().is_some_and(|&i| i >= d) {
            return Err(Error::invalid("accepting index out of range"));
        }
        Ok(QbpProgram {
            d,
            n,
            psi0,
            instructions,
            accept,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn psi0(&self) -> &[Complex64] {
        &self.psi0
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Accepting basis indices, sorted, 0-based.
    pub fn accept(&self) -> &[usize] {
        &self.accept
    }

    /// Runs the program on an input and returns the final state vector.
    pub fn run(&self, input: &[bool]) -> Result<Vec<Complex64>> {
        if input.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: input.len(),
            });
        }
        let mut state = self.psi0.clone();
        for instr in &self.instructions {
            let u = if input[instr.var - 1] {
                &instr.u1
            } else {
                &instr.u0
            };
            u.apply(&mut state);
        }
        Ok(state)
    }

    /// Probability that the final measurement lands in the accepting set.
    pub fn accept_probability(&self, input: &[bool]) -> Result<f64> {
        let state = self.run(input)?;
        Ok(self.accept.iter().map(|&i| state[i].norm_sqr()).sum())
    }

    /// True iff no variable is read by more than one instruction.
    pub fn is_read_once(&self) -> bool {
        let mut seen = vec![false; self.n + 1];
        for instr in &self.instructions {
            if seen[instr.var] {
                return false;
            }
            seen[instr.var] = true;
        }
        true
    }

    pub fn measures(&self) -> Measures {
        Measures {
            width: self.d,
            length: self.instructions.len(),
            size: self.d * self.instructions.len(),
            qubits: ceil_log2(self.d),
        }
    }

    /// Simulates every input and classifies the program's error behaviour
    /// against the truth oracle `f`.
    pub fn classify_error<F>(&self, f: F, cap: usize) -> Result<SimulationReport>
    where
        F: Fn(&[bool]) -> bool + Sync,
    {
        if self.n > cap {
            return Err(Error::EnumerationCapExceeded { n: self.n, cap });
        }
        let total: u64 = 1u64 << self.n;
        let rows: Vec<(f64, bool, f64)> = (0..total)
            .into_par_iter()
            .map(|idx| {
                let input = index_to_bits(idx, self.n);
                let state = self.run(&input).expect("length is consistent");
                let norm = state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                let prob: f64 = self.accept.iter().map(|&i| state[i].norm_sqr()).sum();
                (prob, f(&input), (norm - 1.0).abs())
            })
            .collect();

        let probabilities: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let truth: Vec<bool> = rows.iter().map(|r| r.1).collect();
        let max_norm_deviation = rows.iter().map(|r| r.2).fold(0.0, f64::max);

        let mut min_positive = f64::INFINITY;
        let mut max_false_accept: f64 = 0.0;
        let mut max_error: f64 = 0.0;
        for (&p, &is_one) in probabilities.iter().zip(&truth) {
            if is_one {
                min_positive = min_positive.min(p);
                max_error = max_error.max(1.0 - p);
            } else {
                max_false_accept = max_false_accept.max(p);
                max_error = max_error.max(p);
            }
        }

        let classification = if min_positive >= 1.0 - ONE_SIDED_TOL {
            ErrorClass::OneSided {
                error: max_false_accept,
            }
        } else if 0.5 - max_error > 0.0 {
            ErrorClass::Bounded {
                margin: 0.5 - max_error,
            }
        } else {
            ErrorClass::Neither { max_error }
        };

        Ok(SimulationReport {
            n: self.n,
            probabilities,
            truth,
            classification,
            measures: self.measures(),
            max_norm_deviation,
        })
    }
}

/// Outcome of an exhaustive sweep (`min_positive` is +inf when `f` has no
/// satisfying input, making the one-sided test vacuous there).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorClass {
    /// Every satisfying input accepted with probability ~1; `error` is the
    /// worst acceptance over the rest.
    OneSided { error: f64 },
    /// Error probability at most `1/2 - margin` on every input.
    Bounded { margin: f64 },
    Neither { max_error: f64 },
}

/// Everything an exhaustive sweep learned about a program.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub n: usize,
    /// Acceptance probability per input, indexed by the packed assignment
    /// (bit `i` of the index is variable `x_{i+1}`).
    pub probabilities: Vec<f64>,
    /// Truth value of the oracle per input, same indexing.
    pub truth: Vec<bool>,
    pub classification: ErrorClass,
    pub measures: Measures,
    pub max_norm_deviation: f64,
}

// --- JSON interchange ------------------------------------------------------
//
// Matrices and states are lists of [re, im] pairs; matrices are flattened
// row-major. All structured unitaries are materialized dense on the way out,
// so any consumer sees plain matrices.

#[derive(Serialize, Deserialize)]
struct InstructionDto {
    var: usize,
    u0: Vec<[f64; 2]>,
    u1: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ProgramDto {
    d: usize,
    n: usize,
    psi0: Vec<[f64; 2]>,
    instructions: Vec<InstructionDto>,
    accept: Vec<usize>,
}

fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl Serialize for QbpProgram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProgramDto {
            d: self.d,
            n: self.n,
            psi0: to_pairs(&self.psi0),
            instructions: self
                .instructions
                .iter()
                .map(|i| InstructionDto {
                    var: i.var,
                    u0: to_pairs(&i.u0.to_dense()),
                    u1: to_pairs(&i.u1.to_dense()),
                })
                .collect(),
            accept: self.accept.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QbpProgram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = ProgramDto::deserialize(deserializer)?;
        let instructions = dto
            .instructions
            .into_iter()
            .map(|i| {
                let u0 = Unitary::dense(dto.d, from_pairs(&i.u0))?;
                let u1 = Unitary::dense(dto.d, from_pairs(&i.u1))?;
                Instruction::new(i.var, u0, u1)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        QbpProgram::new(dto.d, dto.n, from_pairs(&dto.psi0), instructions, dto.accept)
            .map_err(D::Error::custom)
    }
}
