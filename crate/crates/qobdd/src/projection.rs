//! Polynomial projections: substituting constants or (negated) source
//! variables for the variables of a target function. These substitutions
//! keep linear polynomials linear, so they carry linear characteristics from
//! one function family to another; when each source variable is used at most
//! once (a read-once projection) they also preserve read-once program
//! structure.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::zmod::{
    verify_characteristic_set_capped, Characteristic, LinearPoly, Poly, DEFAULT_ENUM_CAP,
};

/// What a target variable `y_j` is replaced with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjEntry {
    Const0,
    Const1,
    /// `y_j = x_i` (1-based source index).
    Var(usize),
    /// `y_j = 1 - x_i`.
    NegVar(usize),
}

/// A substitution mapping a `target_arity`-variable function onto
/// `source_arity` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    source_arity: usize,
    map: Vec<ProjEntry>,
}

impl Projection {
    pub fn new(source_arity: usize, map: Vec<ProjEntry>) -> Result<Self> {
        for entry in &map {
            if let ProjEntry::Var(i) | ProjEntry::NegVar(i) = entry {
                if *i < 1 || *i > source_arity {
                    return Err(Error::VariableOutOfRange(*i));
                }
            }
        }
        Ok(Projection { source_arity, map })
    }

    /// The identity projection on `n` variables.
    pub fn identity(n: usize) -> Self {
        Projection {
            source_arity: n,
            map: (1..=n).map(ProjEntry::Var).collect(),
        }
    }

    pub fn source_arity(&self) -> usize {
        self.source_arity
    }

    pub fn target_arity(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[ProjEntry] {
        &self.map
    }

    /// Evaluates the substituted input: entry `j` of the result is what
    /// target variable `y_{j+1}` reads from the source assignment.
    pub fn project_input(&self, source: &[bool]) -> Result<Vec<bool>> {
        if source.len() != self.source_arity {
            return Err(Error::LengthMismatch {
                expected: self.source_arity,
                got: source.len(),
            });
        }
        Ok(self
            .map
            .iter()
            .map(|entry| match entry {
                ProjEntry::Const0 => false,
                ProjEntry::Const1 => true,
                ProjEntry::Var(i) => source[i - 1],
                ProjEntry::NegVar(i) => !source[i - 1],
            })
            .collect())
    }

    /// How many target variables read source variable `x_i` (either
    /// polarity).
    pub fn multiplicity(&self, i: usize) -> usize {
        self.map
            .iter()
            .filter(|e| matches!(e, ProjEntry::Var(j) | ProjEntry::NegVar(j) if *j == i))
            .count()
    }

    /// True iff every source variable has multiplicity at most one.
    pub fn is_read_once(&self) -> bool {
        let mut used = vec![false; self.source_arity + 1];
        for entry in &self.map {
            if let ProjEntry::Var(i) | ProjEntry::NegVar(i) = entry {
                if used[*i] {
                    return false;
                }
                used[*i] = true;
            }
        }
        true
    }

    /// Composes with a second projection applied to this one's sources:
    /// `self` maps T onto M, `next` maps M onto S, the result maps T onto S
    /// with `project_input(result, s) = project_input(self, project_input(next, s))`.
    pub fn compose(&self, next: &Projection) -> Result<Projection> {
        if self.source_arity != next.target_arity() {
            return Err(Error::LengthMismatch {
                expected: self.source_arity,
                got: next.target_arity(),
            });
        }
        let negate = |e: ProjEntry| match e {
            ProjEntry::Const0 => ProjEntry::Const1,
            ProjEntry::Const1 => ProjEntry::Const0,
            ProjEntry::Var(i) => ProjEntry::NegVar(i),
            ProjEntry::NegVar(i) => ProjEntry::Var(i),
        };
        let map = self
            .map
            .iter()
            .map(|entry| match entry {
                ProjEntry::Const0 => ProjEntry::Const0,
                ProjEntry::Const1 => ProjEntry::Const1,
                ProjEntry::Var(i) => next.map[i - 1],
                ProjEntry::NegVar(i) => negate(next.map[i - 1]),
            })
            .collect();
        Projection::new(next.source_arity, map)
    }
}

/// Substitutes the projection into a linear polynomial over the target
/// variables, producing a linear polynomial over the source variables:
/// constants fold into the constant term, `1 - x_i` contributes its
/// coefficient to the constant term and its negation to `x_i`, and source
/// variables hit several times accumulate coefficients mod m (cancellation
/// to zero is fine; such variables simply stop mattering).
pub fn apply_to_poly(h_poly: &LinearPoly, proj: &Projection) -> Result<LinearPoly> {
    if h_poly.n_vars() != proj.target_arity() {
        return Err(Error::LengthMismatch {
            expected: proj.target_arity(),
            got: h_poly.n_vars(),
        });
    }
    let mut c0 = BigInt::from(h_poly.c0().clone());
    let mut coeffs = vec![BigInt::ZERO; proj.source_arity()];
    for (entry, c) in proj.map().iter().zip(h_poly.coeffs()) {
        let c = BigInt::from(c.clone());
        match entry {
            ProjEntry::Const0 => {}
            ProjEntry::Const1 => c0 += c,
            ProjEntry::Var(i) => coeffs[i - 1] += c,
            ProjEntry::NegVar(i) => {
                coeffs[i - 1] -= &c;
                c0 += c;
            }
        }
    }
    Ok(LinearPoly::from_signed(h_poly.modulus().clone(), c0, coeffs))
}

/// The projected truth oracle: `sigma -> h(projection(sigma))`.
pub fn apply_to_truth<'a, F>(h: F, proj: &'a Projection) -> impl Fn(&[bool]) -> bool + 'a
where
    F: Fn(&[bool]) -> bool + 'a,
{
    move |input: &[bool]| {
        let projected = proj
            .project_input(input)
            .expect("caller supplies source-arity input");
        h(&projected)
    }
}

/// Projects every member of a characteristic of `h` and verifies the result
/// as a characteristic of the projected function, exhaustively over the
/// source inputs.
pub fn check_linearity_transfer<F>(
    h: F,
    chi_h: &Characteristic,
    proj: &Projection,
    cap: usize,
) -> Result<bool>
where
    F: Fn(&[bool]) -> bool + Sync,
{
    if chi_h.n_vars() != proj.target_arity() {
        return Err(Error::LengthMismatch {
            expected: proj.target_arity(),
            got: chi_h.n_vars(),
        });
    }
    let projected: Vec<LinearPoly> = chi_h
        .polys()
        .iter()
        .map(|p| apply_to_poly(p, proj))
        .collect::<Result<_>>()?;
    let chi_f = Characteristic::new(projected)?;
    let proj_ref = &proj;
    let f = move |input: &[bool]| {
        let projected = proj_ref
            .project_input(input)
            .expect("enumeration uses source arity");
        h(&projected)
    };
    verify_characteristic_set_capped(&chi_f, f, cap.min(DEFAULT_ENUM_CAP))
}

// --- JSON interchange ------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ProjEntryDto {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct ProjectionDto {
    p_n: usize,
    n: usize,
    map: Vec<ProjEntryDto>,
}

impl Serialize for Projection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProjectionDto {
            p_n: self.target_arity(),
            n: self.source_arity,
            map: self
                .map
                .iter()
                .map(|e| match e {
                    ProjEntry::Const0 => ProjEntryDto { kind: "c0".into(), i: None },
                    ProjEntry::Const1 => ProjEntryDto { kind: "c1".into(), i: None },
                    ProjEntry::Var(i) => ProjEntryDto { kind: "var".into(), i: Some(*i) },
                    ProjEntry::NegVar(i) => ProjEntryDto { kind: "negvar".into(), i: Some(*i) },
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Projection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = ProjectionDto::deserialize(deserializer)?;
        if dto.map.len() != dto.p_n {
            return Err(D::Error::custom(format!(
                "map length {} does not match declared target arity {}",
                dto.map.len(),
                dto.p_n
            )));
        }
        let need_index = |e: &ProjEntryDto| {
            e.i.ok_or_else(|| D::Error::custom(format!("{:?} entry needs an index", e.kind)))
        };
        let map = dto
            .map
            .iter()
            .map(|e| match e.kind.as_str() {
                "c0" => Ok(ProjEntry::Const0),
                "c1" => Ok(ProjEntry::Const1),
                "var" => Ok(ProjEntry::Var(need_index(e)?)),
                "negvar" => Ok(ProjEntry::NegVar(need_index(e)?)),
                other => Err(D::Error::custom(format!("unknown entry kind {other:?}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Projection::new(dto.n, map).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::index_to_bits;
    use crate::zmod::Modulus;
    use num_bigint::BigUint;
    use num_traits::Zero;

    fn m(v: u64) -> Modulus {
        Modulus::from_u64(v).unwrap()
    }

    #[test]
    fn constants_fold_into_c0() {
        // g = x1 + x2 over Z_3; y1 -> 1, y2 -> x1 gives 1 + x1.
        let g = LinearPoly::new(m(3), BigUint::zero(), vec![1u8.into(), 1u8.into()]);
        let pi = Projection::new(1, vec![ProjEntry::Const1, ProjEntry::Var(1)]).unwrap();
        let projected = apply_to_poly(&g, &pi).unwrap();
        assert_eq!(projected.c0(), &BigUint::from(1u8));
        assert_eq!(projected.coeff(1), &BigUint::from(1u8));
        assert_eq!(projected.n_vars(), 1);
    }

    #[test]
    fn negation_splits_between_constant_and_coefficient() {
        // g = 2 y1 over Z_4; y1 -> 1 - x1 gives 2 + 2 x1 (since -2 = 2 mod 4).
        let g = LinearPoly::new(m(4), BigUint::zero(), vec![2u8.into()]);
        let pi = Projection::new(1, vec![ProjEntry::NegVar(1)]).unwrap();
        let projected = apply_to_poly(&g, &pi).unwrap();
        assert_eq!(projected.c0(), &BigUint::from(2u8));
        assert_eq!(projected.coeff(1), &BigUint::from(2u8));
    }

    #[test]
    fn folding_equality_onto_one_block_cancels_everything() {
        // EQ on 2+2 bits with both blocks read from the same source pair:
        // coefficients cancel, leaving the zero polynomial (constant-true).
        let g = LinearPoly::from_signed(
            m(4),
            0.into(),
            vec![1.into(), 2.into(), (-1).into(), (-2).into()],
        );
        let pi = Projection::new(
            2,
            vec![
                ProjEntry::Var(1),
                ProjEntry::Var(2),
                ProjEntry::Var(1),
                ProjEntry::Var(2),
            ],
        )
        .unwrap();
        let projected = apply_to_poly(&g, &pi).unwrap();
        assert!(projected.is_zero());
        assert!(!pi.is_read_once()); // every source is used twice
        let chi = Characteristic::from_single(g);
        assert!(check_linearity_transfer(
            |input: &[bool]| input[0] == input[2] && input[1] == input[3],
            &chi,
            &pi,
            10
        )
        .unwrap());
    }

    #[test]
    fn multiplicity_counts_both_polarities() {
        let pi = Projection::new(1, vec![ProjEntry::Var(1), ProjEntry::NegVar(1)]).unwrap();
        assert_eq!(pi.multiplicity(1), 2);
        assert!(!pi.is_read_once());
    }

    #[test]
    fn identity_projection_is_read_once() {
        let pi = Projection::identity(5);
        assert!(pi.is_read_once());
        for i in 1..=5 {
            assert_eq!(pi.multiplicity(i), 1);
        }
    }

    #[test]
    fn injective_embedding_is_read_once() {
        let pi = Projection::new(
            6,
            vec![
                ProjEntry::Var(2),
                ProjEntry::NegVar(5),
                ProjEntry::Const0,
                ProjEntry::Var(1),
            ],
        )
        .unwrap();
        assert!(pi.is_read_once());
    }

    #[test]
    fn projection_validates_indices() {
        assert!(Projection::new(2, vec![ProjEntry::Var(3)]).is_err());
        assert!(Projection::new(2, vec![ProjEntry::NegVar(0)]).is_err());
    }

    #[test]
    fn commutation_square_pointwise() {
        // eval(apply_to_poly(g, pi), sigma) = eval(g, pi(sigma)) for all sigma.
        let g = LinearPoly::from_signed(
            m(12),
            5.into(),
            vec![3.into(), 7.into(), (-2).into(), 11.into()],
        );
        let pi = Projection::new(
            3,
            vec![
                ProjEntry::NegVar(2),
                ProjEntry::Const1,
                ProjEntry::Var(2),
                ProjEntry::Var(3),
            ],
        )
        .unwrap();
        let projected = apply_to_poly(&g, &pi).unwrap();
        for idx in 0..8u64 {
            let sigma = index_to_bits(idx, 3);
            let via_poly = projected.eval(&sigma).unwrap();
            let via_input = g.eval(&pi.project_input(&sigma).unwrap()).unwrap();
            assert_eq!(via_poly, via_input);
        }
    }

    #[test]
    fn composition_matches_sequential_application() {
        let g = LinearPoly::from_signed(m(8), 1.into(), vec![2.into(), 3.into()]);
        // T(2) -> M(2): y1 -> not m2, y2 -> m1
        let pi1 = Projection::new(2, vec![ProjEntry::NegVar(2), ProjEntry::Var(1)]).unwrap();
        // M(2) -> S(3): m1 -> s3, m2 -> const 1
        let pi2 = Projection::new(3, vec![ProjEntry::Var(3), ProjEntry::Const1]).unwrap();
        let composed = pi1.compose(&pi2).unwrap();
        let step = apply_to_poly(&apply_to_poly(&g, &pi1).unwrap(), &pi2).unwrap();
        let direct = apply_to_poly(&g, &composed).unwrap();
        for idx in 0..8u64 {
            let sigma = index_to_bits(idx, 3);
            assert_eq!(step.eval(&sigma).unwrap(), direct.eval(&sigma).unwrap());
            // and the input-side composition law holds
            assert_eq!(
                composed.project_input(&sigma).unwrap(),
                pi1.project_input(&pi2.project_input(&sigma).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let pi = Projection::new(
            3,
            vec![
                ProjEntry::Const0,
                ProjEntry::Var(2),
                ProjEntry::NegVar(3),
                ProjEntry::Const1,
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&pi).unwrap();
        assert!(json.contains("\"p_n\":4"));
        let back: Projection = serde_json::from_str(&json).unwrap();
        assert_eq!(pi, back);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_entry(source: usize) -> impl Strategy<Value = ProjEntry> {
            prop_oneof![
                Just(ProjEntry::Const0),
                Just(ProjEntry::Const1),
                (1..=source).prop_map(ProjEntry::Var),
                (1..=source).prop_map(ProjEntry::NegVar),
            ]
        }

        fn arb_case() -> impl Strategy<Value = (u64, usize, u64, Vec<u64>, Vec<ProjEntry>)> {
            (2u64..64, 1usize..6).prop_flat_map(|(modulus, source)| {
                (1usize..6).prop_flat_map(move |target| {
                    (
                        Just(modulus),
                        Just(source),
                        0u64..64,
                        proptest::collection::vec(0u64..64, target),
                        proptest::collection::vec(arb_entry(source), target),
                    )
                })
            })
        }

        proptest! {
            #[test]
            fn commutation_square_random(case in arb_case()) {
                let (modulus, source, c0, coeffs, map) = case;
                let m = Modulus::from_u64(modulus).unwrap();
                let g = LinearPoly::new(
                    m,
                    BigUint::from(c0),
                    coeffs.into_iter().map(BigUint::from).collect(),
                );
                let pi = Projection::new(source, map).unwrap();
                let projected = apply_to_poly(&g, &pi).unwrap();
                for idx in 0..(1u64 << source) {
                    let sigma = index_to_bits(idx, source);
                    prop_assert_eq!(
                        projected.eval(&sigma).unwrap(),
                        g.eval(&pi.project_input(&sigma).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}
