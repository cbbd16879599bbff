//! Saito-style decompositions of logarithmic 1-forms.
//!
//! A 1-form `omega` logarithmic along `f` always admits polynomials `g`,
//! `h` and a 1-form `alpha` with
//!
//! ```text
//! g * omega + h * df = f * alpha,        g not in any component of (f).
//! ```
//!
//! The construction is by contraction with a constant direction `v`: with
//! `omega = sum_i a_i dx_i` and `eta = (omega ^ df) / f = sum_{i<j}
//! eta_ij dx_i ^ dx_j`, setting
//!
//! ```text
//! g       = D_v f = sum_j v_j df/dx_j
//! h       = - sum_j v_j a_j
//! alpha_i = sum_{j>i} v_j eta_ij - sum_{j<i} v_j eta_ji
//! ```
//!
//! satisfies the identity on the nose, because `f * eta_ij = a_i df/dx_j -
//! a_j df/dx_i` for all `i, j`. The only freedom is choosing `v` so that
//! `g = D_v f` avoids the divisor's components: coordinate directions are
//! tried first, then all of `{1..5}^n` in lexicographic order — a finite,
//! deterministic budget.
//!
//! [`free_basis_check`] is the companion criterion for `n` candidate
//! generators: their wedge must equal `u * f^(n-1) dx_1^...^dx_n` with `u`
//! a unit (nonzero constant term).

use crate::form::{differential, logarithmic_quotient, DiffForm};
use crate::poly::{Coeff, Poly};

/// Witness for `g*omega + h*df = f*alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaitoTriple<C: Coeff> {
    pub g: Poly<C>,
    pub h: Poly<C>,
    pub alpha: DiffForm<C>,
    /// The contraction direction that produced the triple.
    pub direction: Vec<i64>,
}

impl<C: Coeff> SaitoTriple<C> {
    /// Checks the defining identity exactly.
    pub fn verify(&self, omega: &DiffForm<C>, f: &Poly<C>) -> bool {
        let lhs = omega.scaled_by(&self.g).add(&differential(f).scaled_by(&self.h));
        lhs == self.alpha.scaled_by(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SaitoError {
    #[error("the form is not logarithmic along the divisor")]
    NotLogarithmic,
    #[error("no admissible contraction direction among {tried} candidates")]
    BudgetExhausted { tried: usize },
    #[error("{0}")]
    InvalidInput(String),
}

/// Decomposes a logarithmic 1-form. `avoid` lists the divisor components
/// `g` must not be divisible by — pass the irreducible factors of `f`
/// (or `f` itself when irreducible).
pub fn saito_decompose<C: Coeff>(
    omega: &DiffForm<C>,
    f: &Poly<C>,
    avoid: &[Poly<C>],
) -> Result<SaitoTriple<C>, SaitoError> {
    if omega.degree() != 1 {
        return Err(SaitoError::InvalidInput("omega must be a 1-form".into()));
    }
    if f.is_zero() {
        return Err(SaitoError::InvalidInput("zero divisor".into()));
    }
    let vars = omega.vars().clone();
    if f.vars() != &vars {
        return Err(SaitoError::InvalidInput(
            "omega and f live over different variables".into(),
        ));
    }
    let df = differential(f);

    // omega == df short-circuits to the minimal witness 1*df + (-1)*df = 0.
    if *omega == df {
        let one = Poly::constant(&vars, sample_one(omega, f));
        return Ok(SaitoTriple {
            g: one.clone(),
            h: -&one,
            alpha: DiffForm::zero(&vars, 1),
            direction: vec![0; vars.len()],
        });
    }

    let eta = logarithmic_quotient(omega, f).ok_or(SaitoError::NotLogarithmic)?;
    let n = vars.len();
    let tried = std::cell::Cell::new(0usize);
    let try_direction = |v: &[i64]| -> Option<SaitoTriple<C>> {
        tried.set(tried.get() + 1);
        // g = D_v f
        let mut g = Poly::zero(&vars);
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0 {
                g = &g + &f.partial_derivative(j).scale_int(vj);
            }
        }
        if g.is_zero() {
            return None;
        }
        if avoid.iter().any(|p| !p.is_constant() && p.divides(&g)) {
            return None;
        }
        // h = -<v, a>
        let mut h = Poly::zero(&vars);
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0 {
                continue;
            }
            if let Some(aj) = omega.coefficient(&[j as u8]) {
                h = &h - &aj.scale_int(vj);
            }
        }
        // alpha_i = sum_{j>i} v_j eta_ij - sum_{j<i} v_j eta_ji
        let mut alpha_coeffs: Vec<Poly<C>> = vec![Poly::zero(&vars); n];
        for ((i, j), e) in eta
            .components()
            .map(|(idx, p)| ((idx[0] as usize, idx[1] as usize), p))
        {
            alpha_coeffs[i] = &alpha_coeffs[i] + &e.scale_int(v[j]);
            alpha_coeffs[j] = &alpha_coeffs[j] - &e.scale_int(v[i]);
        }
        let triple = SaitoTriple {
            g,
            h,
            alpha: DiffForm::one_form(&vars, &alpha_coeffs),
            direction: v.to_vec(),
        };
        debug_assert!(triple.verify(omega, f), "contraction identity");
        Some(triple)
    };

    // coordinate directions first
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        if let Some(t) = try_direction(&v) {
            return Ok(t);
        }
    }
    // then {1..5}^n lexicographically
    let mut v = vec![1i64; n];
    loop {
        if let Some(t) = try_direction(&v) {
            return Ok(t);
        }
        // next vector in lex order
        let mut k = n;
        while k > 0 && v[k - 1] == 5 {
            v[k - 1] = 1;
            k -= 1;
        }
        if k == 0 {
            return Err(SaitoError::BudgetExhausted { tried: tried.get() });
        }
        v[k - 1] += 1;
    }
}

fn sample_one<C: Coeff>(omega: &DiffForm<C>, f: &Poly<C>) -> C {
    omega
        .components()
        .next()
        .and_then(|(_, p)| p.sample_coeff())
        .or_else(|| f.sample_coeff())
        .expect("nonzero input")
        .one_like()
}

/// Outcome of wedging `n` candidate generators against `f^(n-1)`.
#[derive(Debug, Clone)]
pub enum FreeBasisOutcome<C: Coeff> {
    /// `wedge == cofactor * f^(n-1) * dx_1^...^dx_n`; the candidates form
    /// a free basis of the logarithmic module iff `is_unit`.
    Divides { cofactor: Poly<C>, is_unit: bool },
    /// `f^(n-1)` does not divide the wedge coefficient.
    NotDivisible { wedge_coefficient: Poly<C> },
    /// The wedge vanishes identically: the candidates are dependent.
    Dependent,
}

impl<C: Coeff> FreeBasisOutcome<C> {
    pub fn is_free(&self) -> bool {
        matches!(
            self,
            FreeBasisOutcome::Divides { is_unit: true, .. }
        )
    }
}

/// Saito's criterion: wedge the `n` candidates into the top form and test
/// divisibility by `f^(n-1)`, reporting the cofactor and its unit-ness.
pub fn free_basis_check<C: Coeff>(
    candidates: &[DiffForm<C>],
    f: &Poly<C>,
) -> FreeBasisOutcome<C> {
    let n = f.vars().len();
    assert!(!f.is_zero(), "zero divisor");
    assert_eq!(candidates.len(), n, "need exactly one candidate per variable");
    for c in candidates {
        assert_eq!(c.degree(), 1, "candidates must be 1-forms");
        assert_eq!(c.vars(), f.vars(), "candidate over the wrong variables");
    }
    let mut wedge = candidates[0].clone();
    for c in &candidates[1..] {
        wedge = wedge.wedge(c);
    }
    if wedge.is_zero() {
        return FreeBasisOutcome::Dependent;
    }
    let coeff = wedge.top_coefficient();
    let power = f.pow(n as u32 - 1);
    match coeff.divide_exact(&power) {
        Ok(cofactor) => {
            let is_unit = cofactor.constant_term().is_some_and(|c| !c.is_zero());
            FreeBasisOutcome::Divides { cofactor, is_unit }
        }
        Err(_) => FreeBasisOutcome::NotDivisible {
            wedge_coefficient: coeff,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;
    use crate::rat::Rat;

    fn cusp_setup() -> (Vars, DiffForm<Rat>, Poly<Rat>) {
        let v = Vars::new(&["x", "y"]);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let omega = DiffForm::one_form(&v, &[y.scale_int(-3), x.scale_int(2)]);
        let f = &y.pow(2) + &x.pow(3);
        (v, omega, f)
    }

    #[test]
    fn decomposes_the_cusp_form() {
        let (_, omega, f) = cusp_setup();
        let t = saito_decompose(&omega, &f, &[f.clone()]).unwrap();
        assert_eq!(t.g.to_string(), "3*x^2");
        assert_eq!(t.h.to_string(), "3*y");
        assert_eq!(t.alpha.to_string(), "(6)*dy");
        assert_eq!(t.direction, vec![1, 0]);
        assert!(t.verify(&omega, &f));
    }

    #[test]
    fn avoid_list_steers_the_direction() {
        let (v, omega, f) = cusp_setup();
        // excluding x as well forces the second coordinate direction
        let x = Poly::var(&v, 0);
        let t = saito_decompose(&omega, &f, &[f.clone(), x]).unwrap();
        assert_eq!(t.direction, vec![0, 1]);
        assert_eq!(t.g.to_string(), "2*y");
        assert_eq!(t.h.to_string(), "-2*x");
        assert_eq!(t.alpha.to_string(), "(-6)*dx");
        assert!(t.verify(&omega, &f));
    }

    #[test]
    fn exact_differential_short_circuits() {
        let (_, _, f) = cusp_setup();
        let t = saito_decompose(&differential(&f), &f, &[f.clone()]).unwrap();
        assert_eq!(t.g.to_string(), "1");
        assert_eq!(t.h.to_string(), "-1");
        assert!(t.alpha.is_zero());
        assert!(t.verify(&differential(&f), &f));
    }

    #[test]
    fn non_logarithmic_input_is_rejected() {
        let (v, _, f) = cusp_setup();
        let x = Poly::var(&v, 0);
        let bad = DiffForm::one_form(&v, &[Poly::zero(&v), x]);
        assert_eq!(
            saito_decompose(&bad, &f, &[f.clone()]),
            Err(SaitoError::NotLogarithmic)
        );
    }

    #[test]
    fn free_basis_for_the_cusp() {
        let (_, omega, f) = cusp_setup();
        // df ^ omega = 6 f dx^dy, so {df, omega} is free with unit 6
        match free_basis_check(&[differential(&f), omega.clone()], &f) {
            FreeBasisOutcome::Divides { cofactor, is_unit } => {
                assert_eq!(cofactor.to_string(), "6");
                assert!(is_unit);
            }
            other => panic!("expected Divides, got {other:?}"),
        }

        // {dx, dy} wedges to 1, not divisible by f
        let v = f.vars();
        let dx = DiffForm::one_form(v, &[Poly::one(v), Poly::zero(v)]);
        let dy = DiffForm::one_form(v, &[Poly::zero(v), Poly::one(v)]);
        assert!(matches!(
            free_basis_check(&[dx, dy.clone()], &f),
            FreeBasisOutcome::NotDivisible { .. }
        ));

        // a repeated candidate is dependent
        assert!(matches!(
            free_basis_check(&[omega.clone(), omega], &f),
            FreeBasisOutcome::Dependent
        ));
    }
}
