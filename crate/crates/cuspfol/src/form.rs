//! Differential forms with polynomial coefficients.
//!
//! A `k`-form is stored as a map from strictly increasing index tuples
//! `I = (i_1 < ... < i_k)` to polynomial coefficients, one per basis
//! monomial `dx_{i_1} ^ ... ^ dx_{i_k}`. Degree 0 is a polynomial in a
//! thin wrapper. The crate works with `k <= 3`, which is all the ambient
//! dimensions here require; wedges past the variable count vanish on
//! their own since no increasing tuple exists to carry them.
//!
//! Sign conventions are the usual ones:
//!
//! ```text
//! d(f dx_I)   = sum_j df/dx_j  dx_j ^ dx_I     (dx_j moved into place,
//!                                               one sign flip per index
//!                                               of I below j)
//! dx_I ^ dx_J = (-1)^inv  dx_{I u J}           (inv = inversions between
//!                                               I and J; zero on overlap)
//! ```
//!
//! Pullback along a polynomial map `sigma` sends `f dx_I` to
//! `(f o sigma) * d(sigma_{i_1}) ^ ... ^ d(sigma_{i_k})` — exact, and a
//! morphism for `+`, `^`, and `d`.
//!
//! A 1-form `omega` is *integrable* when `omega ^ d(omega) = 0`, and
//! *logarithmic along f* when `f` divides every coefficient of
//! `omega ^ df`; [`logarithmic_quotient`] returns the cofactor 2-form
//! `eta = (omega ^ df) / f` witnessing it.

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{AlgebraError, Coeff, Monomial, Poly, Vars};

/// Exterior differential form with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffForm<C: Coeff> {
    vars: Vars,
    degree: u8,
    comps: BTreeMap<Vec<u8>, Poly<C>>,
}

impl<C: Coeff> DiffForm<C> {
    /// The zero `degree`-form.
    pub fn zero(vars: &Vars, degree: u8) -> Self {
        DiffForm {
            vars: vars.clone(),
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// A polynomial viewed as a 0-form.
    pub fn from_poly(p: Poly<C>) -> Self {
        let vars = p.vars().clone();
        let mut comps = BTreeMap::new();
        if !p.is_zero() {
            comps.insert(Vec::new(), p);
        }
        DiffForm {
            vars,
            degree: 0,
            comps,
        }
    }

    /// 1-form from per-variable coefficients (one polynomial per `dx_i`).
    pub fn one_form(vars: &Vars, coeffs: &[Poly<C>]) -> Self {
        assert_eq!(coeffs.len(), vars.len(), "one coefficient per variable");
        let mut comps = BTreeMap::new();
        for (i, p) in coeffs.iter().enumerate() {
            assert_eq!(p.vars(), vars, "coefficient over the wrong variables");
            if !p.is_zero() {
                comps.insert(vec![i as u8], p.clone());
            }
        }
        DiffForm {
            vars: vars.clone(),
            degree: 1,
            comps,
        }
    }

    /// Builds a form from explicit components. Index tuples must be
    /// strictly increasing, of length `degree`, and in range; repeated
    /// tuples accumulate.
    pub fn from_components(
        vars: &Vars,
        degree: u8,
        parts: impl IntoIterator<Item = (Vec<u8>, Poly<C>)>,
    ) -> Self {
        let mut form = DiffForm::zero(vars, degree);
        for (idx, p) in parts {
            assert_eq!(idx.len(), degree as usize, "index tuple length");
            assert!(
                idx.windows(2).all(|w| w[0] < w[1]),
                "index tuple must be strictly increasing"
            );
            assert!(
                idx.iter().all(|&i| (i as usize) < vars.len()),
                "index out of range"
            );
            assert_eq!(p.vars(), vars, "coefficient over the wrong variables");
            form.accumulate(idx, p);
        }
        form
    }

    fn accumulate(&mut self, idx: Vec<u8>, p: Poly<C>) {
        if p.is_zero() {
            return;
        }
        match self.comps.entry(idx) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(&p).expect("uniform domain");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Components in ascending basis order; zero coefficients are absent.
    pub fn components(&self) -> impl Iterator<Item = (&[u8], &Poly<C>)> {
        self.comps.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, idx: &[u8]) -> Option<&Poly<C>> {
        self.comps.get(idx)
    }

    /// The coefficient of `dx_1 ^ ... ^ dx_n` of a top-degree form.
    pub fn top_coefficient(&self) -> Poly<C> {
        assert_eq!(self.degree as usize, self.vars.len(), "not a top form");
        let full: Vec<u8> = (0..self.vars.len() as u8).collect();
        self.comps
            .get(&full)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.vars))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "form degrees differ");
        assert_eq!(self.vars, rhs.vars, "form variables differ");
        let mut out = self.clone();
        for (idx, p) in &rhs.comps {
            out.accumulate(idx.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for p in out.comps.values_mut() {
            *p = -p.clone();
        }
        out
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scaled_by(&self, p: &Poly<C>) -> Self {
        let mut out = DiffForm::zero(&self.vars, self.degree);
        if p.is_zero() {
            return out;
        }
        for (idx, q) in &self.comps {
            out.accumulate(idx.clone(), q.checked_mul(p).expect("uniform domain"));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let mut out = DiffForm::zero(&self.vars, self.degree);
        for (idx, q) in &self.comps {
            out.accumulate(idx.clone(), q.scale_int(n));
        }
        out
    }

    /// Exterior derivative (see module doc for the sign rule).
    pub fn d(&self) -> Self {
        let mut out = DiffForm::zero(&self.vars, self.degree + 1);
        for (idx, p) in &self.comps {
            for j in 0..self.vars.len() as u8 {
                if idx.contains(&j) {
                    continue;
                }
                let dp = p.partial_derivative(j as usize);
                if dp.is_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&i| i < j).count();
                let mut new_idx = idx.clone();
                new_idx.insert(pos, j);
                let signed = if pos % 2 == 1 { -dp } else { dp };
                out.accumulate(new_idx, signed);
            }
        }
        out
    }

    /// Wedge product with the inversion-count sign.
    pub fn wedge(&self, rhs: &Self) -> Self {
        assert_eq!(self.vars, rhs.vars, "form variables differ");
        let mut out = DiffForm::zero(&self.vars, self.degree + rhs.degree);
        for (ia, pa) in &self.comps {
            for (ib, pb) in &rhs.comps {
                let Some((idx, negative)) = merge_with_sign(ia, ib) else {
                    continue;
                };
                let prod = pa.checked_mul(pb).expect("uniform domain");
                out.accumulate(idx, if negative { -prod } else { prod });
            }
        }
        out
    }

    /// Pullback along the map sending the `i`-th source variable to
    /// `images[i]` (a polynomial over `target`).
    pub fn pullback(&self, target: &Vars, images: &[Poly<C>]) -> Result<Self, AlgebraError> {
        if images.len() != self.vars.len() {
            return Err(AlgebraError::Invalid(format!(
                "pullback needs {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        // d(sigma_i) once per source variable that occurs in some tuple
        let mut dimages: Vec<Option<DiffForm<C>>> = vec![None; images.len()];
        for idx in self.comps.keys() {
            for &i in idx {
                let slot = &mut dimages[i as usize];
                if slot.is_none() {
                    *slot = Some(differential(&images[i as usize]));
                }
            }
        }
        let mut out = DiffForm::zero(target, self.degree);
        for (idx, p) in &self.comps {
            let mut piece = DiffForm::from_poly(p.substitute(target, images)?);
            for &i in idx {
                piece = piece.wedge(dimages[i as usize].as_ref().unwrap());
            }
            out = out.add(&piece);
        }
        Ok(out)
    }

    /// Divides every coefficient exactly by `g`.
    pub fn divide_exact(&self, g: &Poly<C>) -> Result<Self, AlgebraError> {
        let mut out = DiffForm::zero(&self.vars, self.degree);
        for (idx, p) in &self.comps {
            out.accumulate(idx.clone(), p.divide_exact(g)?);
        }
        Ok(out)
    }

    /// Largest monomial dividing every coefficient; `None` when zero.
    pub fn monomial_content(&self) -> Option<Monomial> {
        self.comps
            .values()
            .filter_map(|p| p.monomial_content())
            .reduce(|a, b| a.gcd(&b))
    }

    pub fn divide_by_monomial(&self, m: &Monomial) -> Result<Self, AlgebraError> {
        let mut out = DiffForm::zero(&self.vars, self.degree);
        for (idx, p) in &self.comps {
            out.accumulate(idx.clone(), p.divide_by_monomial(m)?);
        }
        Ok(out)
    }

    /// Minimal vanishing order at the origin over all coefficients.
    pub fn order_at_origin(&self) -> Option<u64> {
        self.comps.values().filter_map(Poly::order_at_origin).min()
    }

    /// Applies `f` to every coefficient polynomial.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> DiffForm<D> {
        let mut out = DiffForm::zero(&self.vars, self.degree);
        for (idx, p) in &self.comps {
            out.accumulate(idx.clone(), p.map_coeffs(&f));
        }
        out
    }

    /// Frobenius test `omega ^ d(omega) == 0` for a 1-form.
    pub fn is_integrable(&self) -> bool {
        assert_eq!(self.degree, 1, "integrability is a 1-form test");
        self.wedge(&self.d()).is_zero()
    }
}

/// Gradient of a polynomial as a 1-form: `d(g) = sum_i dg/dx_i dx_i`.
pub fn differential<C: Coeff>(g: &Poly<C>) -> DiffForm<C> {
    let vars = g.vars().clone();
    let coeffs: Vec<Poly<C>> = (0..vars.len()).map(|i| g.partial_derivative(i)).collect();
    DiffForm::one_form(&vars, &coeffs)
}

/// `eta` with `omega ^ df == f * eta`, when `f` divides every coefficient
/// of the wedge; `None` otherwise.
pub fn logarithmic_quotient<C: Coeff>(omega: &DiffForm<C>, f: &Poly<C>) -> Option<DiffForm<C>> {
    omega.wedge(&differential(f)).divide_exact(f).ok()
}

/// Whether `omega` is logarithmic along `f`.
pub fn is_logarithmic<C: Coeff>(omega: &DiffForm<C>, f: &Poly<C>) -> bool {
    logarithmic_quotient(omega, f).is_some()
}

/// Concatenates two strictly increasing tuples; `None` on overlap,
/// otherwise the sorted union with the parity of inversions.
fn merge_with_sign(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, bool)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            match x.cmp(&y) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut merged: Vec<u8> = a.iter().chain(b.iter()).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl<C: Coeff> fmt::Display for DiffForm<C> {
    /// Canonical text: components in ascending basis order, coefficients
    /// parenthesized, wedge written `^`: `(y)*dx + (x)*dy + (2*z)*dz`.
    /// A 0-form prints as its polynomial; zero prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.comps.values().next().unwrap());
        }
        let mut first = true;
        for (idx, p) in &self.comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let basis: Vec<String> = idx
                .iter()
                .map(|&i| format!("d{}", self.vars.name(i as usize)))
                .collect();
            write!(f, "({})*{}", p, basis.join("^"))?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
