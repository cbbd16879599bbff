//! Sparse multivariate polynomials over an exact coefficient field.
//!
//! Terms are kept in a `BTreeMap` keyed by monomial in *graded
//! lexicographic* order: monomials compare first by total degree, ties by
//! exponent vectors lexicographically with earlier-declared variables
//! weighing more. With variables `x, y` declared in that order:
//!
//! ```text
//! x^2 > x*y > y^2 > x > y > 1
//! ```
//!
//! The leading term of a nonzero polynomial is its graded-lex maximum.
//! Canonical text (the `Display` impl) walks terms in *ascending* order —
//! lowest degree first, the natural reading for germs at the origin — and
//! renders coefficients per [`crate::rat`]'s convention with an explicit
//! `*` between coefficient and variables:
//!
//! ```text
//! z^2 + x^3        y - x        3/2*x*y
//! ```
//!
//! Everything here is exact; there is no floating point anywhere in the
//! crate. Multiplication and substitution switch to data-parallel kernels
//! (feature `parallel`, on by default) above a size threshold; both kernels
//! compute identical results since coefficient arithmetic is exact and
//! merging is order-insensitive.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::rat::Rat;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Pairwise term products above which multiplication uses the parallel kernel.
#[cfg(feature = "parallel")]
const PAR_PAIR_THRESHOLD: usize = 8192;

/// Term count above which substitution maps terms in parallel.
#[cfg(feature = "parallel")]
const PAR_SUBST_THRESHOLD: usize = 64;

/// Errors from exact algebra: domain mixing, impossible division, and
/// non-invertible extension elements.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands live over different variables or coefficient domains")]
    DomainMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{numerator}` is not divisible by `{divisor}`")]
    NotDivisible { numerator: String, divisor: String },
    #[error("non-invertible element: the modulus has the proper factor `{factor}`")]
    NonInvertible { factor: String },
    #[error("{0}")]
    Invalid(String),
}

/// An ordered set of variable names, shared cheaply between polynomials.
/// Equality is by content, so two independently declared `["x", "y"]` sets
/// are the same domain.
#[derive(Clone, Debug)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    /// Declares variables in order. Names must be nonempty and distinct.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        assert!(!names.is_empty(), "at least one variable is required");
        for (i, n) in names.iter().enumerate() {
            assert!(!n.is_empty(), "empty variable name");
            assert!(
                !names[..i].contains(n),
                "duplicate variable name `{n}`"
            );
        }
        Vars(Arc::new(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_str())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(", "))
    }
}

/// Exponent vector of a single monomial. Ordered graded-lex (see module doc).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    /// The monomial `1` in `n` variables.
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n].into_boxed_slice())
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(e.to_vec().into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    /// `self / other` when `other` divides `self` componentwise.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Box<[u32]>>>()
            .map(Monomial)
    }

    /// Componentwise minimum — the gcd of two monomials.
    pub fn gcd(&self, other: &Self) -> Self {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Scalars a polynomial can carry: an exact field with enough introspection
/// to print, to mint `0`/`1`/small integers *in the same domain as an
/// existing scalar*, and to refuse cross-domain arithmetic. The last point
/// matters for extension elements, which are only comparable when they
/// share a modulus; plain rationals all live in one domain.
pub trait Coeff:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    /// `1` in the domain of `self`.
    fn one_like(&self) -> Self;
    /// The integer `n` in the domain of `self`.
    fn int_like(&self, n: i64) -> Self;
    /// Exact multiplicative inverse.
    fn try_recip(&self) -> Result<Self, AlgebraError>;
    /// Whether the two scalars may legally meet in one operation.
    fn same_domain(&self, other: &Self) -> bool;
    /// How to render the scalar inside a term: sign split off when the
    /// printer can absorb it into `+`/`-` separators.
    fn coeff_text(&self) -> CoeffText;
}

/// Sign-split rendering of a scalar for the term printer.
pub struct CoeffText {
    /// True when the magnitude in `text` should be preceded by a minus sign.
    pub negative: bool,
    /// Magnitude text, already parenthesized if the domain requires it.
    pub text: String,
}

impl Coeff for Rat {
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }

    fn is_one(&self) -> bool {
        Rat::is_one(self)
    }

    fn one_like(&self) -> Self {
        Rat::one()
    }

    fn int_like(&self, n: i64) -> Self {
        Rat::int(n)
    }

    fn try_recip(&self) -> Result<Self, AlgebraError> {
        self.recip().ok_or(AlgebraError::DivisionByZero)
    }

    fn same_domain(&self, _other: &Self) -> bool {
        true
    }

    fn coeff_text(&self) -> CoeffText {
        CoeffText {
            negative: self.is_negative(),
            text: self.abs().to_string(),
        }
    }
}

/// Sparse polynomial over the coefficient field `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C: Coeff> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomials over the rationals — the workhorse type.
pub type QPoly = Poly<Rat>;

impl<C: Coeff> Poly<C> {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Constant polynomial; the zero scalar gives the zero polynomial.
    pub fn constant(vars: &Vars, c: C) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(vars.len()), c);
        }
        p
    }

    /// Single term `c * x^e`.
    pub fn term(vars: &Vars, exponents: &[u32], c: C) -> Self {
        assert_eq!(exponents.len(), vars.len(), "exponent vector arity");
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::from_exponents(exponents), c);
        }
        p
    }

    /// Sums an arbitrary term list; duplicates merge, zeros drop. All
    /// coefficients must share one domain.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p: Poly<C> = Poly::zero(vars);
        let mut sample: Option<C> = None;
        for (m, c) in terms {
            assert_eq!(m.arity(), vars.len(), "monomial arity");
            match &sample {
                None => sample = Some(c.clone()),
                Some(s) => assert!(s.same_domain(&c), "mixed coefficient domains"),
            }
            if c.is_zero() {
                continue;
            }
            match p.terms.entry(m) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += &c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Coefficient of the constant monomial, if present.
    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&Monomial::unit(self.vars.len()))
    }

    /// A nonzero constant: the unit test for scalars extracted by division.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_some()
    }

    /// Graded-lex maximal term.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Any coefficient — used to mint scalars in the same domain.
    pub fn sample_coeff(&self) -> Option<&C> {
        self.terms.values().next()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Minimal total degree over the support; `None` for zero. This is the
    /// vanishing order at the origin.
    pub fn order_at_origin(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.constant_term().is_some())
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    fn same_domain_as(&self, other: &Self) -> bool {
        self.vars == other.vars
            && match (self.sample_coeff(), other.sample_coeff()) {
                (Some(a), Some(b)) => a.same_domain(b),
                _ => true,
            }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if !self.same_domain_as(rhs) {
            return Err(AlgebraError::DomainMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            match out.terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if !self.same_domain_as(rhs) {
            return Err(AlgebraError::DomainMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            match out.terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() -= c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(-c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if !self.same_domain_as(rhs) {
            return Err(AlgebraError::DomainMismatch);
        }
        Ok(self.mul_auto(rhs))
    }

    /// Sequential multiplication kernel.
    pub fn mul_seq(&self, rhs: &Self) -> Self {
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut c = ca.clone();
                c *= cb;
                accumulate(&mut acc, ma.mul(mb), c);
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms: acc,
        }
    }

    /// Parallel multiplication kernel: the left factor's terms are chunked
    /// across threads, partial products merge afterwards. Exact arithmetic
    /// makes the merge order irrelevant, so the result is identical to
    /// [`Poly::mul_seq`].
    #[cfg(feature = "parallel")]
    pub fn mul_par(&self, rhs: &Self) -> Self {
        let lhs: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        if lhs.is_empty() || rhs.terms.is_empty() {
            return Poly::zero(&self.vars);
        }
        let chunk = lhs.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
        let partials: Vec<BTreeMap<Monomial, C>> = lhs
            .par_chunks(chunk)
            .map(|part| {
                let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
                for (ma, ca) in part {
                    for (mb, cb) in &rhs.terms {
                        let mut c = (*ca).clone();
                        c *= cb;
                        accumulate(&mut acc, ma.mul(mb), c);
                    }
                }
                acc
            })
            .collect();
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for part in partials {
            for (m, c) in part {
                accumulate(&mut acc, m, c);
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms: acc,
        }
    }

    fn mul_auto(&self, rhs: &Self) -> Self {
        #[cfg(feature = "parallel")]
        {
            if self.terms.len().saturating_mul(rhs.terms.len()) >= PAR_PAIR_THRESHOLD {
                return self.mul_par(rhs);
            }
        }
        self.mul_seq(rhs)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut out = self.clone();
        out.terms.retain(|_, v| {
            *v *= c;
            !v.is_zero()
        });
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        match self.sample_coeff() {
            Some(c) => {
                let s = c.int_like(n);
                self.scale(&s)
            }
            None => self.clone(),
        }
    }

    /// `self^e` by binary exponentiation. `e == 0` needs a nonzero
    /// polynomial to pin the coefficient domain of the resulting `1`.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            let one = self
                .sample_coeff()
                .expect("0^0: cannot mint 1 without a coefficient domain")
                .one_like();
            return Poly::constant(&self.vars, one);
        }
        let mut base = self.clone();
        let mut exp = e;
        let mut acc: Option<Poly<C>> = None;
        loop {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_auto(&base),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            base = base.mul_auto(&base);
        }
        acc.unwrap()
    }

    /// Exact division: returns `q` with `self == divisor * q`, or
    /// [`AlgebraError::NotDivisible`]. Long division by the graded-lex
    /// leading term; for a single divisor the first non-divisible leading
    /// monomial certifies non-divisibility, since an exact quotient would
    /// keep every intermediate remainder's leading term a multiple of the
    /// divisor's.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        if !self.same_domain_as(divisor) {
            return Err(AlgebraError::DomainMismatch);
        }
        let (dm, dc) = divisor.leading().ok_or(AlgebraError::DivisionByZero)?;
        let dc_inv = dc.try_recip()?;
        let mut quotient = Poly::zero(&self.vars);
        let mut rem = self.clone();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(dm).ok_or_else(|| AlgebraError::NotDivisible {
                numerator: self.to_string(),
                divisor: divisor.to_string(),
            })?;
            let mut qc = rc.clone();
            qc *= &dc_inv;
            let t = Poly::from_terms(&self.vars, [(qm, qc)]);
            // Leading terms cancel, so the remainder's leading monomial
            // strictly decreases and the loop terminates.
            rem = rem.checked_sub(&t.mul_auto(divisor))?;
            quotient = quotient.checked_add(&t)?;
        }
        Ok(quotient)
    }

    /// Whether `self` divides `f` exactly.
    pub fn divides(&self, f: &Self) -> bool {
        f.divide_exact(self).is_ok()
    }

    /// Componentwise-minimal exponents over the support: the largest
    /// monomial dividing every term. `None` for the zero polynomial.
    pub fn monomial_content(&self) -> Option<Monomial> {
        self.terms
            .keys()
            .cloned()
            .reduce(|a, b| a.gcd(&b))
    }

    /// Divides out a monomial from every term.
    pub fn divide_by_monomial(&self, m: &Monomial) -> Result<Self, AlgebraError> {
        let mut terms = BTreeMap::new();
        for (mm, c) in &self.terms {
            let q = mm.checked_div(m).ok_or_else(|| AlgebraError::NotDivisible {
                numerator: self.to_string(),
                divisor: format!("{:?}", m.exponents()),
            })?;
            terms.insert(q, c.clone());
        }
        Ok(Poly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Partial derivative with respect to the `var`-th variable.
    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.vars.len());
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] = e - 1;
            let mut nc = c.clone();
            nc *= &c.int_like(i64::from(e));
            // c * e == 0 cannot happen in characteristic zero with e >= 1,
            // but stay defensive.
            if !nc.is_zero() {
                terms.insert(Monomial::from_exponents(&exps), nc);
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Substitutes `images[i]` (over `target`) for the `i`-th variable.
    /// A ring morphism: exact on sums and products.
    pub fn substitute(&self, target: &Vars, images: &[Self]) -> Result<Self, AlgebraError> {
        if images.len() != self.vars.len() {
            return Err(AlgebraError::Invalid(format!(
                "substitution needs {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        for img in images {
            if img.vars() != target {
                return Err(AlgebraError::DomainMismatch);
            }
        }
        if self.is_zero() {
            return Ok(Poly::zero(target));
        }

        // Power ladders: images[i]^k for every k up to the largest exponent
        // of variable i in the support, computed once and shared.
        let n = self.vars.len();
        let mut max_exp = vec![0u32; n];
        for m in self.terms.keys() {
            for i in 0..n {
                max_exp[i] = max_exp[i].max(m.exponent(i));
            }
        }
        let one = self.sample_coeff().unwrap().one_like();
        let unit = Poly::constant(target, one);
        let mut ladders: Vec<Vec<Poly<C>>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut ladder = vec![unit.clone()];
            for k in 1..=max_exp[i] {
                let next = ladder[(k - 1) as usize].mul_auto(&images[i]);
                ladder.push(next);
            }
            ladders.push(ladder);
        }

        let term_image = |m: &Monomial, c: &C| -> Poly<C> {
            let mut acc = Poly::constant(target, c.clone());
            for i in 0..n {
                let e = m.exponent(i);
                if e > 0 {
                    acc = acc.mul_auto(&ladders[i][e as usize]);
                }
            }
            acc
        };

        #[cfg(feature = "parallel")]
        {
            if self.terms.len() >= PAR_SUBST_THRESHOLD {
                let terms: Vec<(&Monomial, &C)> = self.terms.iter().collect();
                let total = terms
                    .par_iter()
                    .map(|(m, c)| term_image(m, c))
                    .reduce(|| Poly::zero(target), |a, b| {
                        a.checked_add(&b).expect("uniform domain")
                    });
                return Ok(total);
            }
        }
        let mut total = Poly::zero(target);
        for (m, c) in &self.terms {
            total = total.checked_add(&term_image(m, c))?;
        }
        Ok(total)
    }

    /// Applies `f` to every coefficient (dropping zero images); the hook for
    /// lifting rational polynomials into an extension domain.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

fn accumulate<C: Coeff>(acc: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl Poly<Rat> {
    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Rat::one())
    }

    pub fn int(vars: &Vars, n: i64) -> Self {
        Poly::constant(vars, Rat::int(n))
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len());
        let mut e = vec![0u32; vars.len()];
        e[i] = 1;
        Poly::term(vars, &e, Rat::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Option<Self> {
        vars.index_of(name).map(|i| Poly::var(vars, i))
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        self.checked_add(rhs).expect("polynomial domain mismatch")
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        self.checked_sub(rhs).expect("polynomial domain mismatch")
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        self.checked_mul(rhs).expect("polynomial domain mismatch")
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

fn monomial_text(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in 0..vars.len() {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            e => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

impl<C: Coeff> fmt::Display for Poly<C> {
    /// Canonical text: terms ascending in graded-lex order, `+`/`-`
    /// separators absorbing rational signs, `*` between coefficient and
    /// variables, unit coefficients omitted except on the constant term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let CoeffText { negative, text } = c.coeff_text();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{text}")?;
            } else if text == "1" {
                write!(f, "{}", monomial_text(&self.vars, m))?;
            } else {
                write!(f, "{}*{}", text, monomial_text(&self.vars, m))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
