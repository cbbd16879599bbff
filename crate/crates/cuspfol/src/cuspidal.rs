//! Cuspidal-type surface germs and their logarithmic generators.
//!
//! The surfaces here are `f = z^2 + Psi(x,y)^r` with
//!
//! ```text
//! Psi(x, y) = prod_i (y^p - a_i x^q)^{d'_i},
//! ```
//!
//! given by a [`CuspidalSpec`]: exponents `2 <= p < q`, nonzero pairwise
//! distinct roots `a_i`, and multiplicities `d_i = r * d'_i` with
//! `r = gcd(d_i)`. Writing `delta = gcd(p, q)` and `(m, n)` for the
//! minimal solution of `m*p - n*q = delta` with `0 <= m < q/delta`,
//! `0 <= n < p/delta`, the spec also carries the derived exponents that
//! drive the resolution chain (`d = sum d_i`, `d' = sum d'_i`):
//!
//! ```text
//! P = (p*q/delta)*d  - 2*((p+q)/delta - 1)
//! Q = n*q*d          - 2*(m + n - 1)
//! a = (p*q/delta)*d' -   ((p+q)/delta - 1) + 1
//! b = n*q*d'         -   (m + n - 1)       + 1
//! ```
//!
//! Logarithmic 1-forms along `f` are assembled from a two-variable
//! polynomial `G` via
//!
//! ```text
//! omega = d(z^2 + Psi^r) + G(Psi, z) * (r*z*dPsi - 2*Psi*dz),
//! ```
//!
//! which is automatically integrable (it is the pullback of a 1-form in
//! two variables under `(x,y,z) -> (Psi, z)`) and satisfies
//! `omega ^ df = 2*r*G(Psi,z)*f * dPsi^dz`.
//!
//! In the other direction, [`cuspidal_decompose`] splits an arbitrary
//! 1-form `omega` logarithmic along `z^k + phi` (any `k >= 2`, `phi` free
//! of `z`) over the canonical pair `omega_1 = df`,
//! `omega_2 = z*dphi - k*phi*dz`:
//!
//! ```text
//! k*phi_x1 * omega = (-G_1)*omega_1 + H_1*omega_2 + f * sum_{i>=2} (-t_i) dx_i
//! ```
//!
//! with `H_i, G_i` the `dx_i^dz`-coefficients of `(omega^omega_1)/f` and
//! `(omega^omega_2)/f`, and `t_i = (phi_x1*G_i - G_1*phi_xi)/phi` (exact:
//! `phi` divides `z^{k-1}*(phi_xi*G_1 - phi_x1*G_i)` and is coprime to
//! `z`). The identity above holds for every logarithmic `omega`; the
//! *unit* version `U*omega = omega_1 + H*omega_2 + f*omega_3` additionally
//! needs `G_1/phi_x1` to be a unit — the order condition checked here —
//! and materializes polynomially whenever `-G_1` divides the other
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::form::{differential, logarithmic_quotient, DiffForm};
use crate::poly::{Coeff, Poly, QPoly, Vars};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("exponents must satisfy 2 <= p < q (got p={p}, q={q})")]
    BadExponents { p: u32, q: u32 },
    #[error("need as many multiplicities as roots")]
    LengthMismatch,
    #[error("at least one root is required")]
    Empty,
    #[error("root {index} is zero")]
    ZeroRoot { index: usize },
    #[error("duplicate root `{root}`")]
    DuplicateRoot { root: String },
    #[error("multiplicity {index} is zero")]
    ZeroMultiplicity { index: usize },
}

/// A cuspidal-type surface family, with every derived exponent the
/// resolution needs precomputed. `P` and `Q` may legitimately be negative;
/// the resolution builder rejects them, not the spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspidalSpec {
    pub p: u32,
    pub q: u32,
    pub roots: Vec<Rat>,
    pub mults: Vec<u32>,
    /// `gcd(p, q)`
    pub delta: u32,
    /// `gcd` of the multiplicities
    pub r: u32,
    /// `sum d_i`
    pub d: u32,
    /// `d_i / r`
    pub dprimes: Vec<u32>,
    /// `sum d'_i`
    pub dprime: u32,
    /// minimal `(m, n)` with `m*p - n*q = delta`
    pub m: u32,
    pub n: u32,
    /// exponent `P` of `x` on the transformed surface
    pub p_exp: i64,
    /// exponent `Q` of `y` on the transformed surface
    pub q_exp: i64,
    /// exponent `a` of `x` on the transformed generator
    pub a_exp: i64,
    /// exponent `b` of `y` on the transformed generator
    pub b_exp: i64,
}

impl CuspidalSpec {
    pub fn new(p: u32, q: u32, roots: Vec<Rat>, mults: Vec<u32>) -> Result<Self, SpecError> {
        if p < 2 || p >= q {
            return Err(SpecError::BadExponents { p, q });
        }
        if roots.len() != mults.len() {
            return Err(SpecError::LengthMismatch);
        }
        if roots.is_empty() {
            return Err(SpecError::Empty);
        }
        for (i, a) in roots.iter().enumerate() {
            if a.is_zero() {
                return Err(SpecError::ZeroRoot { index: i });
            }
            if roots[..i].contains(a) {
                return Err(SpecError::DuplicateRoot {
                    root: a.to_string(),
                });
            }
        }
        for (i, &d) in mults.iter().enumerate() {
            if d == 0 {
                return Err(SpecError::ZeroMultiplicity { index: i });
            }
        }

        let delta = p.gcd(&q);
        let r = mults.iter().fold(0u32, |acc, &d| acc.gcd(&d));
        let d: u32 = mults.iter().sum();
        let dprimes: Vec<u32> = mults.iter().map(|&di| di / r).collect();
        let dprime: u32 = dprimes.iter().sum();

        // minimal m with m*p = delta (mod q); then n = (m*p - delta)/q
        let (mut m, mut n) = (0u32, 0u32);
        for cand in 0..(q / delta) {
            let lhs = i64::from(cand) * i64::from(p) - i64::from(delta);
            if lhs >= 0 && lhs % i64::from(q) == 0 {
                m = cand;
                n = u32::try_from(lhs / i64::from(q)).unwrap();
                break;
            }
        }
        debug_assert_eq!(
            i64::from(m) * i64::from(p) - i64::from(n) * i64::from(q),
            i64::from(delta)
        );
        debug_assert!(n < p / delta || (n == 0 && p / delta == 1));

        let (p64, q64, delta64) = (i64::from(p), i64::from(q), i64::from(delta));
        let (d64, dp64) = (i64::from(d), i64::from(dprime));
        let (m64, n64) = (i64::from(m), i64::from(n));
        let weight_product = p64 * q64 / delta64; // p*q/delta
        let edge = (p64 + q64) / delta64 - 1; // (p+q)/delta - 1

        let p_exp = weight_product * d64 - 2 * edge;
        let q_exp = n64 * q64 * d64 - 2 * (m64 + n64 - 1);
        let a_exp = weight_product * dp64 - edge + 1;
        let b_exp = n64 * q64 * dp64 - (m64 + n64 - 1) + 1;

        Ok(CuspidalSpec {
            p,
            q,
            roots,
            mults,
            delta,
            r,
            d,
            dprimes,
            dprime,
            m,
            n,
            p_exp,
            q_exp,
            a_exp,
            b_exp,
        })
    }

    fn check_vars(&self, vars: &Vars) {
        assert_eq!(
            vars.len(),
            3,
            "cuspidal surfaces live in three variables (x, y, z by position)"
        );
    }

    /// One reduced branch `y^p - a_i x^q`.
    pub fn branch(&self, vars: &Vars, index: usize) -> QPoly {
        self.check_vars(vars);
        let yp = Poly::term(vars, &[0, self.p, 0], Rat::one());
        let xq = Poly::term(vars, &[self.q, 0, 0], self.roots[index].clone());
        &yp - &xq
    }

    /// `Psi = prod_i (y^p - a_i x^q)^{d'_i}`, the reduced equation of the
    /// branch curve.
    pub fn psi(&self, vars: &Vars) -> QPoly {
        self.check_vars(vars);
        let mut acc = Poly::one(vars);
        for i in 0..self.roots.len() {
            acc = &acc * &self.branch(vars, i).pow(self.dprimes[i]);
        }
        acc
    }

    /// `phi = Psi^r = prod_i (y^p - a_i x^q)^{d_i}`.
    pub fn phi(&self, vars: &Vars) -> QPoly {
        self.psi(vars).pow(self.r)
    }

    /// The surface `f = z^2 + Psi^r`.
    pub fn surface(&self, vars: &Vars) -> QPoly {
        self.check_vars(vars);
        &Poly::term(vars, &[0, 0, 2], Rat::one()) + &self.phi(vars)
    }

    /// Points where the surface is singular: always the origin, plus the
    /// branch curves `{y^p - a_i x^q = 0, z = 0}` carrying `d_i > 1`.
    pub fn singular_locus(&self, vars: &Vars) -> SingularLocus {
        self.check_vars(vars);
        let curves = (0..self.roots.len())
            .filter(|&i| self.mults[i] > 1)
            .map(|i| SingularCurve {
                root_index: i,
                equation: self.branch(vars, i),
            })
            .collect();
        SingularLocus { curves }
    }
}

impl fmt::Display for CuspidalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roots: Vec<String> = self.roots.iter().map(Rat::to_string).collect();
        let mults: Vec<String> = self.mults.iter().map(u32::to_string).collect();
        write!(
            f,
            "p={} q={} roots=({}) mults=({})",
            self.p,
            self.q,
            roots.join(", "),
            mults.join(", ")
        )
    }
}

/// The singular locus of a cuspidal surface: the origin plus the listed
/// curves (each sitting in `z = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularLocus {
    pub curves: Vec<SingularCurve>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularCurve {
    pub root_index: usize,
    /// `y^p - a_i x^q`; the curve is this equation together with `z = 0`.
    pub equation: QPoly,
}

impl fmt::Display for SingularLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the origin")?;
        for c in &self.curves {
            write!(f, "; {{{} = 0, z = 0}}", c.equation)?;
        }
        Ok(())
    }
}

/// A polynomial `G` in the two formal arguments `(Psi, z)`, kept as a
/// sparse exponent table. Coefficients are rational.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl GPoly {
    pub fn zero() -> Self {
        GPoly::default()
    }

    pub fn new(terms: impl IntoIterator<Item = (u32, u32, Rat)>) -> Self {
        let mut map: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        for (a, b, c) in terms {
            if c.is_zero() {
                continue;
            }
            let slot = map.entry((a, b)).or_insert_with(Rat::zero);
            *slot += &c;
            if slot.is_zero() {
                map.remove(&(a, b));
            }
        }
        GPoly { terms: map }
    }

    pub fn constant(c: Rat) -> Self {
        GPoly::new([(0, 0, c)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rat)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    /// `G(first, second) = sum c * first^alpha * second^beta`.
    pub fn evaluate(&self, first: &QPoly, second: &QPoly) -> QPoly {
        let vars = first.vars();
        assert_eq!(vars, second.vars(), "arguments over different variables");
        let mut acc = Poly::zero(vars);
        for (&(a, b), c) in &self.terms {
            let mut t = Poly::constant(vars, c.clone());
            if a > 0 {
                t = &t * &first.pow(a);
            }
            if b > 0 {
                t = &t * &second.pow(b);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// `min(wa*alpha + wb*beta)` over the support; `None` when `G = 0`.
    pub fn weighted_order(&self, wa: u32, wb: u32) -> Option<u64> {
        self.terms
            .keys()
            .map(|&(a, b)| u64::from(wa) * u64::from(a) + u64::from(wb) * u64::from(b))
            .min()
    }
}

impl fmt::Display for GPoly {
    /// Terms ascending in `(alpha, beta)`: `1 - 2*psi*z^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(a, b), c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (a, b) == (0, 0) {
                parts.push(mag.to_string());
            }
            match a {
                0 => {}
                1 => parts.push("psi".into()),
                _ => parts.push(format!("psi^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("z".into()),
                _ => parts.push(format!("z^{b}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// `omega = d(z^2 + Psi^r) + G(Psi, z) * (r*z*dPsi - 2*Psi*dz)`, the
/// logarithmic generator of the family attached to `G`.
pub fn assemble_generator(spec: &CuspidalSpec, g: &GPoly, vars: &Vars) -> DiffForm<Rat> {
    let psi = spec.psi(vars);
    let z = Poly::var(vars, 2);
    let surface = spec.surface(vars);
    let dz = DiffForm::one_form(vars, &[Poly::zero(vars), Poly::zero(vars), Poly::one(vars)]);
    let swing = differential(&psi)
        .scaled_by(&z)
        .scale_int(i64::from(spec.r))
        .sub(&dz.scaled_by(&psi).scale_int(2));
    let ghat = g.evaluate(&psi, &z);
    differential(&surface).add(&swing.scaled_by(&ghat))
}

/// `z^k + phi`, with `z` the last variable.
pub fn cusp_surface<C: Coeff>(phi: &Poly<C>, k: u32) -> Poly<C> {
    let vars = phi.vars();
    let n = vars.len();
    let one = phi
        .sample_coeff()
        .expect("phi must be nonzero")
        .one_like();
    let mut e = vec![0u32; n];
    e[n - 1] = k;
    &Poly::term(vars, &e, one) + phi
}

/// The canonical logarithmic pair along `f = z^k + phi`:
/// `omega_1 = df` and `omega_2 = z*dphi - k*phi*dz`. The second satisfies
/// `omega_2 = z*df - k*f*dz`, hence `f` divides `omega ^ omega_2` whenever
/// `f` divides `omega ^ df`.
pub fn log_pair<C: Coeff>(phi: &Poly<C>, k: u32) -> (DiffForm<C>, DiffForm<C>) {
    let vars = phi.vars();
    let n = vars.len();
    let f = cusp_surface(phi, k);
    let one = phi.sample_coeff().unwrap().one_like();
    let mut ze = vec![0u32; n];
    ze[n - 1] = 1;
    let z = Poly::term(vars, &ze, one.clone());
    let dz_coeffs: Vec<Poly<C>> = (0..n)
        .map(|i| {
            if i == n - 1 {
                Poly::constant(vars, one.clone())
            } else {
                Poly::zero(vars)
            }
        })
        .collect();
    let dz = DiffForm::one_form(vars, &dz_coeffs);
    let omega2 = differential(phi)
        .scaled_by(&z)
        .sub(&dz.scaled_by(phi).scale_int(i64::from(k)));
    (differential(&f), omega2)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CuspError {
    #[error("the form is not logarithmic along z^k + phi")]
    NotLogarithmic,
    #[error("order condition violated: {detail}")]
    OrderViolation { detail: String },
    #[error("{0}")]
    InvalidInput(String),
}

/// The cleared decomposition identity
/// `omega_scale * omega = df_coeff * omega_1 + omega2_coeff * omega_2 +
/// f * residual`, plus — when `df_coeff` divides throughout — the unit
/// form `unit * omega = omega_1 + h * omega_2 + f * residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspDecomposition<C: Coeff> {
    /// `k * phi_x1`: multiplies `omega`.
    pub omega_scale: Poly<C>,
    /// `-G_1`: multiplies `omega_1 = df`.
    pub df_coeff: Poly<C>,
    /// `H_1`: multiplies `omega_2 = z*dphi - k*phi*dz`.
    pub omega2_coeff: Poly<C>,
    /// `sum_{i>=2} (-t_i) dx_i`: multiplies `f`.
    pub residual: DiffForm<C>,
    /// The identity normalized to `unit * omega = omega_1 + h * omega_2 +
    /// f * residual`, when the division works out polynomially.
    pub normalized: Option<CuspTriple<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspTriple<C: Coeff> {
    pub unit: Poly<C>,
    pub h: Poly<C>,
    pub residual: DiffForm<C>,
}

impl<C: Coeff> CuspDecomposition<C> {
    /// Re-checks the cleared identity exactly.
    pub fn verify(&self, omega: &DiffForm<C>, k: u32, phi: &Poly<C>) -> bool {
        let f = cusp_surface(phi, k);
        let (omega1, omega2) = log_pair(phi, k);
        let lhs = omega.scaled_by(&self.omega_scale);
        let rhs = omega1
            .scaled_by(&self.df_coeff)
            .add(&omega2.scaled_by(&self.omega2_coeff))
            .add(&self.residual.scaled_by(&f));
        lhs == rhs
    }
}

impl<C: Coeff> CuspTriple<C> {
    /// Re-checks `unit * omega = omega_1 + h * omega_2 + f * residual`.
    pub fn verify(&self, omega: &DiffForm<C>, k: u32, phi: &Poly<C>) -> bool {
        let f = cusp_surface(phi, k);
        let (omega1, omega2) = log_pair(phi, k);
        let lhs = omega.scaled_by(&self.unit);
        let rhs = omega1
            .add(&omega2.scaled_by(&self.h))
            .add(&self.residual.scaled_by(&f));
        lhs == rhs
    }
}

/// Splits a 1-form logarithmic along `z^k + phi` over the canonical pair.
/// See the module doc for the construction and its guarantees. The last
/// variable plays `z`; `phi` must not involve it, must vanish at the
/// origin, and must depend on the first variable.
pub fn cuspidal_decompose<C: Coeff>(
    omega: &DiffForm<C>,
    k: u32,
    phi: &Poly<C>,
) -> Result<CuspDecomposition<C>, CuspError> {
    if omega.degree() != 1 {
        return Err(CuspError::InvalidInput("omega must be a 1-form".into()));
    }
    let vars = omega.vars().clone();
    if phi.vars() != &vars {
        return Err(CuspError::InvalidInput(
            "omega and phi live over different variables".into(),
        ));
    }
    if k < 2 {
        return Err(CuspError::InvalidInput("k must be at least 2".into()));
    }
    if vars.len() < 2 {
        return Err(CuspError::InvalidInput(
            "need at least one x variable besides z".into(),
        ));
    }
    let zi = vars.len() - 1;
    if phi.depends_on(zi) {
        return Err(CuspError::InvalidInput(format!(
            "phi must not involve the transverse variable `{}`",
            vars.name(zi)
        )));
    }
    if phi.constant_term().is_some() || phi.is_zero() {
        return Err(CuspError::InvalidInput(
            "phi must vanish at the origin".into(),
        ));
    }
    let phi_x1 = phi.partial_derivative(0);
    if phi_x1.is_zero() {
        return Err(CuspError::InvalidInput(format!(
            "phi must depend on the first variable `{}` (reorder variables)",
            vars.name(0)
        )));
    }

    let f = cusp_surface(phi, k);
    let eta = logarithmic_quotient(omega, &f).ok_or(CuspError::NotLogarithmic)?;

    // Gamma = (omega ^ omega_2)/f = z*eta - k*(omega ^ dz), division-free.
    let one = phi.sample_coeff().unwrap().one_like();
    let mut ze = vec![0u32; vars.len()];
    ze[zi] = 1;
    let z = Poly::term(&vars, &ze, one.clone());
    let dz_coeffs: Vec<Poly<C>> = (0..vars.len())
        .map(|i| {
            if i == zi {
                Poly::constant(&vars, one.clone())
            } else {
                Poly::zero(&vars)
            }
        })
        .collect();
    let dz = DiffForm::one_form(&vars, &dz_coeffs);
    let gamma = eta
        .scaled_by(&z)
        .sub(&omega.wedge(&dz).scale_int(i64::from(k)));

    let comp = |form: &DiffForm<C>, i: usize| -> Poly<C> {
        form.coefficient(&[i as u8, zi as u8])
            .cloned()
            .unwrap_or_else(|| Poly::zero(&vars))
    };
    let g1 = comp(&gamma, 0);
    let h1 = comp(&eta, 0);

    // Order condition: G_1 / phi_x1 must be a unit.
    let v = g1.divide_exact(&phi_x1).map_err(|_| CuspError::OrderViolation {
        detail: format!("G_1 = {g1} is not divisible by phi_x1 = {phi_x1}"),
    })?;
    if v.constant_term().is_none() {
        return Err(CuspError::OrderViolation {
            detail: format!("G_1/phi_x1 = {v} vanishes at the origin"),
        });
    }

    let omega_scale = phi_x1.scale_int(i64::from(k));
    let df_coeff = -&g1;
    let mut residual_coeffs: Vec<Poly<C>> = vec![Poly::zero(&vars); vars.len()];
    for i in 1..zi {
        let gi = comp(&gamma, i);
        let phi_xi = phi.partial_derivative(i);
        let numerator = &(&phi_x1 * &gi) - &(&g1 * &phi_xi);
        let ti = numerator.divide_exact(phi).map_err(|_| CuspError::OrderViolation {
            detail: format!(
                "phi does not divide phi_x1*G_{i} - G_1*phi_x{i}; \
                 the form is not adapted to the pair"
            ),
        })?;
        residual_coeffs[i] = -ti;
    }
    let residual = DiffForm::one_form(&vars, &residual_coeffs);

    // The normalized triple, when -G_1 divides everything.
    let normalized = (|| {
        let unit = omega_scale.divide_exact(&df_coeff).ok()?;
        let h = h1.divide_exact(&df_coeff).ok()?;
        let res = residual.divide_exact(&df_coeff).ok()?;
        Some(CuspTriple {
            unit,
            h,
            residual: res,
        })
    })();

    let decomposition = CuspDecomposition {
        omega_scale,
        df_coeff,
        omega2_coeff: h1,
        residual,
        normalized,
    };
    debug_assert!(decomposition.verify(omega, k, phi), "cleared identity");
    Ok(decomposition)
}
