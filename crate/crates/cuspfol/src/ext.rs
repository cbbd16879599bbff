//! Simple algebraic extensions of the rationals.
//!
//! An [`ExtModulus`] fixes the relation `t^d = a` (with `d >= 2`, `a` a
//! nonzero rational), and an [`Ext`] is a residue class in `Q[t]/(t^d - a)`,
//! stored as its reduced representative of degree `< d`. No irreducibility
//! check happens up front: arithmetic stays well-defined over any quotient,
//! and the first inversion that meets a zero divisor reports the proper
//! factor of the modulus it discovered (via the extended Euclidean
//! algorithm), as [`AlgebraError::NonInvertible`].
//!
//! Elements from different moduli never mix; binary operations panic on a
//! modulus mismatch, and the checked polynomial entry points reject such
//! operands up front via [`Coeff::same_domain`].

use std::fmt;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};
use std::sync::Arc;

use crate::poly::{AlgebraError, Coeff, CoeffText};
use crate::rat::Rat;

/// The defining relation `t^degree = constant`.
#[derive(Debug, PartialEq, Eq)]
pub struct ExtModulus {
    degree: u32,
    constant: Rat,
}

impl ExtModulus {
    /// Modulus `t^degree - constant`. Requires `degree >= 2` and a nonzero
    /// constant.
    pub fn new(degree: u32, constant: Rat) -> Arc<Self> {
        assert!(degree >= 2, "extension degree must be at least 2");
        assert!(!constant.is_zero(), "extension constant must be nonzero");
        Arc::new(ExtModulus { degree, constant })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn constant(&self) -> &Rat {
        &self.constant
    }

    /// Dense little-endian coefficients of `t^degree - constant`.
    fn coeffs(&self) -> Vec<Rat> {
        let mut m = vec![Rat::zero(); self.degree as usize + 1];
        m[0] = -self.constant.clone();
        m[self.degree as usize] = Rat::one();
        m
    }
}

impl fmt::Display for ExtModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constant.is_negative() {
            write!(f, "t^{} + {}", self.degree, self.constant.abs())
        } else {
            write!(f, "t^{} - {}", self.degree, self.constant)
        }
    }
}

/// Residue class in `Q[t]/(t^d - a)`: a dense representative of degree
/// `< d` plus a shared handle on the modulus.
#[derive(Clone)]
pub struct Ext {
    rep: Vec<Rat>,
    modulus: Arc<ExtModulus>,
}

impl Ext {
    /// Reduces arbitrary little-endian coefficients modulo `t^d = a`.
    pub fn new(coeffs: &[Rat], modulus: &Arc<ExtModulus>) -> Self {
        let d = modulus.degree as usize;
        let mut rep = vec![Rat::zero(); d];
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // t^e = a^(e / d) * t^(e mod d)
            let q = (e / d) as i32;
            let r = e % d;
            let folded = if q == 0 {
                c.clone()
            } else {
                c * &modulus.constant.pow(q)
            };
            rep[r] += &folded;
        }
        Ext {
            rep,
            modulus: modulus.clone(),
        }
    }

    pub fn from_rat(c: Rat, modulus: &Arc<ExtModulus>) -> Self {
        Ext::new(&[c], modulus)
    }

    /// The residue of `t` itself: the adjoined root.
    pub fn generator(modulus: &Arc<ExtModulus>) -> Self {
        Ext::new(&[Rat::zero(), Rat::one()], modulus)
    }

    pub fn modulus(&self) -> &Arc<ExtModulus> {
        &self.modulus
    }

    /// The reduced representative, little-endian, length `= degree`.
    pub fn rep(&self) -> &[Rat] {
        &self.rep
    }

    /// `Some(c)` when the element is the plain rational `c`.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.rep[1..].iter().all(Rat::is_zero) {
            Some(&self.rep[0])
        } else {
            None
        }
    }

    fn assert_same_modulus(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus,
            "extension elements from different moduli: {} vs {}",
            self.modulus,
            other.modulus
        );
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        *self.modulus == *other.modulus && self.rep == other.rep
    }
}

impl Eq for Ext {}

impl AddAssign<&Ext> for Ext {
    fn add_assign(&mut self, rhs: &Ext) {
        self.assert_same_modulus(rhs);
        for (a, b) in self.rep.iter_mut().zip(rhs.rep.iter()) {
            *a += b;
        }
    }
}

impl SubAssign<&Ext> for Ext {
    fn sub_assign(&mut self, rhs: &Ext) {
        self.assert_same_modulus(rhs);
        for (a, b) in self.rep.iter_mut().zip(rhs.rep.iter()) {
            *a -= b;
        }
    }
}

impl MulAssign<&Ext> for Ext {
    fn mul_assign(&mut self, rhs: &Ext) {
        self.assert_same_modulus(rhs);
        let prod = upoly_mul(&self.rep, &rhs.rep);
        *self = Ext::new(&prod, &self.modulus);
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(mut self) -> Ext {
        for c in &mut self.rep {
            *c = -c.clone();
        }
        self
    }
}

impl Coeff for Ext {
    fn is_zero(&self) -> bool {
        self.rep.iter().all(Rat::is_zero)
    }

    fn is_one(&self) -> bool {
        self.as_rat().is_some_and(Rat::is_one)
    }

    fn one_like(&self) -> Self {
        Ext::from_rat(Rat::one(), &self.modulus)
    }

    fn int_like(&self, n: i64) -> Self {
        Ext::from_rat(Rat::int(n), &self.modulus)
    }

    /// Inverse via the extended Euclidean algorithm in `Q[t]`: from
    /// `u*rep + v*m = g` with `g` constant, the inverse is `u/g`. A
    /// nonconstant `g` is a proper factor of the modulus — the element is a
    /// zero divisor and the quotient was not a field after all.
    fn try_recip(&self) -> Result<Self, AlgebraError> {
        if Coeff::is_zero(self) {
            return Err(AlgebraError::DivisionByZero);
        }
        let m = self.modulus.coeffs();
        let (g, u, _v) = upoly_egcd(&self.rep, &m);
        match upoly_degree(&g) {
            Some(0) => {
                let ginv = g[0].recip().expect("nonzero gcd constant");
                let inv: Vec<Rat> = u.iter().map(|c| c * &ginv).collect();
                Ok(Ext::new(&inv, &self.modulus))
            }
            Some(_) => Err(AlgebraError::NonInvertible {
                factor: upoly_text(&upoly_monic(&g)),
            }),
            None => unreachable!("gcd of a nonzero element cannot vanish"),
        }
    }

    fn same_domain(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus
    }

    fn coeff_text(&self) -> CoeffText {
        match self.as_rat() {
            Some(c) => c.coeff_text(),
            None => CoeffText {
                negative: false,
                text: format!("({self})"),
            },
        }
    }
}

impl fmt::Display for Ext {
    /// Representative as a polynomial in `t`, degree ascending:
    /// `-1 + t`, `1/2*t`, `3 + 2*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", upoly_text(&self.rep))
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.modulus)
    }
}

// ---- dense univariate helpers (little-endian Vec<Rat>) ----

fn upoly_degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn upoly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    match upoly_degree(&p) {
        Some(d) => {
            p.truncate(d + 1);
            p
        }
        None => Vec::new(),
    }
}

fn upoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let prod = ca * cb;
            out[i + j] += &prod;
        }
    }
    upoly_trim(out)
}

fn upoly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    upoly_trim(out)
}

/// Quotient of Euclidean division over the rationals.
fn upoly_quot(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let db = upoly_degree(b).expect("division by zero polynomial");
    let lead_inv = b[db].recip().unwrap();
    let mut rem = upoly_trim(a.to_vec());
    let mut quot = vec![Rat::zero(); a.len().saturating_sub(db)];
    while let Some(dr) = upoly_degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] * &lead_inv;
        let shift = dr - db;
        for (j, bc) in b.iter().enumerate().take(db + 1) {
            let sub = &c * bc;
            rem[shift + j] -= &sub;
        }
        quot[shift] += &c;
    }
    upoly_trim(quot)
}

/// Extended gcd: returns `(g, u, v)` with `u*a + v*b = g`.
fn upoly_egcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut r0 = upoly_trim(a.to_vec());
    let mut r1 = upoly_trim(b.to_vec());
    let mut u0 = vec![Rat::one()];
    let mut u1 = Vec::new();
    let mut v0 = Vec::new();
    let mut v1 = vec![Rat::one()];
    while !r1.is_empty() {
        let q = upoly_quot(&r0, &r1);
        let r2 = upoly_sub(&r0, &upoly_mul(&q, &r1));
        let u2 = upoly_sub(&u0, &upoly_mul(&q, &u1));
        let v2 = upoly_sub(&v0, &upoly_mul(&q, &v1));
        r0 = std::mem::replace(&mut r1, r2);
        u0 = std::mem::replace(&mut u1, u2);
        v0 = std::mem::replace(&mut v1, v2);
    }
    (r0, u0, v0)
}

fn upoly_monic(p: &[Rat]) -> Vec<Rat> {
    match upoly_degree(p) {
        Some(d) => {
            let inv = p[d].recip().unwrap();
            p.iter().map(|c| c * &inv).collect()
        }
        None => Vec::new(),
    }
}

fn upoly_text(p: &[Rat]) -> String {
    let mut out = String::new();
    let mut first = true;
    for (e, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if first {
            if c.is_negative() {
                out.push('-');
            }
            first = false;
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        match e {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                if e == 1 {
                    out.push('t');
                } else {
                    out.push_str(&format!("t^{e}"));
                }
            }
        }
    }
    if first {
        out.push('0');
    }
    out
}
