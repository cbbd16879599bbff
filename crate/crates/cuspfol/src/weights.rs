//! Weighted valuations and quasi-homogeneous weight discovery.
//!
//! For weights `(p, q)` with `delta = gcd(p, q)`, the weighted valuation of
//! a nonzero bivariate polynomial is
//!
//! ```text
//! nu_(p,q)( sum a_ij x^i y^j ) = min { (p*i + q*j) / delta : a_ij != 0 }
//! ```
//!
//! A polynomial `f` is quasi-homogeneous when some positive integer weight
//! on each variable makes every monomial of `f` land in one degree `d`.
//! [`find_quasihomogeneous_weights`] searches for the smallest such `d`
//! (ties broken lexicographically on the weight vector) and verifies the
//! Euler identity
//!
//! ```text
//! sum_i  w_i * x_i * df/dx_i  =  d * f
//! ```
//!
//! before returning. The search is exact: the admissible weights form the
//! nullspace of the exponent-difference matrix, positivity is decided by
//! Fourier–Motzkin elimination over the rationals (a cone is nonempty over
//! the positive orthant iff it contains a point with every coordinate
//! `>= 1`), and a scaled rational witness bounds the degree enumeration.

use std::fmt;

use num_integer::Integer;

use crate::poly::{Coeff, Monomial, Poly};
use crate::rat::Rat;

/// Positive integer weights, one per variable, with the common degree they
/// give every monomial. `gcd(weights) == 1` always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub weights: Vec<u32>,
    pub degree: u32,
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        write!(f, "({}) of degree {}", ws.join(", "), self.degree)
    }
}

/// `nu_(p,q)(f)` over the support of a bivariate polynomial; `None` for the
/// zero polynomial (valuation `+infinity`). Always an integer, returned as
/// an exact rational for direct comparison against rational thresholds.
pub fn weighted_valuation<C: Coeff>(f: &Poly<C>, p: u32, q: u32) -> Option<Rat> {
    assert_eq!(f.vars().len(), 2, "weighted valuation is bivariate");
    assert!(p >= 1 && q >= 1, "weights must be positive");
    let delta = i64::from(p).gcd(&i64::from(q));
    f.terms()
        .map(|(m, _)| {
            i64::from(p) * i64::from(m.exponent(0)) + i64::from(q) * i64::from(m.exponent(1))
        })
        .min()
        .map(|v| Rat::new(v, delta))
}

/// Finds positive integer weights making `f` quasi-homogeneous, minimizing
/// the degree and then the weight vector lexicographically. Variables that
/// do not appear in `f` are unconstrained and get weight `1`. Returns
/// `None` when no positive weights exist (and for zero or constant `f`,
/// where no positive degree exists either).
pub fn find_quasihomogeneous_weights<C: Coeff>(f: &Poly<C>) -> Option<WeightVector> {
    if f.is_zero() {
        return None;
    }
    let n = f.vars().len();
    let support: Vec<&Monomial> = f.terms().map(|(m, _)| m).collect();
    let used: Vec<usize> = (0..n)
        .filter(|&i| support.iter().any(|m| m.exponent(i) > 0))
        .collect();
    if used.is_empty() {
        return None; // constant polynomial: only degree zero
    }

    // Weights on `used` must annihilate every exponent difference I_k - I_0.
    let base = support[0];
    let rows: Vec<Vec<Rat>> = support[1..]
        .iter()
        .map(|m| {
            used.iter()
                .map(|&i| Rat::int(i64::from(m.exponent(i)) - i64::from(base.exponent(i))))
                .collect()
        })
        .collect();
    let basis = nullspace(rows, used.len());
    if basis.is_empty() {
        return None;
    }

    // Rational feasibility of (sum_i t_i b_i)_j >= 1 for all j, plus a
    // concrete witness to bound the degree search.
    let ineqs: Vec<(Vec<Rat>, Rat)> = (0..used.len())
        .map(|j| (basis.iter().map(|b| b[j].clone()).collect(), Rat::one()))
        .collect();
    let t_star = fourier_motzkin(ineqs, basis.len())?;
    let mut witness = vec![Rat::zero(); used.len()];
    for (i, t) in t_star.iter().enumerate() {
        for (j, w) in witness.iter_mut().enumerate() {
            *w += &(t * &basis[i][j]);
        }
    }
    // Scale to integers: every component stays >= 1.
    let scale = witness
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, w| acc.lcm(w.denom()));
    let scale = Rat::from_big(num_rational::BigRational::from_integer(scale));
    let d0: i64 = used
        .iter()
        .enumerate()
        .map(|(j, &i)| {
            let w = (&witness[j] * &scale).to_i64().expect("scaled weight is integral");
            w * i64::from(base.exponent(i))
        })
        .sum();

    // Smallest degree first; within a degree, lexicographic enumeration
    // yields the lexicographically minimal weight vector.
    for d in 1..=d0 {
        let mut w = vec![0i64; used.len()];
        if enumerate_weights(&support, &used, d, 0, &mut w) {
            let mut full = vec![1u32; n];
            for (j, &i) in used.iter().enumerate() {
                full[i] = u32::try_from(w[j]).expect("weight fits u32");
            }
            let g = full.iter().fold(0u32, |acc, &x| acc.gcd(&x));
            assert_eq!(g, 1, "minimal-degree weights are primitive");
            let wv = WeightVector {
                weights: full,
                degree: u32::try_from(d).expect("degree fits u32"),
            };
            assert!(euler_identity_holds(f, &wv), "Euler identity must hold");
            return Some(wv);
        }
    }
    None
}

/// Checks `sum_i w_i x_i df/dx_i == d * f` exactly.
pub fn euler_identity_holds<C: Coeff>(f: &Poly<C>, w: &WeightVector) -> bool {
    let vars = f.vars();
    assert_eq!(w.weights.len(), vars.len());
    let mut lhs = Poly::zero(vars);
    for (i, &wi) in w.weights.iter().enumerate() {
        let mut e = vec![0u32; vars.len()];
        e[i] = 1;
        let xi = match f.sample_coeff() {
            Some(c) => Poly::term(vars, &e, c.one_like()),
            None => return true, // zero polynomial: trivially
        };
        let piece = (&xi * &f.partial_derivative(i)).scale_int(i64::from(wi));
        lhs = &lhs + &piece;
    }
    lhs == f.scale_int(i64::from(w.degree))
}

/// Depth-first search for the lexicographically smallest integer weights
/// in `[1, d]^used` making every support monomial have weighted degree `d`.
fn enumerate_weights(
    support: &[&Monomial],
    used: &[usize],
    d: i64,
    pos: usize,
    w: &mut Vec<i64>,
) -> bool {
    if pos == used.len() {
        return support.iter().all(|m| {
            used.iter()
                .enumerate()
                .map(|(j, &i)| w[j] * i64::from(m.exponent(i)))
                .sum::<i64>()
                == d
        });
    }
    for cand in 1..=d {
        w[pos] = cand;
        // prune: partial weighted degree must not already exceed d
        let feasible = support.iter().all(|m| {
            let partial: i64 = used[..=pos]
                .iter()
                .enumerate()
                .map(|(j, &i)| w[j] * i64::from(m.exponent(i)))
                .sum();
            let rest: i64 = used[pos + 1..]
                .iter()
                .map(|&i| i64::from(m.exponent(i))) // lower bound: weight 1
                .sum();
            partial + rest <= d
        });
        if feasible && enumerate_weights(support, used, d, pos + 1, w) {
            return true;
        }
    }
    false
}

/// Nullspace basis of a rational matrix with `n` columns, via reduced row
/// echelon form. Free columns parameterize the basis.
fn nullspace(mut rows: Vec<Vec<Rat>>, n: usize) -> Vec<Vec<Rat>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].recip().unwrap();
        for c in rows[r].iter_mut() {
            *c *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in 0..n {
                    let sub = &factor * &rows[r][c];
                    rows[i][c] -= &sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); n];
            v[fc] = Rat::one();
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[pi][fc].clone();
            }
            v
        })
        .collect()
}

/// Fourier–Motzkin elimination for systems `sum_j c_j t_j >= rhs`. Returns
/// a satisfying rational point, or `None` when the system is infeasible.
fn fourier_motzkin(ineqs: Vec<(Vec<Rat>, Rat)>, nvars: usize) -> Option<Vec<Rat>> {
    // stages[k]: the constraints that still mention t_k when it is
    // eliminated; they only involve t_0..t_k and drive back-substitution.
    let mut stages: Vec<Vec<(Vec<Rat>, Rat)>> = vec![Vec::new(); nvars];
    let mut current = ineqs;
    for k in (0..nvars).rev() {
        let (with_k, without): (Vec<_>, Vec<_>) =
            current.into_iter().partition(|(c, _)| !c[k].is_zero());
        // cross every lower bound on t_k with every upper bound
        let mut combined = Vec::new();
        for (cp, rp) in with_k.iter().filter(|(c, _)| !c[k].is_negative()) {
            for (cn, rn) in with_k.iter().filter(|(c, _)| c[k].is_negative()) {
                let mut row = vec![Rat::zero(); nvars];
                for (j, slot) in row.iter_mut().enumerate().take(k) {
                    *slot = &(&cp[k] * &cn[j]) - &(&cn[k] * &cp[j]);
                }
                let rhs = &(&cp[k] * rn) - &(&cn[k] * rp);
                combined.push((row, rhs));
            }
        }
        stages[k] = with_k;
        current = without;
        current.extend(combined);
    }
    // Variable-free residue: every `0 >= rhs` must hold.
    if current.iter().any(|(_, rhs)| rhs > &Rat::zero()) {
        return None;
    }
    // Back-substitute, choosing small integers where the interval allows.
    let mut values = vec![Rat::zero(); nvars];
    for k in 0..nvars {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (c, rhs) in &stages[k] {
            let mut rest = rhs.clone();
            for j in 0..k {
                rest -= &(&c[j] * &values[j]);
            }
            let bound = &rest / &c[k];
            if c[k].is_negative() {
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l > bound => l,
                    _ => bound,
                });
            }
        }
        values[k] = pick_in_interval(lo, hi);
    }
    Some(values)
}

/// A point of `[lo, hi]`, preferring zero, then the nearest integer inside.
fn pick_in_interval(lo: Option<Rat>, hi: Option<Rat>) -> Rat {
    let zero = Rat::zero();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if l <= zero {
                zero
            } else {
                l.ceil()
            }
        }
        (None, Some(h)) => {
            if h >= zero {
                zero
            } else {
                h.floor()
            }
        }
        (Some(l), Some(h)) => {
            debug_assert!(l <= h, "back-substitution interval must be nonempty");
            if l <= zero && h >= zero {
                zero
            } else if l > zero {
                let c = l.ceil();
                if c <= h {
                    c
                } else {
                    l
                }
            } else {
                let c = h.floor();
                if c >= l {
                    c
                } else {
                    h
                }
            }
        }
    }
}
