//! TOML job descriptions.
//!
//! A jobfile declares the variables, optionally a table of named
//! definitions, and whatever inputs the invoked command needs:
//!
//! ```text
//! variables = ["x", "y", "z"]
//!
//! [definitions]
//! f = "z^2 + (y^2 - x^3)^2"
//!
//! [spec]                      # cuspidal surface family
//! p = 2
//! q = 3
//! roots = ["1"]
//! mults = [2]
//!
//! [g]                         # residual polynomial, terms [alpha, beta, coeff]
//! terms = [[0, 0, "1"]]
//!
//! [params]                    # per-command inputs
//! form = "d(f)"
//! ```
//!
//! Definition names expand textually (as whole identifiers, parenthesized)
//! inside every other definition and every `[params]` expression, so they
//! may be written in any order; cycles are rejected. A definition must not
//! shadow a declared variable or the differential macro `d`.

use std::collections::BTreeMap;
use std::str::FromStr;

use cuspfol::{
    parse_form, parse_poly, CuspidalSpec, DiffForm, GPoly, QPoly, Rat, Vars,
};
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Jobfile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub definitions: BTreeMap<String, String>,
    pub spec: Option<SpecTable>,
    pub g: Option<GTable>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecTable {
    pub p: u32,
    pub q: u32,
    pub roots: Vec<String>,
    pub mults: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GTable {
    pub terms: Vec<(u32, u32, String)>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub form: Option<String>,
    pub surface: Option<String>,
    /// alternative to `surface`: the surface as a product of factors
    pub factors: Option<Vec<String>>,
    pub forms: Option<Vec<String>>,
    pub k: Option<u32>,
    pub phi: Option<String>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub r: Option<u32>,
    pub delta: Option<String>,
    pub poly: Option<String>,
    pub avoid: Option<Vec<String>>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parsing context: the declared variables plus the definition table.
pub struct Ctx {
    pub vars: Vars,
    defs: BTreeMap<String, String>,
}

impl Ctx {
    pub fn new(job: &Jobfile) -> Result<Self, Failure> {
        if job.variables.is_empty() {
            return Err(Failure::input("declare at least one variable"));
        }
        for (i, v) in job.variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Failure::input(format!("`{v}` is not a variable name")));
            }
            if job.variables[..i].contains(v) {
                return Err(Failure::input(format!("variable `{v}` declared twice")));
            }
        }
        for name in job.definitions.keys() {
            if !is_identifier(name) {
                return Err(Failure::input(format!(
                    "`{name}` is not a definition name"
                )));
            }
            if name == "d" || job.variables.contains(name) {
                return Err(Failure::input(format!(
                    "definition `{name}` shadows a variable or the differential macro"
                )));
            }
        }
        Ok(Ctx {
            vars: Vars::new(&job.variables),
            defs: job.definitions.clone(),
        })
    }

    fn expand(&self, src: &str) -> Result<String, Failure> {
        let mut out = String::new();
        self.expand_into(src, 0, &mut out)?;
        Ok(out)
    }

    fn expand_into(&self, src: &str, depth: u32, out: &mut String) -> Result<(), Failure> {
        if depth > 32 {
            return Err(Failure::input(
                "definitions expand too deep (cyclic definitions?)",
            ));
        }
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                match self.defs.get(&word) {
                    Some(body) => {
                        out.push('(');
                        self.expand_into(body, depth + 1, out)?;
                        out.push(')');
                    }
                    None => out.push_str(&word),
                }
            } else {
                out.push(c);
                i += 1;
            }
        }
        Ok(())
    }

    pub fn poly(&self, what: &str, src: &str) -> Result<QPoly, Failure> {
        let expanded = self.expand(src)?;
        parse_poly(&expanded, &self.vars).map_err(|e| self.parse_failure(what, src, &expanded, e))
    }

    pub fn form(&self, what: &str, src: &str) -> Result<DiffForm<Rat>, Failure> {
        let expanded = self.expand(src)?;
        parse_form(&expanded, &self.vars).map_err(|e| self.parse_failure(what, src, &expanded, e))
    }

    pub fn one_form(&self, what: &str, src: &str) -> Result<DiffForm<Rat>, Failure> {
        let f = self.form(what, src)?;
        if f.degree() != 1 {
            return Err(Failure::input(format!(
                "{what} must be a 1-form, got a {}-form",
                f.degree()
            )));
        }
        Ok(f)
    }

    fn parse_failure(
        &self,
        what: &str,
        src: &str,
        expanded: &str,
        e: cuspfol::ParseError,
    ) -> Failure {
        if expanded == src {
            Failure::input(format!("{what}: {e}"))
        } else {
            Failure::input(format!(
                "{what}: {e} (after expanding definitions: `{expanded}`)"
            ))
        }
    }
}

pub fn need<'a, T>(opt: &'a Option<T>, what: &str) -> Result<&'a T, Failure> {
    opt.as_ref()
        .ok_or_else(|| Failure::input(format!("{what} is required for this command")))
}

/// The surface polynomial: `params.surface`, or the product of
/// `params.factors`.
pub fn surface_poly(ctx: &Ctx, params: &Params) -> Result<QPoly, Failure> {
    match (&params.surface, &params.factors) {
        (Some(_), Some(_)) => Err(Failure::input(
            "give params.surface or params.factors, not both",
        )),
        (Some(src), None) => ctx.poly("params.surface", src),
        (None, Some(list)) => {
            if list.is_empty() {
                return Err(Failure::input("params.factors must not be empty"));
            }
            let mut acc = cuspfol::Poly::one(&ctx.vars);
            for (i, src) in list.iter().enumerate() {
                let f = ctx.poly(&format!("params.factors[{i}]"), src)?;
                acc = &acc * &f;
            }
            Ok(acc)
        }
        (None, None) => Err(Failure::input(
            "params.surface (or params.factors) is required for this command",
        )),
    }
}

pub fn build_spec(table: &Option<SpecTable>) -> Result<CuspidalSpec, Failure> {
    let t = table
        .as_ref()
        .ok_or_else(|| Failure::input("a [spec] table is required for this command"))?;
    let mut roots = Vec::with_capacity(t.roots.len());
    for (i, src) in t.roots.iter().enumerate() {
        let r = Rat::from_str(src)
            .map_err(|e| Failure::input(format!("spec.roots[{i}]: {e}")))?;
        roots.push(r);
    }
    CuspidalSpec::new(t.p, t.q, roots, t.mults.clone())
        .map_err(|e| Failure::input(format!("[spec]: {e}")))
}

pub fn build_g(table: &Option<GTable>) -> Result<GPoly, Failure> {
    match table {
        None => Ok(GPoly::zero()),
        Some(t) => {
            let mut terms = Vec::with_capacity(t.terms.len());
            for (i, (a, b, c)) in t.terms.iter().enumerate() {
                let c = Rat::from_str(c)
                    .map_err(|e| Failure::input(format!("g.terms[{i}]: {e}")))?;
                terms.push((*a, *b, c));
            }
            Ok(GPoly::new(terms))
        }
    }
}
