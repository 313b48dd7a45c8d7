//! Exact multivariate polynomial arithmetic over `QQ` or `F_p`.
//!
//! Polynomials are stored canonically: a term map from exponent vectors to
//! nonzero coefficients, over an explicit [`Context`] (field + ordered
//! variable names). Two polynomials over equal contexts are equal iff their
//! term maps are equal.

pub mod factor;
pub mod groebner;
pub mod ideal;
pub mod modgb;
pub mod order;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{scalar_is_negative, FieldTag, Scalar};
pub use order::MonomialOrder;

/// Coefficient field plus ordered variable names; shared by reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    pub field: FieldTag,
    pub vars: Vec<String>,
}

impl Context {
    pub fn new(field: FieldTag, vars: &[&str]) -> Arc<Context> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), vars.len(), "duplicate variable names");
        Arc::new(Context { field, vars })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Exponent vector; length always equals the context's variable count.
pub type Expo = Vec<u32>;

pub fn expo_total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

pub fn expo_mul(a: &[u32], b: &[u32]) -> Expo {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn expo_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn expo_div(a: &[u32], b: &[u32]) -> Expo {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn expo_lcm(a: &[u32], b: &[u32]) -> Expo {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// A multivariate polynomial in canonical form (no zero terms stored).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    ctx: Arc<Context>,
    terms: BTreeMap<Expo, Scalar>,
}

impl MPoly {
    pub fn zero(ctx: &Arc<Context>) -> MPoly {
        MPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<Context>) -> MPoly {
        MPoly::constant(ctx, ctx.field.one())
    }

    pub fn constant(ctx: &Arc<Context>, c: Scalar) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ctx.nvars()], c);
        }
        MPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_i64(ctx: &Arc<Context>, n: i64) -> MPoly {
        MPoly::constant(ctx, ctx.field.from_i64(n))
    }

    /// The variable with the given name.
    pub fn var(ctx: &Arc<Context>, name: &str) -> MPoly {
        let i = ctx
            .var_index(name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        MPoly::var_index(ctx, i)
    }

    pub fn var_index(ctx: &Arc<Context>, i: usize) -> MPoly {
        let mut e = vec![0; ctx.nvars()];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, ctx.field.one());
        MPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn monomial(ctx: &Arc<Context>, expo: Expo, coeff: Scalar) -> MPoly {
        assert_eq!(expo.len(), ctx.nvars());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(expo, coeff);
        }
        MPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn field(&self) -> FieldTag {
        self.ctx.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| expo_total_degree(e) == 0 && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1
            && self
                .terms
                .keys()
                .next()
                .map(|e| expo_total_degree(e) == 0)
                .unwrap_or(true)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Scalar {
        let zero = vec![0; self.ctx.nvars()];
        self.terms
            .get(&zero)
            .cloned()
            .unwrap_or_else(|| self.ctx.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| expo_total_degree(e)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Indices of variables actually appearing.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.ctx.nvars()];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter_map(|(i, &u)| if u { Some(i) } else { None })
            .collect()
    }

    pub fn same_context(&self, other: &MPoly) -> bool {
        self.ctx == other.ctx
    }

    pub fn check_context(&self, other: &MPoly) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::MixedContext(format!(
                "{:?} vs {:?}",
                self.ctx.vars, other.ctx.vars
            )))
        }
    }

    fn insert_term(terms: &mut BTreeMap<Expo, Scalar>, e: Expo, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    o.insert(s);
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert!(self.same_context(other), "mixed contexts");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), c.clone());
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.neg()))
            .collect();
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert!(self.same_context(other), "mixed contexts");
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                Self::insert_term(&mut terms, expo_mul(ea, eb), ca.mul(cb));
            }
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| (e.clone(), k.mul(c)))
            .collect();
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, expo: &[u32], c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| (expo_mul(e, expo), k.mul(c)))
            .collect();
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term for the given order.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Expo, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    /// Divides every coefficient by the leading coefficient.
    pub fn monic(&self, order: &MonomialOrder) -> MPoly {
        match self.leading(order) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.mul_scalar(&inv)
            }
        }
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> MPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            let k = c.mul(&self.ctx.field.from_i64(e[var] as i64));
            Self::insert_term(&mut terms, e2, k);
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Substitutes `images[i]` for variable `i`; the images live in `target`.
    pub fn substitute(&self, target: &Arc<Context>, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.ctx.nvars());
        let mut acc = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(target, lift_scalar(c, target.field));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Reinterprets the polynomial in another context with the same field;
    /// variables are matched by name, which must all exist in `target`.
    pub fn transport(&self, target: &Arc<Context>) -> Result<MPoly> {
        if *target == self.ctx {
            return Ok(self.clone());
        }
        if target.field != self.ctx.field {
            return Err(Error::MixedContext("field mismatch in transport".into()));
        }
        let map: Vec<usize> = self
            .ctx
            .vars
            .iter()
            .map(|v| {
                target.var_index(v).ok_or_else(|| {
                    Error::MixedContext(format!("variable {v} missing in target context"))
                })
            })
            .collect::<Result<_>>()?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; target.nvars()];
            for (i, &x) in e.iter().enumerate() {
                e2[map[i]] += x;
            }
            Self::insert_term(&mut terms, e2, c.clone());
        }
        Ok(MPoly {
            ctx: target.clone(),
            terms,
        })
    }

    /// Like [`MPoly::transport`] but fails if a variable in the support is
    /// missing from `target` (variables that do not occur are fine).
    pub fn restrict(&self, target: &Arc<Context>) -> Result<MPoly> {
        if target.field != self.ctx.field {
            return Err(Error::MixedContext("field mismatch in restrict".into()));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; target.nvars()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match target.var_index(&self.ctx.vars[i]) {
                    Some(j) => e2[j] += x,
                    None => {
                        return Err(Error::MixedContext(format!(
                            "variable {} does not exist in the smaller context",
                            self.ctx.vars[i]
                        )))
                    }
                }
            }
            Self::insert_term(&mut terms, e2, c.clone());
        }
        Ok(MPoly {
            ctx: target.clone(),
            terms,
        })
    }

    /// Reinterprets variable `i` of `self` as variable `var_map[i]` of
    /// `target`. Positions must be in range; names are ignored.
    pub fn remap(&self, target: &Arc<Context>, var_map: &[usize]) -> MPoly {
        assert_eq!(var_map.len(), self.ctx.nvars());
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; target.nvars()];
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    e2[var_map[i]] += x;
                }
            }
            Self::insert_term(&mut terms, e2, c.clone());
        }
        MPoly {
            ctx: target.clone(),
            terms,
        }
    }

    /// Like [`MPoly::remap`] but with a partial map; fails if the support
    /// touches an unmapped variable.
    pub fn remap_partial(&self, target: &Arc<Context>, var_map: &[Option<usize>]) -> Result<MPoly> {
        assert_eq!(var_map.len(), self.ctx.nvars());
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; target.nvars()];
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    match var_map[i] {
                        Some(j) => e2[j] += x,
                        None => {
                            return Err(Error::MixedContext(format!(
                                "variable {} has no image in the smaller context",
                                self.ctx.vars[i]
                            )))
                        }
                    }
                }
            }
            Self::insert_term(&mut terms, e2, c.clone());
        }
        Ok(MPoly {
            ctx: target.clone(),
            terms,
        })
    }

    /// Canonical textual form for the given order: terms sorted descending,
    /// coefficients as reduced fractions, e.g. `3/2*x^2*y - 1`.
    pub fn render(&self, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut expos: Vec<&Expo> = self.terms.keys().collect();
        expos.sort_by(|a, b| order.cmp(b, a));
        let mut out = String::new();
        for (idx, e) in expos.iter().enumerate() {
            let c = &self.terms[*e];
            let (sign_negative, mag) = if scalar_is_negative(c) {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if sign_negative {
                    out.push('-');
                }
            } else if sign_negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || expo_total_degree(e) == 0 {
                factors.push(mag.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(self.ctx.vars[i].clone());
                } else if k > 1 {
                    factors.push(format!("{}^{}", self.ctx.vars[i], k));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses an expression like `3/2*x^2*y - (x + 1)^2` in this context.
    pub fn parse(ctx: &Arc<Context>, text: &str) -> Result<MPoly> {
        parse::parse_poly(ctx, text)
    }
}

/// Converts an i64-backed scalar literal between equal field tags.
fn lift_scalar(c: &Scalar, field: FieldTag) -> Scalar {
    assert_eq!(c.field(), field, "field mismatch");
    c.clone()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&MonomialOrder::Grevlex))
    }
}

mod parse {
    //! A small recursive-descent parser for polynomial expressions. The CLI
    //! front end reuses it for every element literal in the DSL.

    use super::*;

    struct P<'a> {
        ctx: &'a Arc<Context>,
        chars: Vec<char>,
        pos: usize,
    }

    impl<'a> P<'a> {
        fn err(&self, msg: &str) -> Error {
            Error::InvalidInput(format!("at offset {}: {msg}", self.pos))
        }

        fn skip_ws(&mut self) {
            while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<char> {
            self.skip_ws();
            self.chars.get(self.pos).copied()
        }

        fn bump(&mut self) -> Option<char> {
            self.skip_ws();
            let c = self.chars.get(self.pos).copied();
            if c.is_some() {
                self.pos += 1;
            }
            c
        }

        fn integer(&mut self) -> Result<i64> {
            self.skip_ws();
            let start = self.pos;
            while self
                .chars
                .get(self.pos)
                .map(|c| c.is_ascii_digit())
                .unwrap_or(false)
            {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer"));
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            s.parse::<i64>()
                .map_err(|_| self.err("integer literal too large"))
        }

        fn ident(&mut self) -> Option<String> {
            self.skip_ws();
            let start = self.pos;
            let first = self.chars.get(self.pos)?;
            if !(first.is_ascii_alphabetic() || *first == '_') {
                return None;
            }
            self.pos += 1;
            while self
                .chars
                .get(self.pos)
                .map(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
                .unwrap_or(false)
            {
                self.pos += 1;
            }
            Some(self.chars[start..self.pos].iter().collect())
        }

        fn expr(&mut self) -> Result<MPoly> {
            let mut acc = self.term()?;
            loop {
                match self.peek() {
                    Some('+') => {
                        self.bump();
                        acc = acc.add(&self.term()?);
                    }
                    Some('-') => {
                        self.bump();
                        acc = acc.sub(&self.term()?);
                    }
                    _ => return Ok(acc),
                }
            }
        }

        fn term(&mut self) -> Result<MPoly> {
            let mut acc = self.factor()?;
            while self.peek() == Some('*') {
                self.bump();
                acc = acc.mul(&self.factor()?);
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<MPoly> {
            let base = self.atom()?;
            if self.peek() == Some('^') {
                self.bump();
                let n = self.integer()?;
                if n < 0 {
                    return Err(self.err("negative exponent"));
                }
                Ok(base.pow(n as u32))
            } else {
                Ok(base)
            }
        }

        fn atom(&mut self) -> Result<MPoly> {
            match self.peek() {
                Some('(') => {
                    self.bump();
                    let inner = self.expr()?;
                    if self.bump() != Some(')') {
                        return Err(self.err("expected )"));
                    }
                    Ok(inner)
                }
                Some('-') => {
                    self.bump();
                    Ok(self.factor()?.neg())
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    // a '/' directly after an integer denotes a rational literal
                    if self.peek() == Some('/') {
                        self.bump();
                        let den = self.integer()?;
                        if den == 0 {
                            return Err(self.err("zero denominator"));
                        }
                        Ok(MPoly::constant(self.ctx, self.ctx.field.from_ratio(num, den)))
                    } else {
                        Ok(MPoly::from_i64(self.ctx, num))
                    }
                }
                _ => {
                    let name = self.ident().ok_or_else(|| self.err("expected atom"))?;
                    if self.ctx.var_index(&name).is_none() {
                        return Err(self.err(&format!("unknown variable {name}")));
                    }
                    Ok(MPoly::var(self.ctx, &name))
                }
            }
        }
    }

    pub fn parse_poly(ctx: &Arc<Context>, text: &str) -> Result<MPoly> {
        let mut p = P {
            ctx,
            chars: text.chars().collect(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq2() -> Arc<Context> {
        Context::new(FieldTag::Rational, &["x", "y"])
    }

    #[test]
    fn parse_and_render_roundtrip() {
        let ctx = qq2();
        let p = MPoly::parse(&ctx, "3/2*x^2*y - 1").unwrap();
        assert_eq!(p.render(&MonomialOrder::Grevlex), "3/2*x^2*y - 1");
        let q = MPoly::parse(&ctx, &p.render(&MonomialOrder::Grevlex)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn canonical_no_zero_terms() {
        let ctx = qq2();
        let x = MPoly::var(&ctx, "x");
        let p = x.sub(&x);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn substitution() {
        let ctx = qq2();
        let tctx = Context::new(FieldTag::Rational, &["t"]);
        let t = MPoly::var(&tctx, "t");
        let p = MPoly::parse(&ctx, "y^2 - x^3 - x^2").unwrap();
        // x = t^2 - 1, y = t^3 - t kills the nodal relation
        let img = p.substitute(&tctx, &[
            MPoly::parse(&tctx, "t^2 - 1").unwrap(),
            t.mul(&MPoly::parse(&tctx, "t^2 - 1").unwrap()),
        ]);
        assert!(img.is_zero());
    }

    #[test]
    fn derivative_rule() {
        let ctx = qq2();
        let p = MPoly::parse(&ctx, "x^3*y + 2*x").unwrap();
        let px = p.derivative(0);
        assert_eq!(px, MPoly::parse(&ctx, "3*x^2*y + 2").unwrap());
    }

    #[test]
    fn transport_between_contexts() {
        let small = Context::new(FieldTag::Rational, &["x"]);
        let big = Context::new(FieldTag::Rational, &["t", "x"]);
        let p = MPoly::parse(&small, "x^2 + 1").unwrap();
        let q = p.transport(&big).unwrap();
        assert_eq!(q, MPoly::parse(&big, "x^2 + 1").unwrap());
        assert_eq!(q.restrict(&small).unwrap(), p);
        assert!(MPoly::parse(&big, "t + x").unwrap().restrict(&small).is_err());
    }
}
