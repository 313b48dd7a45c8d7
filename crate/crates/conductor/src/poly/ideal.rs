//! Ideal handles with thread-safe Gröbner caches, normal forms, membership,
//! and elimination.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::groebner::{groebner_basis, reduce};
use super::order::MonomialOrder;
use super::{Context, MPoly};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug)]
struct IdealInner {
    ctx: Arc<Context>,
    gens: Vec<MPoly>,
    // cached reduced bases per order; concurrent identical requests may
    // compute redundantly but observe a single canonical result
    cache: Mutex<BTreeMap<MonomialOrder, Arc<Vec<MPoly>>>>,
}

/// A finitely generated ideal of a polynomial ring.
///
/// Cloning is cheap and shares the Gröbner cache. The cached basis, when
/// present, is the unique reduced basis of the ideal for its order.
#[derive(Debug, Clone)]
pub struct IdealHandle {
    inner: Arc<IdealInner>,
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &IdealHandle) -> bool {
        self.inner.ctx == other.inner.ctx && self.inner.gens == other.inner.gens
    }
}
impl Eq for IdealHandle {}

impl IdealHandle {
    pub fn new(ctx: &Arc<Context>, gens: Vec<MPoly>) -> Result<IdealHandle> {
        for g in &gens {
            if g.ctx() != ctx {
                return Err(Error::MixedContext(
                    "ideal generator in a different context".into(),
                ));
            }
        }
        Ok(IdealHandle {
            inner: Arc::new(IdealInner {
                ctx: ctx.clone(),
                gens,
                cache: Mutex::new(BTreeMap::new()),
            }),
        })
    }

    pub fn zero(ctx: &Arc<Context>) -> IdealHandle {
        IdealHandle::new(ctx, Vec::new()).unwrap()
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.inner.ctx
    }

    pub fn gens(&self) -> &[MPoly] {
        &self.inner.gens
    }

    /// The unique reduced Gröbner basis for `order`, memoized.
    pub fn groebner(&self, order: &MonomialOrder, limits: &Limits) -> Result<Arc<Vec<MPoly>>> {
        if let Some(b) = self.inner.cache.lock().unwrap().get(order) {
            return Ok(b.clone());
        }
        let basis = Arc::new(groebner_basis(&self.inner.gens, order, limits)?);
        let mut cache = self.inner.cache.lock().unwrap();
        Ok(cache.entry(order.clone()).or_insert(basis).clone())
    }

    /// Unique remainder of `p` modulo the reduced basis; zero iff `p` lies in
    /// the ideal (the ideal-membership test).
    pub fn normal_form(&self, p: &MPoly, order: &MonomialOrder, limits: &Limits) -> Result<MPoly> {
        if p.ctx() != self.ctx() {
            return Err(Error::MixedContext("normal form in a different context".into()));
        }
        let basis = self.groebner(order, limits)?;
        Ok(reduce(p, &basis, order))
    }

    pub fn contains(&self, p: &MPoly, limits: &Limits) -> Result<bool> {
        Ok(self.normal_form(p, &MonomialOrder::Grevlex, limits)?.is_zero())
    }

    /// True iff the ideal is the whole ring.
    pub fn is_unit_ideal(&self, limits: &Limits) -> Result<bool> {
        let basis = self.groebner(&MonomialOrder::Grevlex, limits)?;
        Ok(basis.len() == 1 && basis[0].is_one())
    }

    pub fn is_zero_ideal(&self, limits: &Limits) -> Result<bool> {
        Ok(self.groebner(&MonomialOrder::Grevlex, limits)?.is_empty())
    }

    /// Generators of the intersection with the subring on the variables NOT
    /// in `drop_vars`, via a block elimination order. The result lives in the
    /// same ambient context; its generators contain no dropped variable.
    pub fn eliminate(&self, drop_vars: &[usize], limits: &Limits) -> Result<IdealHandle> {
        let n = self.ctx().nvars();
        for &v in drop_vars {
            if v >= n {
                return Err(Error::MixedContext(format!(
                    "dropped variable index {v} out of range"
                )));
            }
        }
        if drop_vars.is_empty() {
            return Ok(self.clone());
        }
        let order = MonomialOrder::elimination(drop_vars, n);
        let basis = self.groebner(&order, limits)?;
        let kept: Vec<MPoly> = basis
            .iter()
            .filter(|g| {
                g.support_vars()
                    .iter()
                    .all(|i| !drop_vars.contains(i))
            })
            .cloned()
            .collect();
        IdealHandle::new(self.ctx(), kept)
    }

    /// Two ideals of the same context are equal iff their reduced bases agree.
    pub fn equals(&self, other: &IdealHandle, limits: &Limits) -> Result<bool> {
        if self.ctx() != other.ctx() {
            return Err(Error::MixedContext("ideal comparison across contexts".into()));
        }
        let a = self.groebner(&MonomialOrder::Grevlex, limits)?;
        let b = other.groebner(&MonomialOrder::Grevlex, limits)?;
        Ok(*a == *b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldTag;

    #[test]
    fn membership_and_idempotence() {
        let ctx = Context::new(FieldTag::Rational, &["x"]);
        let ideal =
            IdealHandle::new(&ctx, vec![MPoly::parse(&ctx, "x - 1").unwrap()]).unwrap();
        let p = MPoly::parse(&ctx, "(x - 1)*(x + 1)").unwrap();
        let limits = Limits::default();
        let nf = ideal.normal_form(&p, &MonomialOrder::Grevlex, &limits).unwrap();
        assert!(nf.is_zero());
        let q = MPoly::parse(&ctx, "x^3 + x").unwrap();
        let n1 = ideal.normal_form(&q, &MonomialOrder::Grevlex, &limits).unwrap();
        let n2 = ideal.normal_form(&n1, &MonomialOrder::Grevlex, &limits).unwrap();
        assert_eq!(n1, n2);
    }

    #[test]
    fn eliminate_cuspidal_cubic() {
        // (u - t^2, v - t^3) ∩ QQ[u, v] = (v^2 - u^3)
        let ctx = Context::new(FieldTag::Rational, &["t", "u", "v"]);
        let ideal = IdealHandle::new(
            &ctx,
            vec![
                MPoly::parse(&ctx, "u - t^2").unwrap(),
                MPoly::parse(&ctx, "v - t^3").unwrap(),
            ],
        )
        .unwrap();
        let limits = Limits::default();
        let elim = ideal.eliminate(&[0], &limits).unwrap();
        assert_eq!(elim.gens().len(), 1);
        let g = &elim.gens()[0];
        // oracle: substituting u = t^2, v = t^3 must kill the generator
        let tctx = Context::new(FieldTag::Rational, &["t"]);
        let sub = g.substitute(
            &tctx,
            &[
                MPoly::var(&tctx, "t"),
                MPoly::parse(&tctx, "t^2").unwrap(),
                MPoly::parse(&tctx, "t^3").unwrap(),
            ],
        );
        assert!(sub.is_zero());
        assert_eq!(
            g.render(&MonomialOrder::Grevlex),
            MPoly::parse(&ctx, "u^3 - v^2")
                .unwrap()
                .render(&MonomialOrder::Grevlex)
        );
    }

    #[test]
    fn eliminate_nothing_is_identity() {
        let ctx = Context::new(FieldTag::Rational, &["x", "y"]);
        let ideal = IdealHandle::new(&ctx, vec![MPoly::parse(&ctx, "x*y - 1").unwrap()]).unwrap();
        let out = ideal.eliminate(&[], &Limits::default()).unwrap();
        assert_eq!(out, ideal);
    }

    #[test]
    fn eliminate_proper_ideal_has_no_constants() {
        let ctx = Context::new(FieldTag::Rational, &["x"]);
        let ideal = IdealHandle::new(&ctx, vec![MPoly::parse(&ctx, "x - 1").unwrap()]).unwrap();
        let out = ideal.eliminate(&[0], &Limits::default()).unwrap();
        assert!(out.gens().is_empty());
    }
}
