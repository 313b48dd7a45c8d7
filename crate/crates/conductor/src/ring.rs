//! Finitely presented commutative rings over an exact field, and ring
//! homomorphisms carrying validity certificates.
//!
//! Element equality is decided by normal forms against the defining ideal.
//! Kernels, subalgebra membership, and preimages all go through graph-ideal
//! elimination; certificates are verified once at construction and never
//! re-checked at use sites.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::ideal::IdealHandle;
use crate::poly::order::MonomialOrder;
use crate::poly::{Context, MPoly};
use crate::scalar::FieldTag;

/// A finitely presented ring `k[vars]/I`.
#[derive(Debug, Clone)]
pub struct PresentedRing {
    ctx: Arc<Context>,
    ideal: IdealHandle,
}

impl PartialEq for PresentedRing {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.ideal.gens() == other.ideal.gens()
    }
}
impl Eq for PresentedRing {}

impl PresentedRing {
    pub fn new(ctx: Arc<Context>, relations: Vec<MPoly>) -> Result<PresentedRing> {
        let ideal = IdealHandle::new(&ctx, relations)?;
        Ok(PresentedRing { ctx, ideal })
    }

    /// The free polynomial ring on the given variables.
    pub fn free(field: FieldTag, vars: &[&str]) -> PresentedRing {
        let ctx = Context::new(field, vars);
        PresentedRing {
            ideal: IdealHandle::zero(&ctx),
            ctx,
        }
    }

    /// The base field itself (no variables).
    pub fn ground(field: FieldTag) -> PresentedRing {
        PresentedRing::free(field, &[])
    }

    /// Convenience constructor parsing relations in place.
    pub fn parse_new(field: FieldTag, vars: &[&str], relations: &[&str]) -> Result<PresentedRing> {
        let ctx = Context::new(field, vars);
        let rels: Vec<MPoly> = relations
            .iter()
            .map(|r| MPoly::parse(&ctx, r))
            .collect::<Result<_>>()?;
        PresentedRing::new(ctx, rels)
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn field(&self) -> FieldTag {
        self.ctx.field
    }

    pub fn vars(&self) -> &[String] {
        &self.ctx.vars
    }

    pub fn ideal(&self) -> &IdealHandle {
        &self.ideal
    }

    pub fn parse(&self, text: &str) -> Result<MPoly> {
        MPoly::parse(&self.ctx, text)
    }

    pub fn zero_elem(&self) -> MPoly {
        MPoly::zero(&self.ctx)
    }

    pub fn one_elem(&self) -> MPoly {
        MPoly::one(&self.ctx)
    }

    pub fn var(&self, name: &str) -> MPoly {
        MPoly::var(&self.ctx, name)
    }

    /// Canonical representative of an element.
    pub fn nf(&self, p: &MPoly, limits: &Limits) -> Result<MPoly> {
        self.ideal.normal_form(p, &MonomialOrder::Grevlex, limits)
    }

    pub fn is_zero_elem(&self, p: &MPoly, limits: &Limits) -> Result<bool> {
        Ok(self.nf(p, limits)?.is_zero())
    }

    pub fn elems_equal(&self, a: &MPoly, b: &MPoly, limits: &Limits) -> Result<bool> {
        self.is_zero_elem(&a.sub(b), limits)
    }

    /// The zero ring is permitted and detected: `1` lies in the ideal.
    pub fn is_zero_ring(&self, limits: &Limits) -> Result<bool> {
        self.ideal.is_unit_ideal(limits)
    }

    /// Opt-in canonicalization: replaces the listed relations by the reduced
    /// Gröbner basis. Presentations are never simplified implicitly.
    pub fn canonicalize(&self, limits: &Limits) -> Result<PresentedRing> {
        let basis = self.ideal.groebner(&MonomialOrder::Grevlex, limits)?;
        PresentedRing::new(self.ctx.clone(), basis.as_ref().clone())
    }

    /// Monomials of total degree <= `max_degree`, ascending in (degree,
    /// exponent) order; includes 1.
    pub fn monomials_up_to(&self, max_degree: u32) -> Vec<MPoly> {
        let n = self.ctx.nvars();
        let mut expos: Vec<Vec<u32>> = vec![vec![0; n]];
        let mut frontier = vec![vec![0u32; n]];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for e in &frontier {
                // extend at the last nonzero position or later to avoid dups
                let start = e
                    .iter()
                    .rposition(|&x| x > 0)
                    .unwrap_or(0);
                for i in start..n {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    next.push(e2);
                }
            }
            expos.extend(next.iter().cloned());
            frontier = next;
        }
        expos
            .into_iter()
            .map(|e| MPoly::monomial(&self.ctx, e, self.ctx.field.one()))
            .collect()
    }
}

#[derive(Debug)]
struct GraphData {
    ctx: Arc<Context>,
    ideal: IdealHandle,
    order: MonomialOrder,
    /// target variable i -> combined index
    target_map: Vec<usize>,
    /// source variable j -> combined index (tag block)
    tag_map: Vec<usize>,
}

#[derive(Debug)]
struct HomInner {
    source: PresentedRing,
    target: PresentedRing,
    images: Vec<MPoly>,
    graph: Mutex<Option<Arc<GraphData>>>,
}

/// A certified homomorphism of presented rings, given by generator images.
///
/// Construction verifies that every defining relation of the source maps to
/// zero in the target; the certificate is the list of vanishing normal forms.
#[derive(Debug, Clone)]
pub struct RingHom {
    inner: Arc<HomInner>,
}

impl PartialEq for RingHom {
    fn eq(&self, other: &Self) -> bool {
        self.source() == other.source()
            && self.target() == other.target()
            && self.inner.images == other.inner.images
    }
}
impl Eq for RingHom {}

/// Reserved name prefixes keep mangled variables disjoint from user input
/// (idents in element expressions never contain '.').
fn mangle(prefix: &str, name: &str) -> String {
    format!("{prefix}.{name}")
}

impl RingHom {
    /// Validates generator images against the source relations; fails with
    /// the first violated relation.
    pub fn validate(
        source: &PresentedRing,
        target: &PresentedRing,
        images: Vec<MPoly>,
        limits: &Limits,
    ) -> Result<RingHom> {
        if images.len() != source.ctx().nvars() {
            return Err(Error::InvalidInput(format!(
                "expected {} generator images, got {}",
                source.ctx().nvars(),
                images.len()
            )));
        }
        for img in &images {
            if img.ctx() != target.ctx() {
                return Err(Error::MixedContext(
                    "generator image lives outside the target ring".into(),
                ));
            }
        }
        let images: Vec<MPoly> = images
            .iter()
            .map(|p| target.nf(p, limits))
            .collect::<Result<_>>()?;
        for rel in source.ideal().gens() {
            let pushed = rel.substitute(target.ctx(), &images);
            let nf = target.nf(&pushed, limits)?;
            if !nf.is_zero() {
                return Err(Error::RelationViolated {
                    relation: rel.to_string(),
                    image: nf.to_string(),
                });
            }
        }
        Ok(RingHom {
            inner: Arc::new(HomInner {
                source: source.clone(),
                target: target.clone(),
                images,
                graph: Mutex::new(None),
            }),
        })
    }

    /// Parses generator images from text, in source-variable order.
    pub fn parse_validate(
        source: &PresentedRing,
        target: &PresentedRing,
        images: &[&str],
        limits: &Limits,
    ) -> Result<RingHom> {
        let imgs: Vec<MPoly> = images
            .iter()
            .map(|s| target.parse(s))
            .collect::<Result<_>>()?;
        RingHom::validate(source, target, imgs, limits)
    }

    pub fn identity(ring: &PresentedRing, limits: &Limits) -> Result<RingHom> {
        let images = ring
            .vars()
            .iter()
            .map(|v| ring.var(v))
            .collect();
        RingHom::validate(ring, ring, images, limits)
    }

    pub fn source(&self) -> &PresentedRing {
        &self.inner.source
    }

    pub fn target(&self) -> &PresentedRing {
        &self.inner.target
    }

    pub fn images(&self) -> &[MPoly] {
        &self.inner.images
    }

    /// Applies the hom to an element of the source.
    pub fn apply(&self, p: &MPoly, limits: &Limits) -> Result<MPoly> {
        if p.ctx() != self.source().ctx() {
            return Err(Error::MixedContext("element outside the source ring".into()));
        }
        let pushed = p.substitute(self.target().ctx(), &self.inner.images);
        self.target().nf(&pushed, limits)
    }

    pub fn compose(&self, then: &RingHom, limits: &Limits) -> Result<RingHom> {
        if self.target() != then.source() {
            return Err(Error::MixedContext("composition mismatch".into()));
        }
        let images: Vec<MPoly> = self
            .inner
            .images
            .iter()
            .map(|img| then.apply(img, limits))
            .collect::<Result<_>>()?;
        RingHom::validate(self.source(), then.target(), images, limits)
    }

    pub fn equal_to(&self, other: &RingHom, limits: &Limits) -> Result<bool> {
        if self.source() != other.source() || self.target() != other.target() {
            return Ok(false);
        }
        for (a, b) in self.inner.images.iter().zip(&other.inner.images) {
            if !self.target().elems_equal(a, b, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn graph(&self, limits: &Limits) -> Result<Arc<GraphData>> {
        if let Some(g) = self.inner.graph.lock().unwrap().as_ref() {
            return Ok(g.clone());
        }
        let src = self.source();
        let tgt = self.target();
        let mut names: Vec<String> = Vec::new();
        let target_map: Vec<usize> = (0..tgt.ctx().nvars())
            .map(|i| {
                names.push(mangle("T", &tgt.ctx().vars[i]));
                names.len() - 1
            })
            .collect();
        let tag_map: Vec<usize> = (0..src.ctx().nvars())
            .map(|j| {
                names.push(mangle("S", &src.ctx().vars[j]));
                names.len() - 1
            })
            .collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ctx = Context::new(src.field(), &name_refs);
        let mut gens: Vec<MPoly> = Vec::new();
        for rel in tgt.ideal().gens() {
            gens.push(rel.remap(&ctx, &target_map));
        }
        for (j, img) in self.inner.images.iter().enumerate() {
            let tag = MPoly::var_index(&ctx, tag_map[j]);
            gens.push(tag.sub(&img.remap(&ctx, &target_map)));
        }
        let ideal = IdealHandle::new(&ctx, gens)?;
        let order = MonomialOrder::elimination(&target_map, ctx.nvars());
        // warm the basis so later probes only reduce
        ideal.groebner(&order, limits)?;
        let data = Arc::new(GraphData {
            ctx,
            ideal,
            order,
            target_map,
            tag_map,
        });
        let mut slot = self.inner.graph.lock().unwrap();
        if slot.is_none() {
            *slot = Some(data.clone());
        }
        Ok(slot.as_ref().unwrap().clone())
    }

    /// Generators of the kernel, computed by eliminating target variables
    /// from the graph ideal.
    pub fn kernel(&self, limits: &Limits) -> Result<IdealHandle> {
        let g = self.graph(limits)?;
        let basis = g.ideal.groebner(&g.order, limits)?;
        let src = self.source();
        let mut back = vec![None; g.ctx.nvars()];
        for (j, &idx) in g.tag_map.iter().enumerate() {
            back[idx] = Some(j);
        }
        let mut gens: Vec<MPoly> = Vec::new();
        for b in basis.iter() {
            if b
                .support_vars()
                .iter()
                .all(|i| back[*i].is_some())
            {
                let lifted = b.remap_partial(src.ctx(), &back)?;
                let red = src.nf(&lifted, limits)?;
                if !red.is_zero() && !gens.contains(&red) {
                    gens.push(red);
                }
            }
        }
        IdealHandle::new(src.ctx(), gens)
    }

    pub fn is_injective(&self, limits: &Limits) -> Result<bool> {
        let k = self.kernel(limits)?;
        for g in k.gens() {
            if !self.source().is_zero_elem(g, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// If `u` lies in the image subalgebra, returns the canonical preimage
    /// (the normal form of `u` against the graph ideal, rewritten in source
    /// generators); otherwise `None`.
    pub fn preimage(&self, u: &MPoly, limits: &Limits) -> Result<Option<MPoly>> {
        if u.ctx() != self.target().ctx() {
            return Err(Error::MixedContext("element outside the target ring".into()));
        }
        let g = self.graph(limits)?;
        let lifted = u.remap(&g.ctx, &g.target_map);
        let nf = g.ideal.normal_form(&lifted, &g.order, limits)?;
        let mut back = vec![None; g.ctx.nvars()];
        for (j, &idx) in g.tag_map.iter().enumerate() {
            back[idx] = Some(j);
        }
        if nf.support_vars().iter().all(|i| back[*i].is_some()) {
            let pre = nf.remap_partial(self.source().ctx(), &back)?;
            Ok(Some(self.source().nf(&pre, limits)?))
        } else {
            Ok(None)
        }
    }

    /// A section on generators: a preimage for every target variable.
    ///
    /// Success certifies surjectivity. A definitive refutation (some target
    /// generator provably outside the image subalgebra) raises
    /// [`Error::NotSurjective`]; a Gröbner cap raises `BoundExceeded`.
    pub fn section(&self, limits: &Limits) -> Result<Vec<MPoly>> {
        let tgt = self.target();
        let mut out = Vec::new();
        for v in tgt.vars() {
            let u = tgt.var(v);
            match self.preimage(&u, limits)? {
                Some(p) => out.push(p),
                None => {
                    return Err(Error::NotSurjective {
                        generator: v.clone(),
                        witness: format!("no polynomial in the generator images yields {v}"),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Builds the inverse hom when this hom is an isomorphism, verifying both
    /// composites are the identity.
    pub fn try_inverse(&self, limits: &Limits) -> Result<Option<RingHom>> {
        let section = match self.section(limits) {
            Ok(s) => s,
            Err(Error::NotSurjective { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let inv = match RingHom::validate(self.target(), self.source(), section, limits) {
            Ok(h) => h,
            Err(Error::RelationViolated { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        // verify both composites fix the generators
        for v in self.source().vars() {
            let x = self.source().var(v);
            let round = inv.apply(&self.apply(&x, limits)?, limits)?;
            if !self.source().elems_equal(&round, &x, limits)? {
                return Ok(None);
            }
        }
        for v in self.target().vars() {
            let y = self.target().var(v);
            let round = self.apply(&inv.apply(&y, limits)?, limits)?;
            if !self.target().elems_equal(&round, &y, limits)? {
                return Ok(None);
            }
        }
        Ok(Some(inv))
    }
}

/// A tensor product `B ⊗_A C` with its coprojections and the structural
/// positions of the factor variables inside the tensor context.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub ring: PresentedRing,
    pub copr_b: RingHom,
    pub copr_c: RingHom,
    /// B variable i sits at tensor variable `b_vars[i]`
    pub b_vars: Vec<usize>,
    /// C variable i sits at tensor variable `c_vars[i]`
    pub c_vars: Vec<usize>,
}

/// `B ⊗_A C` presented on the disjoint union of the factor variables, with
/// both coprojections. C-side variables are primed on name clash.
pub fn tensor_over_base(f: &RingHom, g: &RingHom, limits: &Limits) -> Result<TensorProduct> {
    if f.source() != g.source() {
        return Err(Error::MixedContext("tensor factors must share the base".into()));
    }
    let b = f.target();
    let c = g.target();
    let mut names: Vec<String> = b.vars().to_vec();
    let b_map: Vec<usize> = (0..names.len()).collect();
    let mut c_map = Vec::new();
    for v in c.vars() {
        let mut candidate = v.clone();
        while names.contains(&candidate) {
            candidate.push('\'');
        }
        names.push(candidate);
        c_map.push(names.len() - 1);
    }
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let ctx = Context::new(b.field(), &name_refs);
    let mut rels: Vec<MPoly> = Vec::new();
    for r in b.ideal().gens() {
        rels.push(r.remap(&ctx, &b_map));
    }
    for r in c.ideal().gens() {
        rels.push(r.remap(&ctx, &c_map));
    }
    for j in 0..f.source().ctx().nvars() {
        let fb = f.images()[j].remap(&ctx, &b_map);
        let gc = g.images()[j].remap(&ctx, &c_map);
        rels.push(fb.sub(&gc));
    }
    let tensor = PresentedRing::new(ctx.clone(), rels)?;
    let copr_b = RingHom::validate(
        b,
        &tensor,
        (0..b.ctx().nvars())
            .map(|i| MPoly::var_index(&ctx, b_map[i]))
            .collect(),
        limits,
    )?;
    let copr_c = RingHom::validate(
        c,
        &tensor,
        (0..c.ctx().nvars())
            .map(|i| MPoly::var_index(&ctx, c_map[i]))
            .collect(),
        limits,
    )?;
    Ok(TensorProduct {
        ring: tensor,
        copr_b,
        copr_c,
        b_vars: b_map,
        c_vars: c_map,
    })
}

/// `R[s]/(s f - 1)` with the canonical hom. The inverse variable name is the
/// first unused among `s, s', s'', ...`.
pub fn localize(
    r: &PresentedRing,
    f: &MPoly,
    limits: &Limits,
) -> Result<(PresentedRing, RingHom, String)> {
    if f.ctx() != r.ctx() {
        return Err(Error::MixedContext("localization element outside the ring".into()));
    }
    let mut s_name = "s".to_string();
    while r.vars().contains(&s_name) {
        s_name.push('\'');
    }
    let mut names: Vec<&str> = r.vars().iter().map(|v| v.as_str()).collect();
    names.push(&s_name);
    let ctx = Context::new(r.field(), &names);
    let map: Vec<usize> = (0..r.ctx().nvars()).collect();
    let mut rels: Vec<MPoly> = r.ideal().gens().iter().map(|g| g.remap(&ctx, &map)).collect();
    let s = MPoly::var(&ctx, &s_name);
    rels.push(s.mul(&f.remap(&ctx, &map)).sub(&MPoly::one(&ctx)));
    let loc = PresentedRing::new(ctx.clone(), rels)?;
    let hom = RingHom::validate(
        r,
        &loc,
        (0..r.ctx().nvars())
            .map(|i| MPoly::var_index(&ctx, i))
            .collect(),
        limits,
    )?;
    Ok((loc, hom, s_name))
}

/// The product ring `B × C`, presented with an idempotent `e = (1, 0)`.
///
/// Generators: `e`, the B-variables (as `(x, 0)`), and the C-variables (as
/// `(0, y)`, primed on clash). Pairs embed as `b·e + c·(1 - e)`.
#[derive(Debug, Clone)]
pub struct ProductRing {
    pub ring: PresentedRing,
    pub e: MPoly,
    b_map: Vec<usize>,
    c_map: Vec<usize>,
    b: PresentedRing,
    c: PresentedRing,
}

impl ProductRing {
    pub fn new(b: &PresentedRing, c: &PresentedRing, _limits: &Limits) -> Result<ProductRing> {
        if b.field() != c.field() {
            return Err(Error::MixedContext("product factors over different fields".into()));
        }
        let mut names: Vec<String> = vec!["e".to_string()];
        let fresh = |names: &Vec<String>, v: &str| {
            let mut candidate = v.to_string();
            while names.contains(&candidate) {
                candidate.push('\'');
            }
            candidate
        };
        let mut b_map = Vec::new();
        for v in b.vars() {
            let n = fresh(&names, v);
            names.push(n);
            b_map.push(names.len() - 1);
        }
        let mut c_map = Vec::new();
        for v in c.vars() {
            let n = fresh(&names, v);
            names.push(n);
            c_map.push(names.len() - 1);
        }
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ctx = Context::new(b.field(), &name_refs);
        let e = MPoly::var_index(&ctx, 0);
        let one = MPoly::one(&ctx);
        let co_e = one.sub(&e);
        let mut rels = vec![e.mul(&e).sub(&e)];
        for i in 0..b.ctx().nvars() {
            let u = MPoly::var_index(&ctx, b_map[i]);
            rels.push(u.mul(&co_e));
        }
        for i in 0..c.ctx().nvars() {
            let v = MPoly::var_index(&ctx, c_map[i]);
            rels.push(v.mul(&e));
        }
        for rel in b.ideal().gens() {
            rels.push(rel.remap(&ctx, &b_map).mul(&e));
        }
        for rel in c.ideal().gens() {
            rels.push(rel.remap(&ctx, &c_map).mul(&co_e));
        }
        let ring = PresentedRing::new(ctx, rels)?;
        Ok(ProductRing {
            ring,
            e,
            b_map,
            c_map,
            b: b.clone(),
            c: c.clone(),
        })
    }

    /// The element `(b, c)` of the product.
    pub fn embed_pair(&self, b: &MPoly, c: &MPoly, limits: &Limits) -> Result<MPoly> {
        if b.ctx() != self.b.ctx() || c.ctx() != self.c.ctx() {
            return Err(Error::MixedContext("pair components in wrong rings".into()));
        }
        let ctx = self.ring.ctx();
        let one = MPoly::one(ctx);
        let be = b.remap(ctx, &self.b_map).mul(&self.e);
        let ce = c.remap(ctx, &self.c_map).mul(&one.sub(&self.e));
        self.ring.nf(&be.add(&ce), limits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn validate_hom_examples() {
        // k[x]/(x^2) -> k[t]/(t^4), x -> t^2 is valid
        let src = PresentedRing::parse_new(FieldTag::Rational, &["x"], &["x^2"]).unwrap();
        let tgt = PresentedRing::parse_new(FieldTag::Rational, &["t"], &["t^4"]).unwrap();
        assert!(RingHom::parse_validate(&src, &tgt, &["t^2"], &limits()).is_ok());

        // k[x]/(x^2) -> k[t]/(t^3), x -> t violates x^2
        let tgt2 = PresentedRing::parse_new(FieldTag::Rational, &["t"], &["t^3"]).unwrap();
        let err = RingHom::parse_validate(&src, &tgt2, &["t"], &limits()).unwrap_err();
        match err {
            Error::RelationViolated { relation, image } => {
                assert_eq!(relation, "x^2");
                assert_eq!(image, "t^2");
            }
            other => panic!("unexpected error {other:?}"),
        }

        // identity is always valid
        let r = PresentedRing::parse_new(FieldTag::Rational, &["x", "y"], &["x*y - 1"]).unwrap();
        assert!(RingHom::identity(&r, &limits()).is_ok());
    }

    #[test]
    fn kernel_of_cuspidal_parametrization() {
        let src = PresentedRing::free(FieldTag::Rational, &["u", "v"]);
        let tgt = PresentedRing::free(FieldTag::Rational, &["t"]);
        let h = RingHom::parse_validate(&src, &tgt, &["t^2", "t^3"], &limits()).unwrap();
        let k = h.kernel(&limits()).unwrap();
        assert_eq!(k.gens().len(), 1);
        let g = &k.gens()[0];
        // substitution oracle
        let tctx = tgt.ctx();
        let img = g.substitute(tctx, &[tgt.parse("t^2").unwrap(), tgt.parse("t^3").unwrap()]);
        assert!(img.is_zero());
        assert!(!h.is_injective(&limits()).unwrap());
    }

    #[test]
    fn kernel_trivial_and_evaluation() {
        let r = PresentedRing::parse_new(FieldTag::Rational, &["x"], &["x^3 - x"]).unwrap();
        let id = RingHom::identity(&r, &limits()).unwrap();
        assert!(id.kernel(&limits()).unwrap().gens().is_empty());

        let k = PresentedRing::ground(FieldTag::Rational);
        let free_x = PresentedRing::free(FieldTag::Rational, &["x"]);
        let ev = RingHom::parse_validate(&free_x, &k, &["0"], &limits()).unwrap();
        let ker = ev.kernel(&limits()).unwrap();
        assert_eq!(ker.gens().len(), 1);
        assert_eq!(ker.gens()[0].to_string(), "x");
    }

    #[test]
    fn preimage_and_section() {
        // pi: k[t] -> k[s]/(s^2 - 1), t -> s is surjective
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let kq = PresentedRing::parse_new(FieldTag::Rational, &["s"], &["s^2 - 1"]).unwrap();
        let pi = RingHom::parse_validate(&c, &kq, &["s"], &limits()).unwrap();
        let sec = pi.section(&limits()).unwrap();
        assert_eq!(sec.len(), 1);
        assert_eq!(sec[0].to_string(), "t");

        // y -> x^2 is not surjective onto k[x]
        let b = PresentedRing::free(FieldTag::Rational, &["y"]);
        let kx = PresentedRing::free(FieldTag::Rational, &["x"]);
        let h = RingHom::parse_validate(&b, &kx, &["x^2"], &limits()).unwrap();
        assert!(matches!(
            h.section(&limits()),
            Err(Error::NotSurjective { .. })
        ));
    }

    #[test]
    fn tensor_free_case_and_identity_factor() {
        let base = PresentedRing::ground(FieldTag::Rational);
        let bx = PresentedRing::free(FieldTag::Rational, &["x"]);
        let cy = PresentedRing::free(FieldTag::Rational, &["y"]);
        let f = RingHom::validate(&base, &bx, vec![], &limits()).unwrap();
        let g = RingHom::validate(&base, &cy, vec![], &limits()).unwrap();
        let t = tensor_over_base(&f, &g, &limits()).unwrap().ring;
        assert_eq!(t.vars(), &["x".to_string(), "y".to_string()]);
        assert!(t.ideal().gens().is_empty());

        // A ⊗_A C ≅ C: tensor along the identity
        let c = PresentedRing::parse_new(FieldTag::Rational, &["u"], &["u^3"]).unwrap();
        let idc = RingHom::identity(&c, &limits()).unwrap();
        let tp2 = tensor_over_base(&idc, &idc, &limits()).unwrap();
        let (t2, copr) = (tp2.ring, tp2.copr_c);
        // the coprojection C -> T must be an isomorphism
        assert!(copr.try_inverse(&limits()).unwrap().is_some());
        assert_eq!(t2.vars().len(), 2);
    }

    #[test]
    fn localize_examples() {
        let r = PresentedRing::free(FieldTag::Rational, &["x"]);
        let x = r.var("x");
        let (loc, _, s) = localize(&r, &x, &limits()).unwrap();
        assert_eq!(s, "s");
        assert!(!loc.is_zero_ring(&limits()).unwrap());

        // localizing at 1 keeps the ring (up to the new unit variable)
        let (loc1, hom1, _) = localize(&r, &r.one_elem(), &limits()).unwrap();
        assert!(hom1.try_inverse(&limits()).unwrap().is_some());
        assert!(!loc1.is_zero_ring(&limits()).unwrap());

        // localizing k[x]/(x) at the nilpotent x kills the ring
        let q = PresentedRing::parse_new(FieldTag::Rational, &["x"], &["x"]).unwrap();
        let (locq, _, _) = localize(&q, &q.var("x"), &limits()).unwrap();
        assert!(locq.is_zero_ring(&limits()).unwrap());
    }

    #[test]
    fn product_ring_structure() {
        let b = PresentedRing::ground(FieldTag::Rational);
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let p = ProductRing::new(&b, &c, &limits()).unwrap();
        // (1, 0) * (0, t) = 0
        let e = p.ring.nf(&p.e, &limits()).unwrap();
        let pair = p.embed_pair(&b.zero_elem(), &c.var("t"), &limits()).unwrap();
        assert!(p.ring.is_zero_elem(&e.mul(&pair), &limits()).unwrap());
        // (1, 1) is the unit
        let unit = p.embed_pair(&b.one_elem(), &c.one_elem(), &limits()).unwrap();
        assert!(p.ring.elems_equal(&unit, &p.ring.one_elem(), &limits()).unwrap());
        // product of a field and a line is not the zero ring
        assert!(!p.ring.is_zero_ring(&limits()).unwrap());
    }
}
