//! Zariski gluing of affine pushout squares into chart complexes, the
//! affine étale-lifting step, and cartesian checks for morphisms of pushout
//! data.
//!
//! All gluing data is explicit: charts are indexed, overlaps carry their
//! localization elements and certified isomorphisms, and the cocycle
//! condition is re-verified by replay on ordered triples.

use crate::error::{Error, Result};
use crate::limits::{CancelToken, Limits};
use crate::poly::modgb::ideal_membership_witness;
use crate::poly::{Context, MPoly};
use crate::ring::{localize, tensor_over_base, PresentedRing, ProductRing, RingHom};
use crate::square::{
    localize_square, present_pushout, ConductorSquare, FiberElement, PushoutPresentation,
};

// ------------------------------------------------------------------ étale

/// A standard étale algebra `(R[t]/(f))_g` with `f` monic and a certificate
/// that `f'` is a unit in the result.
#[derive(Debug, Clone)]
pub struct StdEtaleAlgebra {
    pub base: PresentedRing,
    /// the adjoined variable
    pub var: String,
    /// monic polynomial in `var`, in the extended context `base ⊔ {var}`
    pub f: MPoly,
    /// inverted element, in the extended context
    pub g: MPoly,
    /// the presented result `base[var, s]/(I_base, f, s g - 1)`
    pub ring: PresentedRing,
    pub hom: RingHom,
    /// the inverse-of-`f'` certificate: `f' * deriv_inverse ≡ 1`
    pub deriv_inverse: MPoly,
}

impl StdEtaleAlgebra {
    /// Extended context of the base plus the étale variable.
    pub fn extended_ctx(base: &PresentedRing, var: &str) -> std::sync::Arc<Context> {
        let mut names: Vec<&str> = base.vars().iter().map(|s| s.as_str()).collect();
        names.push(var);
        Context::new(base.field(), &names)
    }

    /// Builds and certifies the algebra. `f` and `g` live in the extended
    /// context returned by [`StdEtaleAlgebra::extended_ctx`].
    pub fn new(
        base: &PresentedRing,
        var: &str,
        f: MPoly,
        g: MPoly,
        limits: &Limits,
    ) -> Result<StdEtaleAlgebra> {
        if base.vars().iter().any(|v| v == var) {
            return Err(Error::NameClash(var.to_string()));
        }
        let ext = StdEtaleAlgebra::extended_ctx(base, var);
        if f.ctx() != &ext || g.ctx() != &ext {
            return Err(Error::MixedContext("f and g must live in base[var]".into()));
        }
        let vi = ext.var_index(var).unwrap();
        // monic: the coefficient of the top power of var is exactly 1
        let d = f.degree_in(vi);
        if d == 0 {
            return Err(Error::InvalidInput("f must have positive degree".into()));
        }
        let mut top_coeff = MPoly::zero(&ext);
        for (e, c) in f.terms() {
            if e[vi] == d {
                let mut e2 = e.clone();
                e2[vi] = 0;
                top_coeff = top_coeff.add(&MPoly::monomial(&ext, e2, c.clone()));
            }
        }
        if !top_coeff.is_one() {
            return Err(Error::InvalidInput(format!(
                "f is not monic in {var}: leading coefficient {top_coeff}"
            )));
        }
        // presented result: base relations + f + s g - 1
        let mut s_name = "s".to_string();
        while ext.vars.contains(&s_name) {
            s_name.push('\'');
        }
        let mut names: Vec<&str> = ext.vars.iter().map(|s| s.as_str()).collect();
        names.push(&s_name);
        let rctx = Context::new(base.field(), &names);
        let up: Vec<usize> = (0..ext.nvars()).collect();
        let mut rels: Vec<MPoly> = base
            .ideal()
            .gens()
            .iter()
            .map(|r| r.transport(&rctx))
            .collect::<Result<_>>()?;
        rels.push(f.remap(&rctx, &up));
        let s = MPoly::var(&rctx, &s_name);
        rels.push(s.mul(&g.remap(&rctx, &up)).sub(&MPoly::one(&rctx)));
        let ring = PresentedRing::new(rctx.clone(), rels)?;
        let hom = RingHom::validate(
            base,
            &ring,
            (0..base.ctx().nvars())
                .map(|i| MPoly::var_index(&rctx, i))
                .collect(),
            limits,
        )?;
        // certificate: f' is a unit in the result
        let f_prime = f.derivative(vi).remap(&rctx, &up);
        let mut member_gens = vec![f_prime.clone()];
        member_gens.extend(ring.ideal().gens().iter().cloned());
        let witness = ideal_membership_witness(&MPoly::one(&rctx), &member_gens, limits)?
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "derivative {f_prime} is not a unit: the algebra is not standard étale"
                ))
            })?;
        let deriv_inverse = ring.nf(&witness[0], limits)?;
        Ok(StdEtaleAlgebra {
            base: base.clone(),
            var: var.to_string(),
            f,
            g,
            ring,
            hom,
            deriv_inverse,
        })
    }

    pub fn parse_new(
        base: &PresentedRing,
        var: &str,
        f: &str,
        g: &str,
        limits: &Limits,
    ) -> Result<StdEtaleAlgebra> {
        let ext = StdEtaleAlgebra::extended_ctx(base, var);
        StdEtaleAlgebra::new(
            base,
            var,
            MPoly::parse(&ext, f)?,
            MPoly::parse(&ext, g)?,
            limits,
        )
    }

    /// Replays the derivative-unit certificate.
    pub fn replay_certificate(&self, limits: &Limits) -> Result<bool> {
        let vi = self
            .f
            .ctx()
            .var_index(&self.var)
            .expect("étale variable exists");
        let up: Vec<usize> = (0..self.f.ctx().nvars()).collect();
        let f_prime = self.f.derivative(vi).remap(self.ring.ctx(), &up);
        let prod = f_prime.mul(&self.deriv_inverse);
        self.ring
            .elems_equal(&prod, &self.ring.one_elem(), limits)
    }
}

/// Result of an étale lift: the lifted algebra and the certified
/// base-change comparison with the original.
#[derive(Debug, Clone)]
pub struct EtaleLift {
    pub lifted: StdEtaleAlgebra,
    /// isomorphism `lifted ⊗_C K → K'` and its inverse
    pub comparison: RingHom,
    pub comparison_inv: RingHom,
}

/// Lifts a standard étale algebra along a surjection `pi: C ↠ K`.
///
/// Coefficients of `f` and `g` lift through `pi` by their canonical
/// normal-form preimages; the derivative is additionally inverted so the
/// lift is standard étale on the nose. The base change of the lift along
/// `pi` is certified isomorphic to the input.
pub fn lift_etale_affine(
    pi: &RingHom,
    kp: &StdEtaleAlgebra,
    limits: &Limits,
) -> Result<EtaleLift> {
    if &kp.base != pi.target() {
        return Err(Error::MixedContext("the étale algebra must live over the target of pi".into()));
    }
    // surjectivity certificate
    pi.section(limits)?;
    let c = pi.source();
    let k = pi.target();
    let kext = kp.f.ctx().clone();
    let kvi = kext.var_index(&kp.var).unwrap();
    let mut var = kp.var.clone();
    while c.vars().contains(&var) {
        var.push('\'');
    }
    let cext = StdEtaleAlgebra::extended_ctx(c, &var);
    let cvi = cext.var_index(&var).unwrap();

    // coefficientwise lift of a polynomial in (K-vars, t)
    let lift_poly = |p: &MPoly| -> Result<MPoly> {
        let mut acc = MPoly::zero(&cext);
        // group the terms of p by power of t
        let max_d = p.degree_in(kvi);
        for d in 0..=max_d {
            let mut coeff = MPoly::zero(k.ctx());
            for (e, cc) in p.terms() {
                if e[kvi] == d {
                    let mut e2 = e.clone();
                    e2.remove(kvi);
                    // the K-context has the same vars minus the étale one
                    coeff = coeff.add(&MPoly::monomial(k.ctx(), e2, cc.clone()));
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let pre = pi.preimage(&coeff, limits)?.ok_or_else(|| Error::NotSurjective {
                generator: coeff.to_string(),
                witness: "no preimage for an étale coefficient".into(),
            })?;
            // place the lifted coefficient at t^d
            let lifted_coeff = pre.transport(&cext)?;
            let mut t_pow = vec![0u32; cext.nvars()];
            t_pow[cvi] = d;
            acc = acc.add(&lifted_coeff.mul(&MPoly::monomial(
                &cext,
                t_pow,
                c.field().one(),
            )));
        }
        Ok(acc)
    };

    let f_c = lift_poly(&kp.f)?;
    let g_c = lift_poly(&kp.g)?;
    let f_c_prime = f_c.derivative(cvi);
    // invert g and f' together so the derivative certificate is immediate
    let lifted = StdEtaleAlgebra::new(c, &var, f_c.clone(), g_c.mul(&f_c_prime), limits)?;

    // comparison: lifted ⊗_C K ≅ K' through the identification that matches
    // the étale variables and inverts the extra derivative factor
    let tp = tensor_over_base(&lifted.hom, pi, limits)?;
    // images in K'.ring: lifted.ring vars are [C-vars, t, s]; K vars map via pi
    let kp_ring = &kp.ring;
    let mut images = vec![kp_ring.zero_elem(); tp.ring.ctx().nvars()];
    for (i, &idx) in tp.b_vars.iter().enumerate() {
        // lifted.ring variable i
        if i < c.ctx().nvars() {
            // a C variable: through pi, then into K'
            let in_k = pi.images()[i].clone();
            images[idx] = in_k.transport(kp_ring.ctx())?;
        } else if i == c.ctx().nvars() {
            // the étale variable
            images[idx] = MPoly::var(kp_ring.ctx(), &kp.var);
        } else {
            // the inverse variable: s_C inverts g_C * f'_C, so it maps to
            // s_K * deriv_inverse
            let s_k_name = kp_ring.vars().last().unwrap().clone();
            let s_k = MPoly::var(kp_ring.ctx(), &s_k_name);
            images[idx] = s_k.mul(&kp.deriv_inverse);
        }
    }
    for (i, &idx) in tp.c_vars.iter().enumerate() {
        // a K variable inside the tensor: identity into K'
        images[idx] = MPoly::var_index(k.ctx(), i).transport(kp_ring.ctx())?;
    }
    let comparison = RingHom::validate(&tp.ring, kp_ring, images, limits)?;
    let comparison_inv = comparison.try_inverse(limits)?.ok_or_else(|| {
        Error::InvalidInput("base change of the lift is not isomorphic to the input".into())
    })?;
    Ok(EtaleLift {
        lifted,
        comparison,
        comparison_inv,
    })
}

// --------------------------------------------------- morphisms of squares

/// Componentwise ring maps between two squares (contravariant to the
/// morphism of pushout data on spectra).
#[derive(Debug, Clone)]
pub struct SquareHomTriple {
    pub on_b: RingHom,
    pub on_c: RingHom,
    pub on_k: RingHom,
}

impl SquareHomTriple {
    /// Checks commutation with the structure maps of both squares.
    pub fn verify_commuting(
        &self,
        src: &ConductorSquare,
        dst: &ConductorSquare,
        limits: &Limits,
    ) -> Result<bool> {
        let left = src.beta().compose(&self.on_k, limits)?;
        let right = self.on_b.compose(dst.beta(), limits)?;
        if !left.equal_to(&right, limits)? {
            return Ok(false);
        }
        let left = src.pi().compose(&self.on_k, limits)?;
        let right = self.on_c.compose(dst.pi(), limits)?;
        left.equal_to(&right, limits)
    }
}

/// Verdict of the cartesian check for one side of a datum morphism.
#[derive(Debug, Clone)]
pub enum CartesianVerdict {
    Cartesian,
    NotCartesian { witness: String },
}

impl CartesianVerdict {
    pub fn is_cartesian(&self) -> bool {
        matches!(self, CartesianVerdict::Cartesian)
    }
}

/// Report of [`check_datum_morphism`]: both squares of the morphism.
#[derive(Debug, Clone)]
pub struct DatumMorphismReport {
    pub y_side: CartesianVerdict,
    pub z_side: CartesianVerdict,
}

impl DatumMorphismReport {
    pub fn is_morphism(&self) -> bool {
        self.y_side.is_cartesian() && self.z_side.is_cartesian()
    }
}

/// Checks whether componentwise maps form a morphism of pushout data: both
/// squares must be cartesian on spectra, i.e. the canonical maps
/// `K ⊗_B B' → K'` and `K ⊗_C C' → K'` must be isomorphisms.
pub fn check_datum_morphism(
    src: &ConductorSquare,
    dst: &ConductorSquare,
    maps: &SquareHomTriple,
    limits: &Limits,
) -> Result<DatumMorphismReport> {
    if !maps.verify_commuting(src, dst, limits)? {
        return Err(Error::InvalidInput(
            "component maps do not commute with the structure maps".into(),
        ));
    }
    let y_side = cartesian_side(src.beta(), &maps.on_b, &maps.on_k, dst.beta(), limits)?;
    let z_side = cartesian_side(src.pi(), &maps.on_c, &maps.on_k, dst.pi(), limits)?;
    Ok(DatumMorphismReport { y_side, z_side })
}

/// The canonical comparison `K ⊗_R R' → K'` for a commuting square of ring
/// maps `structure: R → K`, `change: R → R'`, `on_k: K → K'`,
/// `structure': R' → K'`.
fn cartesian_side(
    structure: &RingHom,
    change: &RingHom,
    on_k: &RingHom,
    structure_new: &RingHom,
    limits: &Limits,
) -> Result<CartesianVerdict> {
    let tp = tensor_over_base(structure, change, limits)?;
    let kp = structure_new.target();
    let mut images = vec![kp.zero_elem(); tp.ring.ctx().nvars()];
    for (i, &idx) in tp.b_vars.iter().enumerate() {
        images[idx] = on_k.images()[i].clone();
    }
    for (i, &idx) in tp.c_vars.iter().enumerate() {
        images[idx] = structure_new.images()[i].clone();
    }
    let induced = match RingHom::validate(&tp.ring, kp, images, limits) {
        Ok(h) => h,
        Err(Error::RelationViolated { relation, image }) => {
            return Ok(CartesianVerdict::NotCartesian {
                witness: format!("comparison map ill-defined: {relation} -> {image}"),
            })
        }
        Err(e) => return Err(e),
    };
    let ker = induced.kernel(limits)?;
    for g in ker.gens() {
        if !tp.ring.is_zero_elem(g, limits)? {
            return Ok(CartesianVerdict::NotCartesian {
                witness: format!("kernel element {g}"),
            });
        }
    }
    if !kp.is_zero_ring(limits)? {
        if let Err(Error::NotSurjective { generator, .. }) = induced.section(limits) {
            return Ok(CartesianVerdict::NotCartesian {
                witness: format!("generator {generator} is not reached"),
            });
        }
    }
    Ok(CartesianVerdict::Cartesian)
}

// ------------------------------------------------------------- chart data

/// A certified isomorphism between two localized squares: component homs in
/// both directions, commuting with the structure maps, composing to the
/// identity.
#[derive(Debug, Clone)]
pub struct SquareIso {
    pub fwd: SquareHomTriple,
    pub inv: SquareHomTriple,
}

impl SquareIso {
    pub fn verify(
        &self,
        src: &ConductorSquare,
        dst: &ConductorSquare,
        limits: &Limits,
    ) -> Result<bool> {
        if !self.fwd.verify_commuting(src, dst, limits)? {
            return Ok(false);
        }
        if !self.inv.verify_commuting(dst, src, limits)? {
            return Ok(false);
        }
        for (f, i) in [
            (&self.fwd.on_b, &self.inv.on_b),
            (&self.fwd.on_c, &self.inv.on_c),
            (&self.fwd.on_k, &self.inv.on_k),
        ] {
            let round = f.compose(i, limits)?;
            let id = RingHom::identity(f.source(), limits)?;
            if !round.equal_to(&id, limits)? {
                return Ok(false);
            }
            let round = i.compose(f, limits)?;
            let id = RingHom::identity(i.source(), limits)?;
            if !round.equal_to(&id, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Overlap data between charts `i` and `j`: localization elements on both
/// sides and a certified isomorphism of the localized squares.
#[derive(Debug, Clone)]
pub struct Overlap {
    pub i: usize,
    pub j: usize,
    pub elem_i: FiberElement,
    pub elem_j: FiberElement,
    pub iso: SquareIso,
}

/// A finite family of affine charts with explicit overlap data.
#[derive(Debug, Clone)]
pub struct ChartedPushoutDatum {
    pub charts: Vec<ConductorSquare>,
    pub overlaps: Vec<Overlap>,
}

impl ChartedPushoutDatum {
    pub fn overlap(&self, i: usize, j: usize) -> Option<&Overlap> {
        self.overlaps.iter().find(|o| o.i == i && o.j == j)
    }
}

/// One glued chart: its pushout presentation and the certified overlap
/// isomorphisms on the pushout level.
#[derive(Debug, Clone)]
pub struct GluedChart {
    pub presentation: PushoutPresentation,
}

/// A glued pushout: chart presentations, pushout-level overlap isos, and
/// the replayed cocycle verdict.
#[derive(Debug, Clone)]
pub struct GluedPushout {
    pub charts: Vec<GluedChart>,
    /// (i, j, forward, inverse) on the localized pushout rings
    pub a_isos: Vec<(usize, usize, RingHom, RingHom)>,
    pub cocycle_verified: bool,
}

/// The cocycle check at one component level. For each ordered triple with
/// all three overlaps present, the two paths around the triangle must agree
/// on the doubly-localized rings.
fn cocycle_at_level(
    datum: &ChartedPushoutDatum,
    ring_of: &dyn Fn(&ConductorSquare) -> PresentedRing,
    elem_of: &dyn Fn(&ConductorSquare, &FiberElement, &Limits) -> Result<MPoly>,
    hom_of: &dyn Fn(&SquareHomTriple) -> RingHom,
    limits: &Limits,
) -> Result<()> {
    let n = datum.charts.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (Some(oij), Some(ojk), Some(oik)) = (
                    datum.overlap(i, j),
                    datum.overlap(j, k),
                    datum.overlap(i, k),
                ) else {
                    continue;
                };
                // triple rings: chart localized at the product of its two
                // overlap elements
                let e_i = elem_of(&datum.charts[i], &oij.elem_i, limits)?
                    .mul(&elem_of(&datum.charts[i], &oik.elem_i, limits)?);
                let e_j = elem_of(&datum.charts[j], &oij.elem_j, limits)?
                    .mul(&elem_of(&datum.charts[j], &ojk.elem_j, limits)?);
                let e_k = elem_of(&datum.charts[k], &oik.elem_j, limits)?
                    .mul(&elem_of(&datum.charts[k], &ojk.elem_j, limits)?);
                let r_i = ring_of(&datum.charts[i]);
                let r_j = ring_of(&datum.charts[j]);
                let r_k = ring_of(&datum.charts[k]);
                let (u_i, _, _) = localize(&r_i, &e_i, limits)?;
                let (u_j, _, _) = localize(&r_j, &e_j, limits)?;
                let (u_k, _, _) = localize(&r_k, &e_k, limits)?;

                // path maps into the triple rings
                let m_ij = triple_map(&hom_of(&oij.iso.fwd), &e_j, &u_i, &u_j, limits)
                    .map_err(|e| cocycle_err(i, j, k, &format!("i->j: {e}")))?;
                let m_jk = triple_map(&hom_of(&ojk.iso.fwd), &e_k, &u_j, &u_k, limits)
                    .map_err(|e| cocycle_err(i, j, k, &format!("j->k: {e}")))?;
                let m_ik = triple_map(&hom_of(&oik.iso.fwd), &e_k, &u_i, &u_k, limits)
                    .map_err(|e| cocycle_err(i, j, k, &format!("i->k: {e}")))?;
                let composed = m_ij.compose(&m_jk, limits)?;
                if !composed.equal_to(&m_ik, limits)? {
                    let witness = (0..u_i.ctx().nvars())
                        .map(|v| {
                            format!(
                                "{} -> {} vs {}",
                                u_i.ctx().vars[v],
                                composed.images()[v],
                                m_ik.images()[v]
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("; ");
                    return Err(cocycle_err(i, j, k, &witness));
                }
            }
        }
    }
    Ok(())
}

fn cocycle_err(i: usize, j: usize, k: usize, witness: &str) -> Error {
    Error::CocycleError {
        i,
        j,
        k,
        witness: witness.to_string(),
    }
}

/// Lifts an overlap iso component `m: R_i(e) → R_j(e')` to the triple rings
/// `U_i = (R_i)_{e_i}` and `U_j = (R_j)_{e_j}` where the localizing elements
/// are products including the overlap elements.
fn triple_map(
    m: &RingHom,
    _e_j: &MPoly,
    u_i: &PresentedRing,
    u_j: &PresentedRing,
    limits: &Limits,
) -> Result<RingHom> {
    // Positional convention: every localization appends its single inverse
    // variable at the end, after the base variables. Indices, not names,
    // distinguish base variables from inverse variables.
    if u_j.is_zero_ring(limits)? {
        // everything is zero on this level; the map is trivially defined
        let images = vec![u_j.zero_elem(); u_i.ctx().nvars()];
        return RingHom::validate(u_i, u_j, images, limits);
    }
    let invert_in = |x: &MPoly, limits: &Limits| -> Result<MPoly> {
        let mut gens = vec![x.clone()];
        gens.extend(u_j.ideal().gens().iter().cloned());
        let witness = ideal_membership_witness(&u_j.one_elem(), &gens, limits)?
            .ok_or_else(|| {
                Error::InvalidInput(format!("{x} is not a unit in the triple ring"))
            })?;
        u_j.nf(&witness[0], limits)
    };
    // embed the target localized ring R_j(e') into U_j
    let n_j = m.target().ctx().nvars() - 1;
    let mut images = Vec::new();
    for idx in 0..m.target().ctx().nvars() {
        if idx < n_j {
            images.push(MPoly::var_index(u_j.ctx(), idx));
        } else {
            // the inverse variable of the single localization
            let x = inverted_element(m.target(), idx)?;
            let up: Vec<usize> = (0..n_j).chain(std::iter::once(0)).collect();
            let x_in_uj = x.remap(u_j.ctx(), &up[..m.target().ctx().nvars()]);
            images.push(invert_in(&x_in_uj, limits)?);
        }
    }
    let embed = RingHom::validate(m.target(), u_j, images, limits)?;
    let to_uj = m.compose(&embed, limits)?;
    // extend from the singly-localized source to U_i
    let n_src = m.source().ctx().nvars();
    let mut images = Vec::new();
    for idx in 0..u_i.ctx().nvars() {
        if idx < n_src - 1 {
            // a base variable of R_i, shared with the source localization
            images.push(to_uj.images()[idx].clone());
        } else {
            // the inverse variable of U_i inverts the product element
            let x = inverted_element(u_i, idx)?;
            let keep: Vec<usize> = (0..n_src - 1).collect();
            let x_src = x.remap_partial(
                m.source().ctx(),
                &(0..u_i.ctx().nvars())
                    .map(|i| if i < n_src - 1 { Some(keep[i]) } else { None })
                    .collect::<Vec<_>>(),
            )?;
            let img = to_uj.apply(&x_src, limits)?;
            images.push(invert_in(&img, limits)?);
        }
    }
    RingHom::validate(u_i, u_j, images, limits)
}

/// Recovers the element inverted by a localization variable (given by
/// index) from the defining relation `s*x - 1`; the element contains no
/// inverse variable.
fn inverted_element(ring: &PresentedRing, si: usize) -> Result<MPoly> {
    for rel in ring.ideal().gens() {
        if rel.degree_in(si) == 1 {
            // rel = s*x - 1: x = (rel + 1) / s
            let one = MPoly::one(ring.ctx());
            let shifted = rel.add(&one);
            // divide by s: every term must contain s
            let mut ok = true;
            let mut x = MPoly::zero(ring.ctx());
            for (e, c) in shifted.terms() {
                if e[si] == 0 {
                    ok = false;
                    break;
                }
                let mut e2 = e.clone();
                e2[si] -= 1;
                x = x.add(&MPoly::monomial(ring.ctx(), e2, c.clone()));
            }
            if ok && x.degree_in(si) == 0 && !x.is_zero() {
                return Ok(x);
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no localization relation found for variable {si}"
    )))
}

/// Verifies every overlap iso, replays the cocycle condition on all three
/// component levels, presents each chart, transports the overlap isos to
/// the pushout level, and re-verifies the cocycle there.
pub fn glue_pushout(
    datum: &ChartedPushoutDatum,
    degree_bound: u32,
    limits: &Limits,
    cancel: &CancelToken,
) -> Result<GluedPushout> {
    // verify overlap isos against the localized squares
    for o in &datum.overlaps {
        let li = localize_square(&datum.charts[o.i], &o.elem_i, limits)?;
        let lj = localize_square(&datum.charts[o.j], &o.elem_j, limits)?;
        if !o.iso.verify(&li.square, &lj.square, limits)? {
            return Err(Error::InvalidInput(format!(
                "overlap ({}, {}) carries an invalid isomorphism",
                o.i, o.j
            )));
        }
    }
    // component-level cocycle on B, C, K
    cocycle_at_level(
        datum,
        &|sq| sq.c().clone(),
        &|_sq, fe, _l| Ok(fe.c.clone()),
        &|t| t.on_c.clone(),
        limits,
    )?;
    cocycle_at_level(
        datum,
        &|sq| sq.b().clone(),
        &|_sq, fe, _l| Ok(fe.b.clone()),
        &|t| t.on_b.clone(),
        limits,
    )?;
    cocycle_at_level(
        datum,
        &|sq| sq.k().clone(),
        &|sq, fe, l| sq.beta().apply(&fe.b, l),
        &|t| t.on_k.clone(),
        limits,
    )?;

    // present each chart
    let mut charts = Vec::new();
    for sq in &datum.charts {
        cancel.check()?;
        let (presentation, _) = present_pushout(sq, degree_bound, limits, cancel)?;
        charts.push(GluedChart { presentation });
    }

    // transport overlap isos to the pushout level
    let mut a_isos = Vec::new();
    for o in &datum.overlaps {
        cancel.check()?;
        let fwd = transport_iso_to_pushout(datum, &charts, o, false, limits)?;
        let inv = transport_iso_to_pushout(datum, &charts, o, true, limits)?;
        // replay: both composites are the identity
        let round = fwd.compose(&inv, limits)?;
        let id = RingHom::identity(fwd.source(), limits)?;
        if !round.equal_to(&id, limits)? {
            return Err(Error::InvalidInput(format!(
                "pushout-level overlap ({}, {}) does not invert",
                o.i, o.j
            )));
        }
        a_isos.push((o.i, o.j, fwd, inv));
    }

    Ok(GluedPushout {
        charts,
        a_isos,
        cocycle_verified: true,
    })
}

/// Builds the pushout-level iso `(A_i)_{f} → (A_j)_{g}` induced by an
/// overlap: each generator of the localized pushout ring is a matched pair,
/// which is transported through the component isos and re-expressed in the
/// target localized pushout ring.
fn transport_iso_to_pushout(
    datum: &ChartedPushoutDatum,
    charts: &[GluedChart],
    o: &Overlap,
    reversed: bool,
    limits: &Limits,
) -> Result<RingHom> {
    let (src_idx, dst_idx, elem_src, elem_dst, triple) = if reversed {
        (o.j, o.i, &o.elem_j, &o.elem_i, &o.iso.inv)
    } else {
        (o.i, o.j, &o.elem_i, &o.elem_j, &o.iso.fwd)
    };
    let src_sq = &datum.charts[src_idx];
    let dst_sq = &datum.charts[dst_idx];
    let src_pres = &charts[src_idx].presentation;
    let dst_pres = &charts[dst_idx].presentation;

    // localized pushout rings: A localized at the preimage of the fiber
    // element under the presentation
    let src_a_elem = fiber_elem_in_presentation(src_sq, src_pres, elem_src, limits)?;
    let dst_a_elem = fiber_elem_in_presentation(dst_sq, dst_pres, elem_dst, limits)?;
    let (src_a_loc, src_a_hom, _) = localize(&src_pres.a_pres, &src_a_elem, limits)?;
    let (dst_a_loc, dst_a_hom, _) = localize(&dst_pres.a_pres, &dst_a_elem, limits)?;

    // localized squares and the product ring of the target side
    let dst_loc = localize_square(dst_sq, elem_dst, limits)?;
    let src_loc = localize_square(src_sq, elem_src, limits)?;
    let product = ProductRing::new(dst_loc.square.b(), dst_loc.square.c(), limits)?;
    // target generators: images of the destination presented generators in
    // the localized product, plus the inverse of the localized element
    let mut gen_pairs: Vec<MPoly> = Vec::new();
    for gi in 0..dst_pres.a_pres.ctx().nvars() {
        let gen = MPoly::var_index(dst_pres.a_pres.ctx(), gi);
        let b_img = dst_loc
            .loc_b
            .apply(&dst_pres.to_b.apply(&gen, limits)?, limits)?;
        let c_img = dst_loc
            .loc_c
            .apply(&dst_pres.to_c.apply(&gen, limits)?, limits)?;
        gen_pairs.push(product.embed_pair(&b_img, &c_img, limits)?);
    }
    // the localized inverse variable of the destination: pair of inverses
    let dst_b_inv = MPoly::var(
        dst_loc.square.b().ctx(),
        dst_loc.square.b().vars().last().unwrap(),
    );
    let dst_c_inv = MPoly::var(
        dst_loc.square.c().ctx(),
        dst_loc.square.c().vars().last().unwrap(),
    );
    gen_pairs.push(product.embed_pair(&dst_b_inv, &dst_c_inv, limits)?);
    let names: Vec<String> = (1..=gen_pairs.len()).map(|i| format!("h{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let free = PresentedRing::free(dst_pres.a_pres.field(), &name_refs);
    let eval = RingHom::validate(&free, &product.ring, gen_pairs, limits)?;

    // images of the source generators: transport the matched pair through
    // the component isos into the destination localized square, and find a
    // preimage in the destination localized pushout ring
    let mut images = Vec::new();
    for v in src_a_loc.vars() {
        let (b_loc_img, c_loc_img) = if let Some(gi) = src_pres.a_pres.ctx().var_index(v) {
            let gen = MPoly::var_index(src_pres.a_pres.ctx(), gi);
            let b0 = src_loc
                .loc_b
                .apply(&src_pres.to_b.apply(&gen, limits)?, limits)?;
            let c0 = src_loc
                .loc_c
                .apply(&src_pres.to_c.apply(&gen, limits)?, limits)?;
            (
                triple.on_b.apply(&b0, limits)?,
                triple.on_c.apply(&c0, limits)?,
            )
        } else {
            // the inverse variable of the source localization: transport
            // the inverses of the localized element components
            let b0 = MPoly::var(
                src_loc.square.b().ctx(),
                src_loc.square.b().vars().last().unwrap(),
            );
            let c0 = MPoly::var(
                src_loc.square.c().ctx(),
                src_loc.square.c().vars().last().unwrap(),
            );
            (
                triple.on_b.apply(&b0, limits)?,
                triple.on_c.apply(&c0, limits)?,
            )
        };
        let pair = product.embed_pair(&b_loc_img, &c_loc_img, limits)?;
        let expr = eval.preimage(&pair, limits)?.ok_or(Error::BoundExceeded {
            reason: "transported matched pair is not reachable in the pushout presentation"
                .into(),
            cap: limits.degree_bound,
        })?;
        // rewrite h-variables: h_1..h_n are the A generators, h_{n+1} the
        // localized inverse
        let mut map = Vec::new();
        for gi in 0..dst_pres.a_pres.ctx().nvars() {
            map.push(gi);
        }
        map.push(dst_a_loc.ctx().nvars() - 1);
        images.push(expr.remap(dst_a_loc.ctx(), &map));
    }
    let _ = (&src_a_hom, &dst_a_hom);
    RingHom::validate(&src_a_loc, &dst_a_loc, images, limits)
}

/// Expresses a fiber element inside a verified pushout presentation.
fn fiber_elem_in_presentation(
    sq: &ConductorSquare,
    pres: &PushoutPresentation,
    fe: &FiberElement,
    limits: &Limits,
) -> Result<MPoly> {
    let product = ProductRing::new(sq.b(), sq.c(), limits)?;
    let hom = sq.hom_into_product(pres, &product, limits)?;
    let pair = product.embed_pair(&fe.b, &fe.c, limits)?;
    hom.preimage(&pair, limits)?.ok_or(Error::BoundExceeded {
        reason: "localization element is not reachable in the pushout presentation".into(),
        cap: limits.degree_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::FieldTag;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn std_etale_identity_lift() {
        // K' = K: f = t, g = 1 lifts to C' = C (up to the étale scaffolding)
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let k = PresentedRing::ground(FieldTag::Rational);
        let pi = RingHom::parse_validate(&c, &k, &["0"], &limits()).unwrap();
        let kp = StdEtaleAlgebra::parse_new(&k, "u", "u", "1", &limits()).unwrap();
        assert!(kp.replay_certificate(&limits()).unwrap());
        let lift = lift_etale_affine(&pi, &kp, &limits()).unwrap();
        assert!(lift.lifted.replay_certificate(&limits()).unwrap());
    }

    #[test]
    fn etale_lift_split_quadratic() {
        // C = k[t] ↠ K = k (t ↦ 0); K' = (k[u]/(u^2 - u))_1 ≅ k × k
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let k = PresentedRing::ground(FieldTag::Rational);
        let pi = RingHom::parse_validate(&c, &k, &["0"], &limits()).unwrap();
        let kp = StdEtaleAlgebra::parse_new(&k, "u", "u^2 - u", "1", &limits()).unwrap();
        // (2u - 1)^2 = 4u^2 - 4u + 1 = 1 mod (u^2 - u): the derivative is a unit
        assert!(kp.replay_certificate(&limits()).unwrap());
        let lift = lift_etale_affine(&pi, &kp, &limits()).unwrap();
        assert!(lift.lifted.replay_certificate(&limits()).unwrap());
        // oracle: the lifted algebra has fiber k x k over t = 0, computed
        // independently through the tensor with the comparison iso replayed
        let round = lift.comparison.compose(&lift.comparison_inv, &limits()).unwrap();
        let id = RingHom::identity(lift.comparison.source(), &limits()).unwrap();
        assert!(round.equal_to(&id, &limits()).unwrap());
    }

    #[test]
    fn etale_lift_irreducible_quadratic() {
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let k = PresentedRing::ground(FieldTag::Rational);
        let pi = RingHom::parse_validate(&c, &k, &["0"], &limits()).unwrap();
        let kp = StdEtaleAlgebra::parse_new(&k, "u", "u^2 + u + 1", "1", &limits()).unwrap();
        let lift = lift_etale_affine(&pi, &kp, &limits()).unwrap();
        assert!(lift.lifted.replay_certificate(&limits()).unwrap());
        let round = lift.comparison_inv.compose(&lift.comparison, &limits()).unwrap();
        let id = RingHom::identity(lift.comparison_inv.source(), &limits()).unwrap();
        assert!(round.equal_to(&id, &limits()).unwrap());
    }

    #[test]
    fn non_monic_rejected() {
        let k = PresentedRing::ground(FieldTag::Rational);
        assert!(StdEtaleAlgebra::parse_new(&k, "u", "2*u^2 - 1", "1", &limits()).is_err());
        // derivative not a unit: u^2 over the ground field
        assert!(StdEtaleAlgebra::parse_new(&k, "u", "u^2", "1", &limits()).is_err());
    }

    #[test]
    fn identity_morphism_is_cartesian() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let maps = SquareHomTriple {
            on_b: RingHom::identity(sq.b(), &limits()).unwrap(),
            on_c: RingHom::identity(sq.c(), &limits()).unwrap(),
            on_k: RingHom::identity(sq.k(), &limits()).unwrap(),
        };
        let rep = check_datum_morphism(&sq, &sq, &maps, &limits()).unwrap();
        assert!(rep.is_morphism());
    }

    #[test]
    fn localization_base_change_is_cartesian() {
        // localize the nodal square at the conductor element (0, t^2 - 1)
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let fe = sq
            .fiber_element(&sq.b().zero_elem(), &sq.c().parse("t^2 - 1").unwrap(), &limits())
            .unwrap();
        let loc = localize_square(&sq, &fe, &limits()).unwrap();
        let maps = SquareHomTriple {
            on_b: loc.loc_b.clone(),
            on_c: loc.loc_c.clone(),
            on_k: loc.loc_k.clone(),
        };
        let rep = check_datum_morphism(&sq, &loc.square, &maps, &limits()).unwrap();
        assert!(rep.is_morphism(), "{rep:?}");
    }

    #[test]
    fn product_projection_is_not_a_morphism() {
        // the product datum of the nodal square with itself, projected to
        // one factor: K ⊗_B (B ⊗ B) = K ⊗ B ≠ K ⊗ K
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let l = limits();
        // B = k so B x B = k; use the C and K levels to see the failure:
        // C ⊗ C = k[t, t'], K ⊗ K = k[t,t']/(t^2-1, t'^2-1)
        let c2 = PresentedRing::free(FieldTag::Rational, &["t", "t'"]);
        let k2 = PresentedRing::parse_new(
            FieldTag::Rational,
            &["t", "t'"],
            &["t^2 - 1", "t'^2 - 1"],
        )
        .unwrap();
        let b2 = PresentedRing::ground(FieldTag::Rational);
        let beta2 = RingHom::validate(&b2, &k2, vec![], &l).unwrap();
        let pi2 = RingHom::parse_validate(&c2, &k2, &["t", "t'"], &l).unwrap();
        let sq2 = ConductorSquare::build(&beta2, &pi2, &l).unwrap();
        // projection to the first factor: B → B2, C → C2, K → K2
        let maps = SquareHomTriple {
            on_b: RingHom::validate(sq.b(), &b2, vec![], &l).unwrap(),
            on_c: RingHom::parse_validate(sq.c(), &c2, &["t"], &l).unwrap(),
            on_k: RingHom::parse_validate(sq.k(), &k2, &["t"], &l).unwrap(),
        };
        let rep = check_datum_morphism(&sq, &sq2, &maps, &l).unwrap();
        assert!(!rep.is_morphism());
        // the Y-side square fails: K ⊗_B B2 = K, but K2 has two factors
        assert!(!rep.y_side.is_cartesian());
    }

    /// The two-chart datum for the pinched affine line: chart 1 is the
    /// nodal square, chart 2 is the smooth complement of the node.
    fn nodal_two_chart_datum() -> ChartedPushoutDatum {
        let l = limits();
        let sq1 = corpus::nodal_square(FieldTag::Rational, &l).unwrap();

        // chart 2: (∅; ∅, Spec k[t, (t^2-1)^{-1}]), a pure-Z square
        let zero = PresentedRing::parse_new(FieldTag::Rational, &["z"], &["1"]).unwrap();
        let c2 = PresentedRing::parse_new(
            FieldTag::Rational,
            &["t", "w"],
            &["w*(t^2 - 1) - 1"],
        )
        .unwrap();
        let beta2 = RingHom::parse_validate(&zero, &zero, &["z"], &l).unwrap();
        let pi2 = RingHom::parse_validate(&c2, &zero, &["0", "0"], &l).unwrap();
        let sq2 = ConductorSquare::build(&beta2, &pi2, &l).unwrap();

        // overlap: chart 1 localized at the conductor element (0, t^2 - 1)
        // is isomorphic to chart 2 localized at 1
        let fe1 = sq1
            .fiber_element(&sq1.b().zero_elem(), &sq1.c().parse("t^2 - 1").unwrap(), &l)
            .unwrap();
        let fe2 = sq2.fe_one();
        let loc1 = localize_square(&sq1, &fe1, &l).unwrap();
        let loc2 = localize_square(&sq2, &fe2, &l).unwrap();
        // C level: k[t, s]/(s(t^2-1)-1) ≅ k[t, w, s']/(w(t^2-1)-1, s'-1)
        let on_c = RingHom::parse_validate(
            loc1.square.c(),
            loc2.square.c(),
            &["t", "w"],
            &l,
        )
        .unwrap();
        let on_c_inv = RingHom::parse_validate(
            loc2.square.c(),
            loc1.square.c(),
            &["t", "s", "1"],
            &l,
        )
        .unwrap();
        // B and K levels are zero rings on both sides
        let zb1 = loc1.square.b().clone();
        let zb2 = loc2.square.b().clone();
        let zk1 = loc1.square.k().clone();
        let zk2 = loc2.square.k().clone();
        let zmap = |src: &PresentedRing, dst: &PresentedRing| {
            RingHom::validate(
                src,
                dst,
                vec![dst.zero_elem(); src.ctx().nvars()],
                &l,
            )
            .unwrap()
        };
        let iso = SquareIso {
            fwd: SquareHomTriple {
                on_b: zmap(&zb1, &zb2),
                on_c,
                on_k: zmap(&zk1, &zk2),
            },
            inv: SquareHomTriple {
                on_b: zmap(&zb2, &zb1),
                on_c: on_c_inv,
                on_k: zmap(&zk2, &zk1),
            },
        };
        ChartedPushoutDatum {
            charts: vec![sq1, sq2],
            overlaps: vec![Overlap {
                i: 0,
                j: 1,
                elem_i: fe1,
                elem_j: fe2,
                iso,
            }],
        }
    }

    #[test]
    fn glue_two_chart_nodal() {
        let datum = nodal_two_chart_datum();
        let glued = glue_pushout(&datum, 4, &limits(), &CancelToken::never()).unwrap();
        assert!(glued.cocycle_verified);
        assert_eq!(glued.charts.len(), 2);
        // chart 1 ring is the nodal cubic
        let a1 = &glued.charts[0].presentation.a_pres;
        let rel = a1.parse("g2^2 - g1^3 - g1^2").unwrap();
        assert!(a1.is_zero_elem(&rel, &limits()).unwrap());
        // the pushout-level overlap iso is certified both ways
        assert_eq!(glued.a_isos.len(), 1);
    }

    #[test]
    fn single_chart_glues_to_itself() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let datum = ChartedPushoutDatum {
            charts: vec![sq],
            overlaps: vec![],
        };
        let glued = glue_pushout(&datum, 4, &limits(), &CancelToken::never()).unwrap();
        assert_eq!(glued.charts.len(), 1);
        assert!(glued.a_isos.is_empty());
    }

    /// Three trivial charts on the affine line glued by translations; the
    /// deliberately inconsistent triangle must be rejected.
    #[test]
    fn inconsistent_triple_overlap_detected() {
        let l = limits();
        let line = PresentedRing::free(FieldTag::Rational, &["t"]);
        let id = RingHom::identity(&line, &l).unwrap();
        let sq = corpus::identity_square(&id, &l).unwrap();
        let one = sq.fe_one();
        let loc = localize_square(&sq, &one, &l).unwrap();

        // iso of the localized chart given by t ↦ t + shift
        let shift_iso = |shift: i64| -> SquareIso {
            let fwd_c = RingHom::parse_validate(
                loc.square.c(),
                loc.square.c(),
                &[&format!("t + {shift}"), "1"],
                &l,
            )
            .unwrap();
            let inv_c = RingHom::parse_validate(
                loc.square.c(),
                loc.square.c(),
                &[&format!("t - {shift}"), "1"],
                &l,
            )
            .unwrap();
            let fwd_k = RingHom::parse_validate(
                loc.square.k(),
                loc.square.k(),
                &[&format!("t + {shift}"), "1"],
                &l,
            )
            .unwrap();
            let inv_k = RingHom::parse_validate(
                loc.square.k(),
                loc.square.k(),
                &[&format!("t - {shift}"), "1"],
                &l,
            )
            .unwrap();
            let fwd_b = RingHom::parse_validate(
                loc.square.b(),
                loc.square.b(),
                &[&format!("t + {shift}"), "1"],
                &l,
            )
            .unwrap();
            let inv_b = RingHom::parse_validate(
                loc.square.b(),
                loc.square.b(),
                &[&format!("t - {shift}"), "1"],
                &l,
            )
            .unwrap();
            SquareIso {
                fwd: SquareHomTriple {
                    on_b: fwd_b,
                    on_c: fwd_c,
                    on_k: fwd_k,
                },
                inv: SquareHomTriple {
                    on_b: inv_b,
                    on_c: inv_c,
                    on_k: inv_k,
                },
            }
        };

        let datum = ChartedPushoutDatum {
            charts: vec![sq.clone(), sq.clone(), sq.clone()],
            overlaps: vec![
                Overlap {
                    i: 0,
                    j: 1,
                    elem_i: one.clone(),
                    elem_j: one.clone(),
                    iso: shift_iso(0),
                },
                Overlap {
                    i: 1,
                    j: 2,
                    elem_i: one.clone(),
                    elem_j: one.clone(),
                    iso: shift_iso(0),
                },
                Overlap {
                    i: 0,
                    j: 2,
                    elem_i: one.clone(),
                    elem_j: one.clone(),
                    iso: shift_iso(1), // inconsistent composite
                },
            ],
        };
        let err = glue_pushout(&datum, 3, &limits(), &CancelToken::never()).unwrap_err();
        match err {
            Error::CocycleError { i, j, k, .. } => {
                assert_eq!((i, j, k), (0, 1, 2));
            }
            other => panic!("expected a cocycle error, got {other:?}"),
        }
    }
}
