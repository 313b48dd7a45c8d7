//! Conductor squares `B → K ← C` with `C ↠ K`: the intrinsic pushout ring
//! `A = B ×_K C` of matched pairs, conductor ideals, bicartesian
//! certification of candidate presentations, presentation search, and
//! localization of squares.
//!
//! The intrinsic ring is always available through [`FiberElement`]
//! arithmetic and [`ConductorSquare::fiber_membership`], even when no finite
//! presentation exists; finite presentations are optional certified
//! artifacts produced by [`present_pushout`].

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::limits::{CancelToken, Limits};
use crate::poly::ideal::IdealHandle;
use crate::poly::MPoly;
use crate::ring::{localize, tensor_over_base, PresentedRing, ProductRing, RingHom};

/// How a square degenerates when its corner `K` is the zero ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `K` is not the zero ring; the generic case.
    None,
    /// `C = K = 0`: the square is its `B` side, `A ≅ B`.
    PureY,
    /// `B = K = 0`: the square is its `C` side, `A ≅ C`.
    PureZ,
}

#[derive(Debug)]
struct SquareInner {
    b: PresentedRing,
    c: PresentedRing,
    k: PresentedRing,
    beta: RingHom,
    pi: RingHom,
    /// preimages in C of the K generators; the surjectivity certificate
    pi_section: Vec<MPoly>,
    beta_injective: bool,
    degeneracy: Degeneracy,
    conductor_cache: Mutex<Option<Arc<ConductorView>>>,
}

/// A conductor square with certified data.
#[derive(Debug, Clone)]
pub struct ConductorSquare {
    inner: Arc<SquareInner>,
}

/// An element of the intrinsic pushout `A = B ×_K C`: a matched pair.
///
/// The matching witness (`β(b) - π(c)` reduces to zero in `K`) is checked at
/// construction; arithmetic is componentwise and preserves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberElement {
    pub b: MPoly,
    pub c: MPoly,
}

impl fmt::Display for FiberElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.b, self.c)
    }
}

/// The conductor: generators of `Ker(C ↠ K)` with their matched-pair forms.
#[derive(Debug, Clone)]
pub struct ConductorView {
    pub c_generators: Vec<MPoly>,
    pub fiber_elements: Vec<FiberElement>,
    /// bounded-degree replay of the identification with `Ker(A ↠ B)`
    pub replay_verified: bool,
}

/// A candidate finite presentation of the pushout ring with its two homs.
#[derive(Debug, Clone)]
pub struct PushoutPresentation {
    pub a_pres: PresentedRing,
    pub to_b: RingHom,
    pub to_c: RingHom,
}

/// Outcome of [`check_bicartesian`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BicartesianVerdict {
    Pass,
    Fail { clause: char, witness: String },
}

#[derive(Debug, Clone)]
pub struct BicartesianReport {
    pub verdict: BicartesianVerdict,
    pub probes_checked: usize,
}

impl BicartesianReport {
    pub fn passed(&self) -> bool {
        self.verdict == BicartesianVerdict::Pass
    }
}

impl ConductorSquare {
    /// Builds a square from `beta: B → K` and a surjection `pi: C ↠ K`,
    /// certifying the surjectivity by a section on generators.
    pub fn build(beta: &RingHom, pi: &RingHom, limits: &Limits) -> Result<ConductorSquare> {
        if beta.target() != pi.target() {
            return Err(Error::MixedContext(
                "beta and pi must share their target ring".into(),
            ));
        }
        let k = beta.target().clone();
        let b = beta.source().clone();
        let c = pi.source().clone();
        let k_zero = k.is_zero_ring(limits)?;
        let degeneracy = if k_zero {
            let b_zero = b.is_zero_ring(limits)?;
            let c_zero = c.is_zero_ring(limits)?;
            match (b_zero, c_zero) {
                (_, true) => Degeneracy::PureY,
                (true, false) => Degeneracy::PureZ,
                (false, false) => {
                    return Err(Error::DegenerateSquare(
                        "K is the zero ring but neither B nor C is".into(),
                    ))
                }
            }
        } else {
            Degeneracy::None
        };
        let pi_section = if k_zero {
            vec![c.zero_elem(); k.ctx().nvars()]
        } else {
            pi.section(limits)?
        };
        let beta_injective = beta.is_injective(limits)?;
        Ok(ConductorSquare {
            inner: Arc::new(SquareInner {
                b,
                c,
                k,
                beta: beta.clone(),
                pi: pi.clone(),
                pi_section,
                beta_injective,
                degeneracy,
                conductor_cache: Mutex::new(None),
            }),
        })
    }

    pub fn b(&self) -> &PresentedRing {
        &self.inner.b
    }
    pub fn c(&self) -> &PresentedRing {
        &self.inner.c
    }
    pub fn k(&self) -> &PresentedRing {
        &self.inner.k
    }
    pub fn beta(&self) -> &RingHom {
        &self.inner.beta
    }
    pub fn pi(&self) -> &RingHom {
        &self.inner.pi
    }
    pub fn pi_section(&self) -> &[MPoly] {
        &self.inner.pi_section
    }
    pub fn beta_injective(&self) -> bool {
        self.inner.beta_injective
    }
    pub fn degeneracy(&self) -> Degeneracy {
        self.inner.degeneracy
    }

    /// Decides whether `π(c)` lifts to `B`; on success returns the matched
    /// pair with the canonical lift (unique when `β` is injective).
    pub fn fiber_membership(&self, c: &MPoly, limits: &Limits) -> Result<Option<FiberElement>> {
        let u = self.inner.pi.apply(c, limits)?;
        match self.inner.beta.preimage(&u, limits)? {
            None => Ok(None),
            Some(b) => Ok(Some(FiberElement {
                b,
                c: self.inner.c.nf(c, limits)?,
            })),
        }
    }

    /// Constructs a matched pair from explicit components, verifying the
    /// matching condition `β(b) = π(c)` in `K`.
    pub fn fiber_element(&self, b: &MPoly, c: &MPoly, limits: &Limits) -> Result<FiberElement> {
        let vb = self.inner.beta.apply(b, limits)?;
        let vc = self.inner.pi.apply(c, limits)?;
        if !self.inner.k.elems_equal(&vb, &vc, limits)? {
            return Err(Error::InvalidInput(format!(
                "pair ({b}, {c}) is not matched: beta(b) - pi(c) = {}",
                vb.sub(&vc)
            )));
        }
        Ok(FiberElement {
            b: self.inner.b.nf(b, limits)?,
            c: self.inner.c.nf(c, limits)?,
        })
    }

    pub fn fe_zero(&self) -> FiberElement {
        FiberElement {
            b: self.inner.b.zero_elem(),
            c: self.inner.c.zero_elem(),
        }
    }

    pub fn fe_one(&self) -> FiberElement {
        FiberElement {
            b: self.inner.b.one_elem(),
            c: self.inner.c.one_elem(),
        }
    }

    pub fn fe_add(&self, x: &FiberElement, y: &FiberElement, limits: &Limits) -> Result<FiberElement> {
        Ok(FiberElement {
            b: self.inner.b.nf(&x.b.add(&y.b), limits)?,
            c: self.inner.c.nf(&x.c.add(&y.c), limits)?,
        })
    }

    pub fn fe_mul(&self, x: &FiberElement, y: &FiberElement, limits: &Limits) -> Result<FiberElement> {
        Ok(FiberElement {
            b: self.inner.b.nf(&x.b.mul(&y.b), limits)?,
            c: self.inner.c.nf(&x.c.mul(&y.c), limits)?,
        })
    }

    pub fn fe_neg(&self, x: &FiberElement) -> FiberElement {
        FiberElement {
            b: x.b.neg(),
            c: x.c.neg(),
        }
    }

    pub fn fe_eq(&self, x: &FiberElement, y: &FiberElement, limits: &Limits) -> Result<bool> {
        Ok(self.inner.b.elems_equal(&x.b, &y.b, limits)?
            && self.inner.c.elems_equal(&x.c, &y.c, limits)?)
    }

    /// True when the element lies in the conductor, i.e. its `B` part is 0.
    pub fn fe_in_conductor(&self, x: &FiberElement, limits: &Limits) -> Result<bool> {
        self.inner.b.is_zero_elem(&x.b, limits)
    }

    /// The conductor of the square: `Ker(π)` as a `C`-ideal, with the same
    /// elements re-expressed as matched pairs with zero `B`-component.
    pub fn conductor(&self, limits: &Limits) -> Result<Arc<ConductorView>> {
        if let Some(v) = self.inner.conductor_cache.lock().unwrap().as_ref() {
            return Ok(v.clone());
        }
        let ker = self.inner.pi.kernel(limits)?;
        let mut fiber_elements = Vec::new();
        for g in ker.gens() {
            // matching witness: pi(g) = 0 = beta(0)
            let img = self.inner.pi.apply(g, limits)?;
            if !img.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "kernel generator {g} does not map to zero"
                )));
            }
            fiber_elements.push(FiberElement {
                b: self.inner.b.zero_elem(),
                c: g.clone(),
            });
        }
        // bounded replay of the identification with Ker(A ↠ B): every probed
        // monomial killed by pi lies in the ideal generated by the listed
        // generators, and every generator has zero B-component.
        let mut replay_verified = true;
        for m in self.inner.c.monomials_up_to(limits.probe_degree) {
            let dead = self
                .inner
                .k
                .is_zero_elem(&self.inner.pi.apply(&m, limits)?, limits)?;
            if dead {
                let mut with_ring = ker.gens().to_vec();
                with_ring.extend(self.inner.c.ideal().gens().iter().cloned());
                let handle = IdealHandle::new(self.inner.c.ctx(), with_ring)?;
                if !handle.contains(&m, limits)? {
                    replay_verified = false;
                }
            }
        }
        let view = Arc::new(ConductorView {
            c_generators: ker.gens().to_vec(),
            fiber_elements,
            replay_verified,
        });
        let mut slot = self.inner.conductor_cache.lock().unwrap();
        if slot.is_none() {
            *slot = Some(view.clone());
        }
        Ok(slot.as_ref().unwrap().clone())
    }

    /// The hom `A_pres → B × C` induced by a candidate presentation.
    pub fn hom_into_product(
        &self,
        candidate: &PushoutPresentation,
        product: &ProductRing,
        limits: &Limits,
    ) -> Result<RingHom> {
        let images: Vec<MPoly> = (0..candidate.a_pres.ctx().nvars())
            .map(|i| {
                let g = MPoly::var_index(candidate.a_pres.ctx(), i);
                let pb = candidate.to_b.apply(&g, limits)?;
                let qc = candidate.to_c.apply(&g, limits)?;
                product.embed_pair(&pb, &qc, limits)
            })
            .collect::<Result<_>>()?;
        RingHom::validate(&candidate.a_pres, &product.ring, images, limits)
    }
}

/// Certifies that a candidate presentation really presents the pushout:
///
/// (a) `B ⊗_{A} C ≅ K` through the induced map,
/// (b) every generator maps to a genuine matched pair,
/// (c) every matched pair produced by membership probes lies in the image.
pub fn check_bicartesian(
    square: &ConductorSquare,
    candidate: &PushoutPresentation,
    limits: &Limits,
) -> Result<BicartesianReport> {
    let product = ProductRing::new(square.b(), square.c(), limits)?;
    let into_product = square.hom_into_product(candidate, &product, limits)?;
    check_bicartesian_via(square, candidate, &product, &into_product, limits)
}

/// [`check_bicartesian`] with the product embedding supplied by the caller,
/// so a presentation search can share one graph basis per level.
fn check_bicartesian_via(
    square: &ConductorSquare,
    candidate: &PushoutPresentation,
    product: &ProductRing,
    into_product: &RingHom,
    limits: &Limits,
) -> Result<BicartesianReport> {
    // precondition: candidate homs commute with the square
    let via_b = candidate.to_b.compose(square.beta(), limits)?;
    let via_c = candidate.to_c.compose(square.pi(), limits)?;
    if !via_b.equal_to(&via_c, limits)? {
        return Err(Error::InvalidInput(
            "candidate homs do not commute with the square".into(),
        ));
    }

    // clause (b): generators map to genuine matched pairs
    for i in 0..candidate.a_pres.ctx().nvars() {
        let g = MPoly::var_index(candidate.a_pres.ctx(), i);
        let pb = candidate.to_b.apply(&g, limits)?;
        let qc = candidate.to_c.apply(&g, limits)?;
        if square.fiber_element(&pb, &qc, limits).is_err() {
            return Ok(BicartesianReport {
                verdict: BicartesianVerdict::Fail {
                    clause: 'b',
                    witness: format!("generator {} is not matched", candidate.a_pres.vars()[i]),
                },
                probes_checked: 0,
            });
        }
    }

    // clause (a): the induced map B ⊗_A C → K is an isomorphism
    let tp = tensor_over_base(&candidate.to_b, &candidate.to_c, limits)?;
    let tensor = &tp.ring;
    let mut images = vec![square.k().zero_elem(); tensor.ctx().nvars()];
    for (i, &idx) in tp.b_vars.iter().enumerate() {
        images[idx] = square.beta().images()[i].clone();
    }
    for (i, &idx) in tp.c_vars.iter().enumerate() {
        images[idx] = square.pi().images()[i].clone();
    }
    let induced = RingHom::validate(tensor, square.k(), images, limits)?;
    let ker = induced.kernel(limits)?;
    for g in ker.gens() {
        if !tensor.is_zero_elem(g, limits)? {
            return Ok(BicartesianReport {
                verdict: BicartesianVerdict::Fail {
                    clause: 'a',
                    witness: format!("kernel of B ⊗_A C → K contains {g}"),
                },
                probes_checked: 0,
            });
        }
    }
    if !square.k().is_zero_ring(limits)? {
        if let Err(Error::NotSurjective { generator, witness }) = induced.section(limits) {
            return Ok(BicartesianReport {
                verdict: BicartesianVerdict::Fail {
                    clause: 'a',
                    witness: format!("{generator} not reached: {witness}"),
                },
                probes_checked: 0,
            });
        }
    }

    // clause (c): probe matched pairs and test membership in the image
    let mut probes = Vec::new();
    for m in square.c().monomials_up_to(limits.probe_degree) {
        probes.push(m);
    }
    let conductor = square.conductor(limits)?;
    for g in &conductor.c_generators {
        for m in square.c().monomials_up_to(limits.probe_degree.saturating_sub(g.total_degree())) {
            probes.push(g.mul(&m));
        }
    }
    let mut checked = 0usize;
    for c in probes {
        if let Some(fe) = square.fiber_membership(&c, limits)? {
            checked += 1;
            let pair = product.embed_pair(&fe.b, &fe.c, limits)?;
            if into_product.preimage(&pair, limits)?.is_none() {
                return Ok(BicartesianReport {
                    verdict: BicartesianVerdict::Fail {
                        clause: 'c',
                        witness: format!("matched pair {fe} is not in the image"),
                    },
                    probes_checked: checked,
                });
            }
        }
    }
    Ok(BicartesianReport {
        verdict: BicartesianVerdict::Pass,
        probes_checked: checked,
    })
}

/// Searches for a verified finite presentation of the pushout ring.
///
/// Candidate generators are drawn, in degree-lex order with deterministic
/// tie-breaks, from (i) section pairs of the `B` generators, (ii) matched
/// pairs of `C`-monomials accepted by membership probes (normalized by their
/// constant part), and (iii) conductor generators times `C`-monomials. The
/// first candidate set whose presentation passes [`check_bicartesian`] is
/// returned; an unverified candidate is never returned.
pub fn present_pushout(
    square: &ConductorSquare,
    degree_bound: u32,
    limits: &Limits,
    cancel: &CancelToken,
) -> Result<(PushoutPresentation, BicartesianReport)> {
    let b = square.b();
    let c = square.c();
    let probe_limits = *limits;
    let conductor = square.conductor(limits)?;
    let product = ProductRing::new(square.b(), square.c(), limits)?;

    // C-variables whose matched pair is generated from level 1 on: multiples
    // of them in the conductor stream are products of earlier candidates
    let mut absorbed_vars: Vec<usize> = Vec::new();
    for i in 0..c.ctx().nvars() {
        let v = MPoly::var_index(c.ctx(), i);
        if square.fiber_membership(&v, limits)?.is_some() {
            absorbed_vars.push(i);
        }
    }
    for g in &conductor.c_generators {
        if g.num_terms() == 1 {
            for i in g.support_vars() {
                if !absorbed_vars.contains(&i) {
                    absorbed_vars.push(i);
                }
            }
        }
    }

    // candidate stream, level by level
    let mut chosen: Vec<FiberElement> = Vec::new();
    let mut eval = subring_hom(square, &product, &chosen, limits)?;
    for level in 1..=degree_bound {
        cancel.check()?;
        let mut level_candidates: Vec<(u8, String, FiberElement)> = Vec::new();
        if level == 1 {
            for (i, v) in b.vars().iter().enumerate() {
                let bv = b.var(v);
                let beta_img = square.beta().images()[i].clone();
                if let Some(cv) = square.pi().preimage(&beta_img, limits)? {
                    level_candidates.push((
                        0,
                        v.clone(),
                        FiberElement { b: bv, c: cv },
                    ));
                }
            }
        }
        for m in c.monomials_up_to(level) {
            if m.total_degree() != level {
                continue;
            }
            if let Some(fe) = square.fiber_membership(&m, limits)? {
                // subtract the constant part of the B component
                let lam = fe.b.constant_term();
                let fe = FiberElement {
                    b: fe.b.sub(&MPoly::constant(b.ctx(), lam.clone())),
                    c: fe.c.sub(&MPoly::constant(c.ctx(), lam)),
                };
                level_candidates.push((1, m.to_string(), fe));
            }
        }
        for g in &conductor.c_generators {
            let gd = g.total_degree();
            if gd > level {
                continue;
            }
            for m in c.monomials_up_to(level - gd) {
                if gd + m.total_degree() != level {
                    continue;
                }
                if m.support_vars().iter().any(|i| absorbed_vars.contains(i)) {
                    continue;
                }
                let prod = c.nf(&g.mul(&m), limits)?;
                level_candidates.push((
                    2,
                    prod.to_string(),
                    FiberElement {
                        b: b.zero_elem(),
                        c: prod,
                    },
                ));
            }
        }
        level_candidates.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));

        // dedup against the subring generated before this level; the graph
        // basis of `eval` is shared with the kernel run and the image probes
        let mut added = false;
        let mut seen_this_level: Vec<MPoly> = Vec::new();
        for (_, _, fe) in level_candidates {
            cancel.check()?;
            if b.is_zero_elem(&fe.b, limits)? && c.is_zero_elem(&fe.c, limits)? {
                continue;
            }
            let pair = product.embed_pair(&fe.b, &fe.c, &probe_limits)?;
            if seen_this_level.contains(&pair) {
                continue;
            }
            if eval.preimage(&pair, &probe_limits)?.is_some() {
                continue;
            }
            seen_this_level.push(pair);
            chosen.push(fe);
            added = true;
        }
        if !added && level > 1 {
            continue;
        }
        eval = subring_hom(square, &product, &chosen, limits)?;
        let candidate = presentation_from_eval(square, &chosen, &eval, limits)?;
        // probe strictly past the candidate generators, otherwise a truncation
        // of a non-finitely-generated A would slip through the image check
        let check_limits =
            limits.with_probe_degree(limits.probe_degree.max(level + 2));
        let report =
            check_bicartesian_via(square, &candidate, &product, &eval, &check_limits)?;
        if report.passed() {
            return Ok((candidate, report));
        }
    }
    Err(Error::BoundExceeded {
        reason: "no verified pushout presentation within the degree bound".into(),
        cap: degree_bound,
    })
}

/// The evaluation hom `k[g_1..g_m] → B × C` of a matched-pair generator set;
/// its image is the subring the generators span (with the constants).
fn subring_hom(
    square: &ConductorSquare,
    product: &ProductRing,
    gens: &[FiberElement],
    limits: &Limits,
) -> Result<RingHom> {
    let names: Vec<String> = (1..=gens.len()).map(|i| format!("g{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let free = PresentedRing::free(square.b().field(), &name_refs);
    let images: Vec<MPoly> = gens
        .iter()
        .map(|g| product.embed_pair(&g.b, &g.c, limits))
        .collect::<Result<_>>()?;
    RingHom::validate(&free, &product.ring, images, limits)
}

/// Builds the presented candidate from chosen matched-pair generators:
/// relations are the kernel of the evaluation into `B × C`.
pub fn presentation_from_generators(
    square: &ConductorSquare,
    gens: &[FiberElement],
    limits: &Limits,
) -> Result<PushoutPresentation> {
    let product = ProductRing::new(square.b(), square.c(), limits)?;
    let eval = subring_hom(square, &product, gens, limits)?;
    presentation_from_eval(square, gens, &eval, limits)
}

fn presentation_from_eval(
    square: &ConductorSquare,
    gens: &[FiberElement],
    eval: &RingHom,
    limits: &Limits,
) -> Result<PushoutPresentation> {
    let relations = eval.kernel(limits)?;
    let a_pres = PresentedRing::new(eval.source().ctx().clone(), relations.gens().to_vec())?;
    let to_b = RingHom::validate(
        &a_pres,
        square.b(),
        gens.iter().map(|g| g.b.clone()).collect(),
        limits,
    )?;
    let to_c = RingHom::validate(
        &a_pres,
        square.c(),
        gens.iter().map(|g| g.c.clone()).collect(),
        limits,
    )?;
    Ok(PushoutPresentation { a_pres, to_b, to_c })
}

/// Report produced when a square is localized at a conductor element.
#[derive(Debug, Clone)]
pub struct ConductorLocalizationReport {
    pub b_is_zero: bool,
    pub k_is_zero: bool,
    pub probes_checked: usize,
    pub all_probes_pass: bool,
}

/// A localized square together with the three localization homs.
#[derive(Debug, Clone)]
pub struct LocalizedSquare {
    pub square: ConductorSquare,
    pub loc_b: RingHom,
    pub loc_c: RingHom,
    pub loc_k: RingHom,
    /// present exactly when the element lies in the conductor
    pub conductor_report: Option<ConductorLocalizationReport>,
}

/// Localizes the whole square at a matched pair `f = (f_b, f_c)`.
///
/// When `f` lies in the conductor the report certifies `B_f = 0`, `K_f = 0`,
/// and probes the isomorphism `A_f ≅ C_f` on monomials: the localized square
/// degenerates to its `C` side.
pub fn localize_square(
    square: &ConductorSquare,
    f: &FiberElement,
    limits: &Limits,
) -> Result<LocalizedSquare> {
    let fe = square.fiber_element(&f.b, &f.c, limits)?; // re-verify matching
    let (b_loc, hom_b, _) = localize(square.b(), &fe.b, limits)?;
    let (c_loc, hom_c, _) = localize(square.c(), &fe.c, limits)?;
    let k_elem = square.beta().apply(&fe.b, limits)?;
    let (k_loc, hom_k, s_k) = localize(square.k(), &k_elem, limits)?;

    // induced beta: B_f -> K_f
    let mut beta_images: Vec<MPoly> = square
        .beta()
        .images()
        .iter()
        .map(|img| img.transport(k_loc.ctx()))
        .collect::<Result<_>>()?;
    beta_images.push(MPoly::var(k_loc.ctx(), &s_k));
    let beta_f = RingHom::validate(&b_loc, &k_loc, beta_images, limits)?;

    // induced pi: C_f -> K_f
    let mut pi_images: Vec<MPoly> = square
        .pi()
        .images()
        .iter()
        .map(|img| img.transport(k_loc.ctx()))
        .collect::<Result<_>>()?;
    pi_images.push(MPoly::var(k_loc.ctx(), &s_k));
    let pi_f = RingHom::validate(&c_loc, &k_loc, pi_images, limits)?;

    let localized = ConductorSquare::build(&beta_f, &pi_f, limits)?;

    let conductor_report = if square.fe_in_conductor(&fe, limits)? {
        let b_is_zero = b_loc.is_zero_ring(limits)?;
        let k_is_zero = k_loc.is_zero_ring(limits)?;
        // probe A_f ≅ C_f: every monomial m of C appears as the image of the
        // matched pair (0, m * f_c) divided by f_c
        let mut probes_checked = 0usize;
        let mut all_probes_pass = b_is_zero && k_is_zero;
        for m in square.c().monomials_up_to(limits.probe_degree) {
            probes_checked += 1;
            let pair_c = square.c().nf(&m.mul(&fe.c), limits)?;
            let pair = square.fiber_element(&square.b().zero_elem(), &pair_c, limits);
            if pair.is_err() {
                all_probes_pass = false;
                continue;
            }
            // image in C_f of (0, m f_c) is m f_c; dividing by the unit f_c
            // recovers m, so the probe checks m f_c ≡ m * f_c in C_f
            let lhs = hom_c.apply(&pair_c, limits)?;
            let rhs = hom_c
                .apply(&m, limits)?
                .mul(&hom_c.apply(&fe.c, limits)?);
            if !c_loc.elems_equal(&lhs, &rhs, limits)? {
                all_probes_pass = false;
            }
        }
        Some(ConductorLocalizationReport {
            b_is_zero,
            k_is_zero,
            probes_checked,
            all_probes_pass,
        })
    } else {
        None
    };

    Ok(LocalizedSquare {
        square: localized,
        loc_b: hom_b,
        loc_c: hom_c,
        loc_k: hom_k,
        conductor_report,
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
    fn laurent_square_builds_and_probes() {
        let sq = corpus::laurent_square(FieldTag::Rational, &limits()).unwrap();
        assert!(sq.beta_injective());
        let c = sq.c();

        // x^-1 y + x^2 restricts to x^2 on y = 0: lift (x^2, c)
        let probe = c.parse("xb*y + x^2").unwrap();
        let fe = sq.fiber_membership(&probe, &limits()).unwrap().expect("lifts");
        assert_eq!(fe.b.to_string(), "x^2");

        // x^-1 is not a polynomial in x: no lift
        let probe = c.parse("xb").unwrap();
        assert!(sq.fiber_membership(&probe, &limits()).unwrap().is_none());

        // x^-7 y is a conductor element: pair (0, c)
        let probe = c.parse("xb^7*y").unwrap();
        let fe = sq.fiber_membership(&probe, &limits()).unwrap().expect("lifts");
        assert!(fe.b.is_zero());
        assert!(sq.fe_in_conductor(&fe, &limits()).unwrap());
    }

    #[test]
    fn laurent_conductor_is_y() {
        let sq = corpus::laurent_square(FieldTag::Rational, &limits()).unwrap();
        let view = sq.conductor(&limits()).unwrap();
        assert_eq!(view.c_generators.len(), 1);
        assert_eq!(view.c_generators[0].to_string(), "y");
        assert!(view.replay_verified);
        for fe in &view.fiber_elements {
            assert!(fe.b.is_zero());
        }
    }

    #[test]
    fn identity_square_has_zero_conductor() {
        let b = PresentedRing::parse_new(FieldTag::Rational, &["u"], &["u^2"]).unwrap();
        let id = RingHom::identity(&b, &limits()).unwrap();
        let sq = corpus::identity_square(&id, &limits()).unwrap();
        let view = sq.conductor(&limits()).unwrap();
        assert!(view.c_generators.is_empty());
    }

    #[test]
    fn nodal_conductor() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let view = sq.conductor(&limits()).unwrap();
        assert_eq!(view.c_generators.len(), 1);
        assert_eq!(view.c_generators[0].to_string(), "t^2 - 1");
    }

    #[test]
    fn non_surjective_pi_rejected() {
        let b = PresentedRing::free(FieldTag::Rational, &["y"]);
        let kx = PresentedRing::free(FieldTag::Rational, &["x"]);
        let beta = RingHom::parse_validate(&b, &kx, &["x^2"], &limits()).unwrap();
        let pi = RingHom::parse_validate(&b, &kx, &["x^2"], &limits()).unwrap();
        let err = ConductorSquare::build(&beta, &pi, &limits()).unwrap_err();
        assert!(matches!(err, Error::NotSurjective { .. }));
    }

    #[test]
    fn nodal_presentation_found_and_certified() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let (pres, report) =
            present_pushout(&sq, 4, &limits(), &CancelToken::never()).unwrap();
        assert!(report.passed());
        // two generators with C-images t^2 - 1 and t^3 - t
        let imgs: Vec<String> = pres.to_c.images().iter().map(|p| p.to_string()).collect();
        assert_eq!(imgs, vec!["t^2 - 1", "t^3 - t"]);
        // B-images vanish
        for img in pres.to_b.images() {
            assert!(img.is_zero());
        }
        // the nodal relation holds in the presented ring
        let rel = pres.a_pres.parse("g2^2 - g1^3 - g1^2").unwrap();
        assert!(pres.a_pres.is_zero_elem(&rel, &limits()).unwrap());
        // oracle, independent of any Groebner run: substituting the
        // parametrization x = t^2 - 1, y = t^3 - t kills the relation
        let tctx = sq.c().ctx();
        for r in pres.a_pres.ideal().gens() {
            let sub = r.substitute(tctx, pres.to_c.images());
            assert!(sq.c().is_zero_elem(&sub, &limits()).unwrap());
        }
    }

    #[test]
    fn wrong_candidate_fails() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        // candidate k[x] with x ↦ (0, t^2 - 1): cocartesian but not cartesian,
        // so the failure shows up in the image probe, clause (c)
        let a = PresentedRing::free(FieldTag::Rational, &["x"]);
        let to_b = RingHom::parse_validate(&a, sq.b(), &["0"], &limits()).unwrap();
        let to_c = RingHom::parse_validate(&a, sq.c(), &["t^2 - 1"], &limits()).unwrap();
        let candidate = PushoutPresentation {
            a_pres: a,
            to_b,
            to_c,
        };
        let report = check_bicartesian(&sq, &candidate, &limits()).unwrap();
        match report.verdict {
            BicartesianVerdict::Fail { clause, .. } => assert_eq!(clause, 'c'),
            BicartesianVerdict::Pass => panic!("wrong candidate must fail"),
        }
    }

    #[test]
    fn identity_pi_from_ground_presents_as_b() {
        let c = PresentedRing::parse_new(FieldTag::Rational, &["u"], &["u^3 - u"]).unwrap();
        let b = PresentedRing::ground(FieldTag::Rational);
        // pi = id_C glues nothing: A is the graph of beta, so A ≅ B
        let beta = RingHom::validate(&b, &c, vec![], &limits()).unwrap();
        let pi = RingHom::identity(&c, &limits()).unwrap();
        let sq = ConductorSquare::build(&beta, &pi, &limits()).unwrap();
        let (pres, report) =
            present_pushout(&sq, 3, &limits(), &CancelToken::never()).unwrap();
        assert!(report.passed());
        assert_eq!(pres.a_pres.ctx().nvars(), 0);
        assert!(pres.to_b.try_inverse(&limits()).unwrap().is_some());
    }

    #[test]
    fn identity_square_presents_as_c() {
        let c = PresentedRing::parse_new(FieldTag::Rational, &["u"], &["u^3 - u"]).unwrap();
        let id = RingHom::identity(&c, &limits()).unwrap();
        let sq = ConductorSquare::build(&id, &id, &limits()).unwrap();
        let (pres, report) =
            present_pushout(&sq, 3, &limits(), &CancelToken::never()).unwrap();
        assert!(report.passed());
        assert!(pres.to_c.try_inverse(&limits()).unwrap().is_some());
    }

    #[test]
    fn laurent_presentation_exceeds_bound() {
        let sq = corpus::laurent_square(FieldTag::Rational, &limits()).unwrap();
        let err = present_pushout(&sq, 4, &limits(), &CancelToken::never()).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { .. }));
    }

    #[test]
    fn localize_laurent_at_conductor() {
        let sq = corpus::laurent_square(FieldTag::Rational, &limits()).unwrap();
        let y = sq.c().var("y");
        let fe = sq.fiber_element(&sq.b().zero_elem(), &y, &limits()).unwrap();
        let loc = localize_square(&sq, &fe, &limits()).unwrap();
        let report = loc.conductor_report.expect("conductor element");
        assert!(report.b_is_zero);
        assert!(report.k_is_zero);
        assert!(report.all_probes_pass);
        assert_eq!(loc.square.degeneracy(), Degeneracy::PureZ);
    }

    #[test]
    fn localize_at_one_keeps_square() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let fe = sq.fe_one();
        let loc = localize_square(&sq, &fe, &limits()).unwrap();
        assert!(loc.conductor_report.is_none());
        assert_eq!(loc.square.degeneracy(), Degeneracy::None);
        // localized B at 1 is still a (nonzero) point
        assert!(!loc.square.b().is_zero_ring(&limits()).unwrap());
    }

    #[test]
    fn localize_nodal_at_conductor_x() {
        // f = (0, t^2 - 1) since x ↦ 0 in B = k
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let x = sq.c().parse("t^2 - 1").unwrap();
        let fe = sq.fiber_element(&sq.b().zero_elem(), &x, &limits()).unwrap();
        let loc = localize_square(&sq, &fe, &limits()).unwrap();
        let report = loc.conductor_report.expect("conductor element");
        assert!(report.b_is_zero && report.k_is_zero && report.all_probes_pass);
    }

    #[test]
    fn fiber_arithmetic_is_a_ring_on_samples() {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let l = limits();
        let gens = [
            sq.fiber_element(&sq.b().zero_elem(), &sq.c().parse("t^2 - 1").unwrap(), &l)
                .unwrap(),
            sq.fiber_element(&sq.b().zero_elem(), &sq.c().parse("t^3 - t").unwrap(), &l)
                .unwrap(),
            sq.fe_one(),
        ];
        for x in &gens {
            for y in &gens {
                for z in &gens {
                    let xy_z = sq.fe_mul(&sq.fe_mul(x, y, &l).unwrap(), z, &l).unwrap();
                    let x_yz = sq.fe_mul(x, &sq.fe_mul(y, z, &l).unwrap(), &l).unwrap();
                    assert!(sq.fe_eq(&xy_z, &x_yz, &l).unwrap());
                    let d1 = sq.fe_mul(x, &sq.fe_add(y, z, &l).unwrap(), &l).unwrap();
                    let d2 = sq
                        .fe_add(
                            &sq.fe_mul(x, y, &l).unwrap(),
                            &sq.fe_mul(x, z, &l).unwrap(),
                            &l,
                        )
                        .unwrap();
                    assert!(sq.fe_eq(&d1, &d2, &l).unwrap());
                }
            }
        }
    }

    #[test]
    fn degenerate_pure_z_square() {
        // B = K = 0, C = k[t]: the square is its C side
        let zero = PresentedRing::parse_new(FieldTag::Rational, &["z"], &["1"]).unwrap();
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let beta = RingHom::parse_validate(&zero, &zero, &["z"], &limits()).unwrap();
        let pi = RingHom::parse_validate(&c, &zero, &["0"], &limits()).unwrap();
        let sq = ConductorSquare::build(&beta, &pi, &limits()).unwrap();
        assert_eq!(sq.degeneracy(), Degeneracy::PureZ);
        // every element of C is a conductor element here
        let fe = sq.fiber_membership(&c.var("t"), &limits()).unwrap().unwrap();
        assert!(fe.b.is_zero());
    }

    #[test]
    fn degenerate_rejected_when_b_and_c_nonzero() {
        let zero = PresentedRing::parse_new(FieldTag::Rational, &["z"], &["1"]).unwrap();
        let b = PresentedRing::free(FieldTag::Rational, &["u"]);
        let c = PresentedRing::free(FieldTag::Rational, &["t"]);
        let beta = RingHom::parse_validate(&b, &zero, &["0"], &limits()).unwrap();
        let pi = RingHom::parse_validate(&c, &zero, &["0"], &limits()).unwrap();
        let err = ConductorSquare::build(&beta, &pi, &limits()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSquare(_)));
    }
}
