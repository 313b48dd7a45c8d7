//! Quasi-coherent modules over a pushout datum: presented modules, patched
//! triples with certified gluing isomorphisms, the pullback/pushforward
//! adjunction, and the Fitting-ideal projectivity test.
//!
//! All verdicts are exact. Module element equality goes through module
//! Gröbner bases; pushforward presentations come from a bounded search that
//! is verified by replay before being returned.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linalg::Mat;
use crate::poly::ideal::IdealHandle;
use crate::poly::modgb::{membership_witness, module_groebner, module_reduce, ModuleOrder, VecPoly};
use crate::poly::order::MonomialOrder;
use crate::poly::MPoly;
use crate::ring::{PresentedRing, RingHom};
use crate::scalar::Scalar;
use crate::square::{ConductorSquare, PushoutPresentation};

/// A finitely presented module `R^g / colspan(relations)` given by a cokernel
/// presentation; columns are relations among the `g` generators.
#[derive(Debug, Clone)]
pub struct PresentedModule {
    ring: PresentedRing,
    gens: usize,
    relations: Vec<VecPoly>,
    gb: Arc<Mutex<Option<Arc<Vec<VecPoly>>>>>,
}

impl PartialEq for PresentedModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.relations == other.relations
    }
}
impl Eq for PresentedModule {}

impl PresentedModule {
    pub fn new(ring: &PresentedRing, gens: usize, relations: Vec<VecPoly>) -> Result<PresentedModule> {
        for r in &relations {
            if r.rank() != gens {
                return Err(Error::InvalidInput(format!(
                    "relation of rank {} in a module with {gens} generators",
                    r.rank()
                )));
            }
            for e in &r.entries {
                if e.ctx() != ring.ctx() {
                    return Err(Error::MixedContext("relation entry outside the ring".into()));
                }
            }
        }
        Ok(PresentedModule {
            ring: ring.clone(),
            gens,
            relations,
            gb: Arc::new(Mutex::new(None)),
        })
    }

    pub fn free(ring: &PresentedRing, rank: usize) -> PresentedModule {
        PresentedModule {
            ring: ring.clone(),
            gens: rank,
            relations: Vec::new(),
            gb: Arc::new(Mutex::new(None)),
        }
    }

    /// Builds a module from textual relation columns.
    pub fn parse_new(ring: &PresentedRing, gens: usize, columns: &[&[&str]]) -> Result<PresentedModule> {
        let mut rels = Vec::new();
        for col in columns {
            if col.len() != gens {
                return Err(Error::InvalidInput("relation column has wrong length".into()));
            }
            let entries: Vec<MPoly> = col.iter().map(|s| ring.parse(s)).collect::<Result<_>>()?;
            rels.push(VecPoly { entries });
        }
        PresentedModule::new(ring, gens, rels)
    }

    pub fn ring(&self) -> &PresentedRing {
        &self.ring
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &[VecPoly] {
        &self.relations
    }

    pub fn zero_elem(&self) -> VecPoly {
        VecPoly::zero(self.ring.ctx(), self.gens)
    }

    pub fn gen_elem(&self, i: usize) -> VecPoly {
        VecPoly::unit(self.ring.ctx(), self.gens, i)
    }

    pub fn parse_elem(&self, entries: &[&str]) -> Result<VecPoly> {
        if entries.len() != self.gens {
            return Err(Error::InvalidInput("element has wrong length".into()));
        }
        Ok(VecPoly {
            entries: entries
                .iter()
                .map(|s| self.ring.parse(s))
                .collect::<Result<_>>()?,
        })
    }

    /// Relation columns plus the ring relations acting on each generator;
    /// the defining submodule of the ambient free module.
    fn full_relation_columns(&self) -> Vec<VecPoly> {
        let mut cols = self.relations.clone();
        for i in 0..self.gens {
            for rel in self.ring.ideal().gens() {
                let mut v = VecPoly::zero(self.ring.ctx(), self.gens);
                v.entries[i] = rel.clone();
                cols.push(v);
            }
        }
        cols
    }

    fn module_gb(&self, limits: &Limits) -> Result<Arc<Vec<VecPoly>>> {
        if let Some(b) = self.gb.lock().unwrap().as_ref() {
            return Ok(b.clone());
        }
        let order = ModuleOrder {
            split: self.gens,
            ring: MonomialOrder::Grevlex,
        };
        let basis = Arc::new(module_groebner(&self.full_relation_columns(), &order, limits)?);
        let mut slot = self.gb.lock().unwrap();
        if slot.is_none() {
            *slot = Some(basis);
        }
        Ok(slot.as_ref().unwrap().clone())
    }

    /// Canonical representative of an element.
    pub fn nf(&self, v: &VecPoly, limits: &Limits) -> Result<VecPoly> {
        if v.rank() != self.gens {
            return Err(Error::InvalidInput("element has wrong rank".into()));
        }
        let basis = self.module_gb(limits)?;
        let order = ModuleOrder {
            split: self.gens,
            ring: MonomialOrder::Grevlex,
        };
        Ok(module_reduce(v, &basis, &order))
    }

    pub fn is_zero_elem(&self, v: &VecPoly, limits: &Limits) -> Result<bool> {
        Ok(self.nf(v, limits)?.is_zero())
    }

    pub fn elems_equal(&self, a: &VecPoly, b: &VecPoly, limits: &Limits) -> Result<bool> {
        self.is_zero_elem(&a.sub(b), limits)
    }

    /// Writes `v` as a combination of the given elements modulo the
    /// relations, if possible.
    pub fn combination_witness(
        &self,
        v: &VecPoly,
        elems: &[VecPoly],
        limits: &Limits,
    ) -> Result<Option<Vec<MPoly>>> {
        let mut cols = elems.to_vec();
        let padding = self.full_relation_columns();
        cols.extend(padding.iter().cloned());
        match membership_witness(v, &cols, limits)? {
            None => Ok(None),
            Some(w) => Ok(Some(w[..elems.len()].to_vec())),
        }
    }

    /// Base change along a ring hom: applies the hom entrywise to the
    /// presentation matrix.
    pub fn base_change(&self, hom: &RingHom, limits: &Limits) -> Result<PresentedModule> {
        if hom.source() != &self.ring {
            return Err(Error::MixedContext("base change along a foreign hom".into()));
        }
        let rels: Vec<VecPoly> = self
            .relations
            .iter()
            .map(|col| {
                Ok(VecPoly {
                    entries: col
                        .entries
                        .iter()
                        .map(|e| hom.apply(e, limits))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        PresentedModule::new(hom.target(), self.gens, rels)
    }

    /// Pushes an element through a base change.
    pub fn map_elem(&self, hom: &RingHom, v: &VecPoly, limits: &Limits) -> Result<VecPoly> {
        Ok(VecPoly {
            entries: v
                .entries
                .iter()
                .map(|e| hom.apply(e, limits))
                .collect::<Result<_>>()?,
        })
    }

    /// The k-th Fitting ideal of the presentation (ideal of `(gens - k)`-
    /// minors), as a handle in the ambient ring.
    pub fn fitting_ideal(&self, k: usize, limits: &Limits) -> Result<IdealHandle> {
        let g = self.gens;
        if k >= g {
            return IdealHandle::new(self.ring.ctx(), vec![self.ring.one_elem()]);
        }
        let size = g - k;
        let cols = &self.relations;
        if size > cols.len() {
            return Ok(IdealHandle::zero(self.ring.ctx()));
        }
        let mut minors = Vec::new();
        let row_sets = combinations(g, size);
        let col_sets = combinations(cols.len(), size);
        for rs in &row_sets {
            for cs in &col_sets {
                let det = minor_det(self, rs, cs);
                let red = self.ring.nf(&det, limits)?;
                if !red.is_zero() && !minors.contains(&red) {
                    minors.push(red);
                }
            }
        }
        IdealHandle::new(self.ring.ctx(), minors)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn minor_det(m: &PresentedModule, rows: &[usize], cols: &[usize]) -> MPoly {
    let ctx = m.ring().ctx();
    let n = rows.len();
    if n == 0 {
        return MPoly::one(ctx);
    }
    // Laplace expansion along the first column
    let mut acc = MPoly::zero(ctx);
    for (i, &r) in rows.iter().enumerate() {
        let entry = &m.relations()[cols[0]].entries[r];
        if entry.is_zero() {
            continue;
        }
        let sub_rows: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter_map(|(j, &x)| if j != i { Some(x) } else { None })
            .collect();
        let sub = minor_det(m, &sub_rows, &cols[1..]);
        let term = entry.mul(&sub);
        if i % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

/// Verdict of the flat + finitely presented test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatFpVerdict {
    /// Projective of the given constant rank.
    ProjectiveOfRank(u32),
    /// Projective with locally varying rank; the separating Fitting ideal.
    NotConstantRank(Vec<String>),
    /// Not flat and finitely presented; the failing Fitting ideal.
    NotFlatFp(Vec<String>),
}

/// Fitting-ideal projectivity test: `M` is projective of constant rank `r`
/// iff `Fitt_{r-1}(M) = 0` and `Fitt_r(M) = (1)`.
pub fn flat_fp_test(m: &PresentedModule, limits: &Limits) -> Result<FlatFpVerdict> {
    let ring = m.ring();
    let in_ring_zero = |ideal: &IdealHandle| -> Result<bool> {
        for g in ideal.gens() {
            if !ring.is_zero_elem(g, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let in_ring_unit = |ideal: &IdealHandle| -> Result<bool> {
        let mut gens = ideal.gens().to_vec();
        gens.extend(ring.ideal().gens().iter().cloned());
        IdealHandle::new(ring.ctx(), gens)?.is_unit_ideal(limits)
    };
    for r in 0..=m.gens() {
        let fitt_r = m.fitting_ideal(r, limits)?;
        if in_ring_unit(&fitt_r)? {
            if r == 0 {
                return Ok(FlatFpVerdict::ProjectiveOfRank(0));
            }
            let fitt_below = m.fitting_ideal(r - 1, limits)?;
            if in_ring_zero(&fitt_below)? {
                return Ok(FlatFpVerdict::ProjectiveOfRank(r as u32));
            }
            // separate projective-of-varying-rank from genuinely non-flat:
            // idempotent Fitting ideals signal a rank jump
            let sq_gens: Vec<MPoly> = fitt_below
                .gens()
                .iter()
                .flat_map(|a| fitt_below.gens().iter().map(move |b| a.mul(b)))
                .collect();
            let square_ideal = IdealHandle::new(ring.ctx(), sq_gens)?;
            let with_ring = |h: &IdealHandle| -> Result<IdealHandle> {
                let mut gens = h.gens().to_vec();
                gens.extend(ring.ideal().gens().iter().cloned());
                IdealHandle::new(ring.ctx(), gens)
            };
            let witness: Vec<String> = fitt_below.gens().iter().map(|g| g.to_string()).collect();
            if with_ring(&square_ideal)?.equals(&with_ring(&fitt_below)?, limits)? {
                return Ok(FlatFpVerdict::NotConstantRank(witness));
            }
            return Ok(FlatFpVerdict::NotFlatFp(witness));
        }
    }
    Ok(FlatFpVerdict::NotFlatFp(vec!["1 is never reached".into()]))
}

/// A matrix map between presented modules over one ring: column `j` is the
/// image of source generator `j`.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: PresentedModule,
    pub target: PresentedModule,
    pub columns: Vec<VecPoly>,
}

impl ModuleMap {
    pub fn new(source: &PresentedModule, target: &PresentedModule, columns: Vec<VecPoly>) -> Result<ModuleMap> {
        if source.ring() != target.ring() {
            return Err(Error::MixedContext("module map across rings".into()));
        }
        if columns.len() != source.gens() {
            return Err(Error::InvalidInput("wrong number of columns".into()));
        }
        for c in &columns {
            if c.rank() != target.gens() {
                return Err(Error::InvalidInput("column with wrong rank".into()));
            }
        }
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            columns,
        })
    }

    pub fn identity(m: &PresentedModule) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            columns: (0..m.gens()).map(|i| m.gen_elem(i)).collect(),
        }
    }

    pub fn apply(&self, v: &VecPoly) -> VecPoly {
        let mut acc = self.target.zero_elem();
        for (j, c) in self.columns.iter().enumerate() {
            acc = acc.add(&c.mul_poly(&v.entries[j]));
        }
        acc
    }

    /// Checks that every source relation maps to zero in the target.
    pub fn is_well_defined(&self, limits: &Limits) -> Result<bool> {
        for rel in self.source.relations() {
            if !self.target.is_zero_elem(&self.apply(rel), limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn compose(&self, then: &ModuleMap) -> Result<ModuleMap> {
        if self.target != then.source {
            return Err(Error::MixedContext("module map composition mismatch".into()));
        }
        let columns = self.columns.iter().map(|c| then.apply(c)).collect();
        ModuleMap::new(&self.source, &then.target, columns)
    }

    /// Attempts a two-sided inverse; `None` when the map is not an
    /// isomorphism, with a witness for the failing side.
    pub fn try_inverse(&self, limits: &Limits) -> Result<std::result::Result<ModuleMap, IsoFailure>> {
        // preimage of each target generator under the image columns
        let mut inv_cols = Vec::new();
        for i in 0..self.target.gens() {
            let e = self.target.gen_elem(i);
            match self.target.combination_witness(&e, &self.columns, limits)? {
                None => {
                    return Ok(Err(IsoFailure::NotSurjective {
                        witness: format!("target generator {i} is not in the image"),
                    }))
                }
                Some(coeffs) => inv_cols.push(VecPoly { entries: coeffs }),
            }
        }
        let inv = ModuleMap::new(&self.target, &self.source, inv_cols)?;
        if !inv.is_well_defined(limits)? {
            return Ok(Err(IsoFailure::NoInverse {
                witness: "preimage assignment does not respect the relations".into(),
            }));
        }
        // replay both composites
        for j in 0..self.source.gens() {
            let round = inv.apply(&self.columns[j]);
            if !self
                .source
                .elems_equal(&round, &self.source.gen_elem(j), limits)?
            {
                return Ok(Err(IsoFailure::NotInjective {
                    witness: format!(
                        "generator {j} does not return to itself through the inverse"
                    ),
                }));
            }
        }
        for i in 0..self.target.gens() {
            let round = self.apply(&inv.columns[i]);
            if !self
                .target
                .elems_equal(&round, &self.target.gen_elem(i), limits)?
            {
                return Ok(Err(IsoFailure::NoInverse {
                    witness: format!("target generator {i} does not replay"),
                }));
            }
        }
        Ok(Ok(inv))
    }
}

/// Why a candidate module map failed to be an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoFailure {
    NotSurjective { witness: String },
    NotInjective { witness: String },
    NoInverse { witness: String },
}

/// A triple `(M_Y, M_Z; M_T)` with certified gluing isomorphisms
/// `alpha: M_Y ⊗_B K → M_T` and `beta: M_Z ⊗_C K → M_T`.
#[derive(Debug, Clone)]
pub struct PatchedModule {
    pub square: ConductorSquare,
    pub m_y: PresentedModule,
    pub m_z: PresentedModule,
    pub m_t: PresentedModule,
    pub alpha: ModuleMap,
    pub alpha_inv: ModuleMap,
    pub beta: ModuleMap,
    pub beta_inv: ModuleMap,
}

impl PatchedModule {
    /// Verifies shapes and replays the inverse certificates.
    pub fn new(
        square: &ConductorSquare,
        m_y: PresentedModule,
        m_z: PresentedModule,
        m_t: PresentedModule,
        alpha_cols: Vec<VecPoly>,
        beta_cols: Vec<VecPoly>,
        limits: &Limits,
    ) -> Result<PatchedModule> {
        if m_y.ring() != square.b() || m_z.ring() != square.c() || m_t.ring() != square.k() {
            return Err(Error::MixedContext(
                "patched components must live over B, C, K".into(),
            ));
        }
        let y_k = m_y.base_change(square.beta(), limits)?;
        let z_k = m_z.base_change(square.pi(), limits)?;
        let alpha = ModuleMap::new(&y_k, &m_t, alpha_cols)?;
        let beta = ModuleMap::new(&z_k, &m_t, beta_cols)?;
        if !alpha.is_well_defined(limits)? || !beta.is_well_defined(limits)? {
            return Err(Error::InvalidInput("gluing map does not kill relations".into()));
        }
        let alpha_inv = match alpha.try_inverse(limits)? {
            Ok(inv) => inv,
            Err(e) => {
                return Err(Error::InvalidInput(format!(
                    "alpha is not an isomorphism: {e:?}"
                )))
            }
        };
        let beta_inv = match beta.try_inverse(limits)? {
            Ok(inv) => inv,
            Err(e) => {
                return Err(Error::InvalidInput(format!(
                    "beta is not an isomorphism: {e:?}"
                )))
            }
        };
        Ok(PatchedModule {
            square: square.clone(),
            m_y,
            m_z,
            m_t,
            alpha,
            alpha_inv,
            beta,
            beta_inv,
        })
    }

    /// The identity-glued patch of component modules whose base changes to
    /// `K` coincide generator-for-generator.
    pub fn with_identity_gluing(
        square: &ConductorSquare,
        m_y: PresentedModule,
        m_z: PresentedModule,
        m_t: PresentedModule,
        limits: &Limits,
    ) -> Result<PatchedModule> {
        let alpha_cols = (0..m_t.gens()).map(|i| m_t.gen_elem(i)).collect();
        let beta_cols = (0..m_t.gens()).map(|i| m_t.gen_elem(i)).collect();
        PatchedModule::new(square, m_y, m_z, m_t, alpha_cols, beta_cols, limits)
    }
}

/// Componentwise base change of a module over a presented pushout ring:
/// `(M ⊗_A B, M ⊗_A C, M ⊗_A K)` with canonical gluings.
pub fn pullback(
    square: &ConductorSquare,
    candidate: &PushoutPresentation,
    m: &PresentedModule,
    limits: &Limits,
) -> Result<PatchedModule> {
    if m.ring() != &candidate.a_pres {
        return Err(Error::NoPresentation(
            "module must be presented over the candidate pushout ring".into(),
        ));
    }
    let to_k = candidate.to_b.compose(square.beta(), limits)?;
    let m_y = m.base_change(&candidate.to_b, limits)?;
    let m_z = m.base_change(&candidate.to_c, limits)?;
    let m_t = m.base_change(&to_k, limits)?;
    PatchedModule::with_identity_gluing(square, m_y, m_z, m_t, limits)
}

/// Pullback of a free module over the intrinsic (unpresented) pushout ring.
pub fn pullback_free(square: &ConductorSquare, rank: usize, limits: &Limits) -> Result<PatchedModule> {
    PatchedModule::with_identity_gluing(
        square,
        PresentedModule::free(square.b(), rank),
        PresentedModule::free(square.c(), rank),
        PresentedModule::free(square.k(), rank),
        limits,
    )
}

/// The pushforward `M_Y ×_{M_T} M_Z` in matched-pair form, with an optional
/// verified presentation over the candidate pushout ring.
#[derive(Debug, Clone)]
pub struct MatchedPairModule {
    pub pairs: Vec<(VecPoly, VecPoly)>,
    pub presentation: Option<PushforwardPresentation>,
}

#[derive(Debug, Clone)]
pub struct PushforwardPresentation {
    pub module: PresentedModule,
    /// bounded replay: probed matched pairs are generated and every bounded
    /// relation lies in the span of the presented relations
    pub replay_ok: bool,
}

/// Computes the fiber product `M_Y ×_{M_T} M_Z` of a patched module.
///
/// The matched-pair generators are found by a bounded deterministic search;
/// when `candidate` is supplied, relations among them are computed by a
/// bounded exact linear solve and verified by replay. The matched-pair form
/// is always returned; only the presentation search can raise
/// `BoundExceeded`.
pub fn pushforward(
    m: &PatchedModule,
    candidate: Option<&PushoutPresentation>,
    limits: &Limits,
) -> Result<MatchedPairModule> {
    let pairs = matched_pair_generators(m, limits)?;
    let presentation = match candidate {
        None => None,
        Some(cand) => Some(presentation_over_candidate(m, &pairs, cand, limits)?),
    };
    Ok(MatchedPairModule {
        pairs,
        presentation,
    })
}

/// Exact generators of the kernel of `M_Z → M_Z ⊗_C K → M_T`, computed as a
/// syzygy problem over `C` after lifting all data through the section of π.
fn kernel_of_base_change_to_t(m: &PatchedModule, limits: &Limits) -> Result<Vec<VecPoly>> {
    let square = &m.square;
    let c = square.c();
    let gz = m.m_z.gens();
    let gt = m.m_t.gens();
    if gz == 0 {
        return Ok(Vec::new());
    }
    if gt == 0 {
        // M_T = 0: everything is in the kernel
        return Ok((0..gz).map(|j| VecPoly::unit(c.ctx(), gz, j)).collect());
    }
    let lift = |p: &MPoly| -> Result<MPoly> {
        square.pi().preimage(p, limits)?.ok_or_else(|| Error::NotSurjective {
            generator: p.to_string(),
            witness: "module coordinate has no preimage under pi".into(),
        })
    };
    // columns of the lifted matrix of beta ∘ (⊗K), one per M_Z generator
    let mut columns: Vec<VecPoly> = Vec::new();
    for j in 0..gz {
        let col = &m.beta.columns[j];
        columns.push(VecPoly {
            entries: col.entries.iter().map(|e| lift(e)).collect::<Result<_>>()?,
        });
    }
    let n_z = columns.len();
    // allowance columns: lifted M_T relations, conductor multiples of the
    // units, and the C relations on the units
    for rel in m.m_t.relations() {
        columns.push(VecPoly {
            entries: rel.entries.iter().map(|e| lift(e)).collect::<Result<_>>()?,
        });
    }
    let conductor = square.conductor(limits)?;
    for g in &conductor.c_generators {
        for r in 0..gt {
            let mut v = VecPoly::zero(c.ctx(), gt);
            v.entries[r] = g.clone();
            columns.push(v);
        }
    }
    for rel in c.ideal().gens() {
        for r in 0..gt {
            let mut v = VecPoly::zero(c.ctx(), gt);
            v.entries[r] = rel.clone();
            columns.push(v);
        }
    }
    let syz = crate::poly::modgb::syzygies(&columns, limits)?;
    let mut out = Vec::new();
    for s in syz {
        let z = VecPoly {
            entries: s.entries[..n_z].to_vec(),
        };
        let red = m.m_z.nf(&z, limits)?;
        if !red.is_zero() && !out.contains(&red) {
            out.push(red);
        }
    }
    Ok(out)
}

/// Deterministic search for generators of the fiber product.
///
/// Since `A ↠ B` for a conductor square, the fiber product is generated by
/// one matched partner per `M_Y` generator together with the kernel of
/// `M_Z → M_T` (taken with a bounded range of monomial multiples, because
/// those kernel generators only span over `C`, not over `A`).
fn matched_pair_generators(
    m: &PatchedModule,
    limits: &Limits,
) -> Result<Vec<(VecPoly, VecPoly)>> {
    let square = &m.square;
    let mut out: Vec<(VecPoly, VecPoly)> = Vec::new();
    // (i) a matched partner for every M_Y generator
    for i in 0..m.m_y.gens() {
        let y = m.m_y.gen_elem(i);
        let y_red = m.m_y.nf(&y, limits)?;
        if y_red.is_zero() {
            continue;
        }
        // t = alpha(y ⊗ 1); z = the canonical pi-lift of beta^{-1}(t)
        let y_k = m.m_y.map_elem(square.beta(), &y_red, limits)?;
        let t = m.alpha.apply(&y_k);
        let t_in_zk = m.beta_inv.apply(&t);
        let z = VecPoly {
            entries: t_in_zk
                .entries
                .iter()
                .map(|e| {
                    square
                        .pi()
                        .preimage(e, limits)?
                        .ok_or_else(|| Error::NotSurjective {
                            generator: e.to_string(),
                            witness: "pi preimage of a module coordinate".into(),
                        })
                })
                .collect::<Result<_>>()?,
        };
        out.push((y_red, z));
    }
    // (ii) conductor pairs (0, z): kernel generators of M_Z → M_T and a
    // bounded range of their monomial multiples
    let kernel = kernel_of_base_change_to_t(m, limits)?;
    let c_monomials = square.c().monomials_up_to(limits.probe_degree.min(3));
    for k in &kernel {
        for mono in &c_monomials {
            let z = m.m_z.nf(&k.mul_poly(mono), limits)?;
            if z.is_zero() {
                continue;
            }
            let pair = (m.m_y.zero_elem(), z);
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    Ok(out)
}

/// Expresses target = sum_k c_k * pairs_k with c_k in the candidate ring of
/// bounded degree, by exact linear algebra over the coefficient field.
fn pair_combination_solve(
    m: &PatchedModule,
    cand: &PushoutPresentation,
    pairs: &[(VecPoly, VecPoly)],
    target: &(VecPoly, VecPoly),
    degree: u32,
    limits: &Limits,
) -> Result<Option<Vec<MPoly>>> {
    let monomials = cand.a_pres.monomials_up_to(degree);
    // columns: one per (pair k, monomial mu)
    let mut columns: Vec<(VecPoly, VecPoly)> = Vec::new();
    for (y, z) in pairs {
        for mu in &monomials {
            let pb = cand.to_b.apply(mu, limits)?;
            let qc = cand.to_c.apply(mu, limits)?;
            let ny = m.m_y.nf(&y.mul_poly(&pb), limits)?;
            let nz = m.m_z.nf(&z.mul_poly(&qc), limits)?;
            columns.push((ny, nz));
        }
    }
    let ty = m.m_y.nf(&target.0, limits)?;
    let tz = m.m_z.nf(&target.1, limits)?;

    // coordinatize: collect every (side, position, expo) key
    let mut keys: Vec<(u8, usize, Vec<u32>)> = Vec::new();
    let collect = |side: u8, v: &VecPoly, keys: &mut Vec<(u8, usize, Vec<u32>)>| {
        for (pos, p) in v.entries.iter().enumerate() {
            for (e, _) in p.terms() {
                let key = (side, pos, e.clone());
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    };
    for (y, z) in &columns {
        collect(0, y, &mut keys);
        collect(1, z, &mut keys);
    }
    collect(0, &ty, &mut keys);
    collect(1, &tz, &mut keys);
    keys.sort();
    let field = m.square.b().field();
    let coord = |v: &VecPoly, side: u8, key: &(u8, usize, Vec<u32>)| -> Scalar {
        if key.0 != side {
            return field.zero();
        }
        for (e, c) in v.entries[key.1].terms() {
            if *e == key.2 {
                return c.clone();
            }
        }
        field.zero()
    };
    let mut mat = Mat::zero(field, keys.len(), columns.len());
    for (cix, (y, z)) in columns.iter().enumerate() {
        for (rix, key) in keys.iter().enumerate() {
            let v = if key.0 == 0 {
                coord(y, 0, key)
            } else {
                coord(z, 1, key)
            };
            mat.set(rix, cix, v);
        }
    }
    let rhs: Vec<Scalar> = keys
        .iter()
        .map(|key| {
            if key.0 == 0 {
                coord(&ty, 0, key)
            } else {
                coord(&tz, 1, key)
            }
        })
        .collect();
    match mat.solve(&rhs) {
        None => Ok(None),
        Some(x) => {
            // reassemble coefficients per pair
            let mut coeffs = Vec::new();
            for k in 0..pairs.len() {
                let mut acc = MPoly::zero(cand.a_pres.ctx());
                for (mi, mu) in monomials.iter().enumerate() {
                    let xi = &x[k * monomials.len() + mi];
                    if !xi.is_zero() {
                        acc = acc.add(&mu.mul_scalar(xi));
                    }
                }
                coeffs.push(cand.a_pres.nf(&acc, limits)?);
            }
            Ok(Some(coeffs))
        }
    }
}

/// Minimizes the generator list and computes verified relations over the
/// candidate ring.
fn presentation_over_candidate(
    m: &PatchedModule,
    pairs: &[(VecPoly, VecPoly)],
    cand: &PushoutPresentation,
    limits: &Limits,
) -> Result<PushforwardPresentation> {
    let d = limits.probe_degree;
    // minimize: drop pairs generated by the kept ones
    let mut kept: Vec<(VecPoly, VecPoly)> = Vec::new();
    for p in pairs {
        if kept.is_empty() {
            if !(m.m_y.is_zero_elem(&p.0, limits)? && m.m_z.is_zero_elem(&p.1, limits)?) {
                kept.push(p.clone());
            }
            continue;
        }
        if pair_combination_solve(m, cand, &kept, p, d, limits)?.is_none() {
            kept.push(p.clone());
        }
    }
    let n = kept.len();
    // relations: nullspace of the evaluation in bounded degree
    let monomials = cand.a_pres.monomials_up_to(d.min(4));
    let mut columns: Vec<(VecPoly, VecPoly)> = Vec::new();
    for (y, z) in &kept {
        for mu in &monomials {
            let pb = cand.to_b.apply(mu, limits)?;
            let qc = cand.to_c.apply(mu, limits)?;
            columns.push((
                m.m_y.nf(&y.mul_poly(&pb), limits)?,
                m.m_z.nf(&z.mul_poly(&qc), limits)?,
            ));
        }
    }
    let mut keys: Vec<(u8, usize, Vec<u32>)> = Vec::new();
    for (y, z) in &columns {
        for (pos, p) in y.entries.iter().enumerate() {
            for (e, _) in p.terms() {
                let key = (0u8, pos, e.clone());
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
        for (pos, p) in z.entries.iter().enumerate() {
            for (e, _) in p.terms() {
                let key = (1u8, pos, e.clone());
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    }
    keys.sort();
    let field = m.square.b().field();
    let mut mat = Mat::zero(field, keys.len(), columns.len());
    for (cix, (y, z)) in columns.iter().enumerate() {
        for (rix, key) in keys.iter().enumerate() {
            let side = if key.0 == 0 { y } else { z };
            let mut val = field.zero();
            for (e, cc) in side.entries[key.1].terms() {
                if *e == key.2 {
                    val = cc.clone();
                }
            }
            mat.set(rix, cix, val);
        }
    }
    let null = mat.nullspace();
    // reassemble nullspace vectors as candidate relation columns over A
    let mut raw_relations: Vec<VecPoly> = Vec::new();
    for v in &null {
        let mut entries = Vec::new();
        for k in 0..n {
            let mut acc = MPoly::zero(cand.a_pres.ctx());
            for (mi, mu) in monomials.iter().enumerate() {
                let xi = &v[k * monomials.len() + mi];
                if !xi.is_zero() {
                    acc = acc.add(&mu.mul_scalar(xi));
                }
            }
            entries.push(cand.a_pres.nf(&acc, limits)?);
        }
        let col = VecPoly { entries };
        if !col.is_zero() {
            raw_relations.push(col);
        }
    }
    // minimize relations with exact module arithmetic over the candidate ring
    let mut relations: Vec<VecPoly> = Vec::new();
    for col in &raw_relations {
        let probe = PresentedModule::new(&cand.a_pres, n, relations.clone())?;
        if !probe.is_zero_elem(col, limits)? {
            relations.push(probe.nf(col, limits)?);
        }
    }
    let module = PresentedModule::new(&cand.a_pres, n, relations)?;

    // replay: every raw relation is in the span, every relation kills the
    // generators, and probed matched pairs are generated
    let mut replay_ok = true;
    for col in &module.relations().to_vec() {
        let mut y_acc = m.m_y.zero_elem();
        let mut z_acc = m.m_z.zero_elem();
        for (k, (y, z)) in kept.iter().enumerate() {
            let pb = cand.to_b.apply(&col.entries[k], limits)?;
            let qc = cand.to_c.apply(&col.entries[k], limits)?;
            y_acc = y_acc.add(&y.mul_poly(&pb));
            z_acc = z_acc.add(&z.mul_poly(&qc));
        }
        if !m.m_y.is_zero_elem(&y_acc, limits)? || !m.m_z.is_zero_elem(&z_acc, limits)? {
            replay_ok = false;
        }
    }
    for col in &raw_relations {
        if !module.is_zero_elem(col, limits)? {
            replay_ok = false;
        }
    }
    // surjectivity replay on the original pair stream
    for p in pairs {
        if pair_combination_solve(m, cand, &kept, p, d, limits)?.is_none() {
            replay_ok = false;
        }
    }
    Ok(PushforwardPresentation { module, replay_ok })
}

/// Which adjunction to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjunctionDirection {
    Unit,
    Counit,
}

/// Outcome of an adjunction check.
#[derive(Debug, Clone)]
pub enum AdjunctionVerdict {
    Isomorphism,
    Failure { side: String, witness: String },
}

impl AdjunctionVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, AdjunctionVerdict::Isomorphism)
    }
}

/// Counit check: `φ*(φ_*(M)) → M` is an isomorphism for every patched
/// module with finitely presented components.
pub fn adjunction_counit(
    m: &PatchedModule,
    cand: &PushoutPresentation,
    limits: &Limits,
) -> Result<AdjunctionVerdict> {
    let push = pushforward(m, Some(cand), limits)?;
    let pres = push.presentation.as_ref().expect("presentation requested");
    if !pres.replay_ok {
        return Ok(AdjunctionVerdict::Failure {
            side: "pushforward".into(),
            witness: "presentation replay failed".into(),
        });
    }
    let n = pres.module.gens();
    // recover the component expressions of the kept generator pairs by
    // re-running the minimization deterministically
    let kept = kept_pairs(m, &push.pairs, cand, limits)?;
    assert_eq!(kept.len(), n);
    let back = pullback(&m.square, cand, &pres.module, limits)?;
    // component maps: N ⊗ B → M_Y etc., generator k ↦ y_k / z_k / t_k
    let y_cols: Vec<VecPoly> = kept.iter().map(|(y, _)| y.clone()).collect();
    let z_cols: Vec<VecPoly> = kept.iter().map(|(_, z)| z.clone()).collect();
    let t_cols: Vec<VecPoly> = kept
        .iter()
        .map(|(y, _)| {
            let yk = m.m_y.map_elem(m.square.beta(), y, limits)?;
            Ok(m.alpha.apply(&yk))
        })
        .collect::<Result<_>>()?;
    for (name, source, target, cols) in [
        ("Y", &back.m_y, &m.m_y, y_cols),
        ("Z", &back.m_z, &m.m_z, z_cols),
        ("T", &back.m_t, &m.m_t, t_cols),
    ] {
        let map = ModuleMap::new(source, target, cols)?;
        if !map.is_well_defined(limits)? {
            return Ok(AdjunctionVerdict::Failure {
                side: name.into(),
                witness: "counit component not well defined".into(),
            });
        }
        match map.try_inverse(limits)? {
            Ok(_) => {}
            Err(e) => {
                return Ok(AdjunctionVerdict::Failure {
                    side: name.into(),
                    witness: format!("{e:?}"),
                })
            }
        }
    }
    Ok(AdjunctionVerdict::Isomorphism)
}

fn kept_pairs(
    m: &PatchedModule,
    pairs: &[(VecPoly, VecPoly)],
    cand: &PushoutPresentation,
    limits: &Limits,
) -> Result<Vec<(VecPoly, VecPoly)>> {
    let d = limits.probe_degree;
    let mut kept: Vec<(VecPoly, VecPoly)> = Vec::new();
    for p in pairs {
        if kept.is_empty() {
            if !(m.m_y.is_zero_elem(&p.0, limits)? && m.m_z.is_zero_elem(&p.1, limits)?) {
                kept.push(p.clone());
            }
            continue;
        }
        if pair_combination_solve(m, cand, &kept, p, d, limits)?.is_none() {
            kept.push(p.clone());
        }
    }
    Ok(kept)
}

/// Bounded search for a single generator of the fiber product: `false`
/// means no kept matched pair generates every other one, certifying that
/// the pushforward module is not free of rank one on any candidate
/// generator in the probed range.
pub fn has_unit_generator(
    m: &PatchedModule,
    cand: &PushoutPresentation,
    pairs: &[(VecPoly, VecPoly)],
    limits: &Limits,
) -> Result<bool> {
    let kept = kept_pairs(m, pairs, cand, limits)?;
    for g in &kept {
        let mut all = true;
        for other in &kept {
            if pair_combination_solve(
                m,
                cand,
                std::slice::from_ref(g),
                other,
                limits.probe_degree,
                limits,
            )?
            .is_none()
            {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Unit check: `M → φ_*(φ*(M))` for a module over the candidate ring.
pub fn adjunction_unit(
    square: &ConductorSquare,
    cand: &PushoutPresentation,
    m: &PresentedModule,
    limits: &Limits,
) -> Result<AdjunctionVerdict> {
    let patched = pullback(square, cand, m, limits)?;
    let push = pushforward(&patched, Some(cand), limits)?;
    let pres = push.presentation.as_ref().expect("presentation requested");
    let kept = kept_pairs(&patched, &push.pairs, cand, limits)?;
    // canonical map: generator i of M ↦ the pair (e_i ⊗ 1, e_i ⊗ 1)
    let mut cols = Vec::new();
    for i in 0..m.gens() {
        let target = (patched.m_y.gen_elem(i), patched.m_z.gen_elem(i));
        match pair_combination_solve(&patched, cand, &kept, &target, limits.probe_degree, limits)? {
            None => {
                return Ok(AdjunctionVerdict::Failure {
                    side: "unit".into(),
                    witness: format!("generator {i} has no expression in the pushforward"),
                })
            }
            Some(coeffs) => cols.push(VecPoly { entries: coeffs }),
        }
    }
    let map = ModuleMap::new(m, &pres.module, cols)?;
    if !map.is_well_defined(limits)? {
        return Ok(AdjunctionVerdict::Failure {
            side: "unit".into(),
            witness: "unit is not well defined".into(),
        });
    }
    match map.try_inverse(limits)? {
        Ok(_) => Ok(AdjunctionVerdict::Isomorphism),
        Err(e) => Ok(AdjunctionVerdict::Failure {
            side: "unit".into(),
            witness: format!("{e:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::limits::CancelToken;
    use crate::scalar::FieldTag;
    use crate::square::present_pushout;

    fn limits() -> Limits {
        Limits::default()
    }

    fn nodal() -> (crate::square::ConductorSquare, PushoutPresentation) {
        let sq = corpus::nodal_square(FieldTag::Rational, &limits()).unwrap();
        let (pres, _) = present_pushout(&sq, 4, &limits(), &CancelToken::never()).unwrap();
        (sq, pres)
    }

    /// The twisted line bundle on the node: trivial on both components,
    /// glued by scaling the `t = -1` coordinate by `c`.
    fn twisted_bundle(c_scale: i64) -> (crate::square::ConductorSquare, PushoutPresentation, PatchedModule) {
        let (sq, pres) = nodal();
        let l = limits();
        let m_y = PresentedModule::free(sq.b(), 1);
        let m_z = PresentedModule::free(sq.c(), 1);
        let m_t = PresentedModule::free(sq.k(), 1);
        // u(1) = 1, u(-1) = c: u = (1+c)/2 - (1-c)/2 * t has u(1)=1? check:
        // u = (1+c)/2 + (1-c)/2 * t gives u(1) = 1, u(-1) = c
        let k = sq.k();
        let half_sum = k
            .one_elem()
            .mul_scalar(&FieldTag::Rational.from_ratio(1 + c_scale, 2));
        let half_diff = k
            .var("t")
            .mul_scalar(&FieldTag::Rational.from_ratio(1 - c_scale, 2));
        let u = half_sum.add(&half_diff);
        let beta_col = VecPoly { entries: vec![u] };
        let alpha_col = VecPoly {
            entries: vec![k.one_elem()],
        };
        let patched = PatchedModule::new(&sq, m_y, m_z, m_t, vec![alpha_col], vec![beta_col], &l)
            .unwrap();
        (sq, pres, patched)
    }

    #[test]
    fn pullback_of_structure_sheaf() {
        let (sq, pres) = nodal();
        let m = PresentedModule::free(&pres.a_pres, 1);
        let p = pullback(&sq, &pres, &m, &limits()).unwrap();
        assert_eq!(p.m_y.gens(), 1);
        assert!(p.m_y.relations().is_empty());
        assert!(p.m_z.relations().is_empty());
        assert!(p.m_t.relations().is_empty());
    }

    #[test]
    fn pullback_of_quotient_by_x() {
        let (sq, pres) = nodal();
        // M = A/(g1) where g1 ↦ t^2 - 1 in C and ↦ 0 in B
        let rel = VecPoly {
            entries: vec![pres.a_pres.var("g1")],
        };
        let m = PresentedModule::new(&pres.a_pres, 1, vec![rel]).unwrap();
        let p = pullback(&sq, &pres, &m, &limits()).unwrap();
        // over B = k: relation 0, so M_Y = k (free of rank 1 after reduction)
        assert!(p.m_y.is_zero_elem(&p.m_y.relations()[0], &limits()).unwrap());
        // over C: relation t^2 - 1
        assert_eq!(p.m_z.relations()[0].entries[0].to_string(), "t^2 - 1");
        // over K: relation reduces to zero
        assert!(p.m_t.is_zero_elem(&p.m_t.relations()[0], &limits()).unwrap());
    }

    #[test]
    fn pullback_of_zero_module() {
        let (sq, pres) = nodal();
        let m = PresentedModule::free(&pres.a_pres, 0);
        let p = pullback(&sq, &pres, &m, &limits()).unwrap();
        assert_eq!(p.m_y.gens(), 0);
        assert_eq!(p.m_z.gens(), 0);
        assert_eq!(p.m_t.gens(), 0);
    }

    #[test]
    fn pushforward_of_structure_sheaf_is_free_rank_one() {
        let (sq, pres) = nodal();
        let p = pullback_free(&sq, 1, &limits()).unwrap();
        let push = pushforward(&p, Some(&pres), &limits()).unwrap();
        let pf = push.presentation.unwrap();
        assert!(pf.replay_ok);
        assert_eq!(pf.module.gens(), 1);
        assert!(pf.module.relations().is_empty());
    }

    #[test]
    fn pushforward_pullback_roundtrip_free_rank_two() {
        let (sq, pres) = nodal();
        let m = PresentedModule::free(&pres.a_pres, 2);
        let p = pullback(&sq, &pres, &m, &limits()).unwrap();
        let push = pushforward(&p, Some(&pres), &limits()).unwrap();
        let pf = push.presentation.unwrap();
        assert!(pf.replay_ok);
        assert_eq!(pf.module.gens(), 2);
        assert!(pf.module.relations().is_empty());
    }

    #[test]
    fn twisted_bundle_pushforward_is_projective_rank_one_nonfree() {
        let (_sq, pres, patched) = twisted_bundle(2);
        let push = pushforward(&patched, Some(&pres), &limits()).unwrap();
        let pf = push.presentation.unwrap();
        assert!(pf.replay_ok);
        // Fitting test: projective of rank 1
        let verdict = flat_fp_test(&pf.module, &limits()).unwrap();
        assert_eq!(verdict, FlatFpVerdict::ProjectiveOfRank(1));
        // non-free: more than one generator and no single generator spans
        assert!(pf.module.gens() > 1);
        assert!(no_unit_generator(&patched, &pres, &push.pairs, &limits()).unwrap());
    }

    fn no_unit_generator(
        m: &PatchedModule,
        cand: &PushoutPresentation,
        pairs: &[(VecPoly, VecPoly)],
        limits: &Limits,
    ) -> Result<bool> {
        Ok(!super::has_unit_generator(m, cand, pairs, limits)?)
    }

    #[test]
    fn trivial_gluing_bundle_is_free() {
        let (_sq, pres, patched) = twisted_bundle(1);
        let push = pushforward(&patched, Some(&pres), &limits()).unwrap();
        let pf = push.presentation.unwrap();
        assert!(pf.replay_ok);
        let verdict = flat_fp_test(&pf.module, &limits()).unwrap();
        assert_eq!(verdict, FlatFpVerdict::ProjectiveOfRank(1));
        // with c = 1 a unit generator exists
        assert!(!no_unit_generator(&patched, &pres, &push.pairs, &limits()).unwrap());
    }

    #[test]
    fn fitting_examples() {
        let l = limits();
        // free of rank r
        let r2 = PresentedRing::free(FieldTag::Rational, &["t"]);
        let free = PresentedModule::free(&r2, 3);
        assert_eq!(flat_fp_test(&free, &l).unwrap(), FlatFpVerdict::ProjectiveOfRank(3));
        // k[t]/(t) over k[t]: Fitt_0 = (t), neither 0 nor (1)
        let m = PresentedModule::parse_new(&r2, 1, &[&["t"]]).unwrap();
        match flat_fp_test(&m, &l).unwrap() {
            FlatFpVerdict::NotFlatFp(w) => assert_eq!(w, vec!["t".to_string()]),
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn counit_isomorphism_on_pullbacks() {
        let (sq, pres) = nodal();
        let l = limits();
        // phi^*(A/(g1))
        let rel = VecPoly {
            entries: vec![pres.a_pres.var("g1")],
        };
        let m = PresentedModule::new(&pres.a_pres, 1, vec![rel]).unwrap();
        let p = pullback(&sq, &pres, &m, &l).unwrap();
        let verdict = adjunction_counit(&p, &pres, &l).unwrap();
        assert!(verdict.is_iso(), "{verdict:?}");
    }

    #[test]
    fn counit_isomorphism_on_twisted_bundle() {
        let (_sq, pres, patched) = twisted_bundle(3);
        let verdict = adjunction_counit(&patched, &pres, &limits()).unwrap();
        assert!(verdict.is_iso(), "{verdict:?}");
    }

    #[test]
    fn unit_isomorphism_on_free_module() {
        let (sq, pres) = nodal();
        let m = PresentedModule::free(&pres.a_pres, 1);
        let verdict = adjunction_unit(&sq, &pres, &m, &limits()).unwrap();
        assert!(verdict.is_iso(), "{verdict:?}");
    }

    #[test]
    fn module_map_inverse_roundtrip() {
        let l = limits();
        let r = PresentedRing::parse_new(FieldTag::Rational, &["t"], &["t^2 - 1"]).unwrap();
        let m = PresentedModule::free(&r, 1);
        // multiplication by the unit t is invertible mod t^2 - 1
        let map = ModuleMap::new(&m, &m, vec![VecPoly { entries: vec![r.var("t")] }]).unwrap();
        let inv = map.try_inverse(&l).unwrap().unwrap();
        assert_eq!(inv.columns[0].entries[0].to_string(), "t");
        // multiplication by t - 1 is not injective
        let bad = ModuleMap::new(
            &m,
            &m,
            vec![VecPoly {
                entries: vec![r.parse("t - 1").unwrap()],
            }],
        )
        .unwrap();
        assert!(bad.try_inverse(&l).unwrap().is_err());
    }
}
