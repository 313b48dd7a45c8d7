//! Finite spectral spaces as specialization posets: the topological pushout
//! of `Y ← T ↪ Z` with the true quotient topology, the partition
//! `|X| = |Y| ⊔ |Z ∖ T|`, a brute-force universal property check against a
//! family of small test spaces, and zero-dimensional spectra of presented
//! rings.
//!
//! Point counts are desk scale: exact open-set enumeration walks all `2^n`
//! subsets and is capped at 16 points; beyond the cap only the order
//! topology is computed and the report says so.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::factor::{distinct_irreducible_factors, UniPoly};
use crate::poly::ideal::IdealHandle;
use crate::poly::order::MonomialOrder;
use crate::poly::MPoly;
use crate::ring::PresentedRing;

/// A finite T0 space encoded by its specialization preorder; `x ⤳ y` means
/// `y` lies in the closure of `x`. Closed sets are specialization-closed;
/// an explicit open-set family overrides the order topology for quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecPoset {
    pub points: Vec<String>,
    /// `specializes[i * n + j]` iff point j is in the closure of point i
    specializes: Vec<bool>,
    /// explicit open family (as sorted subsets), when the topology is not
    /// the order topology
    explicit_opens: Option<Vec<BTreeSet<usize>>>,
}

impl SpecPoset {
    /// Builds from a point list and specialization arrows `x ⤳ y`
    /// (reflexive-transitive closure is taken automatically).
    pub fn new(points: &[&str], arrows: &[(&str, &str)]) -> Result<SpecPoset> {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != pts.len() {
            return Err(Error::InvalidInput("duplicate point names".into()));
        }
        let n = pts.len();
        let idx = |name: &str| -> Result<usize> {
            pts.iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown point {name}")))
        };
        let mut spec = vec![false; n * n];
        for i in 0..n {
            spec[i * n + i] = true;
        }
        for (a, b) in arrows {
            let i = idx(a)?;
            let j = idx(b)?;
            spec[i * n + j] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if spec[i * n + k] && spec[k * n + j] {
                        spec[i * n + j] = true;
                    }
                }
            }
        }
        // T0: antisymmetry
        for i in 0..n {
            for j in 0..n {
                if i != j && spec[i * n + j] && spec[j * n + i] {
                    return Err(Error::InvalidInput(format!(
                        "not T0: {} and {} specialize to each other",
                        pts[i], pts[j]
                    )));
                }
            }
        }
        Ok(SpecPoset {
            points: pts,
            specializes: spec,
            explicit_opens: None,
        })
    }

    pub fn discrete(points: &[&str]) -> Result<SpecPoset> {
        SpecPoset::new(points, &[])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    /// `j` in the closure of `i`.
    pub fn specializes_to(&self, i: usize, j: usize) -> bool {
        self.specializes[i * self.len() + j]
    }

    /// A set is closed iff it is specialization-closed (order topology).
    fn order_closed(&self, set: &BTreeSet<usize>) -> bool {
        for &i in set {
            for j in 0..self.len() {
                if self.specializes_to(i, j) && !set.contains(&j) {
                    return false;
                }
            }
        }
        true
    }

    fn order_open(&self, set: &BTreeSet<usize>) -> bool {
        let complement: BTreeSet<usize> =
            (0..self.len()).filter(|i| !set.contains(i)).collect();
        self.order_closed(&complement)
    }

    pub fn is_open(&self, set: &BTreeSet<usize>) -> bool {
        match &self.explicit_opens {
            Some(opens) => opens.contains(set),
            None => self.order_open(set),
        }
    }

    /// All open sets, enumerated exactly (requires `len() <= 16`).
    pub fn all_opens(&self) -> Result<Vec<BTreeSet<usize>>> {
        if let Some(o) = &self.explicit_opens {
            return Ok(o.clone());
        }
        let n = self.len();
        if n > 16 {
            return Err(Error::BoundExceeded {
                reason: "exact open enumeration is capped at 16 points".into(),
                cap: 16,
            });
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let set: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if self.order_open(&set) {
                out.push(set);
            }
        }
        Ok(out)
    }

    /// Closed subsets are down-sets; a subset with the induced order is a
    /// closed embedding iff it is specialization-closed.
    pub fn subset_is_closed(&self, set: &BTreeSet<usize>) -> bool {
        self.order_closed(set)
    }
}

/// A monotone (= continuous, for order topologies) map of posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetMap {
    pub source: SpecPoset,
    pub target: SpecPoset,
    pub images: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: &SpecPoset, target: &SpecPoset, images: Vec<usize>) -> Result<PosetMap> {
        if images.len() != source.len() {
            return Err(Error::InvalidInput("map must assign every point".into()));
        }
        for &im in &images {
            if im >= target.len() {
                return Err(Error::InvalidInput("image out of range".into()));
            }
        }
        let map = PosetMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        if !map.is_monotone() {
            return Err(Error::NotContinuous(
                "map does not preserve specialization".into(),
            ));
        }
        Ok(map)
    }

    pub fn by_names(source: &SpecPoset, target: &SpecPoset, pairs: &[(&str, &str)]) -> Result<PosetMap> {
        let mut images = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let i = source
                .index_of(a)
                .ok_or_else(|| Error::InvalidInput(format!("unknown source point {a}")))?;
            let j = target
                .index_of(b)
                .ok_or_else(|| Error::InvalidInput(format!("unknown target point {b}")))?;
            images[i] = j;
        }
        if images.iter().any(|&i| i == usize::MAX) {
            return Err(Error::InvalidInput("map must assign every point".into()));
        }
        PosetMap::new(source, target, images)
    }

    fn is_monotone(&self) -> bool {
        let n = self.source.len();
        for i in 0..n {
            for j in 0..n {
                if self.source.specializes_to(i, j)
                    && !self
                        .target
                        .specializes_to(self.images[i], self.images[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of a topological pushout: the quotient space with its true
/// quotient topology, the two structure maps, and the certificates.
#[derive(Debug, Clone)]
pub struct PushoutTopReport {
    pub space: SpecPoset,
    /// image of each Y point in the quotient
    pub from_y: Vec<usize>,
    /// image of each Z point in the quotient
    pub from_z: Vec<usize>,
    /// `|X| = image(Y) ⊔ image(Z ∖ T)` exactly
    pub partition_certified: bool,
    /// `Y → X` closed embedding, `Z ∖ T → X` open embedding
    pub y_closed_embedding: bool,
    pub complement_open_embedding: bool,
    /// whether the quotient topology coincides with the order topology of
    /// the induced specialization preorder
    pub quotient_equals_order_topology: bool,
    /// false when the point count exceeded the exact-enumeration cap and
    /// only the order topology was computed
    pub quotient_check_exact: bool,
}

/// Computes the pushout `Y ⊔_T Z` with the true quotient topology.
///
/// `f: T → Y` must be continuous and `g: T ↪ Z` a closed embedding (an
/// injective order-embedding with specialization-closed image). Points of
/// the quotient: `Y ⊔ (Z ∖ T)`; a set is open iff both preimages are open.
pub fn topological_pushout(f: &PosetMap, g: &PosetMap) -> Result<PushoutTopReport> {
    if f.source != g.source {
        return Err(Error::MixedContext("f and g must share their source T".into()));
    }
    let t = &f.source;
    let y = &f.target;
    let z = &g.target;
    // g must be injective, an order embedding, with closed image
    let mut g_image: BTreeSet<usize> = BTreeSet::new();
    for &im in &g.images {
        if !g_image.insert(im) {
            return Err(Error::NotClosedEmbedding("g is not injective".into()));
        }
    }
    for i in 0..t.len() {
        for j in 0..t.len() {
            let spec_in_z = z.specializes_to(g.images[i], g.images[j]);
            if t.specializes_to(i, j) != spec_in_z {
                return Err(Error::NotClosedEmbedding(
                    "g does not induce the subspace order".into(),
                ));
            }
        }
    }
    if !z.subset_is_closed(&g_image) {
        return Err(Error::NotClosedEmbedding("image of g is not closed".into()));
    }

    // quotient points: all of Y, then Z \ g(T)
    let mut points: Vec<String> = y.points.clone();
    let mut from_z = vec![usize::MAX; z.len()];
    for zi in 0..z.len() {
        if let Some(ti) = g.images.iter().position(|&gi| gi == zi) {
            from_z[zi] = f.images[ti];
        }
    }
    for zi in 0..z.len() {
        if from_z[zi] == usize::MAX {
            points.push(format!("{}", z.points[zi]));
            from_z[zi] = points.len() - 1;
        }
    }
    let from_y: Vec<usize> = (0..y.len()).collect();
    let n = points.len();

    // true quotient topology by exhaustive enumeration
    let exact = n <= 16;
    let mut opens: Vec<BTreeSet<usize>> = Vec::new();
    if exact {
        for mask in 0u32..(1 << n) {
            let set: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let y_pre: BTreeSet<usize> =
                (0..y.len()).filter(|&i| set.contains(&from_y[i])).collect();
            let z_pre: BTreeSet<usize> =
                (0..z.len()).filter(|&i| set.contains(&from_z[i])).collect();
            if y.is_open(&y_pre) && z.is_open(&z_pre) {
                opens.push(set);
            }
        }
    }

    // induced specialization preorder: a ⤳ b iff every open containing b
    // contains a... in specialization terms b ∈ closure({a}) iff every open
    // around b meets {a}; compute from the quotient opens when exact,
    // otherwise from the generating preorder
    let mut spec = vec![false; n * n];
    if exact {
        for a in 0..n {
            for b in 0..n {
                let closure_hit = opens
                    .iter()
                    .all(|o| !o.contains(&b) || o.contains(&a));
                spec[a * n + b] = closure_hit;
            }
        }
    } else {
        for i in 0..n {
            spec[i * n + i] = true;
        }
        for yi in 0..y.len() {
            for yj in 0..y.len() {
                if y.specializes_to(yi, yj) {
                    spec[from_y[yi] * n + from_y[yj]] = true;
                }
            }
        }
        for zi in 0..z.len() {
            for zj in 0..z.len() {
                if z.specializes_to(zi, zj) {
                    spec[from_z[zi] * n + from_z[zj]] = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if spec[i * n + k] && spec[k * n + j] {
                        spec[i * n + j] = true;
                    }
                }
            }
        }
    }

    let space = SpecPoset {
        points,
        specializes: spec,
        explicit_opens: if exact { Some(opens.clone()) } else { None },
    };

    // partition: images of Y and of Z \ T are disjoint and cover X
    let y_img: BTreeSet<usize> = from_y.iter().copied().collect();
    let zt_img: BTreeSet<usize> = (0..z.len())
        .filter(|zi| !g.images.contains(zi))
        .map(|zi| from_z[zi])
        .collect();
    let partition_certified = y_img.is_disjoint(&zt_img)
        && y_img.union(&zt_img).count() == n
        && y_img.len() == y.len();

    // Y -> X closed embedding: injective (it is, by construction), image
    // closed, subspace topology = Y's topology
    let y_closed_embedding = if exact {
        let closed_img = {
            let complement: BTreeSet<usize> =
                (0..n).filter(|i| !y_img.contains(i)).collect();
            opens.contains(&complement)
        };
        let subspace_matches = {
            // opens of the subspace Y-image induced from X equal Y's opens
            let induced: BTreeSet<BTreeSet<usize>> = opens
                .iter()
                .map(|o| {
                    o.iter()
                        .filter(|p| y_img.contains(p))
                        .map(|&p| from_y.iter().position(|&q| q == p).unwrap())
                        .collect::<BTreeSet<usize>>()
                })
                .collect();
            let own: BTreeSet<BTreeSet<usize>> = y.all_opens()?.into_iter().collect();
            induced == own
        };
        closed_img && subspace_matches
    } else {
        true
    };

    // Z \ T -> X open embedding
    let complement_open_embedding = if exact {
        opens.contains(&zt_img) && {
            // subspace topology on the image equals the subspace topology
            // of Z \ T in Z
            let zt_in_z: BTreeSet<usize> =
                (0..z.len()).filter(|zi| !g.images.contains(zi)).collect();
            let z_opens = z.all_opens()?;
            let own: BTreeSet<BTreeSet<usize>> = z_opens
                .iter()
                .map(|o| o.intersection(&zt_in_z).copied().collect())
                .collect();
            let induced: BTreeSet<BTreeSet<usize>> = opens
                .iter()
                .map(|o| {
                    o.iter()
                        .filter(|p| zt_img.contains(p))
                        .map(|&p| from_z.iter().position(|&q| q == p).unwrap())
                        .collect::<BTreeSet<usize>>()
                })
                .collect();
            own == induced
        }
    } else {
        true
    };

    // compare against the order topology of the induced preorder
    let quotient_equals_order_topology = if exact {
        let order_space = SpecPoset {
            points: space.points.clone(),
            specializes: space.specializes.clone(),
            explicit_opens: None,
        };
        let order_opens: BTreeSet<BTreeSet<usize>> =
            order_space.all_opens()?.into_iter().collect();
        let quot: BTreeSet<BTreeSet<usize>> = opens.iter().cloned().collect();
        order_opens == quot
    } else {
        true
    };

    Ok(PushoutTopReport {
        space,
        from_y,
        from_z,
        partition_certified,
        y_closed_embedding,
        complement_open_embedding,
        quotient_equals_order_topology,
        quotient_check_exact: exact,
    })
}

/// All posets on at most `max_points` points, up to isomorphism; the brute
/// force test family for the universal property.
pub fn poset_family_up_to(max_points: usize) -> Vec<SpecPoset> {
    let mut out: Vec<SpecPoset> = Vec::new();
    for n in 1..=max_points {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let m = pairs.len();
        'mask: for mask in 0u32..(1 << m) {
            let mut spec = vec![false; n * n];
            for i in 0..n {
                spec[i * n + i] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    spec[i * n + j] = true;
                }
            }
            // transitive?
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if spec[i * n + k] && spec[k * n + j] && !spec[i * n + j] {
                            continue 'mask;
                        }
                    }
                }
            }
            // antisymmetric?
            for i in 0..n {
                for j in 0..n {
                    if i != j && spec[i * n + j] && spec[j * n + i] {
                        continue 'mask;
                    }
                }
            }
            let candidate = SpecPoset {
                points: (0..n).map(|i| format!("w{i}")).collect(),
                specializes: spec,
                explicit_opens: None,
            };
            // dedup up to isomorphism by permutation search
            if !out
                .iter()
                .any(|p| p.len() == n && posets_isomorphic(p, &candidate))
            {
                out.push(candidate);
            }
        }
    }
    out
}

fn posets_isomorphic(a: &SpecPoset, b: &SpecPoset) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ok = (0..n).all(|i| {
            (0..n).all(|j| a.specializes_to(i, j) == b.specializes_to(perm[i], perm[j]))
        });
        if ok {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Enumerates monotone maps from a poset into a test space.
fn monotone_maps(source: &SpecPoset, target: &SpecPoset) -> Vec<Vec<usize>> {
    let n = source.len();
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    fn rec(
        source: &SpecPoset,
        target: &SpecPoset,
        pos: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = source.len();
        if pos == n {
            out.push(assignment.clone());
            return;
        }
        't: for img in 0..target.len() {
            for p in 0..pos {
                if source.specializes_to(p, pos)
                    && !target.specializes_to(assignment[p], img)
                {
                    continue 't;
                }
                if source.specializes_to(pos, p)
                    && !target.specializes_to(img, assignment[p])
                {
                    continue 't;
                }
            }
            assignment[pos] = img;
            rec(source, target, pos + 1, assignment, out);
        }
    }
    if target.is_empty() {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(source, target, 0, &mut assignment, &mut out);
    out
}

/// Brute-force universal property: for every pair of continuous maps into
/// every test space that agree on `T`, exactly one continuous factoring map
/// exists from the pushout.
pub fn verify_universal_property(
    f: &PosetMap,
    g: &PosetMap,
    report: &PushoutTopReport,
    test_family: &[SpecPoset],
) -> Result<bool> {
    let y = &f.target;
    let z = &g.target;
    let t = &f.source;
    for w in test_family {
        let w_opens = w.all_opens()?;
        let maps_y = monotone_maps(y, w);
        let maps_z = monotone_maps(z, w);
        for my in &maps_y {
            for mz in &maps_z {
                // agree on T?
                let agree = (0..t.len()).all(|ti| my[f.images[ti]] == mz[g.images[ti]]);
                if !agree {
                    continue;
                }
                // the set-level factoring map is forced by surjectivity
                let n = report.space.len();
                let mut h = vec![usize::MAX; n];
                let mut consistent = true;
                for yi in 0..y.len() {
                    let xp = report.from_y[yi];
                    if h[xp] == usize::MAX {
                        h[xp] = my[yi];
                    } else if h[xp] != my[yi] {
                        consistent = false;
                    }
                }
                for zi in 0..z.len() {
                    let xp = report.from_z[zi];
                    if h[xp] == usize::MAX {
                        h[xp] = mz[zi];
                    } else if h[xp] != mz[zi] {
                        consistent = false;
                    }
                }
                if !consistent || h.iter().any(|&v| v == usize::MAX) {
                    return Ok(false);
                }
                // the factoring map must be continuous for the quotient
                // topology (this is exactly what the quotient guarantees)
                for o in &w_opens {
                    let pre: BTreeSet<usize> =
                        (0..n).filter(|&i| o.contains(&h[i])).collect();
                    if !report.space.is_open(&pre) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// A point of a zero-dimensional spectrum: its defining ideal and residue
/// field degree.
#[derive(Debug, Clone)]
pub struct SpecPoint {
    pub name: String,
    pub ideal_gens: Vec<MPoly>,
    pub residue_degree: usize,
}

/// Output of [`spec_points_zero_dim`].
#[derive(Debug, Clone)]
pub struct ZeroDimSpec {
    pub points: Vec<SpecPoint>,
    pub poset: SpecPoset,
    /// false when an irreducible factor of degree > 1 was met over `QQ`: the
    /// emitted point may be a cluster of conjugate points
    pub factorization_complete: bool,
}

/// Enumerates the maximal ideals of a finite-dimensional presented ring by
/// univariate elimination and factorization per variable.
pub fn spec_points_zero_dim(r: &PresentedRing, limits: &Limits) -> Result<ZeroDimSpec> {
    // finite-dimensionality: the staircase must contain a pure power of
    // every variable
    let basis = r.ideal().groebner(&MonomialOrder::Grevlex, limits)?;
    let n = r.ctx().nvars();
    for v in 0..n {
        let has_pure_power = basis.iter().any(|g| {
            let (e, _) = g.leading(&MonomialOrder::Grevlex).unwrap();
            e[v] > 0 && e.iter().enumerate().all(|(i, &x)| i == v || x == 0)
        });
        if !has_pure_power && !basis.iter().any(|g| g.is_one()) {
            return Err(Error::NotZeroDimensional(format!(
                "no pure power of {} in the staircase",
                r.vars()[v]
            )));
        }
    }

    let mut complete = true;
    let mut leaves: Vec<Vec<MPoly>> = vec![r.ideal().gens().to_vec()];
    for v in 0..n {
        let mut next: Vec<Vec<MPoly>> = Vec::new();
        for leaf in &leaves {
            let handle = IdealHandle::new(r.ctx(), leaf.clone())?;
            if handle.is_unit_ideal(limits)? {
                continue;
            }
            // minimal polynomial of variable v modulo the leaf ideal
            let drop: Vec<usize> = (0..n).filter(|&i| i != v).collect();
            let elim = handle.eliminate(&drop, limits)?;
            let uni = elim
                .gens()
                .iter()
                .min_by_key(|g| g.degree_in(v))
                .cloned()
                .ok_or_else(|| {
                    Error::NotZeroDimensional(format!(
                        "variable {} is free modulo the ideal",
                        r.vars()[v]
                    ))
                })?;
            let poly = to_unipoly(&uni, v, r)?;
            let factors = distinct_irreducible_factors(&poly)?;
            for fac in factors {
                if fac.degree() > 1 {
                    complete = false;
                }
                let fac_mpoly = from_unipoly(&fac, v, r);
                let mut gens = leaf.clone();
                gens.push(fac_mpoly);
                next.push(gens);
            }
        }
        leaves = next;
    }

    let mut points = Vec::new();
    for (i, leaf) in leaves.iter().enumerate() {
        let handle = IdealHandle::new(r.ctx(), leaf.clone())?;
        if handle.is_unit_ideal(limits)? {
            continue;
        }
        // residue degree = k-dimension of the quotient
        let gb = handle.groebner(&MonomialOrder::Grevlex, limits)?;
        let dim = staircase_dimension(&gb, n)?;
        let reduced: Vec<MPoly> = gb.iter().cloned().collect();
        points.push(SpecPoint {
            name: format!("m{i}"),
            ideal_gens: reduced,
            residue_degree: dim,
        });
    }
    let names: Vec<String> = points.iter().map(|p| p.name.clone()).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let poset = SpecPoset::discrete(&name_refs)?;
    Ok(ZeroDimSpec {
        points,
        poset,
        factorization_complete: complete,
    })
}

fn staircase_dimension(gb: &[MPoly], n: usize) -> Result<usize> {
    // count monomials under the staircase by bounded enumeration
    let caps: Vec<u32> = (0..n)
        .map(|v| {
            gb.iter()
                .filter_map(|g| {
                    let (e, _) = g.leading(&MonomialOrder::Grevlex).unwrap();
                    if e.iter().enumerate().all(|(i, &x)| i == v || x == 0) {
                        Some(e[v])
                    } else {
                        None
                    }
                })
                .min()
                .unwrap_or(0)
        })
        .collect();
    if caps.iter().any(|&c| c == 0) && n > 0 {
        return Err(Error::NotZeroDimensional("missing pure power".into()));
    }
    let mut count = 0usize;
    let mut expo = vec![0u32; n];
    loop {
        let under = !gb.iter().any(|g| {
            let (e, _) = g.leading(&MonomialOrder::Grevlex).unwrap();
            e.iter().zip(&expo).all(|(a, b)| a <= b)
        });
        if under {
            count += 1;
        }
        // odometer bounded by caps
        let mut i = 0;
        loop {
            if i == n {
                return Ok(count);
            }
            expo[i] += 1;
            if expo[i] < caps[i] {
                break;
            }
            expo[i] = 0;
            i += 1;
        }
    }
}

fn to_unipoly(p: &MPoly, var: usize, r: &PresentedRing) -> Result<UniPoly> {
    let mut coeffs = vec![r.field().zero(); p.degree_in(var) as usize + 1];
    for (e, c) in p.terms() {
        for (i, &x) in e.iter().enumerate() {
            if i != var && x > 0 {
                return Err(Error::InvalidInput(
                    "eliminant is not univariate".into(),
                ));
            }
        }
        coeffs[e[var] as usize] = c.clone();
    }
    Ok(UniPoly::new(r.field(), coeffs))
}

fn from_unipoly(p: &UniPoly, var: usize, r: &PresentedRing) -> MPoly {
    let mut acc = MPoly::zero(r.ctx());
    for (i, c) in p.coeffs.iter().enumerate() {
        let mut e = vec![0u32; r.ctx().nvars()];
        e[var] = i as u32;
        acc = acc.add(&MPoly::monomial(r.ctx(), e, c.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldTag;

    #[test]
    fn sierpinski_from_nodal_model() {
        // Z = {eta, p1, p2} with eta ⤳ p1, p2; T = {p1, p2}; Y = {y}
        let z = SpecPoset::new(&["eta", "p1", "p2"], &[("eta", "p1"), ("eta", "p2")]).unwrap();
        let t = SpecPoset::discrete(&["p1", "p2"]).unwrap();
        let y = SpecPoset::discrete(&["y"]).unwrap();
        let f = PosetMap::by_names(&t, &y, &[("p1", "y"), ("p2", "y")]).unwrap();
        let g = PosetMap::by_names(&t, &z, &[("p1", "p1"), ("p2", "p2")]).unwrap();
        let rep = topological_pushout(&f, &g).unwrap();
        assert_eq!(rep.space.len(), 2);
        assert!(rep.partition_certified);
        assert!(rep.y_closed_embedding);
        assert!(rep.complement_open_embedding);
        assert!(rep.quotient_equals_order_topology);
        // eta ⤳ y in the quotient
        let eta = rep.space.index_of("eta").unwrap();
        let yy = rep.space.index_of("y").unwrap();
        assert!(rep.space.specializes_to(eta, yy));
        assert!(!rep.space.specializes_to(yy, eta));
        // universal property against all test spaces on <= 3 points
        let family = poset_family_up_to(3);
        assert!(verify_universal_property(&f, &g, &rep, &family).unwrap());
    }

    #[test]
    fn empty_t_gives_disjoint_union() {
        let y = SpecPoset::new(&["a", "b"], &[("a", "b")]).unwrap();
        let z = SpecPoset::discrete(&["c"]).unwrap();
        let t = SpecPoset::discrete(&[]).unwrap();
        let f = PosetMap::new(&t, &y, vec![]).unwrap();
        let g = PosetMap::new(&t, &z, vec![]).unwrap();
        let rep = topological_pushout(&f, &g).unwrap();
        assert_eq!(rep.space.len(), 3);
        assert!(rep.partition_certified);
        assert!(rep.quotient_equals_order_topology);
    }

    #[test]
    fn identity_f_recovers_z() {
        // Y = T, f = id: X ≅ Z
        let z = SpecPoset::new(&["eta", "s"], &[("eta", "s")]).unwrap();
        let t = SpecPoset::discrete(&["s"]).unwrap();
        let g = PosetMap::by_names(&t, &z, &[("s", "s")]).unwrap();
        let f = PosetMap::by_names(&t, &t, &[("s", "s")]).unwrap();
        let rep = topological_pushout(&f, &g).unwrap();
        assert_eq!(rep.space.len(), 2);
        assert!(rep.partition_certified);
        let family = poset_family_up_to(3);
        assert!(verify_universal_property(&f, &g, &rep, &family).unwrap());
    }

    #[test]
    fn non_closed_embedding_rejected() {
        // T = {eta} embedded as the generic point of Z: not closed
        let z = SpecPoset::new(&["eta", "s"], &[("eta", "s")]).unwrap();
        let t = SpecPoset::discrete(&["eta"]).unwrap();
        let y = SpecPoset::discrete(&["y"]).unwrap();
        let g = PosetMap::by_names(&t, &z, &[("eta", "eta")]).unwrap();
        let f = PosetMap::by_names(&t, &y, &[("eta", "y")]).unwrap();
        assert!(matches!(
            topological_pushout(&f, &g),
            Err(Error::NotClosedEmbedding(_))
        ));
    }

    #[test]
    fn chain_lifting_shadow() {
        // composition-style pushout: T open in Y; any specialization chain
        // y ⪯ t ⪯ z with y in Y, z in Z has its middle point in T
        // model: Y = {t0, y0} with t0 ⤳ y0, T = {t0} (open in Y),
        // Z = {z0, t0'} with z0 ⤳ t0'
        let y = SpecPoset::new(&["t0", "y0"], &[("t0", "y0")]).unwrap();
        let t = SpecPoset::discrete(&["t0"]).unwrap();
        let z = SpecPoset::new(&["z0", "t0"], &[("z0", "t0")]).unwrap();
        let f = PosetMap::by_names(&t, &y, &[("t0", "t0")]).unwrap();
        let g = PosetMap::by_names(&t, &z, &[("t0", "t0")]).unwrap();
        let rep = topological_pushout(&f, &g).unwrap();
        // z0 ⤳ t0 ⤳ y0 in the pushout
        let z0 = rep.space.index_of("z0").unwrap();
        let t0 = rep.space.index_of("t0").unwrap();
        let y0 = rep.space.index_of("y0").unwrap();
        assert!(rep.space.specializes_to(z0, t0));
        assert!(rep.space.specializes_to(t0, y0));
        assert!(rep.space.specializes_to(z0, y0));
        // the middle of the chain z0 ⤳ ? ⤳ y0 is realizable in T
        let middles: Vec<usize> = (0..rep.space.len())
            .filter(|&m| rep.space.specializes_to(z0, m) && rep.space.specializes_to(m, y0))
            .filter(|&m| m != z0 && m != y0)
            .collect();
        assert_eq!(middles, vec![t0]);
    }

    #[test]
    fn test_family_size() {
        // 1 + 2 + 5 + 16 posets up to isomorphism on 1..=4 points
        let family = poset_family_up_to(4);
        assert_eq!(family.len(), 1 + 2 + 5 + 16);
    }

    #[test]
    fn spec_points_of_t_squared_minus_one() {
        let r = PresentedRing::parse_new(FieldTag::Rational, &["t"], &["t^2 - 1"]).unwrap();
        let spec = spec_points_zero_dim(&r, &Limits::default()).unwrap();
        assert!(spec.factorization_complete);
        assert_eq!(spec.points.len(), 2);
        let mut ideals: Vec<String> = spec
            .points
            .iter()
            .map(|p| p.ideal_gens[0].to_string())
            .collect();
        ideals.sort();
        assert_eq!(ideals, vec!["t + 1".to_string(), "t - 1".to_string()]);
        for p in &spec.points {
            assert_eq!(p.residue_degree, 1);
        }
    }

    #[test]
    fn spec_points_of_a_field_and_nilpotents() {
        let field_like = PresentedRing::ground(FieldTag::Rational);
        let spec = spec_points_zero_dim(&field_like, &Limits::default()).unwrap();
        assert_eq!(spec.points.len(), 1);

        // nilpotents are invisible: k[t]/(t^2) has one point (t)
        let r = PresentedRing::parse_new(FieldTag::Rational, &["t"], &["t^2"]).unwrap();
        let spec = spec_points_zero_dim(&r, &Limits::default()).unwrap();
        assert_eq!(spec.points.len(), 1);
        assert_eq!(spec.points[0].ideal_gens[0].to_string(), "t");
    }

    #[test]
    fn spec_points_irreducible_quadratic_flagged() {
        let r = PresentedRing::parse_new(FieldTag::Rational, &["t"], &["t^2 + 1"]).unwrap();
        let spec = spec_points_zero_dim(&r, &Limits::default()).unwrap();
        assert!(!spec.factorization_complete);
        assert_eq!(spec.points.len(), 1);
        assert_eq!(spec.points[0].residue_degree, 2);
    }

    #[test]
    fn non_zero_dimensional_rejected() {
        let r = PresentedRing::free(FieldTag::Rational, &["t"]);
        assert!(matches!(
            spec_points_zero_dim(&r, &Limits::default()),
            Err(Error::NotZeroDimensional(_))
        ));
    }

    #[test]
    fn two_variable_spectrum() {
        // k[u, v]/(u^2 - u, v^3 - v): 2 x 3 = 6 points
        let r = PresentedRing::parse_new(
            FieldTag::Rational,
            &["u", "v"],
            &["u^2 - u", "v^3 - v"],
        )
        .unwrap();
        let spec = spec_points_zero_dim(&r, &Limits::default()).unwrap();
        assert_eq!(spec.points.len(), 6);
        assert!(spec.factorization_complete);
    }
}
