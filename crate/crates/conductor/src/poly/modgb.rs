//! Gröbner bases for submodules of free modules, used for syzygies, module
//! membership with explicit witnesses, and kernels of module maps.
//!
//! A module monomial is a pair (position, exponent vector). The order is
//! position-over-term between two blocks of positions: everything in the
//! first `split` positions dominates everything behind them. Within a block,
//! lower position wins ties, and the ring order compares exponents. Running
//! a basis on vectors `(f_i; e_i)` with the original rank as `split` yields
//! membership witnesses and syzygies in one pass.

use std::cmp::Ordering;
use std::sync::Arc;


use super::order::MonomialOrder;
use super::{expo_div, expo_divides, expo_lcm, Context, MPoly};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// An element of a free module `R^rank` with polynomial entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecPoly {
    pub entries: Vec<MPoly>,
}

impl VecPoly {
    pub fn zero(ctx: &Arc<Context>, rank: usize) -> VecPoly {
        VecPoly {
            entries: vec![MPoly::zero(ctx); rank],
        }
    }

    pub fn unit(ctx: &Arc<Context>, rank: usize, pos: usize) -> VecPoly {
        let mut v = VecPoly::zero(ctx, rank);
        v.entries[pos] = MPoly::one(ctx);
        v
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &VecPoly) -> VecPoly {
        VecPoly {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &VecPoly) -> VecPoly {
        VecPoly {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul_term(&self, expo: &[u32], c: &crate::scalar::Scalar) -> VecPoly {
        VecPoly {
            entries: self.entries.iter().map(|p| p.mul_term(expo, c)).collect(),
        }
    }

    pub fn mul_poly(&self, p: &MPoly) -> VecPoly {
        VecPoly {
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.entries.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ModMono {
    pos: usize,
    expo: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct ModuleOrder {
    /// positions `< split` dominate positions `>= split`
    pub split: usize,
    pub ring: MonomialOrder,
}

impl ModuleOrder {
    fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering {
        let ba = a.pos >= self.split;
        let bb = b.pos >= self.split;
        match (ba, bb) {
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            _ => {}
        }
        // lower position index is more significant inside a block
        match a.pos.cmp(&b.pos) {
            Ordering::Less => Ordering::Greater,
            Ordering::Greater => Ordering::Less,
            Ordering::Equal => self.ring.cmp(&a.expo, &b.expo),
        }
    }
}

fn leading(v: &VecPoly, order: &ModuleOrder) -> Option<(ModMono, crate::scalar::Scalar)> {
    let mut best: Option<(ModMono, crate::scalar::Scalar)> = None;
    for (pos, p) in v.entries.iter().enumerate() {
        if let Some((e, c)) = p.leading(&order.ring) {
            let cand = ModMono {
                pos,
                expo: e.clone(),
            };
            match &best {
                None => best = Some((cand, c.clone())),
                Some((bm, _)) => {
                    if order.cmp(&cand, bm) == Ordering::Greater {
                        best = Some((cand, c.clone()));
                    }
                }
            }
        }
    }
    best
}

/// Reduces `v` against `basis`; deterministic for a fixed basis ordering.
pub fn module_reduce(v: &VecPoly, basis: &[VecPoly], order: &ModuleOrder) -> VecPoly {
    let ctx = v.entries[0].ctx().clone();
    let rank = v.rank();
    let live: Vec<&VecPoly> = basis.iter().filter(|b| !b.is_zero()).collect();
    let leads: Vec<(ModMono, crate::scalar::Scalar)> = live
        .iter()
        .map(|b| leading(b, order).unwrap())
        .collect();
    let mut rem = VecPoly::zero(&ctx, rank);
    let mut work = v.clone();
    'outer: while let Some((lm, lc)) = leading(&work, order) {
        for (i, (bm, bc)) in leads.iter().enumerate() {
            if bm.pos == lm.pos && expo_divides(&bm.expo, &lm.expo) {
                let factor = lc.div(bc);
                let shift = expo_div(&lm.expo, &bm.expo);
                work = work.sub(&live[i].mul_term(&shift, &factor));
                continue 'outer;
            }
        }
        // move the irreducible leading term to the remainder
        let mut t = VecPoly::zero(&ctx, rank);
        t.entries[lm.pos] = MPoly::monomial(&ctx, lm.expo.clone(), lc.clone());
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    rem
}

fn normalize(v: &VecPoly, order: &ModuleOrder) -> VecPoly {
    match leading(v, order) {
        None => v.clone(),
        Some((_, c)) => {
            let inv = c.inv().unwrap();
            VecPoly {
                entries: v.entries.iter().map(|p| p.mul_scalar(&inv)).collect(),
            }
        }
    }
}

/// Buchberger for submodules of a free module.
pub fn module_groebner(
    gens: &[VecPoly],
    order: &ModuleOrder,
    limits: &Limits,
) -> Result<Vec<VecPoly>> {
    let mut basis: Vec<VecPoly> = gens
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| normalize(v, order))
        .collect();
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let max_basis = 4096usize;
    while !pairs.is_empty() {
        // smallest lcm first, deterministic tie-break on indices
        let pos = pairs
            .iter()
            .enumerate()
            .min_by(|(_, (i1, j1)), (_, (i2, j2))| {
                let k1 = pair_key(&basis, *i1, *j1, order);
                let k2 = pair_key(&basis, *i2, *j2, order);
                match (k1, k2) {
                    (None, None) => (i1, j1).cmp(&(i2, j2)),
                    (None, _) => Ordering::Less,
                    (_, None) => Ordering::Greater,
                    (Some(a), Some(b)) => order.ring.cmp(&a, &b).then((i1, j1).cmp(&(i2, j2))),
                }
            })
            .map(|(p, _)| p)
            .unwrap();
        let (i, j) = pairs.swap_remove(pos);
        let (mi, ci) = leading(&basis[i], order).unwrap();
        let (mj, cj) = leading(&basis[j], order).unwrap();
        if mi.pos != mj.pos {
            continue;
        }
        let l = expo_lcm(&mi.expo, &mj.expo);
        let a = basis[i].mul_term(&expo_div(&l, &mi.expo), &ci.inv().unwrap());
        let b = basis[j].mul_term(&expo_div(&l, &mj.expo), &cj.inv().unwrap());
        let s = a.sub(&b);
        let r = module_reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.total_degree() > limits.degree_bound {
            return Err(limits.exceeded("module Groebner run exceeded the degree cap"));
        }
        let r = normalize(&r, order);
        let new_idx = basis.len();
        for k in 0..new_idx {
            pairs.push((k, new_idx));
        }
        basis.push(r);
        if basis.len() > max_basis {
            return Err(limits.exceeded("module basis grew past the element cap"));
        }
    }
    // interreduce for canonical output
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let others: Vec<VecPoly> = basis
                .iter()
                .enumerate()
                .filter_map(|(j, m)| if j != i { Some(m.clone()) } else { None })
                .collect();
            if others.is_empty() {
                continue;
            }
            let r = module_reduce(&basis[i], &others, order);
            if r != basis[i] {
                changed = true;
                if r.is_zero() {
                    basis.remove(i);
                } else {
                    basis[i] = normalize(&r, order);
                }
                break;
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by(|a, b| {
        let (ma, _) = leading(a, order).unwrap();
        let (mb, _) = leading(b, order).unwrap();
        order.cmp(&mb, &ma)
    });
    Ok(basis)
}

fn pair_key(basis: &[VecPoly], i: usize, j: usize, order: &ModuleOrder) -> Option<Vec<u32>> {
    let (mi, _) = leading(&basis[i], order)?;
    let (mj, _) = leading(&basis[j], order)?;
    if mi.pos != mj.pos {
        return None;
    }
    Some(expo_lcm(&mi.expo, &mj.expo))
}

/// Columns of the syzygy module of the columns of `cols` (each a VecPoly of
/// common rank `m`): every returned vector `s` satisfies `sum_k s[k] * cols[k] = 0`,
/// and the returned set generates all such relations.
pub fn syzygies(cols: &[VecPoly], limits: &Limits) -> Result<Vec<VecPoly>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let ctx = cols[0].entries[0].ctx().clone();
    let m = cols[0].rank();
    for c in cols {
        if c.rank() != m {
            return Err(Error::InvalidInput("ragged syzygy input".into()));
        }
    }
    let s = cols.len();
    // augmented vectors (f_k ; e_k) in R^(m+s)
    let mut aug: Vec<VecPoly> = Vec::new();
    for (k, col) in cols.iter().enumerate() {
        let mut entries = col.entries.clone();
        for i in 0..s {
            entries.push(if i == k {
                MPoly::one(&ctx)
            } else {
                MPoly::zero(&ctx)
            });
        }
        aug.push(VecPoly { entries });
    }
    let order = ModuleOrder {
        split: m,
        ring: MonomialOrder::Grevlex,
    };
    let basis = module_groebner(&aug, &order, limits)?;
    let mut out = Vec::new();
    for b in basis {
        if b.entries[..m].iter().all(|p| p.is_zero()) {
            out.push(VecPoly {
                entries: b.entries[m..].to_vec(),
            });
        }
    }
    Ok(out)
}

/// If `v` lies in the submodule generated by `gens`, returns coefficients
/// `c` with `v = sum_k c[k] * gens[k]`.
pub fn membership_witness(
    v: &VecPoly,
    gens: &[VecPoly],
    limits: &Limits,
) -> Result<Option<Vec<MPoly>>> {
    if gens.is_empty() {
        return Ok(if v.is_zero() {
            Some(Vec::new())
        } else {
            None
        });
    }
    let ctx = v.entries[0].ctx().clone();
    let m = v.rank();
    let s = gens.len();
    let mut aug: Vec<VecPoly> = Vec::new();
    for (k, col) in gens.iter().enumerate() {
        let mut entries = col.entries.clone();
        for i in 0..s {
            entries.push(if i == k {
                MPoly::one(&ctx)
            } else {
                MPoly::zero(&ctx)
            });
        }
        aug.push(VecPoly { entries });
    }
    let order = ModuleOrder {
        split: m,
        ring: MonomialOrder::Grevlex,
    };
    let basis = module_groebner(&aug, &order, limits)?;
    let mut target = v.entries.clone();
    for _ in 0..s {
        target.push(MPoly::zero(&ctx));
    }
    let red = module_reduce(&VecPoly { entries: target }, &basis, &order);
    if red.entries[..m].iter().all(|p| p.is_zero()) {
        let coeffs: Vec<MPoly> = red.entries[m..].iter().map(|p| p.neg()).collect();
        Ok(Some(coeffs))
    } else {
        Ok(None)
    }
}

/// Ideal membership of `p` in `(gens) ⊆ R` with an explicit cofactor vector.
pub fn ideal_membership_witness(
    p: &MPoly,
    gens: &[MPoly],
    limits: &Limits,
) -> Result<Option<Vec<MPoly>>> {
    let cols: Vec<VecPoly> = gens
        .iter()
        .map(|g| VecPoly {
            entries: vec![g.clone()],
        })
        .collect();
    membership_witness(
        &VecPoly {
            entries: vec![p.clone()],
        },
        &cols,
        limits,
    )
}

/// Syzygies of the columns of an `m x s` matrix given row-major.
pub fn syzygy_matrix(rows: &[Vec<MPoly>], limits: &Limits) -> Result<Vec<Vec<MPoly>>> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let s = rows[0].len();
    for r in rows {
        if r.len() != s {
            return Err(Error::InvalidInput("ragged matrix".into()));
        }
        for e in r {
            rows[0][0].check_context(e)?;
        }
    }
    let cols: Vec<VecPoly> = (0..s)
        .map(|j| VecPoly {
            entries: rows.iter().map(|r| r[j].clone()).collect(),
        })
        .collect();
    let syz = syzygies(&cols, limits)?;
    // columns of the output matrix are the syzygy vectors
    Ok(syz.into_iter().map(|v| v.entries).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldTag;

    #[test]
    fn koszul_syzygy() {
        let ctx = Context::new(FieldTag::Rational, &["x", "y"]);
        let rows = vec![vec![
            MPoly::var(&ctx, "x"),
            MPoly::var(&ctx, "y"),
        ]];
        let syz = syzygy_matrix(&rows, &Limits::default()).unwrap();
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        // s0 * x + s1 * y = 0 and (s0, s1) proportional to (y, -x)
        let combo = s[0]
            .mul(&MPoly::var(&ctx, "x"))
            .add(&s[1].mul(&MPoly::var(&ctx, "y")));
        assert!(combo.is_zero());
        assert!(!s[0].is_zero());
    }

    #[test]
    fn free_columns_have_no_syzygies() {
        let ctx = Context::new(FieldTag::Rational, &["x"]);
        // identity 2x2
        let rows = vec![
            vec![MPoly::one(&ctx), MPoly::zero(&ctx)],
            vec![MPoly::zero(&ctx), MPoly::one(&ctx)],
        ];
        let syz = syzygy_matrix(&rows, &Limits::default()).unwrap();
        assert!(syz.is_empty());
    }

    #[test]
    fn twisted_cubic_column_relation() {
        let ctx = Context::new(FieldTag::Rational, &["t"]);
        let rows = vec![vec![
            MPoly::parse(&ctx, "t^2").unwrap(),
            MPoly::parse(&ctx, "t^3").unwrap(),
        ]];
        let syz = syzygy_matrix(&rows, &Limits::default()).unwrap();
        assert_eq!(syz.len(), 1);
        // direct verification: t * t^2 - 1 * t^3 = 0
        let expect0 = MPoly::var(&ctx, "t");
        let expect1 = MPoly::from_i64(&ctx, -1);
        let s = &syz[0];
        let combo = s[0]
            .mul(&MPoly::parse(&ctx, "t^2").unwrap())
            .add(&s[1].mul(&MPoly::parse(&ctx, "t^3").unwrap()));
        assert!(combo.is_zero());
        // normalized generator is exactly (t, -1)
        assert_eq!(s[0], expect0);
        assert_eq!(s[1], expect1);
    }

    #[test]
    fn membership_with_witness() {
        let ctx = Context::new(FieldTag::Rational, &["x", "y"]);
        let gens = vec![
            MPoly::parse(&ctx, "x^2 - y").unwrap(),
            MPoly::parse(&ctx, "y^2").unwrap(),
        ];
        let p = MPoly::parse(&ctx, "x^4").unwrap();
        // x^4 = (x^2 + y)(x^2 - y) + y^2
        let w = ideal_membership_witness(&p, &gens, &Limits::default())
            .unwrap()
            .expect("member");
        let combo = w[0].mul(&gens[0]).add(&w[1].mul(&gens[1]));
        assert_eq!(combo, p);
        let q = MPoly::parse(&ctx, "x").unwrap();
        assert!(ideal_membership_witness(&q, &gens, &Limits::default())
            .unwrap()
            .is_none());
    }
}
