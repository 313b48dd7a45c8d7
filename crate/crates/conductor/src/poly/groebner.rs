//! Buchberger's algorithm, multivariate division, and reduced Gröbner bases.
//!
//! The engine is deliberately plain: normal selection strategy with the
//! product criterion, then full autoreduction. Output is the unique reduced
//! basis, sorted descending by leading monomial, so results are reproducible
//! bit for bit across runs.

use std::cmp::Ordering;

use super::order::MonomialOrder;
use super::{expo_div, expo_divides, expo_lcm, expo_mul, MPoly};
use crate::error::Result;
use crate::limits::Limits;

/// Remainder of `p` under multivariate division by `basis`.
///
/// Reduction always picks the first basis element whose leading monomial
/// divides the current term, so the result is deterministic for a fixed
/// basis ordering. Against a Gröbner basis this is the unique normal form.
pub fn reduce(p: &MPoly, basis: &[MPoly], order: &MonomialOrder) -> MPoly {
    let live: Vec<&MPoly> = basis.iter().filter(|b| !b.is_zero()).collect();
    let leads: Vec<(Vec<u32>, crate::scalar::Scalar)> = live
        .iter()
        .map(|b| {
            let (e, c) = b.leading(order).unwrap();
            (e.clone(), c.clone())
        })
        .collect();
    let mut rem = MPoly::zero(p.ctx());
    let mut work = p.clone();
    'outer: while !work.is_zero() {
        let (le, lc) = {
            let (e, c) = work.leading(order).unwrap();
            (e.clone(), c.clone())
        };
        for (i, (be, bc)) in leads.iter().enumerate() {
            if expo_divides(be, &le) {
                let factor = lc.div(bc);
                let shift = expo_div(&le, be);
                work = work.sub(&live[i].mul_term(&shift, &factor));
                continue 'outer;
            }
        }
        // leading term is irreducible: move it to the remainder
        let t = MPoly::monomial(p.ctx(), le.clone(), lc.clone());
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    rem
}

fn s_poly(f: &MPoly, g: &MPoly, order: &MonomialOrder) -> MPoly {
    let (ef, cf) = f.leading(order).unwrap();
    let (eg, cg) = g.leading(order).unwrap();
    let l = expo_lcm(ef, eg);
    let a = f.mul_term(&expo_div(&l, ef), &cf.inv().unwrap());
    let b = g.mul_term(&expo_div(&l, eg), &cg.inv().unwrap());
    a.sub(&b)
}

/// Computes the unique reduced Gröbner basis of the ideal generated by
/// `gens` for `order`. The zero ideal yields an empty basis; if the ideal is
/// the full ring the basis is `[1]`.
pub fn groebner_basis(
    gens: &[MPoly],
    order: &MonomialOrder,
    limits: &Limits,
) -> Result<Vec<MPoly>> {
    let ctx = match gens.first() {
        None => return Ok(Vec::new()),
        Some(g) => g.ctx().clone(),
    };
    for g in gens {
        gens[0].check_context(g)?;
    }
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.monic(order));
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    basis.sort_by(|a, b| {
        order
            .cmp(a.leading(order).unwrap().0, b.leading(order).unwrap().0)
            .then(cmp_terms(a, b, order))
    });
    basis.dedup();

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }

    let max_basis = 4096usize;
    while let Some(pos) = select_pair(&pairs, &basis, order) {
        let (i, j) = pairs.swap_remove(pos);
        let (ei, _) = basis[i].leading(order).unwrap();
        let (ej, _) = basis[j].leading(order).unwrap();
        // product criterion: coprime leading monomials reduce to zero
        if expo_mul(ei, ej) == expo_lcm(ei, ej) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.total_degree() > limits.degree_bound {
            return Err(limits.exceeded(&format!(
                "Groebner run produced degree {} over variables {:?}",
                r.total_degree(),
                ctx.vars
            )));
        }
        let r = r.monic(order);
        let new_idx = basis.len();
        for k in 0..new_idx {
            pairs.push((k, new_idx));
        }
        basis.push(r);
        if basis.len() > max_basis {
            return Err(limits.exceeded("Groebner basis grew past the element cap"));
        }
    }

    Ok(autoreduce(basis, order))
}

fn cmp_terms(a: &MPoly, b: &MPoly, order: &MonomialOrder) -> Ordering {
    let mut ea: Vec<&Vec<u32>> = a.terms().map(|(e, _)| e).collect();
    let mut eb: Vec<&Vec<u32>> = b.terms().map(|(e, _)| e).collect();
    ea.sort_by(|x, y| order.cmp(y, x));
    eb.sort_by(|x, y| order.cmp(y, x));
    for (x, y) in ea.iter().zip(eb.iter()) {
        match order.cmp(x, y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    ea.len().cmp(&eb.len())
}

/// Normal selection: the pair with the smallest lcm of leading monomials.
fn select_pair(pairs: &[(usize, usize)], basis: &[MPoly], order: &MonomialOrder) -> Option<usize> {
    pairs
        .iter()
        .enumerate()
        .min_by(|(_, (i1, j1)), (_, (i2, j2))| {
            let l1 = expo_lcm(
                basis[*i1].leading(order).unwrap().0,
                basis[*j1].leading(order).unwrap().0,
            );
            let l2 = expo_lcm(
                basis[*i2].leading(order).unwrap().0,
                basis[*j2].leading(order).unwrap().0,
            );
            order.cmp(&l1, &l2).then((i1, j1).cmp(&(i2, j2)))
        })
        .map(|(pos, _)| pos)
}

/// Minimalizes and fully reduces a basis; the result is the reduced basis.
fn autoreduce(mut basis: Vec<MPoly>, order: &MonomialOrder) -> Vec<MPoly> {
    // drop elements whose leading monomial is divisible by another's
    basis.sort_by(|a, b| order.cmp(a.leading(order).unwrap().0, b.leading(order).unwrap().0));
    let mut minimal: Vec<MPoly> = Vec::new();
    for g in &basis {
        let (le, _) = g.leading(order).unwrap();
        if !minimal
            .iter()
            .any(|m| expo_divides(m.leading(order).unwrap().0, le))
        {
            minimal.push(g.clone());
        }
    }
    // reduce each tail against the others until stable
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<MPoly> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, m)| if j != i { Some(m.clone()) } else { None })
                .collect();
            if others.is_empty() {
                continue;
            }
            let r = reduce(&minimal[i], &others, order);
            if r != minimal[i] {
                changed = true;
                if r.is_zero() {
                    minimal.remove(i);
                } else {
                    minimal[i] = r.monic(order);
                }
                break;
            }
        }
        if !changed {
            break;
        }
    }
    // deterministic output ordering: descending by leading monomial
    minimal.sort_by(|a, b| order.cmp(b.leading(order).unwrap().0, a.leading(order).unwrap().0));
    minimal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Context;
    use crate::scalar::FieldTag;
    use std::sync::Arc;

    fn gb(ctx: &Arc<Context>, gens: &[&str], order: MonomialOrder) -> Vec<String> {
        let gens: Vec<MPoly> = gens.iter().map(|s| MPoly::parse(ctx, s).unwrap()).collect();
        groebner_basis(&gens, &order, &Limits::default())
            .unwrap()
            .iter()
            .map(|p| p.render(&order))
            .collect()
    }

    #[test]
    fn zero_ideal_empty_basis() {
        let ctx = Context::new(FieldTag::Rational, &["x"]);
        let z = MPoly::zero(&ctx);
        let out = groebner_basis(&[z], &MonomialOrder::Grevlex, &Limits::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn univariate_gcd_case() {
        // {x^2 - 1, x - 1} generates (x - 1): oracle = Euclidean gcd
        let ctx = Context::new(FieldTag::Rational, &["x"]);
        assert_eq!(gb(&ctx, &["x^2 - 1", "x - 1"], MonomialOrder::Grevlex), vec!["x - 1"]);
    }

    #[test]
    fn lex_elimination_example() {
        // {y - x^2, x*y - 1} with lex y > x: substitution oracle gives x^3 - 1
        let ctx = Context::new(FieldTag::Rational, &["y", "x"]);
        let out = gb(&ctx, &["y - x^2", "x*y - 1"], MonomialOrder::Lex);
        assert_eq!(out, vec!["y - x^2", "x^3 - 1"]);
    }

    #[test]
    fn normal_form_examples() {
        let ctx = Context::new(FieldTag::Rational, &["x", "y"]);
        let order = MonomialOrder::Lex;
        let basis = groebner_basis(
            &[MPoly::parse(&ctx, "x^2 - y").unwrap()],
            &order,
            &Limits::default(),
        )
        .unwrap();
        let nf = reduce(&MPoly::parse(&ctx, "x^2").unwrap(), &basis, &order);
        assert_eq!(nf, MPoly::parse(&ctx, "y").unwrap());

        let basis2 = groebner_basis(
            &[MPoly::parse(&ctx, "x - y").unwrap()],
            &order,
            &Limits::default(),
        )
        .unwrap();
        let nf2 = reduce(&MPoly::parse(&ctx, "x + y").unwrap(), &basis2, &order);
        assert_eq!(nf2, MPoly::parse(&ctx, "2*y").unwrap());
    }

    #[test]
    fn full_ring_detected() {
        let ctx = Context::new(FieldTag::Rational, &["x"]);
        let out = gb(&ctx, &["x", "x - 1"], MonomialOrder::Grevlex);
        assert_eq!(out, vec!["1"]);
    }

    #[test]
    fn degree_cap_aborts() {
        let ctx = Context::new(FieldTag::Rational, &["x", "y"]);
        let gens = vec![
            MPoly::parse(&ctx, "x^5 - y^4").unwrap(),
            MPoly::parse(&ctx, "x*y^3 - x - 1").unwrap(),
        ];
        let tight = Limits::new(3, 8);
        let err = groebner_basis(&gens, &MonomialOrder::Grevlex, &tight).unwrap_err();
        assert!(matches!(err, crate::error::Error::BoundExceeded { .. }));
    }

    #[test]
    fn prime_field_basis() {
        let ctx = Context::new(FieldTag::Prime(5), &["x", "y"]);
        let out = gb(&ctx, &["2*x + y", "y^2"], MonomialOrder::Grevlex);
        // 2x + y monic => x + 3y (2^{-1} = 3 mod 5)
        assert_eq!(out, vec!["y^2", "x + 3*y"]);
    }
}
