//! Shared example data: the squares, modules, and posets exercised by the
//! test suites, the acceptance gate, and the book.

use crate::error::Result;
use crate::limits::Limits;
use crate::ring::{PresentedRing, RingHom};
use crate::scalar::FieldTag;
use crate::square::ConductorSquare;

/// The node: pinch `{t = ±1} ⊂ Spec k[t]` to a point.
///
/// `B = k`, `C = k[t]`, `K = k[t]/(t^2 - 1)`, `π: t ↦ t`. The pushout ring
/// is `k[x, y]/(y^2 - x^3 - x^2)` with `x = t^2 - 1`, `y = t^3 - t`.
pub fn nodal_square(field: FieldTag, limits: &Limits) -> Result<ConductorSquare> {
    let b = PresentedRing::ground(field);
    let c = PresentedRing::free(field, &["t"]);
    let k = PresentedRing::parse_new(field, &["t"], &["t^2 - 1"])?;
    let beta = RingHom::validate(&b, &k, vec![], limits)?;
    let pi = RingHom::parse_validate(&c, &k, &["t"], limits)?;
    ConductorSquare::build(&beta, &pi, limits)
}

/// The composition with a Laurent corner: `B = k[x]`, `K = k[x^{±1}]`,
/// `C = k[x^{±1}, y]`, `π: y ↦ 0`. Laurent variables are encoded by the
/// extra generator `xb` with the relation `x·xb = 1`.
///
/// The intrinsic pushout ring `{f : f(x, 0) ∈ k[x]}` is not noetherian, so
/// presentation searches must end in `BoundExceeded`.
pub fn laurent_square(field: FieldTag, limits: &Limits) -> Result<ConductorSquare> {
    let b = PresentedRing::free(field, &["x"]);
    let k = PresentedRing::parse_new(field, &["x", "xb"], &["x*xb - 1"])?;
    let c = PresentedRing::parse_new(field, &["x", "xb", "y"], &["x*xb - 1"])?;
    let beta = RingHom::parse_validate(&b, &k, &["x"], limits)?;
    let pi = RingHom::parse_validate(&c, &k, &["x", "xb", "0"], limits)?;
    ConductorSquare::build(&beta, &pi, limits)
}

/// Identity gluing: `π = id_C`, so `A ≅ B` through `β`.
pub fn identity_square(beta: &RingHom, limits: &Limits) -> Result<ConductorSquare> {
    let pi = RingHom::identity(beta.target(), limits)?;
    ConductorSquare::build(beta, &pi, limits)
}

/// Pinches the distinct rational points `points ⊂ Spec k[t]` to a single
/// point: `B = k`, `K = k[t]/Π(t - a_i)`.
pub fn pinch_to_point_square(
    field: FieldTag,
    points: &[i64],
    limits: &Limits,
) -> Result<ConductorSquare> {
    let b = PresentedRing::ground(field);
    let c = PresentedRing::free(field, &["t"]);
    let k_ctx = crate::poly::Context::new(field, &["t"]);
    let t = crate::poly::MPoly::var(&k_ctx, "t");
    let mut f = crate::poly::MPoly::one(&k_ctx);
    for &a in points {
        f = f.mul(&t.sub(&crate::poly::MPoly::from_i64(&k_ctx, a)));
    }
    let k = PresentedRing::new(k_ctx, vec![f])?;
    let beta = RingHom::validate(&b, &k, vec![], limits)?;
    let pi = RingHom::parse_validate(&c, &k, &["t"], limits)?;
    ConductorSquare::build(&beta, &pi, limits)
}

/// Pinches points of `Spec k[t]` according to a partition into groups; each
/// group is glued to one point of `B`.
///
/// `B` is presented with one idempotent-style generator per non-initial
/// group; `β` sends it to the interpolation idempotent of that group.
pub fn pinch_partition_square(
    field: FieldTag,
    groups: &[Vec<i64>],
    limits: &Limits,
) -> Result<ConductorSquare> {
    let all: Vec<i64> = groups.iter().flatten().copied().collect();
    let k_ctx = crate::poly::Context::new(field, &["t"]);
    let t = crate::poly::MPoly::var(&k_ctx, "t");
    let mut f = crate::poly::MPoly::one(&k_ctx);
    for &a in &all {
        f = f.mul(&t.sub(&crate::poly::MPoly::from_i64(&k_ctx, a)));
    }
    let k = PresentedRing::new(k_ctx.clone(), vec![f])?;

    // Lagrange idempotent of a group: 1 on its points, 0 elsewhere
    let idempotent = |group: &[i64]| -> crate::poly::MPoly {
        let mut acc = crate::poly::MPoly::zero(&k_ctx);
        for &a in group {
            let mut li = crate::poly::MPoly::one(&k_ctx);
            for &b in &all {
                if b == a {
                    continue;
                }
                let num = t.sub(&crate::poly::MPoly::from_i64(&k_ctx, b));
                let den = field.from_i64(a - b).inv().expect("distinct points");
                li = li.mul(&num.mul_scalar(&den));
            }
            acc = acc.add(&li);
        }
        acc
    };

    let n_gens = groups.len().saturating_sub(1);
    let names: Vec<String> = (1..=n_gens).map(|i| format!("u{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let b_ctx = crate::poly::Context::new(field, &name_refs);
    let mut b_rels = Vec::new();
    for i in 0..n_gens {
        let u = crate::poly::MPoly::var_index(&b_ctx, i);
        b_rels.push(u.mul(&u).sub(&u));
        for j in 0..i {
            let v = crate::poly::MPoly::var_index(&b_ctx, j);
            b_rels.push(u.mul(&v));
        }
    }
    let b = PresentedRing::new(b_ctx, b_rels)?;
    let beta_images: Vec<crate::poly::MPoly> =
        groups.iter().skip(1).map(|g| idempotent(g)).collect();
    let beta = RingHom::validate(&b, &k, beta_images, limits)?;

    let c = PresentedRing::free(field, &["t"]);
    let pi = RingHom::parse_validate(&c, &k, &["t"], limits)?;
    ConductorSquare::build(&beta, &pi, limits)
}
