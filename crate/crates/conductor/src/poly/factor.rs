//! Univariate factorization over `QQ` (rational roots + Kronecker) and `F_p`
//! (squarefree + distinct-degree + equal-degree splitting).
//!
//! Only the distinct irreducible factors of the radical are produced, which
//! is what zero-dimensional spectrum enumeration needs. Degrees are desk
//! scale; searches carry explicit budgets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{FieldTag, Scalar};

/// Dense univariate polynomial, coefficients low to high, normalized (no
/// trailing zeros).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub field: FieldTag,
    pub coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: FieldTag, mut coeffs: Vec<Scalar>) -> UniPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: FieldTag) -> UniPoly {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: FieldTag, c: Scalar) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn x(field: FieldTag) -> UniPoly {
        UniPoly::new(field, vec![field.zero(), field.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().unwrap();
        UniPoly::new(
            self.field,
            self.coeffs.iter().map(|c| c.mul(&inv)).collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero());
            let b = other
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(|| self.field.zero());
            out.push(a.add(&b));
        }
        UniPoly::new(self.field, out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(self.field, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divmod(&self, div: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![self.field.zero(); self.coeffs.len().max(1)];
        let dlc_inv = div.lc().inv().unwrap();
        while !rem.is_zero() && rem.degree() >= div.degree() {
            let shift = rem.degree() - div.degree();
            let c = rem.lc().mul(&dlc_inv);
            quo[shift] = quo[shift].add(&c);
            let mut sub = vec![self.field.zero(); shift];
            sub.extend(div.coeffs.iter().map(|a| a.mul(&c)));
            rem = rem.sub(&UniPoly::new(self.field, sub));
        }
        (UniPoly::new(self.field, quo), rem)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).1.is_zero()
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(self.field);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.field.from_i64(i as i64)))
            .collect();
        UniPoly::new(self.field, out)
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` by square and multiply.
    pub fn powmod(&self, e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.divmod(m).1;
        let mut acc = UniPoly::constant(self.field, self.field.one());
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divmod(m).1;
            }
            base = base.mul(&base).divmod(m).1;
            e >>= 1;
        }
        acc
    }
}

/// Distinct irreducible monic factors of the radical of `f`.
///
/// Over `QQ`, factors of degree > 1 may remain unsplit only if the Kronecker
/// budget is exhausted, in which case `BoundExceeded` is raised; within the
/// budget the factorization is complete.
pub fn distinct_irreducible_factors(f: &UniPoly) -> Result<Vec<UniPoly>> {
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    match f.field {
        FieldTag::Rational => factor_qq(f),
        FieldTag::Prime(p) => factor_fp(f, p),
    }
}

// ---------------------------------------------------------------- F_p case

fn factor_fp(f: &UniPoly, p: u32) -> Result<Vec<UniPoly>> {
    let mut radical = squarefree_radical_fp(f, p);
    let mut factors: Vec<UniPoly> = Vec::new();
    // distinct-degree decomposition
    let mut d = 1u32;
    let x = UniPoly::x(f.field);
    let mut h = x.clone(); // x^(p^d) mod radical, maintained incrementally
    while radical.degree() >= 1 {
        if d > radical.degree() as u32 {
            break;
        }
        h = frobenius_power(&h, p, &radical);
        let diff = h.sub(&x).divmod(&radical).1;
        let g = if diff.is_zero() {
            radical.clone()
        } else {
            radical.gcd(&diff)
        };
        if g.degree() >= 1 {
            factors.extend(equal_degree_split(&g, d as usize, p)?);
            radical = radical.divmod(&g).0.monic();
            h = h.divmod(&radical).1;
        }
        d += 1;
    }
    if radical.degree() >= 1 {
        factors.push(radical.monic());
    }
    factors.sort_by_key(sort_key);
    factors.dedup();
    Ok(factors)
}

fn frobenius_power(h: &UniPoly, p: u32, m: &UniPoly) -> UniPoly {
    // h(x) -> h(x)^p mod m
    h.powmod(p as u64, m)
}

fn squarefree_radical_fp(f: &UniPoly, p: u32) -> UniPoly {
    let f = f.monic();
    if f.degree() == 0 {
        return f;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p) = (g*(x))^p over the prime field
        let mut coeffs = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate() {
            if i % (p as usize) == 0 {
                coeffs.push(c.clone());
            } else {
                debug_assert!(c.is_zero());
            }
        }
        return squarefree_radical_fp(&UniPoly::new(f.field, coeffs), p);
    }
    let g = f.gcd(&d);
    let sqf = f.divmod(&g).0.monic();
    if g.degree() == 0 {
        sqf
    } else {
        // radical(f) = sqf * (radical(g) / gcd) — recompute from scratch
        let rest = squarefree_radical_fp(&g, p);
        let extra = rest.divmod(&rest.gcd(&sqf)).0;
        sqf.mul(&extra).monic()
    }
}

/// Splits a product of distinct irreducibles, all of degree `d`, over F_p.
fn equal_degree_split(g: &UniPoly, d: usize, p: u32) -> Result<Vec<UniPoly>> {
    let g = g.monic();
    if g.degree() == d {
        return Ok(vec![g]);
    }
    if d == 1 && p <= 4096 {
        // direct root scan for small fields
        let mut out = Vec::new();
        let mut rest = g.clone();
        for c in 0..p {
            let v = FieldTag::Prime(p).from_i64(c as i64);
            if rest.eval(&v).is_zero() {
                let lin = UniPoly::new(
                    g.field,
                    vec![v.neg(), g.field.one()],
                );
                out.push(lin.clone());
                rest = rest.divmod(&lin).0;
            }
        }
        debug_assert_eq!(rest.degree(), 0);
        return Ok(out);
    }
    // Cantor–Zassenhaus with a deterministic generator
    let mut state: u64 = 0x9E3779B97F4A7C15 ^ (g.degree() as u64) << 16 ^ (p as u64);
    let mut rand_poly = |deg: usize| -> UniPoly {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            coeffs.push(FieldTag::Prime(p).from_i64((state % p as u64) as i64));
        }
        UniPoly::new(g.field, coeffs)
    };
    let mut stack = vec![g.clone()];
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while let Some(h) = stack.pop() {
        if h.degree() == d {
            out.push(h.monic());
            continue;
        }
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::BoundExceeded {
                reason: "equal-degree splitting budget".into(),
                cap: 10_000,
            });
        }
        let r = rand_poly(h.degree().saturating_sub(1).max(1));
        let e = (pow_u64(p as u64, d as u32) - 1) / 2;
        let t = r.powmod(e, &h);
        let cand = t.sub(&UniPoly::constant(g.field, g.field.one()));
        let w = h.gcd(&cand);
        if w.degree() >= 1 && w.degree() < h.degree() {
            let other = h.divmod(&w).0.monic();
            stack.push(w.monic());
            stack.push(other);
        } else {
            stack.push(h);
        }
    }
    out.sort_by_key(sort_key);
    Ok(out)
}

fn pow_u64(b: u64, e: u32) -> u64 {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.saturating_mul(b);
    }
    acc
}

// ---------------------------------------------------------------- QQ case

fn to_bigint_primitive(f: &UniPoly) -> Vec<BigInt> {
    // clear denominators and content
    let mut den = BigInt::one();
    for c in &f.coeffs {
        if let Scalar::Rat(r) = c {
            den = den.lcm(r.denom());
        }
    }
    let mut ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => (r * BigRational::from(den.clone())).to_integer(),
            _ => unreachable!(),
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() {
        for c in &mut ints {
            *c /= &content;
        }
    }
    if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
        for c in &mut ints {
            *c = -c.clone();
        }
    }
    ints
}

fn from_bigints(ints: &[BigInt]) -> UniPoly {
    UniPoly::new(
        FieldTag::Rational,
        ints.iter()
            .map(|c| Scalar::Rat(BigRational::from(c.clone())))
            .collect(),
    )
}

fn divisors(n: &BigInt, budget: &mut i64) -> Result<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::InvalidInput("divisors of zero".into()));
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        *budget -= 1;
        if *budget < 0 {
            return Err(Error::BoundExceeded {
                reason: "factor search budget in Kronecker step".into(),
                cap: 0,
            });
        }
        if (&n % &d).is_zero() {
            let mut k = 0;
            while (&n % &d).is_zero() {
                n /= &d;
                k += 1;
            }
            primes.push((d.clone(), k));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pw);
                pw *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    Ok(divs)
}

fn rational_roots(ints: &[BigInt], budget: &mut i64) -> Result<Vec<BigRational>> {
    let a0 = ints
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap_or_else(BigInt::one);
    let an = ints.last().cloned().unwrap_or_else(BigInt::one);
    let ps = divisors(&a0, budget)?;
    let qs = divisors(&an, budget)?;
    let f = from_bigints(ints);
    let mut roots = Vec::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(p * BigInt::from(sign), q.clone());
                if f.eval(&Scalar::Rat(cand.clone())).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    // x = 0 root
    if ints.first().map(|c| c.is_zero()).unwrap_or(false) {
        roots.push(BigRational::zero());
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn factor_qq(f: &UniPoly) -> Result<Vec<UniPoly>> {
    // squarefree radical via gcd with the derivative
    let mut work = f.monic();
    let d = work.derivative();
    if !d.is_zero() {
        let g = work.gcd(&d);
        if g.degree() > 0 {
            work = work.divmod(&g).0.monic();
            // the radical of f is radical(work * radical(g)); recurse on g
            let inner = factor_qq(&g)?;
            let mut outer = factor_qq(&work)?;
            for p in inner {
                if !outer.contains(&p) {
                    outer.push(p);
                }
            }
            outer.sort_by_key(sort_key);
            return Ok(outer);
        }
    }
    let mut budget: i64 = 2_000_000;
    let mut out = Vec::new();
    let mut stack = vec![work];
    while let Some(h) = stack.pop() {
        if h.degree() == 0 {
            continue;
        }
        if h.degree() == 1 {
            out.push(h.monic());
            continue;
        }
        let ints = to_bigint_primitive(&h);
        // strip powers of x
        if ints.first().map(|c| c.is_zero()).unwrap_or(false) {
            out.push(UniPoly::x(FieldTag::Rational));
            let k = ints.iter().take_while(|c| c.is_zero()).count();
            stack.push(from_bigints(&ints[k..]));
            continue;
        }
        let roots = rational_roots(&ints, &mut budget)?;
        if let Some(r) = roots.first() {
            let lin = UniPoly::new(
                FieldTag::Rational,
                vec![Scalar::Rat(-r.clone()), FieldTag::Rational.one()],
            );
            out.push(lin.clone());
            let mut rest = h.clone();
            while lin.divides(&rest) {
                rest = rest.divmod(&lin).0;
            }
            stack.push(rest.monic());
            continue;
        }
        if h.degree() <= 3 {
            // no rational root and degree <= 3: irreducible over QQ
            out.push(h.monic());
            continue;
        }
        match kronecker_split(&ints, &mut budget)? {
            Some((a, b)) => {
                stack.push(a);
                stack.push(b);
            }
            None => out.push(h.monic()),
        }
    }
    out.sort_by_key(sort_key);
    out.dedup();
    Ok(out)
}

/// Kronecker's method: find a nontrivial factor of a primitive integer
/// polynomial with no rational roots, or prove irreducibility.
fn kronecker_split(ints: &[BigInt], budget: &mut i64) -> Result<Option<(UniPoly, UniPoly)>> {
    let n = ints.len() - 1;
    let f = from_bigints(ints);
    for d in 2..=(n / 2) {
        // evaluation points 0, 1, -1, 2, -2, ...
        let points: Vec<i64> = (0..=d as i64)
            .map(|i| {
                if i % 2 == 0 {
                    i / 2
                } else {
                    -(i / 2 + 1)
                }
            })
            .collect();
        let values: Vec<BigInt> = points
            .iter()
            .map(|&p| {
                let v = f.eval(&Scalar::Rat(BigRational::from(BigInt::from(p))));
                match v {
                    Scalar::Rat(r) => r.to_integer(),
                    _ => unreachable!(),
                }
            })
            .collect();
        let divisor_lists: Vec<Vec<BigInt>> = values
            .iter()
            .map(|v| {
                let mut ds = divisors(v, budget)?;
                let negs: Vec<BigInt> = ds.iter().map(|d| -d.clone()).collect();
                ds.extend(negs);
                ds.sort();
                Ok(ds)
            })
            .collect::<Result<_>>()?;
        let mut idx = vec![0usize; d + 1];
        loop {
            *budget -= 1;
            if *budget < 0 {
                return Err(Error::BoundExceeded {
                    reason: "Kronecker combination budget".into(),
                    cap: 0,
                });
            }
            let choice: Vec<BigRational> = idx
                .iter()
                .enumerate()
                .map(|(i, &k)| BigRational::from(divisor_lists[i][k].clone()))
                .collect();
            if let Some(g) = lagrange_integer_poly(&points, &choice) {
                if g.degree() == d && g.divides(&f) {
                    let q = f.divmod(&g).0;
                    return Ok(Some((g.monic(), q.monic())));
                }
            }
            // advance the odometer
            let mut carry = 0;
            loop {
                idx[carry] += 1;
                if idx[carry] < divisor_lists[carry].len() {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
                if carry > d {
                    break;
                }
            }
            if carry > d {
                break;
            }
        }
    }
    Ok(None)
}

fn lagrange_integer_poly(points: &[i64], values: &[BigRational]) -> Option<UniPoly> {
    let field = FieldTag::Rational;
    let mut acc = UniPoly::zero(field);
    for (i, &pi) in points.iter().enumerate() {
        let mut basis = UniPoly::constant(field, field.one());
        let mut denom = BigRational::one();
        for (j, &pj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&UniPoly::new(
                field,
                vec![field.from_i64(-pj), field.one()],
            ));
            denom *= BigRational::from(BigInt::from(pi - pj));
        }
        let coeff = Scalar::Rat(values[i].clone() / denom);
        acc = acc.add(&basis.scale(&coeff));
    }
    // integer coefficients required for a divisor of a primitive polynomial
    for c in &acc.coeffs {
        if let Scalar::Rat(r) = c {
            if !r.denom().is_one() {
                return None;
            }
        }
    }
    if acc.is_zero() {
        None
    } else {
        Some(acc)
    }
}

fn sort_key(p: &UniPoly) -> (usize, Vec<String>) {
    (
        p.degree(),
        p.coeffs.iter().map(|c| c.to_string()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            FieldTag::Rational,
            coeffs.iter().map(|&c| FieldTag::Rational.from_i64(c)).collect(),
        )
    }

    #[test]
    fn splits_difference_of_squares() {
        // t^2 - 1 = (t - 1)(t + 1)
        let f = qq(&[-1, 0, 1]);
        let fs = distinct_irreducible_factors(&f).unwrap();
        assert_eq!(fs, vec![qq(&[-1, 1]), qq(&[1, 1])]);
    }

    #[test]
    fn keeps_irreducible_quadratic() {
        let f = qq(&[1, 1, 1]); // t^2 + t + 1
        let fs = distinct_irreducible_factors(&f).unwrap();
        assert_eq!(fs, vec![qq(&[1, 1, 1])]);
    }

    #[test]
    fn radical_of_square() {
        let f = qq(&[0, 0, 1]); // t^2
        let fs = distinct_irreducible_factors(&f).unwrap();
        assert_eq!(fs, vec![qq(&[0, 1])]);
    }

    #[test]
    fn degree_four_product_of_quadratics() {
        // (t^2 + 1)(t^2 + 2) = t^4 + 3 t^2 + 2, no rational roots
        let f = qq(&[2, 0, 3, 0, 1]);
        let fs = distinct_irreducible_factors(&f).unwrap();
        assert_eq!(fs, vec![qq(&[1, 0, 1]), qq(&[2, 0, 1])]);
    }

    #[test]
    fn prime_field_splitting() {
        let fp = FieldTag::Prime(5);
        // t^2 - 1 over F5
        let f = UniPoly::new(fp, vec![fp.from_i64(-1), fp.zero(), fp.one()]);
        let fs = distinct_irreducible_factors(&f).unwrap();
        assert_eq!(fs.len(), 2);
        for g in &fs {
            assert_eq!(g.degree(), 1);
            assert!(g.divides(&f));
        }
        // t^2 + 2 is irreducible over F5 (squares are 0,1,4)
        let g = UniPoly::new(fp, vec![fp.from_i64(2), fp.zero(), fp.one()]);
        let gs = distinct_irreducible_factors(&g).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].degree(), 2);
    }

    #[test]
    fn cubic_with_three_roots_f5() {
        let fp = FieldTag::Prime(5);
        // t^3 - t = t(t-1)(t+1)
        let f = UniPoly::new(fp, vec![fp.zero(), fp.from_i64(-1), fp.zero(), fp.one()]);
        let fs = distinct_irreducible_factors(&f).unwrap();
        assert_eq!(fs.len(), 3);
    }
}
