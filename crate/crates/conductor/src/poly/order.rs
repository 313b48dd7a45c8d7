//! Monomial orders: graded reverse lexicographic, lexicographic, and block
//! orders for elimination.

use std::cmp::Ordering;

/// A total, multiplicative monomial order with 1 minimal.
///
/// `Block` orders compare exponents block by block (earlier blocks more
/// significant), grevlex inside each block; elimination of a variable set `S`
/// uses `Block([S, rest])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    Block(Vec<Vec<usize>>),
}

fn cmp_grevlex_on(indices: &[usize], a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = indices.iter().map(|&i| a[i] as u64).sum();
    let db: u64 = indices.iter().map(|&i| b[i] as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    // same degree: the LAST index where they differ decides, reversed
    for &i in indices.iter().rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// An elimination order that makes every monomial involving a variable of
    /// `drop` larger than every monomial free of them.
    pub fn elimination(drop: &[usize], nvars: usize) -> MonomialOrder {
        let mut first: Vec<usize> = drop.to_vec();
        first.sort_unstable();
        first.dedup();
        let keep: Vec<usize> = (0..nvars).filter(|i| !first.contains(i)).collect();
        MonomialOrder::Block(vec![first, keep])
    }

    /// Compares exponent vectors `a`, `b` (same length).
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Grevlex => {
                let all: Vec<usize> = (0..a.len()).collect();
                cmp_grevlex_on(&all, a, b)
            }
            MonomialOrder::Lex => {
                for i in 0..a.len() {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block(blocks) => {
                for block in blocks {
                    match cmp_grevlex_on(block, a, b) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Grevlex => "grevlex".to_string(),
            MonomialOrder::Lex => "lex".to_string(),
            MonomialOrder::Block(blocks) => format!("block{blocks:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_total_degree_first() {
        let o = MonomialOrder::Grevlex;
        // x^2 vs x*y in 2 vars: same degree, last differing index is y
        assert_eq!(o.cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 3], &[1, 1]), Ordering::Greater); // degree wins
        assert_eq!(o.cmp(&[1, 0], &[0, 1]), Ordering::Greater);
    }

    #[test]
    fn lex_first_variable_dominates() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 2], &[1, 3]), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        // drop variable 0 in a 2-variable ring: any power of var 0 beats var 1
        let o = MonomialOrder::elimination(&[0], 2);
        assert_eq!(o.cmp(&[1, 0], &[0, 9]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2], &[0, 1]), Ordering::Greater);
    }

    #[test]
    fn one_is_minimal() {
        for o in [
            MonomialOrder::Grevlex,
            MonomialOrder::Lex,
            MonomialOrder::elimination(&[1], 3),
        ] {
            let one = [0, 0, 0];
            for m in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 1, 3]] {
                assert_eq!(o.cmp(&m, &one), Ordering::Greater);
            }
        }
    }
}
