use conductor::corpus;
use conductor::limits::Limits;
use conductor::ring::{PresentedRing, ProductRing, RingHom};
use conductor::scalar::FieldTag;
use conductor::MPoly;
use std::time::Instant;

fn main() {
    let limits = Limits::default();
    let sq = corpus::laurent_square(FieldTag::Rational, &limits).unwrap();
    let product = ProductRing::new(sq.b(), sq.c(), &limits).unwrap();
    // generators that accumulate by level L: x and xb^a y for a = 0..L-2
    for level in [4usize, 8, 12, 16] {
        let mut gens = vec![(sq.b().var("x"), sq.c().var("x"))];
        for a in 0..level.saturating_sub(1) {
            let c = sq.c().parse(&format!("xb^{}*y", a)).unwrap();
            gens.push((sq.b().zero_elem(), c));
        }
        let names: Vec<String> = (1..=gens.len()).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let free = PresentedRing::free(FieldTag::Rational, &refs);
        let images: Vec<MPoly> = gens.iter().map(|(b, c)| product.embed_pair(b, c, &limits).unwrap()).collect();
        let hom = RingHom::validate(&free, &product.ring, images, &limits).unwrap();
        let t0 = Instant::now();
        let probe = product.embed_pair(&sq.b().zero_elem(), &sq.c().parse(&format!("xb^{}*y", level)).unwrap(), &limits).unwrap();
        let r = hom.preimage(&probe, &limits).unwrap();
        println!("level {level}: gens {} preimage {:?} in {:?}", gens.len(), r.is_some(), t0.elapsed());
    }
}
