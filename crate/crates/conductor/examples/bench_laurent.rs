use conductor::corpus;
use conductor::limits::{CancelToken, Limits};
use conductor::scalar::FieldTag;
use conductor::square::present_pushout;
use std::time::Instant;

fn main() {
    let limits = Limits::default();
    let sq = corpus::laurent_square(FieldTag::Rational, &limits).unwrap();
    for bound in [4u32, 8, 16] {
        let t0 = Instant::now();
        let r = present_pushout(&sq, bound, &limits, &CancelToken::never());
        println!("bound {bound}: {:?} in {:?}", r.as_ref().err().map(|e| format!("{e}")), t0.elapsed());
    }
}
