//! Rank bookkeeping on seeded random rational functions.

use stphase::sampling::Sampler;
use stphase::stationary::spectrum;

#[test]
fn ranks_balance_and_repeat() {
    let mut source = Sampler::new(2024);
    let mut checked = 0;
    let target: usize = std::env::var("BALANCE_N").ok().and_then(|v| v.parse().ok()).unwrap_or(20);
    while checked < target {
        let f = source.rational_function();
        let mut sampler = Sampler::new(checked as u64 + 1);
        let mut ranks = Vec::new();
        for _ in 0..3 {
            let w = sampler.point();
            let s = spectrum(&f, &w).unwrap_or_else(|e| panic!("{} / {}: {e}", f.p, f.q));
            let germ_sum: u64 = s.germs.iter().map(|g| g.total_m).sum();
            assert_eq!(s.total_rank, s.smooth_rank + germ_sum, "{} / {}", f.p, f.q);
            assert_eq!(s.spectral_poly.deg() as u64, s.total_rank);
            ranks.push((s.total_rank, s.smooth_rank, s.jump_rank));
        }
        assert!(ranks.windows(2).all(|w| w[0] == w[1]), "{} / {}: {ranks:?}", f.p, f.q);
        checked += 1;
    }
}
