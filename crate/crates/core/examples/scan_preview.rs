use schwarzian::dynamics::{theorem1_scan, IntervalMap, ScanConfig};
use schwarzian::scalar::{Rational, Scalar};

fn main() {
    let t0 = std::time::Instant::now();
    let m = IntervalMap::<Rational>::logistic();
    let cfg = ScanConfig {
        d: 3,
        eps_list: vec![Rational::from_ratio(1, 16)],
        sample_count: std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(60),
        max_steps: std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(25),
        all_entries: false,
    };
    let rep = theorem1_scan(&m, &Rational::from_ratio(1, 2), &cfg).unwrap();
    let s = &rep.summaries[0];
    println!(
        "events={} all_positive={} critical={} unresolved={} identity_failures={} no_entry={} max_bits={} elapsed={:.1?}",
        s.events, s.all_positive, s.discarded_critical, s.unresolved,
        s.identity_failures, s.no_entry_samples, rep.max_coeff_bits, t0.elapsed()
    );
    for e in rep.events.iter().filter(|e| e.s >= 14) {
        println!("  deep event x={} s={} bits={} S=({:.3e}, {:?})", e.x, e.s, e.coeff_bits, e.s1.approx,
                 e.higher.iter().map(|h| h.approx).collect::<Vec<_>>());
    }
}
