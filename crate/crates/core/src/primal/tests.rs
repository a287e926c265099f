use super::*;
use tempfile::tempdir;

/// Independent oracle: odd-only boolean sieve, no wheel, no segments.
fn bit_sieve_oracle(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return vec![];
    }
    let n = limit as usize;
    let mut odd_composite = vec![false; n / 2 + 1]; // index i -> 2i + 1
    let mut primes = vec![2u64];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !odd_composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= n / 2 {
                odd_composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    for i in 1..=(n - 1) / 2 {
        if !odd_composite[i] && 2 * i + 1 <= n {
            primes.push(2 * i as u64 + 1);
        }
    }
    primes
}

fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[test]
fn sieve_small_range_flags_textbook_primes() {
    let segs = sieve_range(2, 30, 64).unwrap();
    let primes: Vec<u64> = segs.iter().flat_map(|s| s.primes()).collect();
    assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
}

#[test]
fn sieve_window_with_single_prime() {
    let segs = sieve_range(90, 100, 64).unwrap();
    let primes: Vec<u64> = segs.iter().flat_map(|s| s.primes()).collect();
    assert_eq!(primes, vec![97]);
}

#[test]
fn sieve_to_ten_million_matches_independent_oracle() {
    let segs = sieve_range(2, 10_000_000, 1 << 20).unwrap();
    let count: u64 = segs.iter().map(|s| s.prime_count()).sum();
    assert_eq!(count, 664_579);
    let oracle = bit_sieve_oracle(9_999_999);
    assert_eq!(count, oracle.len() as u64);
    // spot-compare the actual flags against the oracle in a few windows
    let set: std::collections::HashSet<u64> = oracle.into_iter().collect();
    for seg in &segs {
        for n in (seg.lo()..seg.hi()).step_by(997) {
            assert_eq!(seg.is_prime(n), set.contains(&n), "mismatch at {n}");
        }
    }
}

#[test]
fn segments_tile_without_gaps() {
    let segs = sieve_range(2, 1000, 64).unwrap();
    let mut expected_lo = 2;
    for seg in &segs {
        assert_eq!(seg.lo(), expected_lo);
        expected_lo = seg.hi();
    }
    assert_eq!(expected_lo, 1000);
}

#[test]
fn partition_invariance_of_counts() {
    let total = pi(9999);
    for seg_size in [64, 100, 128, 4096, 100_000] {
        let segs = sieve_range(2, 10_000, seg_size).unwrap();
        let sum: u64 = segs.iter().map(|s| s.prime_count()).sum();
        assert_eq!(sum, total, "segment size {seg_size}");
    }
}

#[test]
fn sieve_rejects_bad_arguments() {
    assert!(sieve_range(1, 10, 64).is_err());
    assert!(sieve_range(5, 5, 64).is_err());
    assert!(sieve_range(2, 100, 32).is_err());
}

#[test]
fn sieve_range_budget_error() {
    let opts = SieveOptions {
        memory_budget: 1024,
        ..SieveOptions::default()
    };
    match sieve_range_with(2, 10_000_000, &opts) {
        Err(crate::error::Error::RangeTooLarge { .. }) => {}
        other => panic!("expected RangeTooLarge, got {other:?}"),
    }
}

#[test]
fn pi_examples() {
    assert_eq!(pi(1), 0);
    assert_eq!(pi(20), 8);
    assert_eq!(pi(1_000_000), 78_498);
}

#[test]
fn pi_matches_trial_division_to_ten_thousand() {
    let segs = sieve_range(2, 10_001, 1 << 20).unwrap();
    let mut count = 0u64;
    let mut iter = segs.iter().flat_map(|s| s.primes());
    let mut next_prime = iter.next();
    for x in 0..=10_000u64 {
        if trial_division_is_prime(x) {
            count += 1;
            assert_eq!(next_prime, Some(x));
            next_prime = iter.next();
        }
    }
    assert_eq!(pi(10_000), count);
}

#[test]
fn psi_direct_examples() {
    assert_eq!(psi_direct(1.5), 0.0);
    approx::assert_relative_eq!(psi_direct(2.0), 2f64.ln(), max_relative = 1e-14);
    let expected = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
    approx::assert_relative_eq!(psi_direct(10.0), expected, max_relative = 1e-13);
    assert!((psi_direct(10.0) - 7.832_014_180_505_469).abs() < 1e-12);
}

#[test]
fn psi_difference_is_von_mangoldt() {
    for x in 2..=64u64 {
        let diff = psi_direct(x as f64) - psi_direct(x as f64 - 1.0);
        let expect = match prime_power_base(x) {
            Some(p) => (p as f64).ln(),
            None => 0.0,
        };
        approx::assert_abs_diff_eq!(diff, expect, epsilon = 1e-10);
    }
}

#[test]
fn psi_routes_agree() {
    for x in [10.0, 97.0, 1000.5, 65_536.0] {
        approx::assert_relative_eq!(psi_direct(x), psi_from_segments(x), max_relative = 1e-12);
    }
}

#[test]
fn omega_examples() {
    assert_eq!(omega(1), 0);
    assert_eq!(omega(12), 2);
    assert_eq!(omega(30030), 6);
    // trial-division oracle on a range
    for n in 1..2000u64 {
        let mut m = n;
        let mut cnt = 0;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                cnt += 1;
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            cnt += 1;
        }
        assert_eq!(omega(n), cnt, "omega({n})");
    }
}

#[test]
fn deterministic_miller_rabin_agrees_with_sieve() {
    let segs = sieve_range(2, 100_000, 1 << 20).unwrap();
    for seg in &segs {
        for n in seg.lo()..seg.hi() {
            assert_eq!(is_prime(n), seg.is_prime(n), "n = {n}");
        }
    }
    assert!(is_prime(1_000_000_007));
    assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
    assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    assert!(!is_prime(1_000_000_007u64 * 2));
}

#[test]
fn prime_power_detection() {
    assert_eq!(prime_power_base(8), Some(2));
    assert_eq!(prime_power_base(243), Some(3));
    assert_eq!(prime_power_base(97), Some(97));
    assert_eq!(prime_power_base(12), None);
    assert_eq!(prime_power_base(1), None);
    assert_eq!(prime_power_base(36), None);
}

#[test]
fn prime_pi_table_matches_counts() {
    let table = PrimePi::new(100_000).unwrap();
    assert_eq!(table.count_leq(99_999), pi(99_999));
    assert_eq!(table.count_leq(2), 1);
    assert_eq!(table.count_leq(1), 0);
    assert_eq!(table.count_in(90, 100), 1);
    assert_eq!(table.count_in(2, 31), 10);
    let primes: Vec<u64> = table.primes_in(9900, 10_000).collect();
    assert_eq!(primes, vec![9901, 9907, 9923, 9929, 9931, 9941, 9949, 9967, 9973]);
}

#[test]
fn window_counter_matches_table() {
    let table = PrimePi::new(2_000_000).unwrap();
    let base = simple_sieve(isqrt(1_999_999));
    for (lo, hi) in [(2u64, 1000), (999_000, 1_001_000), (1_500_000, 1_500_001)] {
        assert_eq!(
            count_primes_in_window(lo, hi, &base),
            table.count_in(lo, hi),
            "window [{lo}, {hi})"
        );
    }
}

#[test]
fn segment_cache_roundtrip_and_equivalence() {
    let dir = tempdir().unwrap();
    let cache = SegmentCache::new(dir.path()).unwrap();
    let plain = sieve_range(2, 50_000, 1 << 14).unwrap();
    let opts = SieveOptions {
        segment_size: 1 << 14,
        cache: Some(&cache),
        ..SieveOptions::default()
    };
    let first = sieve_range_with(2, 50_000, &opts).unwrap(); // populates
    let second = sieve_range_with(2, 50_000, &opts).unwrap(); // cache hits
    for ((a, b), c) in plain.iter().zip(first.iter()).zip(second.iter()) {
        assert_eq!(a.lo(), b.lo());
        assert_eq!(a.flag_words(), b.flag_words());
        assert_eq!(a.flag_words(), c.flag_words());
    }
}

#[test]
fn corrupt_cache_entry_is_a_miss() {
    let dir = tempdir().unwrap();
    let cache = SegmentCache::new(dir.path()).unwrap();
    std::fs::write(dir.path().join("seg-2-66.pspl"), b"PSPL1garbage").unwrap();
    assert!(cache.load(2, 66).unwrap().is_none());
    let opts = SieveOptions {
        segment_size: 64,
        cache: Some(&cache),
        ..SieveOptions::default()
    };
    let segs = sieve_range_with(2, 66, &opts).unwrap();
    let expect = sieve_range(2, 66, 64).unwrap();
    assert_eq!(segs[0].flag_words(), expect[0].flag_words());
}

#[test]
fn lambda_values_match_definition() {
    let opts = SieveOptions {
        with_lambda: true,
        ..SieveOptions::default()
    };
    let segs = sieve_range_with(2, 200, &opts).unwrap();
    for seg in &segs {
        let lambda = seg.lambda().unwrap();
        for n in seg.lo()..seg.hi() {
            let expect = match prime_power_base(n) {
                Some(p) => (p as f64).ln(),
                None => 0.0,
            };
            assert_eq!(lambda[(n - seg.lo()) as usize], expect, "Lambda({n})");
        }
    }
}

#[test]
fn nth_root_u64_is_exact() {
    assert_eq!(nth_root_u64(0, 3), 0);
    assert_eq!(nth_root_u64(1, 7), 1);
    assert_eq!(nth_root_u64(63, 2), 7);
    assert_eq!(nth_root_u64(64, 2), 8);
    assert_eq!(nth_root_u64(u64::MAX, 2), 4_294_967_295);
    assert_eq!(nth_root_u64(u64::MAX, 63), 2);
    for n in [10u64, 1000, 123_456_789, 1 << 40] {
        for k in 2..=8 {
            let r = nth_root_u64(n, k);
            assert!(pow_checked(r, k).unwrap() <= n);
            assert!(pow_checked(r + 1, k).map_or(true, |v| v > n));
        }
    }
}
