use msgames_bounds::{bounds_table, g_closed, g_prime_closed};

#[test]
fn ordering_holds_to_thirty() {
    for row in bounds_table(30).unwrap() {
        assert!(row.g <= row.g_prime && row.g_prime <= row.f, "r={}", row.r);
    }
}

#[test]
fn g_and_g_prime_meet_from_four() {
    for r in 4..=30 {
        assert_eq!(g_closed(r).unwrap(), g_prime_closed(r).unwrap());
    }
}

#[test]
fn parity_alternates_from_four() {
    for r in 4..=30 {
        assert_eq!(g_closed(r).unwrap() % 2, (r % 2) as u64, "r={r}");
    }
}
