mod common;

use common::rat;
use pgeom::bounds::{self, BoundValue};
use proptest::prelude::*;

#[test]
fn recursion_never_exceeds_closed_form() {
    let mut compared = 0;
    for m in 3..=7u64 {
        for c in 2..=3u64 {
            if m <= c {
                continue;
            }
            for eps in [rat(1, 1), rat(1, 2), rat(1, 4), rat(1, 3), rat(1, 16)] {
                let rec = match bounds::r_main2_recursive(m, 2, c, &eps, &bounds::binary_base) {
                    Ok(r) => r,
                    // the inner level left m > c, or an exponent passed the supported range
                    Err(pgeom::Error::InvalidArgument(_) | pgeom::Error::Overflow(_)) => continue,
                    Err(e) => panic!("{e}"),
                };
                let closed = bounds::r_main2_binary(m, c, &eps).unwrap();
                assert!(
                    rec.value <= closed,
                    "m={m} c={c} eps={eps}: {} > {}",
                    rec.value,
                    closed
                );
                compared += 1;
            }
        }
    }
    assert!(compared >= 30, "only {compared} comparisons");
}

#[test]
fn power_of_two_boundaries() {
    // ⌈1 − log₂ ε⌉ at ε = 2^{-k} is exactly k + 1
    for k in 0..12u32 {
        let eps = rat(1, 1 << k);
        assert_eq!(bounds::r_mdhj_binary(2, &eps).unwrap(), (k + 1).into());
        let just_below = rat((1 << 20) - 1, (1i64 << 20) << k);
        assert_eq!(
            bounds::r_mdhj_binary(2, &just_below).unwrap(),
            (k + 2).into()
        );
    }
}

#[test]
fn symbolic_towers_order_above_exact() {
    let big = bounds::tower(3, 5);
    assert!(!big.is_exact());
    assert!(big > bounds::tower(3, 4));
    assert!(bounds::tower(4, 3) > bounds::tower(3, 4));
    assert_eq!(bounds::tower(3, 2), BoundValue::from(65536));
    assert_eq!(bounds::tower(4, 2), bounds::tower(3, 4));
}

proptest! {
    #[test]
    fn smallest_t_matches_oracle(c in 1u64..4, r in 1u64..12, num in 1i64..20, den in 1i64..40) {
        let eps = rat(num, den);
        prop_assert_eq!(bounds::smallest_t(2, c, r, &eps).unwrap(), common::smallest_t(2, c, r, &eps));
        prop_assert_eq!(bounds::smallest_t(3, c, r, &eps).unwrap(), common::smallest_t(3, c, r, &eps));
    }
}
