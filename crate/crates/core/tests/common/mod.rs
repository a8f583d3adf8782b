#![allow(dead_code)]

use ipstar::SetSpec;
use num_bigint::BigUint;
use rand::Rng;

/// Random congruence / interval / boolean spec, no bitmaps.
pub fn random_spec<R: Rng>(rng: &mut R, depth: u32) -> SetSpec {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match rng.gen_range(0..10) {
            0..=5 => {
                let m = rng.gen_range(1..=12u64);
                SetSpec::congruence(m, rng.gen_range(0..m)).unwrap()
            }
            6 => SetSpec::at_least(rng.gen_range(1..=30)).unwrap(),
            7 => {
                let lo = rng.gen_range(1..=30u64);
                SetSpec::interval(lo, Some(BigUint::from(lo + rng.gen_range(0..60u64)))).unwrap()
            }
            8 => SetSpec::Full,
            _ => SetSpec::Empty,
        };
    }
    match rng.gen_range(0..5) {
        0 => random_spec(rng, depth - 1).complement(),
        1 | 2 => SetSpec::and(
            (0..rng.gen_range(2..=3))
                .map(|_| random_spec(rng, depth - 1))
                .collect(),
        ),
        3 => SetSpec::or(
            (0..rng.gen_range(2..=3))
                .map(|_| random_spec(rng, depth - 1))
                .collect(),
        ),
        _ => {
            let inner = random_spec(rng, depth - 1);
            if rng.gen_bool(0.5) {
                SetSpec::dilation(rng.gen_range(1..=6u64), inner).unwrap()
            } else {
                SetSpec::shift(rng.gen_range(1..=20u64), inner).unwrap()
            }
        }
    }
}

/// Random spec that may include bounded bitmaps with large bounds.
pub fn random_spec_with_bits<R: Rng>(rng: &mut R, depth: u32, bound: u64) -> SetSpec {
    if depth == 0 || rng.gen_bool(0.3) {
        if rng.gen_bool(0.3) {
            let members: Vec<BigUint> = (0..rng.gen_range(0..20))
                .map(|_| BigUint::from(rng.gen_range(1..=bound)))
                .collect();
            return SetSpec::bitmap(members, bound).unwrap();
        }
        return random_spec(rng, 0);
    }
    match rng.gen_range(0..3) {
        0 => random_spec_with_bits(rng, depth - 1, bound).complement(),
        1 => SetSpec::and(vec![
            random_spec_with_bits(rng, depth - 1, bound),
            random_spec_with_bits(rng, depth - 1, bound),
        ]),
        _ => SetSpec::or(vec![
            random_spec_with_bits(rng, depth - 1, bound),
            random_spec_with_bits(rng, depth - 1, bound),
        ]),
    }
}

pub fn big(v: u64) -> BigUint {
    BigUint::from(v)
}
