//! Seeded draws of small rationals and equivariant parameters.

use laumon::geometry::EquivParams;
use laumon::ExactScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 20` and `1 <= q <= 20`.
pub fn rational<R: Rng>(rng: &mut R) -> ExactScalar {
    ExactScalar::ratio(rng.random_range(-20..=20), rng.random_range(1..=20))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> ExactScalar {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn params<R: Rng>(rng: &mut R, n: usize, m: ExactScalar) -> EquivParams {
    let xi = (0..n).map(|_| rational(rng)).collect();
    EquivParams::new(xi, nonzero_rational(rng), m).expect("n >= 1")
}

/// Draw avoiding the degenerate points the ledger scan cannot tell apart: `eta` in
/// `{0, 1, -1, -n}` and integer `xi` differences.
pub fn ledger_params<R: Rng>(rng: &mut R, n: usize, m: ExactScalar) -> EquivParams {
    loop {
        let p = params(rng, n, m.clone());
        let bad_eta = [0i64, 1, -1, -(n as i64)].iter().any(|&v| p.eta == ExactScalar::int(v));
        let integral_gap = (0..n).any(|i| (0..i).any(|j| (&p.xi[i] - &p.xi[j]).is_integer()));
        if !bad_eta && !integral_gap {
            return p;
        }
    }
}

/// Mass away from `0` and `-1`, where the partition function degenerates.
pub fn mass<R: Rng>(rng: &mut R) -> ExactScalar {
    loop {
        let m = rational(rng);
        if !m.is_zero() && m != ExactScalar::int(-1) {
            return m;
        }
    }
}
