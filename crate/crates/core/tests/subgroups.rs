use std::sync::Arc;

use addcomb::energy::{energy, energy_k};
use addcomb::experiments::{coverage, doubling_stats, integer_energies, progression_row, subgroup_row};
use addcomb::field::{self, InvariantFn, MultSubgroup, PrimeField};
use addcomb::group::{sumset, sumset_size};
use addcomb::transform::correlate;
use addcomb::{GroupFn, GroupSet, Sign};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 8] = [5, 7, 11, 13, 17, 19, 29, 31];

fn subgroup(p_idx: usize, t_idx: usize) -> MultSubgroup {
    let p = PRIMES[p_idx % PRIMES.len()];
    let ds = field::divisors(p as u64 - 1);
    MultSubgroup::new(Arc::new(PrimeField::new(p).unwrap()), ds[t_idx % ds.len()] as u32).unwrap()
}

/// `|{(x_1..x_k, y_1..y_k) ∈ A^{2k} : Π x = Π y}|` by nested enumeration.
fn mult_energy_oracle(p: u32, a: &[u32], k: usize) -> u128 {
    let tuples = |k: usize| -> Vec<u64> {
        let mut out = vec![1u64];
        for _ in 0..k {
            out = out.iter().flat_map(|&x| a.iter().map(move |&y| x * y as u64 % p as u64)).collect();
        }
        out
    };
    let ts = tuples(k);
    ts.iter().map(|&x| ts.iter().filter(|&&y| y == x).count() as u128).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn characters_diagonalize_invariant_kernels(pi in 0usize..8, ti in 0usize..8, seed in any::<u64>()) {
        let g = subgroup(pi, ti);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let odd = InvariantFn::random(&g, &mut rng, -4, 4, false).to_group_fn(&g).unwrap();
        let even = InvariantFn::random(&g, &mut rng, 0, 4, true).to_group_fn(&g).unwrap();
        prop_assert!(even.is_even());
        prop_assert!(field::check_eigenbasis(&g, &odd).unwrap().pass);
        prop_assert!(field::check_spectrum_matches(&g, &even).unwrap().pass);
        let xi = g.field().root();
        prop_assert!(field::check_eigenbasis_on_coset(&g, &odd, xi).unwrap().pass);
        prop_assert!(field::check_mu_convolution(&g, &odd, &even).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn multiplicative_energy_matches_oracle(pi in 0usize..8, ti in 0usize..8, mask in any::<u64>()) {
        let g = subgroup(pi, ti);
        let els: Vec<u32> = g.elements().iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &x)| x).collect();
        prop_assume!(!els.is_empty() && g.order() <= 12);
        let a = GroupSet::new(g.field().additive(), els.iter().copied()).unwrap();
        for k in 2..=3 {
            let e = field::mult_energy_k(&g, &a.indicator(), k as u32).unwrap().exact().unwrap();
            prop_assert_eq!(e, mult_energy_oracle(g.p(), a.members(), k));
            prop_assert!(field::check_tk_characters(&g, &a.indicator(), k as u32).unwrap().iter().all(|c| c.pass));
        }
        prop_assert!(field::check_vinogradov_bounds(&g, &a).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn exact_fourier_upper_bound(pi in 0usize..8, ti in 0usize..8, seed in any::<u64>(), lambda in 0u32..31) {
        let g = subgroup(pi, ti);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grp = g.field().additive();
        let hs = vec![
            GroupFn::constant(grp, 1),
            InvariantFn::random(&g, &mut rng, 1, 5, false).to_group_fn(&g).unwrap(),
        ];
        let u = field::random_supported(&g, &mut rng);
        prop_assert!(field::check_exact_fourier(&g, &u, lambda % g.p(), &hs).unwrap().iter().all(|c| c.pass));
        prop_assert!(field::check_connected(&g, &hs[1], &u).unwrap().pass);
    }

    #[test]
    fn scan_rows_match_brute_force(pi in 0usize..8, ti in 0usize..8) {
        let g = subgroup(pi, ti);
        let s = g.as_set();
        let row = subgroup_row(&g);
        prop_assert_eq!(row.e2, energy(s, s).unwrap());
        prop_assert_eq!(row.e3, energy_k(s, s, 3).unwrap());
        prop_assert_eq!(row.sum, sumset_size(s, s, Sign::Plus).unwrap());
        prop_assert_eq!(row.diff, sumset_size(s, s, Sign::Minus).unwrap());
        prop_assert!(row.lower_ok);
    }

    #[test]
    fn coverage_matches_iterated_sumsets(pi in 0usize..8, ti in 0usize..8) {
        let g = subgroup(pi, ti);
        let mut s = g.as_set().clone();
        let mut m = 1;
        while s.len() < g.p() as usize && m < 12 {
            s = sumset(&s, g.as_set(), Sign::Plus).unwrap();
            m += 1;
        }
        let expect = (s.len() == g.p() as usize).then_some(m);
        prop_assert_eq!(coverage(&g).m, expect);
    }

    #[test]
    fn doubling_matches_quadruples(a in prop::collection::btree_set(1i64..40, 1..8), shift in -3i64..4) {
        let a: Vec<i64> = a.into_iter().collect();
        let r = doubling_stats(&a, shift).unwrap();
        let b: Vec<i64> = a.iter().map(|x| x + shift).collect();
        let mut em = 0u128;
        let mut ea = 0u128;
        let mut emb = 0u128;
        for &x in &a { for &y in &a { for &z in &a { for &w in &a {
            em += u128::from(x * y == z * w);
            ea += u128::from(x + y == z + w);
        }}}}
        for &x in &a { for &y in &b { for &z in &a { for &w in &b {
            emb += u128::from(x * y == z * w);
        }}}}
        prop_assert_eq!(r.mult_energy, em);
        prop_assert_eq!(r.energy, ea);
        prop_assert_eq!(r.shifted_mult_energy, emb);
        prop_assert_eq!(integer_energies(&a).0, ea);
    }
}

#[test]
fn progression_bounds_subgroup() {
    for p in [7u32, 13, 31, 61] {
        let f = Arc::new(PrimeField::new(p).unwrap());
        for t in field::divisors(p as u64 - 1) {
            let g = MultSubgroup::new(Arc::clone(&f), t as u32).unwrap();
            let r = progression_row(&g);
            assert!(r.longest >= 1 && r.longest <= t as usize);
            assert!(r.homogeneous <= r.longest);
            if t as u32 == p - 1 {
                assert_eq!(r.longest, (p - 1) as usize);
            }
        }
    }
}

#[test]
fn character_root_independence() {
    // every primitive root of 13 gives the same subgroups and spectra
    let roots: Vec<u32> = (2..13).filter(|&g| PrimeField::with_root(13, g).is_ok()).collect();
    assert_eq!(roots, vec![2, 6, 7, 11]);
    for t in [3u32, 4, 6] {
        let spectra: Vec<Vec<f64>> = roots
            .iter()
            .map(|&r| {
                let g = MultSubgroup::new(Arc::new(PrimeField::with_root(13, r).unwrap()), t).unwrap();
                let psi = correlate(&g.as_set().indicator(), &g.as_set().indicator()).unwrap();
                let mut v: Vec<f64> = field::mu_alpha_direct(&g, &psi).unwrap().values.iter().map(|z| z.re).collect();
                v.sort_by(f64::total_cmp);
                v
            })
            .collect();
        for s in &spectra[1..] {
            assert!(s.iter().zip(&spectra[0]).all(|(a, b)| (a - b).abs() < 1e-9));
        }
    }
}
