use charvar::arrangement::{
    arrangement_presentation, fixtures as lines, parse_line_file, wiring_diagram, wiring_diagram_from, RealLine,
};
use charvar::covers::{ceva_alpha, ceva_group, kernel_presentation, schreier_cover, FiniteAbelianQuotient};
use charvar::cyclotomic::{cyclotomic_polynomial, CyclotomicNumber};
use charvar::dsl::{parse_group_dsl, render_group_dsl};
use charvar::engine::{torsion_scan, DepthEngine, Method, ScanOptions};
use charvar::invariant::{rewrite_with, theta_of_element, theta_of_word, zariski_data};
use charvar::linalg::{determinant, mat_mul, rank_cyclotomic, smith_normal_form};
use charvar::orbifold::{independence_check, load_pencil_fixture, quasitoric_verify, QuasitoricIdentity};
use charvar::presentation::{abelianization, validate_character};
use charvar::word::free_reduce;
use charvar::{Character, GroupPresentation, LaurentPoly, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letters(gens: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..gens, prop_oneof![Just(1i64), Just(-1), Just(2), Just(-3)]), 0..max_len)
}

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(gens, max_len).prop_map(Word::from_letters)
}

fn commutator_word(gens: usize) -> impl Strategy<Value = Word> {
    (word(gens, 4), word(gens, 4), word(gens, 3)).prop_map(|(a, b, c)| c.conjugate(&Word::commutator(&a, &b)))
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn small_presentation() -> impl Strategy<Value = GroupPresentation> {
    (1usize..=4).prop_flat_map(|g| {
        prop::collection::vec(word(g, 6), 0..=4).prop_map(move |rels| {
            let rels = rels.into_iter().filter(|w| !w.is_identity()).collect();
            GroupPresentation::new(names(g), rels, None).unwrap()
        })
    })
}

fn laurent(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, nvars), -5i64..=5), 0..5).prop_map(move |terms| {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(&e, c);
        }
        p
    })
}

/// Invariant factors from gcds of all k×k minors.
fn minors_oracle(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect()).collect();
                g = g.gcd(&cofactor_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * cofactor_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn free_reduce_laws(w in letters(4, 20)) {
        let raw = Word::from_letters(w);
        let once = free_reduce(&raw);
        prop_assert_eq!(free_reduce(&once), once.clone());
        prop_assert!(once.length() <= raw.length());
        prop_assert!(free_reduce(&raw.mul(&raw.inverse())).is_identity());
    }

    #[test]
    fn abelianization_matches_minors(p in small_presentation()) {
        let ab = abelianization(&p);
        let m: Vec<Vec<i64>> = p.relator_matrix().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        let factors = minors_oracle(&m);
        let torsion: Vec<BigInt> = factors.iter().filter(|f| !f.is_one()).cloned().collect();
        prop_assert_eq!(&ab.torsion, &torsion);
        prop_assert_eq!(ab.free_rank, p.generator_count() - factors.len());
    }

    #[test]
    fn character_powers_stay_valid(p in small_presentation(), order in 2u64..7, seed in any::<u64>(), k in -5i64..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = Character::new(order, (0..p.generator_count()).map(|_| rng.gen_range(0..order as i64)).collect()).unwrap();
        if validate_character(&chi, &p).unwrap().valid {
            prop_assert!(validate_character(&chi.pow(k), &p).unwrap().valid);
        }
    }

    #[test]
    fn evaluation_is_a_ring_map(p in laurent(2), q in laurent(2), order in 1u64..16, a in 0i64..16, b in 0i64..16) {
        let e = [a, b];
        let ev = |x: &LaurentPoly| x.evaluate_exponents(order, &e).unwrap();
        prop_assert_eq!(ev(&p.add(&q).unwrap()), ev(&p).add(&ev(&q)));
        prop_assert_eq!(ev(&p.mul(&q).unwrap()), ev(&p).mul(&ev(&q)));
    }

    #[test]
    fn lifting_commutes_with_arithmetic(c in prop::collection::vec(-4i64..=4, 1..8), d in prop::collection::vec(-4i64..=4, 1..8), n in 1u64..10, k in 2u64..4) {
        let (x, y) = (CyclotomicNumber::from_power_sums(n, &c), CyclotomicNumber::from_power_sums(n, &d));
        let m = n * k;
        prop_assert_eq!(x.mul(&y).lift(m).unwrap(), x.lift(m).unwrap().mul(&y.lift(m).unwrap()));
        prop_assert_eq!(x.add(&y).lift(m).unwrap(), x.lift(m).unwrap().add(&y.lift(m).unwrap()));
    }

    #[test]
    fn is_zero_agrees_with_floating_point(c in prop::collection::vec(-3i64..=3, 1..12), n in 1u64..24) {
        let x = CyclotomicNumber::from_power_sums(n, &c);
        let (re, im) = x.to_complex();
        let small = re.abs() < 1e-9 && im.abs() < 1e-9;
        prop_assert_eq!(x.is_zero(), small);
    }

    #[test]
    fn smith_form_is_a_factorisation(m in prop::collection::vec(prop::collection::vec(-9i64..=9, 1..=5), 1..=5)) {
        let cols = m.iter().map(|r| r.len()).min().unwrap();
        let m: Vec<Vec<i64>> = m.into_iter().map(|r| r[..cols].to_vec()).collect();
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let s = smith_normal_form(&big);
        prop_assert!(determinant(&s.u).abs().is_one());
        prop_assert!(determinant(&s.v).abs().is_one());
        let d = mat_mul(&mat_mul(&s.u, &big), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(x, &want);
            }
        }
        prop_assert_eq!(s.invariant_factors(), minors_oracle(&m));
    }

    #[test]
    fn fox_fundamental_identity(w in word(4, 16)) {
        let lhs = charvar::fox::fundamental_combination(&w, 4);
        let e: Vec<i32> = w.exponent_sums(4).iter().map(|&x| x as i32).collect();
        prop_assert_eq!(lhs, LaurentPoly::monomial(e, 1).sub(&LaurentPoly::one(4)).unwrap());
    }

    #[test]
    fn theta_is_additive_on_commutators(u in commutator_word(3), v in commutator_word(3)) {
        let data = zariski_data(&GroupPresentation::free(3)).unwrap();
        let sum: Vec<LaurentPoly> = theta_of_word(&u, &data)
            .iter()
            .zip(theta_of_word(&v, &data))
            .map(|(a, b)| a.add(&b).unwrap())
            .collect();
        prop_assert_eq!(theta_of_word(&u.mul(&v), &data), sum);
        // θ of the rewritten element agrees with θ of the word
        let e = rewrite_with(&u, &data).unwrap();
        prop_assert_eq!(theta_of_element(&e, &data), theta_of_word(&u, &data));
    }

    #[test]
    fn dsl_round_trip(p in small_presentation()) {
        let text = render_group_dsl(&p, "G");
        let back = parse_group_dsl(&text).unwrap();
        prop_assert_eq!(back.names(), p.names());
        prop_assert_eq!(back.relators(), p.relators());
        prop_assert_eq!(render_group_dsl(&back, "G"), text);
    }

    #[test]
    fn crossing_counts(rows in prop::collection::vec((-6i64..=6, -6i64..=6, -9i64..=9), 2..7)) {
        let ls: Vec<RealLine> = rows.iter().filter_map(|&(a, b, c)| RealLine::from_ints(a, b, c).ok()).collect();
        if let Ok(w) = wiring_diagram(&ls) {
            let r = ls.len();
            let pairs: usize = w.events.iter().map(|e| e.lines.len() * (e.lines.len() - 1) / 2).sum();
            prop_assert_eq!(pairs, r * (r - 1) / 2 - w.parallel_pairs);
            let xs: std::collections::BTreeSet<&String> = w.events.iter().map(|e| &e.x).collect();
            prop_assert_eq!(xs.len(), w.events.len());
        }
    }

    #[test]
    fn quasitoric_variable_permutation(perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let ids = charvar::orbifold::bundled_quasitoric().unwrap();
        for id in ids {
            let old = id.variables.clone();
            let renamed = QuasitoricIdentity { variables: perm.iter().map(|&i| old[i].clone()).collect(), ..id };
            prop_assert!(quasitoric_verify(&renamed).unwrap());
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let (rows, cols) = (m.len(), m.first().map_or(0, |r| r.len()));
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = (m[r][c] as u128 * inv as u128 % p as u128) as u64;
                for k in 0..cols {
                    let sub = (f as u128 * m[rank][k] as u128 % p as u128) as u64;
                    m[r][k] = (m[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn cyclotomic_rank_matches_prime_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [3u64, 4, 5, 6, 7, 8, 12] {
        let p = (1_000_000_000 / n..).map(|k| k * n + 1).find(|&p| is_prime(p)).unwrap();
        let root = (2..p).map(|g| pow_mod(g, (p - 1) / n, p)).find(|&z| (1..n).all(|k| pow_mod(z, k, p) != 1)).unwrap();
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            // low rank now and then: repeat a row
            let mut polys: Vec<Vec<Vec<i64>>> =
                (0..r).map(|_| (0..c).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect()).collect();
            if r > 1 && rng.gen_bool(0.3) {
                polys[r - 1] = polys[0].clone();
            }
            let exact: Vec<Vec<CyclotomicNumber>> =
                polys.iter().map(|row| row.iter().map(|c| CyclotomicNumber::from_power_sums(n, c)).collect()).collect();
            let modp: Vec<Vec<u64>> = polys
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| {
                            c.iter().enumerate().fold(0u64, |acc, (k, &v)| {
                                let term = (v.rem_euclid(p as i64) as u128 * pow_mod(root, k as u64, p) as u128 % p as u128) as u64;
                                (acc + term) % p
                            })
                        })
                        .collect()
                })
                .collect();
            assert_eq!(rank_cyclotomic(&exact), rank_mod_p(modp, p), "n = {n}: {polys:?}");
        }
    }
}

#[test]
fn cyclotomic_polynomial_vanishes_at_root() {
    for n in 1..=64u64 {
        let phi = cyclotomic_polynomial(n);
        assert!(CyclotomicNumber::from_power_sums(n, &phi).is_zero(), "n = {n}");
    }
}

#[test]
fn nielsen_schreier_ranks() {
    for (r, factors) in [(2usize, vec![2u64]), (3, vec![3]), (2, vec![2, 2]), (3, vec![4])] {
        let k = factors.len();
        let images: Vec<Vec<i64>> = (0..r).map(|g| (0..k).map(|j| i64::from(g == j)).collect()).collect();
        let q = FiniteAbelianQuotient::new(factors.clone(), images).unwrap();
        let index = q.order() as usize;
        let cover = schreier_cover(&GroupPresentation::free(r), &q, &[]).unwrap();
        assert_eq!(cover.presentation.generator_count(), index * r);
        let ker = kernel_presentation(&GroupPresentation::free(r), &q).unwrap();
        let ab = abelianization(&ker);
        assert_eq!(ab.free_rank, index * (r - 1) + 1, "rank {r}, quotient {factors:?}");
    }
}

#[test]
fn kernel_abelianization_ignores_transversal_order() {
    let g = ceva_group();
    for n in [2u64, 3] {
        let alpha = ceva_alpha(n).unwrap();
        let e1 = g.index_of("e1").unwrap();
        let e2 = g.index_of("e2").unwrap();
        let a = schreier_cover(&g, &alpha, &[e1, e2]).unwrap();
        let b = schreier_cover(&g, &alpha, &[e2, e1]).unwrap();
        let (x, y) = (abelianization(&a.presentation), abelianization(&b.presentation));
        assert_eq!((x.free_rank, x.torsion), (y.free_rank, y.torsion), "n = {n}");
    }
}

#[test]
fn scan_is_monotone_in_the_order() {
    let g = ceva_group();
    let opts = ScanOptions { include_zero: true, ..Default::default() };
    let two = torsion_scan(&g, 2, None, &opts).unwrap();
    let four = torsion_scan(&g, 4, None, &opts).unwrap();
    let mut seen = 0;
    for e in &four.entries {
        if e.character.exponents.iter().all(|x| x % 2 == 0) {
            let reduced = e.character.reduced();
            let d2 = two.depth_of(&reduced.with_order(2).unwrap()).unwrap();
            assert_eq!(d2, e.depth, "{:?}", e.character);
            seen += 1;
        }
    }
    assert_eq!(seen, two.entries.len());
}

#[test]
fn shear_invariance() {
    for (text, orders) in [(lines::CEVA, &[2u64, 3, 4, 5, 6][..]), (lines::C6, &[2, 3][..])] {
        let ls = parse_line_file(text).unwrap();
        let base = wiring_diagram(&ls).unwrap();
        let mut shears = vec![base.shear];
        let mut groups = vec![arrangement_presentation(&base, true)];
        while shears.len() < 3 {
            let w = wiring_diagram_from(&ls, shears.last().unwrap() + 1).unwrap();
            shears.push(w.shear);
            groups.push(arrangement_presentation(&w, true));
        }
        for &n in orders {
            let depths: Vec<Vec<(Vec<i64>, usize)>> = groups
                .iter()
                .map(|g| {
                    let opts = ScanOptions { method: Some(Method::Fox), include_zero: true, ..Default::default() };
                    let s = torsion_scan(g, n, None, &opts).unwrap();
                    s.entries.iter().filter(|e| !e.character.is_trivial()).map(|e| (e.character.exponents.clone(), e.depth)).collect()
                })
                .collect();
            assert_eq!(depths[0], depths[1], "shears {shears:?}, order {n}");
            assert_eq!(depths[0], depths[2], "shears {shears:?}, order {n}");
        }
        let trivial: Vec<usize> = groups
            .iter()
            .map(|g| DepthEngine::new(g).depth(&Character::trivial(g.generator_count()), Method::Invariant).unwrap().depth)
            .collect();
        assert!(trivial.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn independence_ignores_pencil_order() {
    let fx = load_pencil_fixture(charvar::orbifold::fixtures::FERMAT_PENCILS_3).unwrap();
    let base = independence_check(&fx.pencils, 3).unwrap();
    let mut rev = fx.pencils.clone();
    rev.reverse();
    assert_eq!(independence_check(&rev, 3).unwrap(), base);
    rev.swap(0, 1);
    assert_eq!(independence_check(&rev, 3).unwrap(), base);
}

#[test]
fn bundled_fixtures_load() {
    assert_eq!(abelianization(&ceva_group()).to_string(), "Z^5");
    for t in [lines::C6, lines::C7, lines::C8, lines::C9, lines::CEVA] {
        let g = charvar::arrangement::projective_group_from_text(t).unwrap();
        assert_eq!(abelianization(&g).free_rank, g.generator_count() - 1);
    }
    for t in [
        charvar::orbifold::fixtures::FERMAT_PENCILS_2,
        charvar::orbifold::fixtures::FERMAT_PENCILS_3,
        charvar::orbifold::fixtures::C7_PENCILS,
        charvar::orbifold::fixtures::C8_PENCILS,
        charvar::orbifold::fixtures::C9_PENCILS,
    ] {
        load_pencil_fixture(t).unwrap();
    }
}
