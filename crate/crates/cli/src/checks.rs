//! `charvar fixtures run`: the acceptance checks on bundled data, as a table.

use std::collections::BTreeSet;
use std::time::Instant;

use charvar::arrangement::{fixtures as lines, parse_line_file, projective_group_from_text, render_line_file};
use charvar::covers::{ceva_group, fermat_group};
use charvar::engine::{binomial, torsion_scan, torsion_scan_with, DepthEngine, Method, ScanOptions};
use charvar::invariant::invariant_matrix;
use charvar::linalg::smith_normal_form;
use charvar::orbifold::{self, fixtures as pencils, Orbicurve};
use charvar::presentation::{abelianization, determinantal_divisors, validate_character};
use charvar::{Character, GroupPresentation, LaurentPoly, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn groups() -> Vec<(&'static str, GroupPresentation)> {
    let mut out = vec![
        ("ceva", ceva_group()),
        ("fermat2", fermat_group(2).unwrap()),
        ("fermat3", fermat_group(3).unwrap()),
        ("c22", orbifold::orbifold_group(&Orbicurve::c_mm(2))),
    ];
    for (n, t) in [("c6", lines::C6), ("c7", lines::C7), ("c8", lines::C8), ("c9", lines::C9), ("ceva-lines", lines::CEVA)] {
        out.push((n, projective_group_from_text(t).unwrap()));
    }
    out
}

fn golden() -> Outcome {
    let printed = [
        ["t3 - 1", "-(t2 - 1)", "0", "t1 - 1", "0", "0"],
        ["t4 - 1", "0", "-(t2 - 1)", "0", "t1 - 1", "0"],
        ["0", "t4 - 1", "-(t3 - 1)", "0", "0", "t1 - 1"],
        ["0", "0", "0", "t4 - 1", "-(t3 - 1)", "t2 - 1"],
    ];
    let vars: Vec<String> = (1..=4).map(|i| format!("t{i}")).collect();
    let m = invariant_matrix(&GroupPresentation::free(4)).map_err(err)?.matrix;
    ensure(m.rows() == 4 && m.cols() == 6, || "shape".into())?;
    for (i, row) in printed.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            ensure(*m.get(i, j) == orbifold::parse_polynomial(t, &vars).map_err(err)?, || format!("entry ({i},{j})"))?;
        }
    }
    Ok("A4 entry-for-entry".into())
}

fn free_groups() -> Outcome {
    for r in 2..=6usize {
        let e = DepthEngine::new(&GroupPresentation::free(r));
        for bits in 1u32..(1 << r) {
            let chi = Character::new(2, (0..r).map(|i| i64::from(bits >> i & 1)).collect()).unwrap();
            ensure(e.depth(&chi, Method::Both).map_err(err)?.depth == r - 1, || format!("F{r}"))?;
        }
        let d = e.depth(&Character::trivial(r), Method::Invariant).map_err(err)?.depth;
        ensure(d == binomial(r, 2), || format!("F{r} trivial {d}"))?;
    }
    Ok("r = 2..6".into())
}

fn fermat() -> Outcome {
    for n in [2u64, 3] {
        let g = fermat_group(n).map_err(err)?;
        ensure(abelianization(&g).to_string() == format!("Z^{}", 2 * n), || format!("n={n} H1"))?;
        let e = DepthEngine::new(&g);
        for i in 1..n as i64 {
            let mut x = vec![0; g.generator_count()];
            x[0] = i;
            let d = e.depth(&Character::new(n, x).unwrap(), Method::Both).map_err(err)?.depth;
            ensure(d == 3, || format!("n={n} i={i}: {d}"))?;
        }
    }
    Ok("n = 2, 3 depth 3 by both methods".into())
}

fn agreement(jobs: usize) -> Outcome {
    let mut count = 0;
    for (name, g) in groups() {
        let e = DepthEngine::new(&g);
        if !e.has_invariant() {
            continue;
        }
        let opts = ScanOptions { jobs, method: Some(Method::Both), include_zero: true, ..Default::default() };
        count += torsion_scan_with(&e, 2, None, &opts).map_err(|x| format!("{name}: {x}"))?.entries.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let word = |rng: &mut ChaCha8Rng, r: usize| {
        let len = rng.gen_range(1..=3);
        Word::from_letters((0..len).map(|_| (rng.gen_range(0..r), if rng.gen_bool(0.5) { 1 } else { -1 })))
    };
    let mut random = 0;
    while random < 200 {
        let r = rng.gen_range(2..=4);
        let rels: Vec<Word> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let (a, b, c) = (word(&mut rng, r), word(&mut rng, r), word(&mut rng, r));
                c.conjugate(&Word::commutator(&a, &b))
            })
            .filter(|w| !w.is_identity())
            .collect();
        let g = GroupPresentation::new((1..=r).map(|i| format!("x{i}")).collect(), rels, None).unwrap();
        let order = rng.gen_range(2..=6u64);
        let chi = Character::new(order, (0..r).map(|_| rng.gen_range(0..order as i64)).collect()).unwrap();
        if chi.is_trivial() {
            continue;
        }
        DepthEngine::new(&g).depth(&chi, Method::Both).map_err(err)?;
        random += 1;
    }
    Ok(format!("{count} fixture characters, {random} random pairs"))
}

fn ceva(jobs: usize) -> Outcome {
    let cases: [(&str, &str, &[&[i64]]); 3] = [
        ("C7", lines::C7, &[&[0, 1, 1, 0, 1, 1, 0]]),
        ("C8", lines::C8, &[&[0, 1, 1, 0, 1, 1, 0, 0], &[1, 0, 1, 1, 0, 1, 0, 0]]),
        ("C9", lines::C9, &[&[1, 1, 0, 1, 1, 0, 0, 0, 0], &[1, 0, 1, 1, 0, 1, 0, 0, 0], &[0, 1, 1, 0, 1, 1, 0, 0, 0]]),
    ];
    for (name, text, listed) in cases {
        let g = projective_group_from_text(text).map_err(err)?;
        let all = parse_line_file(text).map_err(err)?;
        let scan = torsion_scan(&g, 2, None, &ScanOptions { jobs, ..Default::default() }).map_err(err)?;
        let subs: Vec<DepthEngine> = (0..all.len())
            .map(|k| {
                let mut rest = all.clone();
                rest.remove(k);
                DepthEngine::new(&projective_group_from_text(&render_line_file(&rest)).unwrap())
            })
            .collect();
        let listed: BTreeSet<Vec<i64>> = listed.iter().map(|s| s.to_vec()).collect();
        for chi in &listed {
            let d = scan.entries.iter().find(|e| &e.character.exponents == chi).map(|e| e.depth);
            ensure(d == Some(2), || format!("{name}: {chi:?} depth {d:?}"))?;
        }
        for e in scan.entries.iter().filter(|e| !e.character.is_trivial() && !listed.contains(&e.character.exponents)) {
            let x = &e.character.exponents;
            let mut explained = false;
            for k in (0..all.len()).filter(|&k| x[k] == 0) {
                let mut y = x.clone();
                y.remove(k);
                if subs[k].depth_auto(&Character::new(2, y).unwrap()).map_err(err)?.depth == e.depth {
                    explained = true;
                    break;
                }
            }
            ensure(explained, || format!("{name}: unlisted essential {x:?}"))?;
        }
    }
    Ok("listed characters at depth 2, all others from deletions".into())
}

fn c6() -> Outcome {
    let g = projective_group_from_text(lines::C6).map_err(err)?;
    let d = DepthEngine::new(&g).depth(&Character::new(3, vec![1; 6]).unwrap(), Method::Both).map_err(err)?.depth;
    ensure(d == 1, || format!("depth {d}"))?;
    Ok("(w,...,w) depth 1".into())
}

fn markings() -> Outcome {
    let c = Orbicurve::c_mm(2);
    let rho = Character::from_signs(&[-1, -1]).unwrap();
    ensure(orbifold::orbifold_depth(&c, &rho).map_err(err)? == 1, || "depth".into())?;
    let m = orbifold::markings(&c, 2).map_err(err)?;
    ensure(m.len() == 1 && m[0].0 == rho, || format!("{m:?}"))?;
    Ok("unique marking (-1,-1)".into())
}

fn marked_pencils() -> Outcome {
    for t in [pencils::C7_PENCILS, pencils::C8_PENCILS, pencils::C9_PENCILS] {
        let fx = orbifold::load_pencil_fixture(t).map_err(err)?;
        let v = orbifold::verify_pencil_fixture(&fx).map_err(err)?;
        ensure(v.pencils.iter().all(|p| p.1), || format!("{:?}", v.pencils))?;
        ensure(v.chi_depth == 2 && v.rho_depth == 1 && v.bound_holds, || format!("{v:?}"))?;
    }
    Ok("C7, C8, C9: 2 = 2*1".into())
}

fn independence() -> Outcome {
    let mut parts = Vec::new();
    for (n, t, coker) in [(2u64, pencils::FERMAT_PENCILS_2, vec![2u64]), (3, pencils::FERMAT_PENCILS_3, vec![3])] {
        let fx = orbifold::load_pencil_fixture(t).map_err(err)?;
        let r = orbifold::independence_check(&fx.pencils, n).map_err(err)?;
        ensure(r.independent && !r.strongly_independent_on_data && r.cokernel == coker, || format!("n={n}: {r:?}"))?;
        ensure(!r.notes.is_empty(), || "missing discrepancy note".into())?;
        parts.push(format!("n={n} cokernel {:?}", r.cokernel));
    }
    Ok(parts.join(", ") + " (proper sublattice, noted)")
}

fn quasitoric() -> Outcome {
    let ids = orbifold::bundled_quasitoric().map_err(err)?;
    for id in &ids {
        ensure(orbifold::quasitoric_verify(id).map_err(err)?, || id.name.clone())?;
    }
    Ok(format!("{} identities", ids.len()))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m: Vec<Vec<BigInt>> = (0..r).map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect()).collect();
        let dd = determinantal_divisors(&m);
        let mut prev = BigInt::from(1);
        let mut want = Vec::new();
        for d in dd.iter().take_while(|d| *d != &BigInt::from(0)) {
            want.push(d / &prev);
            prev = d.clone();
        }
        ensure(smith_normal_form(&m).invariant_factors() == want, || format!("SNF {m:?}"))?;
    }
    for _ in 0..500 {
        let rand_poly = |rng: &mut ChaCha8Rng| {
            let mut p = LaurentPoly::zero(2);
            for _ in 0..rng.gen_range(0..5) {
                p.add_term(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], rng.gen_range(-4..=4));
            }
            p
        };
        let (p, q) = (rand_poly(&mut rng), rand_poly(&mut rng));
        let order = rng.gen_range(1..=12u64);
        let e = [rng.gen_range(0..order as i64), rng.gen_range(0..order as i64)];
        let ev = |x: &LaurentPoly| x.evaluate_exponents(order, &e).unwrap();
        ensure(ev(&p.mul(&q).unwrap()) == ev(&p).mul(&ev(&q)), || "evaluation".into())?;
        ensure(ev(&p.add(&q).unwrap()) == ev(&p).add(&ev(&q)), || "evaluation".into())?;
    }
    let gs = groups();
    for (name, g) in &gs {
        let n = g.generator_count();
        for w in g.relators() {
            let e: Vec<i32> = w.exponent_sums(n).iter().map(|&x| x as i32).collect();
            let rhs = LaurentPoly::monomial(e, 1).sub(&LaurentPoly::one(n)).unwrap();
            ensure(charvar::fox::fundamental_combination(w, n) == rhs, || format!("{name}: Fox identity"))?;
        }
    }
    for (name, g) in &gs {
        let engine = DepthEngine::new(g);
        for order in [3u64, 4, 5] {
            let mut sampled = 0;
            for _ in 0..2000 {
                if sampled == 4 {
                    break;
                }
                let chi = Character::new(order, (0..g.generator_count()).map(|_| rng.gen_range(0..order as i64)).collect())
                    .unwrap();
                if chi.is_trivial() || !validate_character(&chi, g).map_err(err)?.valid {
                    continue;
                }
                sampled += 1;
                let d = engine.depth_auto(&chi).map_err(err)?.depth;
                for k in (2..order as i64).filter(|k| k.gcd(&(order as i64)) == 1) {
                    ensure(engine.depth_auto(&chi.pow(k)).map_err(err)?.depth == d, || format!("{name}: Galois"))?;
                }
            }
        }
    }
    Ok("SNF, evaluation, Fox identity, Galois invariance".into())
}

/// Runs everything and prints one row per check; true iff all pass.
pub fn run_all(jobs: usize) -> bool {
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("golden invariant matrix", Box::new(golden)),
        ("free-group depths", Box::new(free_groups)),
        ("Fermat depth 3", Box::new(fermat)),
        ("method agreement", Box::new(move || agreement(jobs))),
        ("extended Ceva depths", Box::new(move || ceva(jobs))),
        ("C6 sampled component", Box::new(c6)),
        ("orbifold markings", Box::new(markings)),
        ("marked pencils", Box::new(marked_pencils)),
        ("independence", Box::new(independence)),
        ("quasitoric identities", Box::new(quasitoric)),
        ("property checks", Box::new(properties)),
    ];
    println!("{:<3} {:<26} {:<5} {:>9}  detail", "#", "check", "", "time");
    let mut ok = true;
    for (i, (name, f)) in checks.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                ok = false;
                ("FAIL", d)
            }
        };
        println!("{:<3} {:<26} {:<5} {:>8.2?}  {detail}", i + 1, name, tag, t.elapsed());
    }
    ok
}
