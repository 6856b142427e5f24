//! Cross-module invariants: spatial-index counts against linear scans,
//! the Diophantine inequalities against their region forms after the
//! horosphere embedding, and enumeration counts against arithmetic
//! oracles.

use fareylab_core::congruence::{astar_count, ResidueSystem};
use fareylab_core::diophantine::{est_count, kesten_count, DioParams};
use fareylab_core::farey::{count, enumerate, sigma_q};
use fareylab_core::geom::{region_contains, Region, TestSet};
use fareylab_core::lattice::{a_matrix, h_matrix, is_primitive};
use fareylab_core::oracles;
use fareylab_core::spacing::WindowCounter;
use fareylab_core::zeta::zeta;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[test]
fn farey_count_matches_totient_sum() {
    let sys = ResidueSystem::full(1);
    for q in [1usize, 2, 10, 137, 1000] {
        assert_eq!(
            count(&sys, q as i64).unwrap(),
            oracles::totient_sum(q),
            "Q = {q}"
        );
    }
}

#[test]
fn farey_count_dimension_two_matches_triple_loop() {
    // literal double loop over representatives, no odometer machinery
    let sys = ResidueSystem::full(2);
    for q_max in [1i64, 2, 3, 9, 24] {
        let mut expect = 0u64;
        for q in 1..=q_max {
            for p1 in 0..q {
                for p2 in 0..q {
                    if is_primitive(&[p1, p2, q]) {
                        expect += 1;
                    }
                }
            }
        }
        assert_eq!(count(&sys, q_max).unwrap(), expect, "Q = {q_max}");
    }
}

#[test]
fn window_counts_match_scan_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let systems = [
        ResidueSystem::full(1),
        ResidueSystem::new(1, 2, &[vec![0, 1]]).unwrap(),
        ResidueSystem::full(2),
    ];
    for sys in &systems {
        let q = if sys.n() == 1 { 100 } else { 25 };
        let set = enumerate(sys, q).unwrap();
        let m = sys.modulus() as f64;
        let trials = if sys.n() == 1 { 400 } else { 200 };
        for _ in 0..trials {
            let n = sys.n();
            // random box or ball window, random scale below the cap
            let window = if rng.gen_bool(0.5) {
                let lo: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..0.0)).collect();
                let hi: Vec<f64> = lo.iter().map(|l| l + rng.gen_range(0.1..1.5)).collect();
                TestSet::boxed(lo, hi).unwrap()
            } else {
                let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
                TestSet::ball(c, rng.gen_range(0.1..0.8)).unwrap()
            };
            let max_scale = 0.95 * m / window.diameter();
            let scale = rng.gen_range(0.05 * max_scale..max_scale);
            let counter = WindowCounter::new(&set, &window, scale).unwrap();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..m)).collect();
            assert_eq!(
                counter.count_at(&x),
                oracles::window_count_scan(&set, &x, scale, &window),
                "window {window:?} scale {scale} x {x:?}"
            );
        }
    }
}

#[test]
fn diophantine_inequalities_match_region_membership() {
    // solution of the inequality exactly when the embedded row lies in
    // the corresponding region; skip points within 1e-9 of the boundary
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut checked = 0u64;
    while checked < 10_000 {
        let n = if rng.gen_bool(0.5) { 1 } else { 2 };
        let q_level: i64 = rng.gen_range(2..30);
        let alpha: f64 = rng.gen_range(0.2..1.6);
        let c: f64 = rng.gen_range(1.2..3.0);
        let q: i64 = rng.gen_range(1..(c * q_level as f64) as i64 + 10);
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-40..40)).collect();
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();

        let mut row_f: Vec<f64> = p.iter().map(|&v| v as f64).collect();
        row_f.push(q as f64);
        let embedded = a_matrix(n, q_level as f64)
            .unwrap()
            .mul_row(&h_matrix(&x).mul_row(&row_f));

        let norm = p
            .iter()
            .zip(&x)
            .map(|(&pi, &xi)| (q as f64 * xi - pi as f64) * (q as f64 * xi - pi as f64))
            .sum::<f64>()
            .sqrt();

        // EST route
        let bound = alpha * (q as f64).powf(-1.0 / n as f64);
        if (norm - bound).abs() > 1e-9 {
            let ineq = norm <= bound && q >= q_level && q as f64 <= c * q_level as f64;
            let region = Region::est(n, alpha, c).unwrap();
            assert_eq!(
                ineq,
                region_contains(&region, &embedded),
                "EST n={n} q={q} Q={q_level} alpha={alpha} c={c}"
            );
            checked += 1;
        }

        // Kesten route
        let kbound = alpha * (q_level as f64).powf(-1.0 / n as f64);
        if (norm - kbound).abs() > 1e-9 {
            let ineq = norm <= kbound && q >= 1 && q <= q_level;
            let region = Region::kesten(n, alpha).unwrap();
            assert_eq!(
                ineq,
                region_contains(&region, &embedded),
                "K n={n} q={q} Q={q_level} alpha={alpha}"
            );
            checked += 1;
        }
    }
}

#[test]
fn window_statistic_matches_region_form() {
    // torus window count at scale σ_{A,Q}^{-1/n} equals the count of
    // embedded integer rows in the cone region at scale σ_{A,1}^{-1/n}
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let sys = ResidueSystem::new(1, 2, &[vec![0, 1], vec![1, 1]]).unwrap();
    let q_level = 40i64;
    let set = enumerate(&sys, q_level).unwrap();
    let n = 1usize;
    let m = sys.modulus() as f64;
    let density = astar_count(&sys).unwrap().density_f64();
    let sigma_a1 = density * m / ((n as f64 + 1.0) * zeta(2.0));
    let sigma_aq = sigma_a1 * (q_level as f64).powi(2);
    let window = TestSet::boxed(vec![-0.8], vec![1.3]).unwrap();
    let region = Region::window(window.clone(), sigma_a1.powf(-1.0)).unwrap();
    let scale = sigma_aq.powf(-1.0);
    let counter = WindowCounter::new(&set, &window, scale).unwrap();

    for _ in 0..50 {
        let x = [rng.gen_range(0.0..m)];
        let torus_count = counter.count_at(&x);
        // integer rows: all (p, q), 1 <= q <= Q, p in a wide range
        let mut region_count = 0u32;
        for q in 1..=q_level {
            let lo = (q as f64 * x[0]).floor() as i64 - (2.0 * m) as i64 * q_level;
            let hi = (q as f64 * x[0]).ceil() as i64 + (2.0 * m) as i64 * q_level;
            for p in lo..=hi {
                if !is_primitive(&[p, q]) || !sys.contains_row(&[p, q]) {
                    continue;
                }
                let embedded = a_matrix(n, q_level as f64)
                    .unwrap()
                    .mul_row(&h_matrix(&x).mul_row(&[p as f64, q as f64]));
                if region_contains(&region, &embedded) {
                    region_count += 1;
                }
            }
        }
        assert_eq!(torus_count, region_count, "x = {:?}", x[0]);
    }
}

#[test]
fn restricted_diophantine_counts_sum_over_partition() {
    // three-class partition mod 3 on the torus copy
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let all = fareylab_core::congruence::all_classes(1, 3).unwrap();
    let classes = all.classes().to_vec();
    for _ in 0..25 {
        let x = [rng.gen_range(0.0..3.0)];
        let q = rng.gen_range(3..25);
        let total = est_count(
            &x,
            &DioParams {
                sys: all.clone(),
                q,
                alpha: 0.8,
                c: 2.0,
            },
        )
        .unwrap();
        let mut sum = 0u64;
        for class in &classes {
            let single =
                ResidueSystem::new(1, 3, &[class.iter().map(|&v| v as i64).collect::<Vec<_>>()])
                    .unwrap();
            sum += est_count(
                &x,
                &DioParams {
                    sys: single,
                    q,
                    alpha: 0.8,
                    c: 2.0,
                },
            )
            .unwrap();
        }
        assert_eq!(sum, total);

        let ktotal = kesten_count(
            &x,
            &DioParams {
                sys: all.clone(),
                q,
                alpha: 0.8,
                c: 2.0,
            },
        )
        .unwrap();
        let mut ksum = 0u64;
        for class in &classes {
            let single =
                ResidueSystem::new(1, 3, &[class.iter().map(|&v| v as i64).collect::<Vec<_>>()])
                    .unwrap();
            ksum += kesten_count(
                &x,
                &DioParams {
                    sys: single,
                    q,
                    alpha: 0.8,
                    c: 2.0,
                },
            )
            .unwrap();
        }
        assert_eq!(ksum, ktotal);
    }
}

#[test]
fn growth_sigma_consistency_between_full_and_torus() {
    // the m-torus carries m^n copies: growth targets must agree
    let unit = sigma_q(1, 500);
    let sys = fareylab_core::congruence::all_classes(1, 2).unwrap();
    let rep = fareylab_core::farey::growth_report(&sys, 500, count(&sys, 500).unwrap()).unwrap();
    assert!((rep.sigma - 2.0 * unit).abs() < 1e-9);
}
