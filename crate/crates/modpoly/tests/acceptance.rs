//! One test per release criterion. Each prints a timing line under
//! --nocapture; wall-clock budgets are only enforced in release builds so
//! a debug `cargo test` stays about correctness.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use modpoly::arith::{sigma1, LocalRing};
use modpoly::bounds::interp::interpolation_bound_check;
use modpoly::bounds::{verify_singular, verify_thm_main};
use modpoly::cval::{avg_bound_check, c_val_char0, c_val_modp, ordinary_bound, ss_prime_scan};
use modpoly::phi::{
    compute_phi, kronecker_congruence_holds, parse_modpoly, serialize_modpoly, BivarPoly,
};
use modpoly::quat::{calibrate, order_registry, NormConvention};
use modpoly::store::{compress, decompress, digit_stats, parse_compressed, write_compressed};
use modpoly::velu::{fixture, g_valuation, velu_image};
use modpoly::Error;

const LEVELS: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn phi(level: u64) -> &'static BivarPoly {
    static CACHE: OnceLock<BTreeMap<u64, BivarPoly>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        LEVELS
            .iter()
            .map(|&l| (l, compute_phi(l).expect("computable level")))
            .collect()
    })[&level]
}

/// Serializes wall-clock measurements across the parallel test harness.
static TIMING: Mutex<()> = Mutex::new(());

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let _guard = TIMING.lock().unwrap();
    let t0 = Instant::now();
    let out = f();
    (out, t0.elapsed())
}

fn budget(limit_s: u64, took: Duration, what: &str) {
    println!("  {what}: {took:?} (budget {limit_s}s)");
    if !cfg!(debug_assertions) {
        assert!(
            took <= Duration::from_secs(limit_s),
            "{what} took {took:?}, budget {limit_s}s"
        );
    }
}

fn fac(sign: i64, pairs: &[(u64, u32)]) -> BigInt {
    let mut x = BigInt::from(sign);
    for &(p, e) in pairs {
        x *= BigInt::from(p).pow(e);
    }
    x
}

#[test]
fn criterion_01_level_five_golden_table() {
    // Factor lists are written as (implied 2-3-11 part) x (residual),
    // mirroring how the compressed store strips them.
    #[rustfmt::skip]
    let table: [(u32, u32, i64, &[(u64, u32)]); 22] = [
        (0, 0,  1, &[(2, 90), (3, 18), (11, 9), (5, 3)]),
        (1, 0,  1, &[(2, 75), (3, 15), (11, 6), (2, 2), (3, 1), (5, 3), (31, 1), (1193, 1)]),
        (1, 1, -1, &[(2, 60), (3, 12), (11, 3), (2, 2), (3, 1), (26984268714163, 1)]),
        (2, 0,  1, &[(2, 60), (3, 12), (11, 3), (3, 1), (5, 2), (13, 2), (3167, 1), (204437, 1)]),
        (2, 1,  1, &[(2, 45), (3, 9), (2, 2), (3, 1), (5, 4), (53359, 1), (131896604713, 1)]),
        (3, 0,  1, &[(2, 45), (3, 9), (2, 3), (5, 2), (31, 1), (1193, 1), (24203, 1), (2260451, 1)]),
        (2, 2,  1, &[(2, 30), (3, 6), (3, 2), (5, 4), (7, 1), (13, 1), (1861, 1), (6854302120759, 1)]),
        (3, 1, -1, &[(2, 30), (3, 6), (2, 1), (3, 1), (5, 3), (327828841654280269, 1)]),
        (4, 0,  1, &[(2, 30), (3, 6), (3, 1), (5, 1), (13, 2), (3167, 1), (204437, 1)]),
        (3, 2,  1, &[(2, 15), (3, 3), (2, 2), (3, 1), (5, 3), (2311, 1), (2579, 1), (3400725958453, 1)]),
        (4, 1,  1, &[(2, 15), (3, 3), (2, 5), (3, 1), (5, 3), (12107359229837, 1)]),
        (5, 0,  1, &[(2, 15), (3, 3), (2, 2), (3, 1), (5, 1), (31, 1), (1193, 1)]),
        (3, 3, -1, &[(2, 2), (5, 2), (11, 1), (17, 1), (131, 1), (1061, 1), (169751677267033, 1)]),
        (4, 2,  1, &[(3, 1), (5, 3), (167, 1), (6117103549378223, 1)]),
        (5, 1, -1, &[(2, 1), (3, 1), (5, 2), (1644556073, 1)]),
        (6, 0,  1, &[]),
        (4, 3,  1, &[(2, 5), (3, 1), (5, 2), (197, 1), (227, 1), (421, 1), (2387543, 1)]),
        (5, 2,  1, &[(2, 5), (5, 2), (13, 1), (195053, 1)]),
        (4, 4,  1, &[(2, 3), (5, 2), (257, 1), (32412439, 1)]),
        (5, 3, -1, &[(2, 2), (3, 2), (5, 1), (131, 1), (193, 1)]),
        (5, 4,  1, &[(2, 3), (3, 1), (5, 1), (31, 1)]),
        (5, 5, -1, &[]),
    ];

    let (p5, took) = timed(|| compute_phi(5).unwrap());
    budget(10, took, "compute_phi(5)");

    assert_eq!(
        p5.lower().count(),
        22,
        "22 stored coefficients in the lower triangle"
    );
    for (i, j, sign, pairs) in table {
        let want = fac(sign, pairs);
        assert_eq!(p5.get(i, j), Some(&want), "a_({i},{j})");
        assert_eq!(p5.get(j, i), Some(&want), "mirror of a_({i},{j})");
    }
    println!("criterion 01 (level-5 coefficient table, bit-exact): PASS");
}

#[test]
fn criterion_02_structural_suite() {
    let (polys, took) = timed(|| LEVELS.map(|l| (l, compute_phi(l).unwrap())));
    budget(120, took, "compute all six levels");

    for (l, ph) in &polys {
        let deg = (*l + 1) as u32;
        assert_eq!(ph.psi(), deg, "degree at level {l}");
        assert_eq!(ph.get(deg, 0), Some(&BigInt::from(1)), "monic at level {l}");
        for (&(i, j), c) in ph.iter() {
            assert!(i <= deg && j <= deg, "degree bound at level {l}");
            assert_eq!(
                ph.get(j, i),
                Some(c),
                "symmetry at level {l}, entry ({i},{j})"
            );
        }
        assert!(
            kronecker_congruence_holds(ph),
            "Kronecker congruence at level {l}"
        );
    }
    println!("criterion 02 (symmetry, monic degree, Kronecker congruence): PASS");
}

#[test]
fn criterion_03_main_valuation_families() {
    for l in [5, 7, 11, 13] {
        let rep = verify_thm_main(phi(l)).unwrap();
        assert_eq!(rep.total_violations(), 0, "level {l}");
        assert!(!rep.reports.is_empty(), "level {l} has rule families");
    }

    // sharpness at level 5: the slack bottoms out at zero for each family,
    // pinned at the constant coefficient (90 = 15*6, 18 = 3*6, 9 = 3*3)
    let rep5 = verify_thm_main(phi(5)).unwrap();
    for (p, val) in [(2u64, 90i64), (3, 18), (11, 9)] {
        let r = rep5
            .reports
            .iter()
            .find(|r| r.rule.prime == p)
            .unwrap_or_else(|| panic!("no rule at p = {p}"));
        assert_eq!(r.min_slack, Some(0), "min slack at p = {p}");
        let corner = r.slacks.iter().find(|s| s.i == 0 && s.j == 0).unwrap();
        assert_eq!(
            (corner.val, corner.bound, corner.slack),
            (val, val, 0),
            "corner at p = {p}"
        );
    }
    assert!(
        rep5.reports.iter().all(|r| r.rule.prime != 5),
        "no rule at p = 5 when 5 divides the level"
    );
    println!("criterion 03 (zero violations, level-5 sharpness at 2/3/11): PASS");
}

#[test]
fn criterion_04_supersingular_full_vanishing() {
    for n in [5u64, 7, 11, 13] {
        let ps = phi(n).psi();
        for p in [2u64, 3, 5] {
            if n % p == 0 {
                continue;
            }
            assert_eq!(c_val_modp(phi(n), 0, p).unwrap(), ps, "C_0({n}, {p})");
        }
        for p in [2u64, 3, 7] {
            if n % p == 0 {
                continue;
            }
            assert_eq!(c_val_modp(phi(n), 1728, p).unwrap(), ps, "C_1728({n}, {p})");
        }
        if n != 13 {
            assert_eq!(c_val_modp(phi(n), 5, 13).unwrap(), ps, "C_5({n}, 13)");
        }
    }
    println!("criterion 04 (full vanishing orders at supersingular j): PASS");
}

#[test]
fn criterion_05_ordinary_counts() {
    for n in [5u64, 7, 11, 13] {
        let want = ordinary_bound(n, -3).unwrap() as u32;
        // j = 0 has CM, so the characteristic-zero order already equals the
        // ideal count; ordinary reduction must not change it
        assert_eq!(c_val_char0(phi(n), 0), want, "char-0 order at level {n}");
        for p in [7u64, 13, 19, 31] {
            if p == n {
                continue;
            }
            assert_eq!(c_val_modp(phi(n), 0, p).unwrap(), want, "C_0({n}, {p})");
        }
    }
    // spot values worth naming
    assert_eq!(c_val_modp(phi(7), 0, 13).unwrap(), 2);
    assert_eq!(c_val_modp(phi(5), 0, 7).unwrap(), 0);
    println!("criterion 05 (ordinary vanishing orders match the CM count): PASS");
}

#[test]
fn criterion_06_prime_scan_at_level_five() {
    let (rep, took) = timed(|| ss_prime_scan(phi(5), 0, -3, 200).unwrap());
    budget(5, took, "scan p <= 200");

    let got: Vec<(u64, u32)> = rep.entries.iter().map(|e| (e.p, e.c)).collect();
    assert_eq!(got, vec![(2, 6), (3, 6), (11, 3)]);
    assert!(
        rep.entries.iter().all(|e| e.p < 15),
        "all jump primes below |D| N = 15"
    );
    assert!(rep.beyond_bound.is_empty());
    assert_eq!(rep.char0, 0);
    println!("criterion 06 (supersingular prime scan is exactly 2, 3, 11): PASS");
}

fn det4(m: &[[i64; 4]; 4]) -> i128 {
    fn det3(m: [[i128; 3]; 3]) -> i128 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut out = 0i128;
    for col in 0..4 {
        let mut minor = [[0i128; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for c in 0..4 {
                if c == col {
                    continue;
                }
                minor[r - 1][cc] = m[r][c] as i128;
                cc += 1;
            }
        }
        let term = (m[0][col] as i128) * det3(minor);
        out += if col % 2 == 0 { term } else { -term };
    }
    out
}

#[test]
fn criterion_07_quaternion_cross_validation() {
    let ((), took) = timed(|| {
        let cal = calibrate().unwrap();
        assert_eq!((cal.p, cal.n), (2, 3));
        assert_eq!(cal.theta, 96);
        assert_eq!(cal.unit_count, 24);
        assert_eq!(cal.per_units, 4.into());
        assert_eq!(cal.double_per_units, 8.into());
        assert_eq!(cal.mod_p_vanishing, 4);
        assert_eq!(cal.chosen, NormConvention::PerUnits);
        // the report documents the rejected doubled constant
        assert!(
            cal.note.contains('8') && cal.note.contains('4'),
            "{}",
            cal.note
        );

        let units: BTreeMap<u64, u64> = [(2, 24), (3, 12), (5, 6), (7, 4), (13, 2)].into();
        for (&p, &u) in &units {
            let order = order_registry(p).unwrap();
            assert_eq!(order.unit_count(), u, "unit count at p = {p}");
            assert_eq!(det4(order.gram2()), (p * p) as i128, "det(2Q) at p = {p}");

            for n in LEVELS {
                if n == p {
                    continue;
                }
                let cyc = order.cyclic_count(n, NormConvention::PerUnits).unwrap();
                assert!(cyc.is_integer(), "count at p = {p}, N = {n} is integral");
                let modp = c_val_modp(phi(n), order.label(), p).unwrap();
                assert_eq!(cyc.to_integer(), modp as i64, "p = {p}, N = {n}");
            }
        }

        // Hurwitz theta series against the classical divisor-sum identity
        let hurwitz = order_registry(2).unwrap();
        let series = hurwitz.theta_series(49);
        for m in (1..=49u64).step_by(2) {
            assert_eq!(series[m as usize], 24 * sigma1(m), "theta at m = {m}");
        }
    });
    budget(60, took, "orders, counts, theta to 49");
    println!("criterion 07 (quaternion counts match mod-p vanishing orders): PASS");
}

#[test]
fn criterion_08_kernel_polynomial_valuations() {
    let ((), took) = timed(|| {
        let two = fixture("j0-p2").unwrap();
        for n in (3..=23u64).step_by(2) {
            let rep = g_valuation(&two, n).unwrap();
            assert_eq!(rep.n_v, 15, "p = 2, N = {n}");
        }

        for name in ["j0-p3-eps1", "j0-p3-eps1theta"] {
            let m = fixture(name).unwrap();
            for n in 2..=24u64 {
                if n % 3 == 0 {
                    continue;
                }
                let rep = g_valuation(&m, n).unwrap();
                let want = if n % 3 == 1 { 9 } else { 6 };
                assert_eq!(rep.n_v, want, "{name}, N = {n}");
                let np = BigRational::new(want.into(), 2.into());
                assert_eq!(rep.n_p, np, "{name}, N = {n}");
            }
        }

        let five = fixture("j0-p5").unwrap();
        for n in 2..=12u64 {
            if n % 5 == 0 {
                continue;
            }
            assert_eq!(g_valuation(&five, n).unwrap().n_v, 3, "p = 5, N = {n}");
        }

        // image recomputation identities; velu_image asserts them internally
        for name in ["j0-p2", "j0-p3-eps1", "j0-p3-eps1theta", "j0-p5"] {
            let m = fixture(name).unwrap();
            let r = m.ring();
            let unchanged = velu_image(&m, &r.zero(), &r.zero());
            assert_eq!(unchanged.a4, *m.a4(), "{name}");
            assert_eq!(unchanged.a6, *m.a6(), "{name}");
            assert_eq!(unchanged.c4, *m.c4(), "{name}");
            velu_image(&m, &r.one(), &r.one());
            velu_image(&m, m.b4(), m.b6());
        }
    });
    budget(10, took, "kernel valuations and image identities");
    println!("criterion 08 (n_v by residue class, stable to 24, images consistent): PASS");
}

#[test]
fn criterion_09_compression_and_digit_counts() {
    for l in LEVELS {
        let packed = compress(phi(l)).unwrap();
        let text = write_compressed(&packed);
        let back = decompress(&parse_compressed(&text).unwrap()).unwrap();
        assert_eq!(
            serialize_modpoly(phi(l)),
            serialize_modpoly(&back),
            "roundtrip at level {l}"
        );
    }

    let stats = digit_stats(phi(5)).unwrap();
    assert_eq!(stats.naive_digits, 523);
    assert_eq!(stats.theorem_digits, Some(298));
    assert_eq!(stats.compressed_digits, 320);
    assert_eq!(stats.part4_primes, vec![(11, 3)]);

    // data-conditional large file; counted the same way when present
    match level_101_file() {
        Some(path) => {
            let text = std::fs::read_to_string(&path).unwrap();
            let big = parse_modpoly(&text, 101).unwrap();
            let stats = digit_stats(&big).unwrap();
            assert_eq!(stats.naive_digits, 6383216);
            assert_eq!(stats.theorem_digits, Some(5606370));
            println!("  level-101 file checked: {}", path.display());
        }
        None => println!("  level-101 digit check skipped (no file supplied)"),
    }
    println!("criterion 09 (roundtrip and digit counts 523 -> 298): PASS");
}

fn level_101_file() -> Option<PathBuf> {
    let mut candidates = Vec::new();
    if let Some(dir) = std::env::var_os("MODPOLY_DATA_DIR") {
        candidates.push(PathBuf::from(dir).join("phi_j_101.txt"));
    }
    candidates.push(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/phi_j_101.txt"));
    candidates.into_iter().find(|p| p.is_file())
}

#[test]
fn criterion_10_average_valuation_bound() {
    let ((), took) = timed(|| {
        // the bound presumes nothing vanishes in characteristic zero, which
        // among the computed odd levels holds exactly for 5 and 11
        let mut checked = Vec::new();
        for n in [5u64, 7, 11, 13] {
            if c_val_char0(phi(n), 0) != 0 {
                continue;
            }
            let rep = avg_bound_check(phi(n)).unwrap();
            assert!(
                rep.holds,
                "level {n}: lhs {:.3} > rhs {:.3}",
                rep.lhs, rep.rhs
            );
            if n == 5 {
                assert!((rep.lhs - 17.94).abs() < 0.01, "lhs {:.4}", rep.lhs);
                assert!((rep.rhs - 114.5).abs() < 0.1, "rhs {:.4}", rep.rhs);
            }
            checked.push(n);
        }
        assert_eq!(checked, vec![5, 11]);
    });
    budget(10, took, "average bound at four levels");
    println!("criterion 10 (average-valuation inequality holds): PASS");
}

/// xorshift64; deterministic so failures replay.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

#[test]
fn criterion_11_interpolation_bound_randomized() {
    let ((), took) = timed(|| {
        let mut rng = Rng(0x5eed_1e5e_cafe_f00d);
        for case in 0..1000u32 {
            let p: i64 = if case % 2 == 0 { 5 } else { 7 };
            let ring = LocalRing::trivial(p as u64).unwrap();
            let dmax = (p as u64 - 2).min(6);
            let degree = 1 + rng.below(dmax) as usize;
            let n = rng.int(0, 3);

            // points p^n u_k with the residues of u_k distinct and nonzero,
            // so pairwise differences have valuation exactly n
            let mut residues: Vec<i64> = (1..p).collect();
            for k in (1..residues.len()).rev() {
                residues.swap(k, rng.below(k as u64 + 1) as usize);
            }
            let scale = p.pow(n as u32);
            let points: Vec<_> = residues[..=degree]
                .iter()
                .map(|&r| ring.of_int(scale * (r + p * rng.int(0, 20))))
                .collect();

            let coeffs: Vec<_> = (0..=degree)
                .map(|_| {
                    let m = rng.int(-999, 999);
                    let e = rng.int(0, 2) as u32;
                    if rng.below(4) == 0 {
                        // denominators are fine: the bound is linear algebra
                        // over the fraction field
                        ring.of_rational(BigRational::new((m * p.pow(e)).into(), p.into()))
                    } else {
                        ring.of_int(m * p.pow(e))
                    }
                })
                .collect();

            let rep = interpolation_bound_check(&ring, &coeffs, &points, n).unwrap();
            assert!(rep.holds, "case {case}: p = {p}, degree {degree}, n = {n}");
        }

        // negative controls: broken hypotheses are rejected, and the bound
        // is attained so it cannot be strengthened
        let ring = LocalRing::trivial(5).unwrap();
        let coeffs = vec![ring.of_int(1), ring.of_int(1)];
        let bad: [Vec<_>; 4] = [
            vec![ring.of_int(5)],
            vec![ring.of_int(5), ring.of_int(50)],
            vec![ring.of_int(5), ring.of_int(5)],
            vec![ring.of_int(5), ring.of_int(30)],
        ];
        for (k, points) in bad.iter().enumerate() {
            assert!(
                matches!(
                    interpolation_bound_check(&ring, &coeffs, points, 1),
                    Err(Error::Hypothesis(_))
                ),
                "control {k}"
            );
        }
        let sharp = interpolation_bound_check(
            &ring,
            &[ring.zero(), ring.zero(), ring.of_int(25)],
            &[ring.of_int(5), ring.of_int(10), ring.of_int(15)],
            1,
        )
        .unwrap();
        assert!(sharp.holds);
        assert_eq!(
            sharp.entries[2].actual, sharp.entries[2].bound,
            "bound is attained"
        );
    });
    budget(10, took, "1000 randomized instances");
    println!("criterion 11 (interpolation bound on randomized instances): PASS");
}

#[test]
fn criterion_12_singular_moduli_on_ingested_files() {
    for l in [2u64, 3] {
        // exercise the parse path: serialize, reread, then verify
        let text = serialize_modpoly(phi(l));
        let ingested = parse_modpoly(&text, l).unwrap();
        for d in [-7i64, -8, -11] {
            let rep = verify_singular(&ingested, d).unwrap();
            assert!(!rep.primes_tested.is_empty(), "level {l}, D = {d}");
            assert_eq!(rep.total_violations(), 0, "level {l}, D = {d}");
        }
    }
    println!("criterion 12 (singular-moduli families on ingested files): PASS");
}
