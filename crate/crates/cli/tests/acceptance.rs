//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Everything here is exact arithmetic with zero tolerance.

use mukai_walls::mukai::{BasicAction, IsoGen, MukaiVector, NSLattice};
use mukai_walls::rank2::{enumerate_square_classes, spherical_sequences, Rank2Lattice};
use mukai_walls::reduction::{make_coprime_twist, run_reduction, ReductionOptions, StepKind, Terminal};
use mukai_walls::stability::{central_charge, slope, Slope, StabParam};
use mukai_walls::walls::{enumerate_candidate_walls, Bounds, Quadrant, Wall, WallShape};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(bi(n), bi(d))
}

/// Criterion 1: `certify --n N --k K` returns a valid certificate with zero
/// surviving semicircular walls for (n,k) in {(2,2),(3,2),(2,3),(5,2)} at
/// bounds c <= 500, |s| <= 10^6.
#[test]
fn criterion_1_no_wall_certificates_via_cli() {
    let bin = env!("CARGO_BIN_EXE_mukai-walls");
    for (n, k) in [(2, 2), (3, 2), (2, 3), (5, 2)] {
        let out = Command::new(bin)
            .args([
                "certify",
                "--n",
                &n.to_string(),
                "--k",
                &k.to_string(),
                "--bounds",
                "500,1000000",
            ])
            .output()
            .expect("certify runs");
        assert!(
            out.status.success(),
            "certify --n {n} --k {k} exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        let text = String::from_utf8(out.stdout).expect("utf-8 output");
        let value: serde_json::Value = serde_json::from_str(&text).expect("JSON certificate");
        assert_eq!(value["valid"], serde_json::Value::Bool(true), "(n,k)=({n},{k})");
        assert_eq!(
            value["surviving"].as_array().map(Vec::len),
            Some(0),
            "(n,k)=({n},{k})"
        );
        assert_eq!(value["candidates_checked"].as_u64(), Some(500_000_000));
    }
    println!("criterion 1 (no-wall certificates, bounds 500/10^6): PASS");
}

/// Criterion 2: off the square-degree hypothesis, the wall with center
/// -3/2 and squared radius 5/4 appears for d = 1, n = 2, and the slopes of
/// (1,0,-1) and (0,H,-3) agree exactly at (alpha, beta) = (1/2, -1/2).
#[test]
fn criterion_2_wall_existence_and_slope_equality() {
    let d = bi(1);
    let n = bi(2);
    let walls = enumerate_candidate_walls(
        &d,
        &n,
        Quadrant::Left,
        &Bounds { c_max: 3, s_max: 10 },
    )
    .unwrap();
    let expected = walls.iter().find(|w| {
        w.shape
            == WallShape::Semicircle {
                center: rat(-3, 2),
                radius_sq: rat(5, 4),
            }
    });
    let wall = expected.expect("wall {-3/2, 5/4} is enumerated");
    assert_eq!(wall.destabilizer, MukaiVector::from_i64(0, &[1], -3));

    // independent slope evaluation at the rational wall point
    let lat = NSLattice::rank1(1);
    let p = StabParam::new(1, rat(1, 2), rat(-1, 2)).unwrap();
    let v = MukaiVector::from_i64(1, &[0], -1);
    let u = MukaiVector::from_i64(0, &[1], -3);
    assert_eq!(slope(&p, &lat, &v).unwrap(), Slope::Finite(rat(-2, 1)));
    assert_eq!(slope(&p, &lat, &u).unwrap(), Slope::Finite(rat(-2, 1)));
    println!("criterion 2 (wall existence and exact slope equality): PASS");
}

/// Criterion 3: at beta = -1/k with d = k^2(n-1), the imaginary part of
/// the charge of any integral vector is an exact integer multiple of
/// 2 d alpha / k, and equals exactly that for (1, 0, 1-n).
#[test]
fn criterion_3_quantized_imaginary_parts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let k = rng.gen_range(2i64..=6);
        let n = rng.gen_range(2i64..=6);
        let d = k * k * (n - 1);
        let lat = NSLattice::rank1(d);
        let alpha = rat(rng.gen_range(1i64..=40), rng.gen_range(1i64..=40));
        let p = StabParam::new(d, alpha.clone(), rat(-1, k)).unwrap();
        let unit = rat(2 * d, k) * &alpha;
        let v = MukaiVector::from_i64(
            rng.gen_range(-50i64..=50),
            &[rng.gen_range(-50i64..=50)],
            rng.gen_range(-50i64..=50),
        );
        let z = central_charge(&p, &lat, &v).unwrap();
        let ratio = z.im / unit.clone();
        assert!(ratio.is_integer(), "im not a multiple of 2 d alpha / k");

        let hilb = MukaiVector::from_i64(1, &[0], 1 - n);
        let z = central_charge(&p, &lat, &hilb).unwrap();
        assert_eq!(z.im, unit);
    }
    println!("criterion 3 (quantization on the vertical line): PASS");
}

fn random_spherical(lat: &NSLattice, rng: &mut ChaCha8Rng) -> MukaiVector {
    // transport (1, 0, 1) by a random short word
    let base = MukaiVector::new(
        bi(1),
        vec![bi(0); lat.rank()],
        bi(1),
    );
    let word = random_word(lat, rng, 3);
    let iso = lat.isometry_from_word(&word).unwrap();
    lat.apply_isometry(&iso, &base).unwrap()
}

fn random_word(lat: &NSLattice, rng: &mut ChaCha8Rng, len: usize) -> Vec<IsoGen> {
    let mut word = Vec::new();
    for _ in 0..len {
        word.push(match rng.gen_range(0..4u8) {
            0 => IsoGen::Shift,
            1 => IsoGen::SphericalTwistO,
            2 => IsoGen::Dual,
            _ => IsoGen::TensorBy(
                (0..lat.rank())
                    .map(|_| bi(rng.gen_range(-3i64..=3)))
                    .collect(),
            ),
        });
    }
    word
}

/// Criterion 4: 10^4 random composites of the generators verify as
/// isometries of the full Mukai pairing; reflections are involutions; the
/// spherical twist acts as the reflection in (1, 0, 1) pointwise.
#[test]
fn criterion_4_isometry_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let lattices = [NSLattice::rank1(1), NSLattice::rank1(3), NSLattice::hyperbolic_u()];
    for i in 0..10_000usize {
        let lat = &lattices[i % lattices.len()];
        let mut word = random_word(lat, &mut rng, 1 + i % 5);
        if i % 3 == 0 {
            word.push(IsoGen::Reflect(random_spherical(lat, &mut rng)));
        }
        let iso = lat.isometry_from_word(&word).unwrap();
        assert!(lat.verify_isometry(&iso), "word {word:?} fails");
    }
    // involutions and pointwise agreement with the twist action
    let lat = NSLattice::rank1(2);
    let delta0 = MukaiVector::from_i64(1, &[0], 1);
    for _ in 0..10_000 {
        let v = MukaiVector::from_i64(
            rng.gen_range(-60i64..=60),
            &[rng.gen_range(-60i64..=60)],
            rng.gen_range(-60i64..=60),
        );
        let delta = random_spherical(&lat, &mut rng);
        let twice = lat
            .reflect(&lat.reflect(&v, &delta).unwrap(), &delta)
            .unwrap();
        assert_eq!(twice, v, "reflection in {delta} is not an involution");
        assert_eq!(
            lat.reflect(&v, &delta0).unwrap(),
            lat.basic_action(&v, BasicAction::SphericalTwistO)
        );
    }
    println!("criterion 4 (isometry suite, 10^4 composites): PASS");
}

/// Criterion 5: the recurrence output is contained in the brute-force
/// enumeration of square -2 classes, every term has square exactly -2,
/// and hyperbolic lattices with m >= 3 contain no isotropic class up to
/// bound 10^3.
#[test]
fn criterion_5_class_enumeration_oracle() {
    for m in 2i64..=6 {
        let lat = Rank2Lattice::spherical_pair(m);
        let (upper, lower) = spherical_sequences(&lat, 20).unwrap();
        // brute-force oracle within a box that the early terms inhabit
        let oracle = enumerate_square_classes(&lat, &bi(-2), 1000);
        for seq in [&upper, &lower] {
            assert_eq!(seq.entries.len(), 20);
            for e in &seq.entries {
                assert_eq!(lat.square(e), bi(-2), "m={m} entry {e:?}");
                assert!(!e.0.is_negative() && !e.1.is_negative());
                if e.0 <= bi(1000) && e.1 <= bi(1000) {
                    assert!(oracle.contains(e), "m={m}: {e:?} missed by the oracle");
                }
            }
        }
        if m >= 3 {
            assert!(
                enumerate_square_classes(&lat, &BigInt::zero(), 1000).is_empty(),
                "m={m} admits no isotropic class"
            );
        }
    }
    println!("criterion 5 (class enumeration against brute-force oracle): PASS");
}

/// Criterion 6: for every coprime pair (r, a) with 1 <= r, a <= 50 and
/// every representative with alpha in (0, r] of beta r - alpha a = 1, the
/// five pairing identities evaluate to (0, 0, -2, 0, -1) exactly.
#[test]
fn criterion_6_fiber_transform_identity_suite() {
    let u = NSLattice::hyperbolic_u();
    let mut pairs = 0usize;
    for r in 1i64..=50 {
        for a in 1i64..=50 {
            if num_integer::gcd(r, a) != 1 {
                continue;
            }
            pairs += 1;
            for alpha in 1..=r {
                // beta = (1 + alpha a) / r must be integral
                if (1 + alpha * a) % r != 0 {
                    continue;
                }
                let beta = (1 + alpha * a) / r;
                if beta == 0 {
                    continue;
                }
                let w = MukaiVector::from_i64(0, &[0, alpha], beta);
                let w_prime = MukaiVector::from_i64(alpha, &[beta, alpha + beta], beta);
                let t = MukaiVector::from_i64(alpha, &[beta, beta - r], -a);
                assert_eq!(u.mukai_pairing(&w_prime, &w_prime).unwrap(), bi(0));
                assert_eq!(u.mukai_pairing(&w_prime, &w).unwrap(), bi(0));
                assert_eq!(u.mukai_pairing(&t, &t).unwrap(), bi(-2));
                assert_eq!(u.mukai_pairing(&t, &w).unwrap(), bi(0));
                assert_eq!(u.mukai_pairing(&t, &w_prime).unwrap(), bi(-1));
                // and w pairs to -1 with any vector of that rank and degree
                let v = MukaiVector::from_i64(r, &[a, 2 * a + 1], 7);
                assert_eq!(u.mukai_pairing(&w, &v).unwrap(), bi(-1));
            }
        }
    }
    assert!(pairs > 1500, "coprime pair count {pairs}");
    println!("criterion 6 (fiber transform identities, exhaustive to 50): PASS");
}

/// Criterion 7: 10^3 random primitive inputs produce a twist exponent k
/// within the prime-search budget with gcd(Delta_k, s_k) = 1 and s_k > 0,
/// verified by independent gcd computation on the recorded pre-twist state.
#[test]
fn criterion_7_prime_search_twist() {
    let u = NSLattice::hyperbolic_u();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 1000 {
        let r = bi(rng.gen_range(1i64..=30));
        let a = bi(rng.gen_range(1i64..=30));
        let b = bi(rng.gen_range(-30i64..=30));
        let s0 = bi(rng.gen_range(-30i64..=30));
        let v = MukaiVector::new(r, vec![a, b], s0);
        if !v.is_primitive() {
            continue;
        }
        done += 1;
        let step = make_coprime_twist(&u, &v).unwrap_or_else(|e| {
            panic!("twist failed on {v}: {e}");
        });
        let StepKind::CoprimeTwist { k, prime_witness } = &step.kind else {
            panic!("unexpected step kind");
        };
        assert!(!k.is_negative());
        assert!(prime_witness > &BigInt::one());
        // independent verification: reconstruct the pre-twist state by
        // applying the recorded word up to the fiber twist
        let mut state = v.clone();
        for g in &step.word {
            state = match g {
                IsoGen::Shift => u.basic_action(&state, BasicAction::Shift),
                IsoGen::SphericalTwistO => u.basic_action(&state, BasicAction::SphericalTwistO),
                IsoGen::TensorBy(d) => u.tensor_by_divisor(&state, d).unwrap(),
                _ => panic!("unexpected action in word"),
            };
            // the fiber twist is the TensorBy with divisor (0, k)
            if let IsoGen::TensorBy(d) = g {
                if d[0].is_zero() && &d[1] == k {
                    break;
                }
            }
        }
        let gcd = state.delta[0].gcd(&state.delta[1]).gcd(&state.s);
        assert!(gcd.is_one(), "gcd(Delta_k, s_k) = {gcd} for input {v}");
        assert!(state.s.is_positive(), "s_k not positive for input {v}");
        assert!(step.all_checks_ok());
    }
    println!("criterion 7 (prime-search twist on 10^3 random inputs): PASS");
}

/// Criterion 8: end-to-end reduction of 50 random primitive vectors with
/// square >= -2 on degrees d <= 5 ends at (1, 0, 1-n) with the square
/// preserved at every step, and carries a valid certificate when n >= 2.
#[test]
fn criterion_8_end_to_end_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = ReductionOptions {
        k_final: bi(2),
        cert_bounds: Bounds {
            c_max: 50,
            s_max: 2_000,
        },
    };
    let mut done = 0;
    while done < 50 {
        let d = rng.gen_range(1i64..=5);
        let lat = NSLattice::rank1(d);
        let v = MukaiVector::from_i64(
            rng.gen_range(-6i64..=6),
            &[rng.gen_range(-6i64..=6)],
            rng.gen_range(-6i64..=6),
        );
        if !v.is_primitive() {
            continue;
        }
        let sq = lat.square(&v).unwrap();
        if sq < bi(-2) {
            continue;
        }
        done += 1;
        let n = (&sq + bi(2)) / bi(2);
        let trace = run_reduction(&lat, &v, &opts)
            .unwrap_or_else(|e| panic!("reduction failed on {v} (d={d}): {e}"));
        assert_eq!(trace.n, n);
        for step in &trace.steps {
            assert_eq!(
                step.before.0.square(&step.before.1).unwrap(),
                sq,
                "square drifted before {:?}",
                step.kind
            );
            assert_eq!(step.after.0.square(&step.after.1).unwrap(), sq);
            assert!(step.all_checks_ok(), "{:?}: {:?}", step.kind, step.checks);
        }
        // the trace ends at (1, 0, 1-n) (before any certificate bookkeeping)
        let normal_form = trace
            .steps
            .iter()
            .rev()
            .find(|s| !matches!(s.kind, StepKind::WallCertificate))
            .unwrap();
        let out = &normal_form.after.1;
        assert_eq!(out.r, bi(1));
        assert!(out.delta.iter().all(|x| x.is_zero()));
        assert_eq!(out.s, bi(1) - &n);
        if n >= bi(2) {
            assert_eq!(trace.terminal, Terminal::HilbertScheme);
            let cert = trace.certificate.as_ref().expect("certificate present");
            assert!(cert.valid);
        } else {
            assert!(trace.certificate.is_none());
        }
    }
    println!("criterion 8 (end-to-end reduction, 50 random vectors): PASS");
}

/// Criterion 9: enumerated semicircles for d = 1, n in {2, 3, 4} within
/// bounds (20, 200) never intersect transversally in the upper half plane:
/// the exact discriminant check (D^2 - R1 - R2)^2 < 4 R1 R2 fails for
/// every pair.
#[test]
fn criterion_9_nested_walls() {
    let d = 1i128;
    for n in 2i64..=4 {
        let walls = enumerate_candidate_walls(
            &bi(1),
            &bi(n),
            Quadrant::Left,
            &Bounds {
                c_max: 20,
                s_max: 200,
            },
        )
        .unwrap();
        // representatives (c, s) of each circle; all further arithmetic is
        // integral after clearing the common denominator 4 c1^2 c2^2 d^2
        let data: Vec<(i128, i128)> = walls
            .iter()
            .map(|w: &Wall| {
                assert!(matches!(w.shape, WallShape::Semicircle { .. }));
                (
                    i128::try_from(&w.destabilizer.delta[0]).unwrap(),
                    i128::try_from(&w.destabilizer.s).unwrap(),
                )
            })
            .collect();
        let n1 = (n - 1) as i128;
        for i in 0..data.len() {
            for j in (i + 1)..data.len() {
                let (c1, s1) = data[i];
                let (c2, s2) = data[j];
                // D^2 = A / M, R_i = u_i c_other^2 / M with M = 4 c1^2 c2^2 d^2
                let a = (s1 * c2 - s2 * c1) * (s1 * c2 - s2 * c1);
                let u1 = s1 * s1 - 4 * d * n1 * c1 * c1;
                let u2 = s2 * s2 - 4 * d * n1 * c2 * c2;
                let lhs = a - u1 * c2 * c2 - u2 * c1 * c1;
                // transversal crossing iff lhs^2 < 4 u1 u2 c1^2 c2^2
                assert!(
                    lhs * lhs >= 4 * u1 * u2 * c1 * c1 * c2 * c2,
                    "walls {i} and {j} cross transversally for n={n}"
                );
            }
        }
        assert!(data.len() > 50, "expected a rich wall set, got {}", data.len());
    }
    println!("criterion 9 (nested semicircles, exact discriminant): PASS");
}
