use hgmk3::charsum::{gauss_direct, CharacterSystem};
use hgmk3::ecount::{count_points, verify_curve_trace_theorem, CurveTheorem, WeierstrassCurve};
use hgmk3::ffield::FieldSpec;
use hgmk3::hyperg::{hg_h3, hg_h3_by_hand};
use hgmk3::k3count::{count_affine, verify_point_count_lemma, CountMode, SurfaceInstance};
use hgmk3::rat::{parse_q, Q};
use std::sync::Arc;

fn field(q: u64) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::of_order(q).unwrap())
}

/// Every (x, y, z) with `xyz(1-x-y-z) = 1/(256t)`.
fn triple_loop(f: &FieldSpec, t: &Q) -> u64 {
    let c = f.inv(f.mul(f.from_int(256), f.from_q(t).unwrap()));
    let mut n = 0;
    for x in f.elements() {
        for y in f.elements() {
            let xy = f.mul(x, y);
            for z in f.elements() {
                let w = f.sub(f.sub(f.sub(f.one(), x), y), z);
                if f.mul(f.mul(xy, z), w) == c {
                    n += 1;
                }
            }
        }
    }
    n
}

#[test]
fn affine_count_matches_triple_loop() {
    for q in [5, 7, 9, 11, 13, 25] {
        let f = field(q);
        for t in ["2", "3", "-1", "5/2", "81/256"] {
            let t = parse_q(t).unwrap();
            let Ok(inst) = SurfaceInstance::new(f.clone(), &t) else { continue };
            let brute = triple_loop(&f, &t);
            assert_eq!(count_affine(&inst, CountMode::Naive), brute, "q={q}");
            assert_eq!(count_affine(&inst, CountMode::SolvedZ), brute, "q={q}");
        }
    }
}

#[test]
fn lemma_spot_value() {
    let f = field(7);
    let inst = SurfaceInstance::new(f, &parse_q("2").unwrap()).unwrap();
    let c = verify_point_count_lemma(&inst).unwrap();
    assert_eq!((c.lhs, c.rhs), (180, 180));
    assert_eq!(count_affine(&inst, CountMode::Naive), 28);
}

#[test]
fn curve_counts_by_enumeration() {
    let f = field(5);
    let cs = CharacterSystem::new(f.clone(), 53).unwrap();
    for (a, b, want) in [(1, 1, 8), (1, 2, 3)] {
        let e = WeierstrassCurve::new(f.zero(), f.from_int(-a), f.from_int(b));
        let mut n = 1;
        for x in f.elements() {
            for y in f.elements() {
                let rhs = f.add(f.sub(f.pow(x, 3), f.mul(f.from_int(a), x)), f.from_int(b));
                if f.mul(y, y) == rhs {
                    n += 1;
                }
            }
        }
        assert_eq!(n, want);
        assert_eq!(count_points(&f, &e).unwrap(), want);
        match verify_curve_trace_theorem(&cs, f.from_int(a), f.from_int(b)).unwrap() {
            CurveTheorem::Checked { count, predicted, .. } => assert_eq!((count, predicted), (want, want as i64)),
            s => panic!("{s:?}"),
        }
    }
}

#[test]
fn gauss_norms_and_direct_sums() {
    for q in [3, 5, 7, 9, 25, 27, 49, 121, 125, 343] {
        let f = field(q);
        let cs = CharacterSystem::new(f.clone(), 53).unwrap();
        for m in 1..q as i64 - 1 {
            let g = cs.gauss(m);
            assert!((g.norm_sqr() / q as f64 - 1.0).abs() < 1e-9, "q={q} m={m}");
            if q <= 49 {
                assert!((g - gauss_direct(&f, f.one(), m)).norm() < 1e-9);
            }
        }
        assert!((cs.gauss(0).re + 1.0).abs() < 1e-12);
    }
}

#[test]
fn h3_engine_matches_definition() {
    for q in [7, 11, 13, 25] {
        let f = field(q);
        let cs = CharacterSystem::new(f.clone(), 53).unwrap();
        for t in f.units() {
            let (n, _) = hg_h3(&cs, t).unwrap();
            let direct = hg_h3_by_hand(&cs, t).unwrap();
            assert!((direct.re - n as f64).abs() < 1e-8 && direct.im.abs() < 1e-8, "q={q}");
        }
    }
}
