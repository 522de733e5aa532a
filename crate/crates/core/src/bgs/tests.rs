use std::collections::HashSet;

use super::*;
use crate::field::is_prime;
use crate::graph::GraphIndex;

fn finder(p: u64) -> PathFinder {
    PathFinder::new(Prime::new(p).unwrap())
}

fn pt(p: u64, c: [u64; 3]) -> ModPoint {
    ModPoint::new(Prime::new(p).unwrap(), c).unwrap()
}

fn primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&p| is_prime(p as u128))
}

fn all_points(p: u64) -> Vec<ModPoint> {
    GraphIndex::build(Prime::new(p).unwrap(), 1000)
        .unwrap()
        .points()
        .collect()
}

#[test]
fn seed_examples() {
    let s = finder(29).seed().cloned().unwrap();
    assert_eq!((s.n, s.point.coords()), (2, [1, 2, 5]));
    assert_eq!(s.points.len(), 3);
    let s = finder(113).seed().cloned().unwrap();
    assert_eq!((s.n, s.point.coords()), (5, [1, 34, 89]));
    let s = finder(97).seed().cloned().unwrap();
    assert_eq!((s.n, s.point.coords()), (1, [1, 1, 2]));
    let s = finder(59).seed().cloned().unwrap();
    assert_eq!(s.point.coords(), [1, 34, 30]);
}

#[test]
fn seed_is_least_n() {
    for p in primes(5, 199) {
        let f = finder(p);
        let Some(seed) = f.seed() else { continue };
        for x in &seed.points[1..seed.points.len() - 1] {
            assert!(!f.is_maximal(x), "p={p}: earlier point {x} already maximal");
        }
        assert!(f.is_maximal(&seed.point));
    }
}

/// Brute force: is there any maximal `z` with points on `C_i(x_i) ∩ C_k(z)`
/// and `C_j(y_j) ∩ C_k(z)`?
fn bridge_exists_brute(
    f: &PathFinder,
    pts: &[ModPoint],
    x: &ModPoint,
    i: Axis,
    y: &ModPoint,
    j: Axis,
) -> bool {
    let ks: Vec<Axis> = Axis::ALL
        .into_iter()
        .filter(|&k| k != i && k != j)
        .collect();
    ks.iter().any(|&k| {
        let zs_x: HashSet<u64> = pts
            .iter()
            .filter(|w| w.coord(i) == x.coord(i))
            .map(|w| w.coord(k))
            .collect();
        pts.iter()
            .filter(|w| w.coord(j) == y.coord(j))
            .map(|w| w.coord(k))
            .any(|z| zs_x.contains(&z) && f.is_max_value(z))
    })
}

fn check_bridge(b: &ConicBridge, x: &ModPoint, y: &ModPoint, f: &PathFinder) {
    let (i, j, k) = b.axes;
    assert_eq!(b.meet_x.coord(i), x.coord(i));
    assert_eq!(b.meet_y.coord(j), y.coord(j));
    assert_eq!(b.meet_x.coord(k), b.value);
    assert_eq!(b.meet_y.coord(k), b.value);
    assert!(f.is_max_value(b.value));
}

#[test]
fn conic_bridge_matches_brute_force() {
    for p in [7u64, 13, 19, 29, 37, 61] {
        let f = finder(p);
        let pts = all_points(p);
        let cage: Vec<ModPoint> = pts.iter().copied().filter(|x| f.is_maximal(x)).collect();
        let step = (cage.len() / 40).max(1);
        for x in cage.iter().step_by(step) {
            for y in cage.iter().step_by(step) {
                for &i in &f.maximal_axes(x) {
                    for &j in &f.maximal_axes(y) {
                        let got = f.conic_bridge(x, i, y, j);
                        assert_eq!(
                            got.is_ok(),
                            bridge_exists_brute(&f, &pts, x, i, y, j),
                            "p={p} {x} {y}"
                        );
                        if let Ok(b) = got {
                            check_bridge(&b, x, y, &f);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn hyperbolic_bridges_exhaustive_19() {
    let f = finder(19);
    let pts = all_points(19);
    let hyp_max = |x: &ModPoint, a: Axis| {
        let c = f.classes[x.coord(a) as usize];
        c.kind == crate::point::CoordKind::Hyperbolic && c.order == 18
    };
    let mut pairs = 0;
    for x in &pts {
        for y in &pts {
            for i in Axis::ALL.into_iter().filter(|&a| hyp_max(x, a)) {
                for j in Axis::ALL.into_iter().filter(|&a| hyp_max(y, a)) {
                    let b = f.conic_bridge(x, i, y, j).unwrap();
                    check_bridge(&b, x, y, &f);
                    pairs += 1;
                }
            }
        }
    }
    assert!(pairs > 1000);
}

#[test]
fn same_point_same_index_bridge() {
    let f = finder(29);
    let x = pt(29, [1, 2, 5]);
    let (_, i) = f.point_order(&x);
    let b = f.conic_bridge(&x, i, &x, i).unwrap();
    check_bridge(&b, &x, &x, &f);
    assert_ne!(b.axes.2, i);
}

#[test]
fn endgame_example() {
    let f = finder(11);
    let (axis, n, y) = f.endgame(&pt(11, [1, 1, 1])).unwrap();
    assert_eq!((axis, n, y.coords()), (Axis::X1, 1, [1, 1, 2]));
    let x = pt(11, [1, 1, 2]);
    assert_eq!(f.endgame(&x).unwrap(), (Axis::X3, 0, x));
}

#[test]
fn endgame_exhaustive_small() {
    for p in primes(5, 61) {
        let f = finder(p);
        for x in all_points(p) {
            let (ord, i) = f.point_order(&x);
            if !f.above_sqrt(ord) || f.classes[x.coord(i) as usize].discriminant == 0 {
                continue;
            }
            let (axis, n, y) = f.endgame(&x).unwrap_or_else(|e| panic!("p={p}: {e}"));
            assert_eq!(x.rotation_power(axis, n), y);
            assert!(f.is_maximal(&y));
            assert!(n.unsigned_abs() <= 2 * p);
        }
    }
}

#[test]
fn middlegame_climbs_strictly() {
    for p in primes(5, 199) {
        let f = finder(p);
        let limit = f.surface.p_squared_minus_1().tau() as usize;
        for x in all_points(p) {
            let (ord, _) = f.point_order(&x);
            if f.above_sqrt(ord) {
                continue;
            }
            match f.middlegame(&x) {
                Ok(c) => {
                    assert!(
                        c.orders.windows(2).all(|w| w[0] < w[1]),
                        "p={p} {x}: {:?}",
                        c.orders
                    );
                    assert!(c.word.switches() <= limit);
                    assert_eq!(x.apply_word(&c.word), c.end);
                    assert!(f.above_sqrt(f.point_order(&c.end).0));
                }
                Err(BgsError::MiddlegameStuck(_)) => {}
                Err(e) => panic!("p={p} {x}: {e}"),
            }
        }
    }
}

/// `(2/3, 1 ± (2/3) i n, 1 ± (2/3) i (n+1))` with `i^2 = -1`.
fn parabolic_orbit(p: u64, plus: bool) -> Vec<ModPoint> {
    let prime = Prime::new(p).unwrap();
    let i = prime.elem(-1).sqrt().unwrap();
    let tt = prime.elem(2) * prime.elem(3).inv().unwrap();
    let step = if plus { tt * i } else { -(tt * i) };
    (0..p as i64)
        .map(|n| {
            let a = prime.one() + step * prime.elem(n);
            let b = prime.one() + step * prime.elem(n + 1);
            pt(p, [tt.value(), a.value(), b.value()])
        })
        .collect()
}

#[test]
fn parabolic_orbit_closed_form() {
    let x = parabolic_orbit(13, true)[0];
    assert_eq!(x.coords(), [5, 1, 0]);
    for p in [13u64, 17] {
        let plus = parabolic_orbit(p, true);
        let minus = parabolic_orbit(p, false);
        for w in plus.windows(2).chain(minus.windows(2)) {
            assert_eq!(w[0].rotate(RotationId::forward(Axis::X1)), w[1]);
        }
        let union: HashSet<ModPoint> = plus.iter().chain(&minus).copied().collect();
        assert_eq!(union.len(), 2 * p as usize);
        let g = GraphIndex::build(Prime::new(p).unwrap(), 100).unwrap();
        let s = Surface::new(Prime::new(p).unwrap());
        let conic: HashSet<ModPoint> = g
            .conic(Axis::X1, s.two_thirds().value())
            .into_iter()
            .map(|id| g.point(id))
            .collect();
        assert_eq!(union, conic);
    }
}

#[test]
fn parabolic_connect_replays() {
    for p in [13u64, 17, 29, 37] {
        let f = finder(p);
        let pts = all_points(p);
        let cage: Vec<ModPoint> = pts
            .iter()
            .copied()
            .filter(|x| f.is_maximal(x))
            .step_by(7)
            .collect();
        let mut done = 0;
        for x in pts.iter().filter(|x| f.two_thirds_axis(x).is_some()) {
            for y in &cage {
                match f.parabolic_connect(x, y) {
                    Ok(w) => {
                        assert!(w.switches() <= 2);
                        assert_eq!(y.apply_word(&w), *x);
                        done += 1;
                    }
                    Err(BgsError::Precondition(_)) => {}
                    Err(e) => panic!("p={p}: {e}"),
                }
            }
        }
        assert!(done > 0, "p={p}");
    }
    let f = finder(31);
    assert!(matches!(
        f.parabolic_connect(&pt(31, [1, 1, 1]), &pt(31, [1, 2, 5])),
        Err(BgsError::Precondition(_))
    ));
}

#[test]
fn full_path_table_row() {
    let f = finder(29);
    let path = f.full_path(&pt(29, [1, 2, 5])).unwrap();
    assert_eq!(path.word().to_string(), "r1^2");
    assert_eq!(path.stages(), vec![Stage::SeedToCage]);
}

#[test]
fn full_path_exhaustive_small() {
    for p in primes(5, 61) {
        let f = finder(p);
        let seed = f.seed().cloned();
        for x in all_points(p) {
            let path = f.full_path(&x).unwrap_or_else(|e| panic!("p={p} {x}: {e}"));
            assert_eq!(
                ModPoint::origin(f.surface.prime()).apply_word(&path.word()),
                x
            );
            if path.is_pure_bgs() {
                assert!(path.max_exponent() <= 2 * p);
                let mut cur = ModPoint::origin(f.surface.prime());
                for seg in &path.segments {
                    cur = cur.apply_word(&seg.word);
                    assert_eq!(cur, seg.end);
                    if seg.stage == Stage::CageHop {
                        assert!(f.is_maximal(&seg.end));
                    }
                }
                if f.is_maximal(&x) && seed.is_some() {
                    let hop_blocks: usize =
                        path.segments[1..].iter().map(|s| s.word.switches()).sum();
                    assert!(hop_blocks <= 3, "p={p} {x}: {}", path.word());
                }
            }
        }
    }
}

#[test]
fn full_path_rejects_wrong_prime() {
    let f = finder(29);
    assert!(matches!(
        f.full_path(&pt(31, [1, 1, 1])),
        Err(BgsError::Precondition(_))
    ));
}
