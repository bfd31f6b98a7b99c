use ellstab::euclid::{euclid_reduce, replay};
use ellstab::lattice::{
    delta_e, phi, phi_q, phihat_q, psi_m_closed, psi_m_diagram, tensor, twist_q, upsilon, ChernTable, Divisor, QTable,
    SurfaceGeometry,
};
use ellstab::matrix::Mat2;
use ellstab::rational::{q, qf, Q, Z};
use ellstab::transport::{forward_transport, inverse_transport, run_checks, transport_matrix};
use ellstab::walls::{enumerate_walls, solve_wall, SearchBox, WallSolution};
use num_integer::Integer;
use proptest::prelude::*;

fn geom(e: i64) -> SurfaceGeometry {
    SurfaceGeometry::new(e).unwrap()
}

fn half_int() -> impl Strategy<Value = Q> {
    (-40i64..40).prop_map(|k| qf(k, 2))
}

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..30, 1i64..7).prop_map(|(a, b)| qf(a, b))
}

fn qtable() -> impl Strategy<Value = QTable> {
    (rational(), rational(), rational(), rational()).prop_map(|(a, b, c, d)| QTable::new(a, b, c, d))
}

/// `s = d·c + (e/2)·d² + k`, so that `ch₂ − c₁²/2 = k ∈ ℤ`.
fn geometric_table(e: i64, n: i64, d: i64, c: i64, k: i64) -> ChernTable {
    let s = q(d * c) + qf(e * d * d, 2) + q(k);
    ChernTable::from_i64(n, d, c, s)
}

fn arb_geometric() -> impl Strategy<Value = (i64, ChernTable)> {
    (1i64..=3, -8i64..8, -8i64..8, -8i64..8, -8i64..8).prop_map(|(e, n, d, c, k)| (e, geometric_table(e, n, d, c, k)))
}

/// Primitive, geometric, `Δ_e ≥ 0`, with `n > 1` and `0 < d ≠ n`.
fn arb_reducible() -> impl Strategy<Value = (i64, ChernTable)> {
    (1i64..=3, 2i64..60, 1i64..60, -20i64..20, 0i64..10)
        .prop_filter("primitive, n ≠ d", |(_, n, d, _, _)| n.gcd(d) == 1 && n != d)
        .prop_map(|(e, n, d, c, extra)| {
            let top = (1 - n) * (2 * d * c + e * d * d) - e * n * n;
            let k = Integer::div_floor(&top, &(2 * n)) - extra;
            (e, geometric_table(e, n, d, c, k))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phihat_inverts_phi_up_to_shift(v in qtable(), e in 1i64..=4) {
        let g = geom(e);
        prop_assert_eq!(phihat_q(&phi_q(&v, g), g), -&v);
        prop_assert_eq!(phi_q(&phihat_q(&v, g), g), -&v);
    }

    #[test]
    fn twists_compose(v in qtable(), e in 1i64..=4, a1 in rational(), b1 in rational(), a2 in rational(), b2 in rational()) {
        let g = geom(e);
        let (x, y) = (Divisor::new(a1, b1), Divisor::new(a2, b2));
        prop_assert_eq!(twist_q(&twist_q(&v, &x, g), &y, g), twist_q(&v, &(&x + &y), g));
        prop_assert_eq!(twist_q(&twist_q(&v, &x, g), &-&x, g), v);
    }

    #[test]
    fn phi_preserves_geometric_classes_and_delta_e((e, v) in arb_geometric()) {
        let g = geom(e);
        let w = phi(&v, g).unwrap();
        prop_assert!(w.is_geometric_integral(g));
        prop_assert_eq!(delta_e(&w, g), delta_e(&v, g));
    }

    #[test]
    fn upsilon_is_tensoring_by_minus_k_theta((e, v) in arb_geometric(), k in -5i64..5, k2 in -5i64..5) {
        let g = geom(e);
        let kz = Z::from(k);
        prop_assert_eq!(upsilon(&v, &kz, g), tensor(&v, &Divisor::ints(-k, 0), g).unwrap());
        prop_assert_eq!(upsilon(&upsilon(&v, &kz, g), &Z::from(k2), g), upsilon(&v, &Z::from(k + k2), g));
        prop_assert_eq!(delta_e(&upsilon(&v, &kz, g), g), delta_e(&v, g));
    }

    #[test]
    fn psi_closed_form_matches_diagram(e in 1i64..=3, d in 1i64..30, m in 1u64..6, r in 0i64..30, c in -20i64..20, k in -20i64..20) {
        let r = r % d;
        prop_assume!(m > 1 || r > 0);
        let n = m as i64 * d + r;
        let g = geom(e);
        let v = geometric_table(e, n, d, c, k);
        let closed = psi_m_closed(&v, m, g).unwrap();
        prop_assert_eq!(&closed, &psi_m_diagram(&v, m, g).unwrap().output);
        prop_assert_eq!(&closed.n, &Z::from(r));
        prop_assert_eq!(delta_e(&closed, g), delta_e(&v, g));
    }

    #[test]
    fn euclid_reaches_rank_one_and_replays((e, v) in arb_reducible()) {
        let g = geom(e);
        let trace = euclid_reduce(&v, g).unwrap();
        prop_assert_eq!(&trace.final_table.n, &Z::from(1));
        prop_assert_eq!(&trace.delta_e, &delta_e(&v, g));
        prop_assert!(replay(&trace, g).unwrap());
    }

    #[test]
    fn transport_round_trips(e in 1i64..=3, abar in 1i64..40, pbar in half_int(), qbar in half_int(), extra in 0i64..20) {
        let g = geom(e);
        let (abar, bbar) = (qf(abar, 4), q(e) + qf(extra, 3));
        let fwd = forward_transport(&abar, &pbar, &qbar, &bbar, g).unwrap();
        prop_assert!(run_checks(&fwd, g).all());
        let un = &fwd.unbarred;
        let back = inverse_transport(&un.a, &un.p, &un.q, &un.b, g).unwrap();
        prop_assert_eq!(&back.barred, &fwd.barred);
        prop_assert_eq!(&back.t, &fwd.t);
    }

    #[test]
    fn transport_matrix_factors_through_the_untwisted_rotation(p in rational(), pbar in rational()) {
        let left = Mat2::new(q(1), p.clone(), q(0), q(1));
        let rotation = Mat2::new(q(0), q(1), q(-1), q(0));
        let right = Mat2::new(q(1), -pbar.clone(), q(0), q(1));
        prop_assert_eq!(&(&left * &rotation) * &right, transport_matrix(&p, &pbar));
    }
}

#[test]
fn every_reported_wall_is_a_wall_for_each_witness() {
    let g = geom(2);
    let v = ChernTable::ints(2, 1, 1, -1);
    let b = q(3);
    let report = enumerate_walls(&v, &Divisor::zero(), &b, &SearchBox::symmetric(4, 4, 10), g).unwrap();
    assert!(!report.walls.is_empty());
    for wall in &report.walls {
        for w in &wall.witnesses {
            assert_eq!(solve_wall(&v, w, &Divisor::zero(), &b, g).unwrap(), WallSolution::WallAt { a: wall.a.clone() });
        }
    }
    let walls: Vec<&Q> = report.walls.iter().map(|w| &w.a).collect();
    assert!(walls.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn wall_enumeration_is_independent_of_execution_order() {
    let g = geom(2);
    let v = ChernTable::ints(2, 1, 1, -1);
    let run = || enumerate_walls(&v, &Divisor::zero(), &q(3), &SearchBox::symmetric(5, 5, 12), g).unwrap();
    let first = serde_json::to_string(&run()).unwrap();
    for _ in 0..3 {
        assert_eq!(serde_json::to_string(&run()).unwrap(), first);
    }
}
