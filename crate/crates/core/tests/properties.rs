use balanced_coop::apps::{
    attrition_pij, public_goods_distribution, public_goods_p_star, public_goods_pair_table,
    traveler_distribution, traveler_pij, AttritionMode, AttritionSpec, PublicGoodsSpec,
    TravelerSpec,
};
use balanced_coop::balance::{balance_search, verify_table, BalanceTarget, SearchOptions, Table};
use balanced_coop::oracle::{iterate2, iterate_asym, psi_omega, IterationTrace};
use balanced_coop::{
    balanced_p, balanced_p3, balanced_p_asym, classify2, classify3, equiprobability,
    equiprobability3, phi_chi, AsymmetricTable2, ClassTag, CubicCoefficients, Error, NumericPolicy,
    PayoffTable2, PayoffTable3,
};
use proptest::prelude::*;

const CLASSES: [ClassTag; 5] = [
    ClassTag::PrisonersDilemma,
    ClassTag::Chicken,
    ClassTag::BattleOfSexes,
    ClassTag::StagHunt,
    ClassTag::Translators,
];

fn t2(v: [f64; 4]) -> PayoffTable2 {
    PayoffTable2::new(v[0], v[1], v[2], v[3]).unwrap()
}

/// Four values in `[-100, 100)`, descending, at least `gap` apart.
fn descending(gap: f64) -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-100.0f64..100.0)
        .prop_map(|mut v| {
            v.sort_by(|a, b| b.total_cmp(a));
            v
        })
        .prop_filter("values too close", move |v| {
            v.windows(2).all(|w| w[0] - w[1] > gap)
        })
}

fn arrange(class: ClassTag, [v0, v1, v2, v3]: [f64; 4]) -> PayoffTable2 {
    match class {
        ClassTag::PrisonersDilemma => t2([v0, v1, v2, v3]),
        ClassTag::Chicken => t2([v0, v1, v3, v2]),
        ClassTag::BattleOfSexes => t2([v0, v3, v2, v1]),
        ClassTag::StagHunt => t2([v1, v0, v2, v3]),
        ClassTag::Translators => t2([v0, v2, v1, v3]),
        ClassTag::Unclassified => unreachable!(),
    }
}

fn classified_table() -> impl Strategy<Value = (ClassTag, PayoffTable2)> {
    (prop::sample::select(CLASSES.to_vec()), descending(1e-3))
        .prop_map(|(class, v)| (class, arrange(class, v)))
}

/// The strict orderings, written out independently of the library.
fn orderings_held(t: &PayoffTable2) -> Vec<ClassTag> {
    let PayoffTable2 { a, b, c, d } = *t;
    let mut held = Vec::new();
    if a > b && b > c && c > d {
        held.push(ClassTag::PrisonersDilemma);
    }
    if a > b && b > d && d > c {
        held.push(ClassTag::Chicken);
    }
    if a > d && d > c && c > b {
        held.push(ClassTag::BattleOfSexes);
    }
    if b > a && a > c && c > d {
        held.push(ClassTag::StagHunt);
    }
    if a > c && c > b && b > d {
        held.push(ClassTag::Translators);
    }
    held
}

/// `p (phi + chi) - phi` sampled at 0, 1/2 and 1, turned back into
/// quadratic coefficients.
fn balance_quadratic(t: &PayoffTable2, class: ClassTag) -> (f64, f64, f64) {
    let f = |p: f64| {
        let w = phi_chi(t, class, p).unwrap();
        p * (w.phi + w.chi) - w.phi
    };
    let (f0, fh, f1) = (f(0.0), f(0.5), f(1.0));
    let a2 = 2.0 * f1 - 4.0 * fh + 2.0 * f0;
    let a1 = f1 - f0 - a2;
    (a2, a1, f0)
}

fn roots_in_unit(a2: f64, a1: f64, a0: f64, scale: f64) -> Vec<f64> {
    let roots = if a2.abs() <= 1e-12 * scale {
        vec![-a0 / a1]
    } else {
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc < 0.0 {
            Vec::new()
        } else {
            vec![
                (-a1 + disc.sqrt()) / (2.0 * a2),
                (-a1 - disc.sqrt()) / (2.0 * a2),
            ]
        }
    };
    roots
        .into_iter()
        .filter(|r| (-1e-9..=1.0 + 1e-9).contains(r))
        .collect()
}

/// Converged, or the last two iterates bracket `p` within 1e-8. Plain
/// iteration with a slope near -1 can exhaust its step budget (or fall into
/// a rounding 2-cycle) while already straddling the fixed point.
fn settled_on(trace: &IterationTrace, p: f64) -> bool {
    if trace.converged {
        return true;
    }
    let n = trace.iterates.len();
    let (x, y) = (trace.iterates[n - 1], trace.iterates[n - 2]);
    (x - y).abs() <= 1e-8 && p >= x.min(y) && p <= x.max(y)
}

fn pd3() -> impl Strategy<Value = PayoffTable3> {
    prop::array::uniform6(-100.0f64..100.0).prop_filter_map("not a ladder", |mut v| {
        v.sort_by(|a, b| b.total_cmp(a));
        if v.windows(2).any(|w| w[0] - w[1] < 1e-3) {
            return None;
        }
        PayoffTable3::try_from(&v[..]).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn classification_ignores_translation_and_scale(
        (class, t) in classified_table(),
        shift in -1e3f64..1e3,
        scale in 1e-3f64..1e3,
    ) {
        prop_assert_eq!(classify2(&t).unwrap().tag, class);
        prop_assert_eq!(classify2(&t.translated(shift)).unwrap().tag, class);
        prop_assert_eq!(classify2(&t.scaled(scale)).unwrap().tag, class);
    }

    #[test]
    fn at_most_one_ordering_per_permutation(v in descending(1e-9), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let t = t2([v[perm[0]], v[perm[1]], v[perm[2]], v[perm[3]]]);
        let held = orderings_held(&t);
        prop_assert!(held.len() <= 1);
        let tag = classify2(&t).unwrap().tag;
        prop_assert_eq!(tag, held.first().copied().unwrap_or(ClassTag::Unclassified));
    }

    #[test]
    fn same_differences_same_probability((_, t) in classified_table(), shift in -500.0f64..500.0) {
        let p = balanced_p(&t).unwrap().p;
        let moved = PayoffTable2::new(t.a + shift, t.b + shift, t.c + shift, t.d + shift).unwrap();
        prop_assert!((balanced_p(&moved).unwrap().p - p).abs() <= 1e-9);
    }

    #[test]
    fn balanced_p_is_a_fixed_point((class, t) in classified_table()) {
        let p = balanced_p(&t).unwrap().p;
        let w = phi_chi(&t, class, p).unwrap();
        prop_assert!(w.phi >= 0.0 && w.chi >= 0.0);
        let g = w.ratio().unwrap();
        prop_assert!((g - p).abs() <= 1e-9, "{:?}: p {} G(p) {}", t, p, g);
    }

    #[test]
    fn chicken_and_bos_have_one_root_in_unit_interval(
        class in prop::sample::select(vec![ClassTag::Chicken, ClassTag::BattleOfSexes]),
        v in descending(1e-3),
    ) {
        let t = arrange(class, v);
        let (a2, a1, a0) = balance_quadratic(&t, class);
        let inside = roots_in_unit(a2, a1, a0, t.spread());
        prop_assert_eq!(inside.len(), 1, "{:?}: {:?}", t, inside);
        prop_assert!((inside[0] - balanced_p(&t).unwrap().p).abs() <= 1e-9);
    }

    #[test]
    fn pd_equiprobability_sign(v in descending(1e-3)) {
        let t = arrange(ClassTag::PrisonersDilemma, v);
        let p = balanced_p(&t).unwrap().p;
        let gap = equiprobability(&t).gap;
        prop_assert_eq!(p > 0.5, gap > 0.0);
    }

    #[test]
    fn pd_with_zero_gap_is_even(
        (c, x, below) in (-50i32..50, 1i32..20).prop_flat_map(|(c, x)| (Just(c), Just(x), 1..2 * x)),
    ) {
        // b - c = x and a - d = 3x; below < 2x keeps a > b.
        let (c, x) = (c as f64, x as f64);
        let b = c + x;
        let d = c - below as f64;
        let a = d + 3.0 * x;
        let t = t2([a, b, c, d]);
        prop_assert_eq!(equiprobability(&t).gap, 0.0);
        prop_assert!((balanced_p(&t).unwrap().p - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn oracle_limit_ignores_the_start((class, t) in classified_table()) {
        let policy = NumericPolicy::default();
        let p = balanced_p(&t).unwrap().p;
        for p0 in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let trace = iterate2(&t, class, p0, &policy).unwrap();
            prop_assert!(trace.iterates.iter().all(|x| (0.0..=1.0).contains(x)));
            prop_assert!(settled_on(&trace, p), "{:?} from {}: {:?}", t, p0, &trace.iterates[trace.iterates.len() - 2..]);
            prop_assert!((trace.last() - p).abs() <= 1e-8, "{:?} from {}: {} vs {}", t, p0, trace.last(), p);
        }
    }

    #[test]
    fn cubic_residual_is_small(t in pd3()) {
        match balanced_p3(&t) {
            Ok(e) => {
                let c = CubicCoefficients::from_table(&t);
                let scale = [c.c3, c.c2, c.c1, c.c0].iter().fold(0.0f64, |m, x| m.max(x.abs()));
                prop_assert!(c.eval(e.p).abs() <= 1e-9 * scale);
            }
            Err(Error::Ambiguous { candidates }) => prop_assert!(candidates.len() > 1),
            Err(e) => prop_assert!(false, "{:?}: {}", t, e),
        }
    }

    #[test]
    fn three_player_translation_and_scale(t in pd3(), shift in -1e3f64..1e3, scale in 1e-2f64..1e2) {
        if let Ok(e) = balanced_p3(&t) {
            prop_assert!((balanced_p3(&t.translated(shift)).unwrap().p - e.p).abs() <= 1e-9);
            prop_assert!((balanced_p3(&t.scaled(scale)).unwrap().p - e.p).abs() <= 1e-9);
        }
    }

    #[test]
    fn three_player_zero_gap_has_even_fixed_point(
        k in -20i32..0,
        steps in (1i32..8, 1i32..8, 1i32..8)
            .prop_filter("no room for m < k", |&(s0, s1, s2)| s0 + s2 > s1)
            .prop_flat_map(|(s0, s1, s2)| (Just([s0, s1, s2]), 1..2 * (s0 + s2 - s1))),
    ) {
        // Ladder f > g > h > j > k > m with m chosen so that the
        // equiprobability gap vanishes. Then m - k = s3 - 2 (s0 - s1 + s2),
        // negative by construction.
        let ([s0, s1, s2], s3) = steps;
        let k = k as f64;
        let j = k + s0 as f64;
        let h = j + s1 as f64;
        let g = h + s2 as f64;
        let f = g + s3 as f64;
        let m = f + 4.0 * (h - j) - 3.0 * (g - k);
        assert!(m < k);
        let t = PayoffTable3::new(f, g, h, j, k, m).unwrap();
        prop_assume!(classify3(&t).unwrap().tag == ClassTag::PrisonersDilemma);
        prop_assert_eq!(equiprobability3(&t).gap, 0.0);
        let c = CubicCoefficients::from_table(&t);
        prop_assert!(c.eval(0.5).abs() <= 1e-12 * t.spread());
        // A zero gap makes 1/2 a fixed point; it is the answer only when the
        // update contracts there.
        let update = |p: f64| {
            let (psi, omega) = psi_omega(&t, p);
            psi / (psi + omega)
        };
        let dp = 1e-6;
        let slope = (update(0.5 + dp) - update(0.5 - dp)) / (2.0 * dp);
        prop_assume!((slope.abs() - 1.0).abs() > 1e-6);
        match balanced_p3(&t) {
            Ok(e) if slope.abs() < 1.0 => prop_assert!((e.p - 0.5).abs() <= 1e-9),
            Ok(_) => {}
            Err(Error::Ambiguous { candidates }) => {
                let listed = candidates.iter().any(|x| (x - 0.5).abs() <= 1e-9);
                prop_assert_eq!(listed, slope.abs() < 1.0);
            }
            Err(e) => prop_assert!(false, "{:?}: {}", t, e),
        }
    }

    #[test]
    fn asymmetric_matches_its_oracle(vx in descending(1e-2), vy in descending(1e-2)) {
        let t = AsymmetricTable2::from_sides(t2(vx), t2(vy));
        let (x, y) = balanced_p_asym(&t).unwrap();
        let trace = iterate_asym(&t, 0.5, &NumericPolicy::default()).unwrap();
        prop_assert!(trace.converged);
        let (lx, ly) = trace.last();
        prop_assert!((lx - x.p).abs() <= 1e-9 && (ly - y.p).abs() <= 1e-9);
    }

    #[test]
    fn public_goods_shape(k in 1.001f64..1.999, r in 1.0f64..1e3, options in 1usize..30) {
        let d = public_goods_distribution(&PublicGoodsSpec { r, k, options }).unwrap();
        prop_assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let diffs: Vec<f64> = d.probabilities.windows(2).map(|w| w[1] - w[0]).collect();
        if k > 4.0 / 3.0 + 1e-9 {
            prop_assert!(diffs.iter().all(|x| *x > 0.0));
        } else if k < 4.0 / 3.0 - 1e-9 {
            prop_assert!(diffs.iter().all(|x| *x < 0.0));
        }
    }

    #[test]
    fn public_goods_pairs_reduce_to_p_star(
        k in 1.001f64..1.999, r in 1.0f64..1e3, options in 2usize..30, i in 0usize..30, j in 0usize..30,
    ) {
        let i = i % (options + 1);
        let j = (i + 1 + j % options) % (options + 1);
        let spec = PublicGoodsSpec { r, k, options };
        let t = public_goods_pair_table(&spec, i, j).unwrap();
        let p_star = public_goods_p_star(k).unwrap();
        prop_assert!((balanced_p(&t).unwrap().p - p_star).abs() <= 1e-9);
    }

    #[test]
    fn traveler_pairs_depend_on_gap_only(
        s in 1.0f64..50.0, width in 1.0f64..100.0, frac in 0.01f64..1.0, steps in 2usize..40,
        i in 0usize..40, j in 0usize..40, shift in 0usize..40,
    ) {
        let spec = TravelerSpec { r: s + width, s, t: frac * s, steps };
        let i = i % (steps + 1);
        let j = (i + 1 + j % steps) % (steps + 1);
        let p = traveler_pij(&spec, i, j).unwrap();
        prop_assert_eq!(p, traveler_pij(&spec, j, i).unwrap());
        let (lo, hi) = (i.min(j), i.max(j));
        let moved = shift % (steps - hi + 1);
        prop_assert!((traveler_pij(&spec, lo + moved, hi + moved).unwrap() - p).abs() <= 1e-15);
        prop_assert!((0.0..=1.0).contains(&p));
        let dv = (hi - lo) as f64 * spec.v();
        let disc = (spec.t + dv).powi(2) - 4.0 * dv * dv;
        prop_assert_eq!(disc >= 0.0, spec.t >= dv - 1e-12 * spec.t.max(dv));
        let d = traveler_distribution(&spec).unwrap();
        prop_assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn attrition_pairs_depend_on_gap_only(
        x in 0.1f64..20.0, max_bid in 2usize..40, i in 0usize..40, j in 0usize..40, shift in 0usize..40,
        mode in prop::sample::select(vec![AttritionMode::Paper, AttritionMode::Dispatch]),
    ) {
        let spec = AttritionSpec { x, max_bid };
        let i = i % (max_bid + 1);
        let j = (i + 1 + j % max_bid) % (max_bid + 1);
        let p = attrition_pij(&spec, i, j, mode).unwrap();
        prop_assert_eq!(p, attrition_pij(&spec, j, i, mode).unwrap());
        let (lo, hi) = (i.min(j), i.max(j));
        let moved = shift % (max_bid - hi + 1);
        let q = attrition_pij(&spec, lo + moved, hi + moved, mode).unwrap();
        prop_assert!((q - p).abs() <= 1e-12);
        prop_assert!(p > 0.0 && p < 1.0);
    }

    #[test]
    fn search_preserves_class(
        (_, t) in classified_table(),
        p in 0.0f64..1.0,
        mu in -100.0f64..100.0,
        integer in any::<bool>(),
    ) {
        let target = BalanceTarget::new(p, mu, 0.01, 0.5).unwrap();
        let opts = SearchOptions { step: 0.5, max_iters: 40, integer };
        let out = balance_search(&t, &target, &opts).unwrap();
        prop_assert_eq!(classify2(&out.table).unwrap(), classify2(&t).unwrap());
        let again = verify_table(&Table::Two(out.table), &target).unwrap();
        prop_assert_eq!(&again, &out.report);
        prop_assert_eq!(verify_table(&Table::Two(t), &target).unwrap(), verify_table(&Table::Two(t), &target).unwrap());
    }
}

#[test]
fn pd_limits_are_approached_monotonically() {
    let eps: Vec<f64> = (1..=10).map(|k| 10f64.powi(-k)).collect();
    // b -> c from above: p -> 0.
    let to_zero: Vec<f64> = eps
        .iter()
        .map(|e| balanced_p(&t2([10.0, 5.0 + e, 5.0, 1.0])).unwrap().p)
        .collect();
    assert!(to_zero.windows(2).all(|w| w[1] < w[0]), "{to_zero:?}");
    assert!(to_zero[9] < 1e-9);
    // a -> b and c -> d together: p -> 1.
    let to_one: Vec<f64> = eps
        .iter()
        .map(|e| balanced_p(&t2([7.0 + e, 7.0, 1.0 + e, 1.0])).unwrap().p)
        .collect();
    assert!(to_one.windows(2).all(|w| w[1] > w[0]), "{to_one:?}");
    assert!(to_one[9] > 1.0 - 1e-9);
}

#[test]
fn zero_gap_with_two_attractors_is_ambiguous() {
    let t = PayoffTable3::new(7.0, 6.0, 0.0, -1.0, -2.0, -13.0).unwrap();
    assert_eq!(equiprobability3(&t).gap, 0.0);
    match balanced_p3(&t) {
        Err(Error::Ambiguous { candidates }) => {
            assert!((candidates[0] - (0.5 - 0.5 / 5f64.sqrt())).abs() < 1e-12);
            assert!((candidates[1] - (0.5 + 0.5 / 5f64.sqrt())).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    // Repelling 1/2 next to a single attractor at 2/3.
    let t = PayoffTable3::new(8.0, 7.0, 1.0, 0.0, -2.0, -15.0).unwrap();
    assert_eq!(equiprobability3(&t).gap, 0.0);
    assert!((balanced_p3(&t).unwrap().p - 2.0 / 3.0).abs() < 1e-12);
}
