//! Randomised invariants across the public API.

use num_rational::Ratio;
use proptest::prelude::*;

use talbot::fieldsum::{build_sum_table, compute_gq, exp_sum, weil_bound, IntPoly};
use talbot::mtp::{mtp_lower_bound, slab_dim_bound, ExponentPair};
use talbot::regions::{
    classify_above_below, dim_f, fine_ball_exponent, in_domain_d, sheet_exponent, thm14_curve, ParamPoint, Region,
};
use talbot::slabgeo::{
    covering_count, overlap_pair_count, slabs_containing, union_measure, CoverStrategy, Domain, FamilyKind, GqTables,
    MeasureMethod, Slab, SlabFamily, SlabParams,
};

fn family_at(boxes: &[(f64, f64, f64, f64)], domain: Domain, r: f64) -> SlabFamily {
    let slabs = boxes
        .iter()
        .enumerate()
        .map(|(i, &(x, y, rx, ry))| Slab { center: vec![x, y], radii: vec![rx, ry], p: vec![i as i64, 0], q: 1 })
        .collect();
    SlabFamily { slabs, params: SlabParams::new(2, 2, r, 0.5, 0.75).unwrap(), kind: FamilyKind::F, domain }
}

fn family(boxes: &[(f64, f64, f64, f64)], domain: Domain) -> SlabFamily {
    family_at(boxes, domain, 256.0)
}

fn boxes() -> impl Strategy<Value = Vec<(f64, f64, f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64, 1e-3..0.1f64, 1e-3..0.1f64), 1..40)
}

const PRIMES: [u64; 6] = [5, 7, 11, 13, 17, 19];

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn union_between_largest_box_and_sum(b in boxes(), torus in any::<bool>()) {
        let domain = if torus { Domain::Torus(vec![1.0, 1.0]) } else { Domain::Plane };
        let f = family(&b, domain);
        let m = union_measure(&f, MeasureMethod::ExactSweep).unwrap().measure;
        let largest = f.slabs.iter().map(Slab::measure).fold(0.0, f64::max);
        prop_assert!(m <= f.total_measure() * (1.0 + 1e-12));
        prop_assert!(m >= largest * (1.0 - 1e-12));
        let ov = overlap_pair_count(&f);
        prop_assert!(ov.pairs >= ov.boxes as u64);
        prop_assert!(ov.pairs <= (ov.boxes * ov.boxes) as u64);
    }

    #[test]
    fn union_is_invariant_under_box_order(mut b in boxes()) {
        let f = family(&b, Domain::Plane);
        let m1 = union_measure(&f, MeasureMethod::ExactSweep).unwrap().measure;
        b.reverse();
        let m2 = union_measure(&family(&b, Domain::Plane), MeasureMethod::ExactSweep).unwrap().measure;
        prop_assert!((m1 - m2).abs() <= 1e-12);
    }

    #[test]
    fn cover_count_brackets(b in boxes(), e in 4..8i32) {
        // Every cell has area 4ρ², and every box needs at least one cell.
        let r = 2f64.powi(e);
        let f = family_at(&b, Domain::Plane, r);
        let rho = CoverStrategy::FineBalls.radius(r);
        let count = covering_count(&f, rho, CoverStrategy::FineBalls).unwrap() as f64;
        let m = union_measure(&f, MeasureMethod::ExactSweep).unwrap().measure;
        prop_assert!(count * 4.0 * rho * rho >= m * (1.0 - 1e-9));
        let per_box: f64 = f
            .slabs
            .iter()
            .map(|s| s.radii.iter().map(|w| (2.0 * w / (2.0 * rho)).ceil() + 1.0).product::<f64>())
            .sum();
        prop_assert!(count <= per_box);
    }

    #[test]
    fn conjugate_symmetry_and_weil(qi in 0..PRIMES.len(), a in 1..1000i64, b in -1000..1000i64, c in -1000..1000i64) {
        let q = PRIMES[qi];
        let w = IntPoly::parse("x^3+y^3", None).unwrap();
        let s = exp_sum(&w, &[a, b, c], q).unwrap();
        let t = exp_sum(&w, &[-a, -b, -c], q).unwrap();
        prop_assert!((s - t.conj()).norm() <= 1e-10);
        if a % q as i64 != 0 && !q.is_multiple_of(3) {
            prop_assert!(s.norm() <= weil_bound(3, 2, q) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn gq_is_closed_under_negation(qi in 0..4usize) {
        let q = PRIMES[qi];
        let w = IntPoly::parse("x^3+y^3", None).unwrap();
        let g = compute_gq(&build_sum_table(&w, q, 0.1, 1e10, false).unwrap());
        for p in g.members() {
            let neg: Vec<i64> = p.iter().map(|&v| -(v as i64)).collect();
            prop_assert!(g.contains(&neg));
        }
        prop_assert!(g.density() > 0.0 && g.density() <= 1.0);
    }

    #[test]
    fn mtp_is_at_most_full_dimension(pairs in prop::collection::vec((1..20i64, 0..20i64), 1..5)) {
        let b: Vec<Ratio<i64>> = pairs.iter().map(|&(b, _)| Ratio::new(b, 10)).collect();
        let a: Vec<Ratio<i64>> = pairs.iter().map(|&(b, a)| Ratio::new(a.min(b), 10)).collect();
        let e = ExponentPair::new(b.clone(), a.clone()).unwrap();
        let v = mtp_lower_bound(&e);
        prop_assert!(v <= Ratio::from(b.len() as i64));
        prop_assert!(v >= Ratio::from(0));
        // Undilated rectangles: the bound is the full dimension.
        let same = ExponentPair::new(b.clone(), b.clone()).unwrap();
        prop_assert_eq!(mtp_lower_bound(&same), Ratio::from(b.len() as i64));
        // Float and exact arithmetic agree.
        let bf: Vec<f64> = b.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        let af: Vec<f64> = a.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        let vf = mtp_lower_bound(&ExponentPair::new(bf, af).unwrap());
        prop_assert!((vf - *v.numer() as f64 / *v.denom() as f64).abs() <= 1e-12);
    }

    #[test]
    fn slab_bound_grows_with_dilation(n in 2..5u32, i in 0..50i64, j in 0..50i64, di in 0..10i64, dj in 0..10i64) {
        let a1 = Ratio::new(i.min(50 - di), 100);
        let a2 = Ratio::new(50 + j.min(50 - dj), 100);
        let (v, _) = slab_dim_bound(n, a1, a2).unwrap();
        let (w, _) = slab_dim_bound(n, a1 + Ratio::new(di, 100), a2 + Ratio::new(dj, 100)).unwrap();
        prop_assert!(w >= v);
    }

    #[test]
    fn dimension_formulas_in_domain(k in 2..12u32, n in 2..5u32, u1 in 0.0..0.5f64, u2 in 0.5..1.0f64) {
        let p = ParamPoint::new(u1, u2, k, n);
        prop_assume!(in_domain_d(&p).inside);
        let d = dim_f(&p).unwrap();
        prop_assert!(d <= n as f64 + 1e-12);
        prop_assert!(d >= 0.0);
        // The chosen cover is the cheaper one in each region.
        let fine = fine_ball_exponent(&p);
        let sheets = 2.0 * sheet_exponent(&p);
        match classify_above_below(&p).unwrap() {
            Region::Above => prop_assert!((d - fine).abs() <= 1e-12 && fine < sheets + 1e-12),
            Region::Below => prop_assert!((d - sheets).abs() <= 1e-12 && sheets <= fine + 1e-12),
        }
    }

    #[test]
    fn sobolev_curve_beats_trivial_bound(k in 2..9u32, n in 2..5u32, t in 0.0..1.0f64) {
        let c = thm14_curve(k, n).unwrap();
        let (lo, hi) = c.domain();
        let a = lo + (hi - lo) * t;
        let (s, _) = c.eval(a).unwrap();
        prop_assert!(s >= (n as f64 - a) / 2.0 - 1e-12);
    }

    #[test]
    fn slab_membership_round_trip(e in 8..12i32, pick in 0..10_000usize, ox in -0.99..0.99f64, oy in -0.99..0.99f64) {
        let r = 2f64.powi(e);
        let params = SlabParams::new(3, 2, r, 0.3, 0.9).unwrap();
        let w = IntPoly::parse("x^3", None).unwrap();
        let gq = GqTables::build(&w, &params.primes, 0.1, 1e10).unwrap();
        let fam = talbot::slabgeo::admissible_family(3, 2, r, 0.3, 0.9, &gq).unwrap();
        let s = &fam.slabs[pick % fam.len()];
        let x = [s.center[0] + ox * s.radii[0], s.center[1] + oy * s.radii[1]];
        let hits = slabs_containing(&params, &gq, &x).unwrap();
        prop_assert!(hits.iter().any(|h| h.p == s.p && h.q == s.q));
        prop_assert!(hits.iter().all(|h| h.contains(&x)));
    }
}
