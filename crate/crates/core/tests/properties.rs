use proptest::prelude::*;

use conflab_core::curvature::{curvature_cw, is_weyl_member, weyl};
use conflab_core::io::{from_str, to_pretty, AlgebraFile, QuarticFile, TensorFile};
use conflab_core::lie::FiniteLieAlgebra;
use conflab_core::linalg::Mat;
use conflab_core::models::build_su_graded;
use conflab_core::scalar::{int, rat, Cx, Gauss, Rational};
use conflab_core::spinor::{act_quartic, petrov_classify, PetrovOptions, PetrovType, QuarticForm, SpinorFrame};

fn g(re: i64, im: i64) -> Gauss {
    Cx::new(int(re), int(im))
}

fn small() -> impl Strategy<Value = i64> {
    -3i64..=3
}

fn gauss() -> impl Strategy<Value = Gauss> {
    (small(), small()).prop_map(|(a, b)| g(a, b))
}

fn quartic() -> impl Strategy<Value = QuarticForm<Rational>> {
    proptest::collection::vec(gauss(), 5).prop_map(QuarticForm::from_vec)
}

fn sl2() -> impl Strategy<Value = Mat<Gauss>> {
    (gauss(), gauss(), gauss()).prop_map(|(a, b, c)| Mat::from_rows(vec![vec![a.clone(), b], vec![c, -a]]).unwrap())
}

/// Unimodular `[[1, x], [0, 1]]·[[1, 0], [y, 1]]`.
fn unimodular() -> impl Strategy<Value = Mat<Gauss>> {
    (gauss(), gauss()).prop_map(|(x, y)| {
        let u = Mat::from_rows(vec![vec![g(1, 0), x], vec![g(0, 0), g(1, 0)]]).unwrap();
        let l = Mat::from_rows(vec![vec![g(1, 0), g(0, 0)], vec![y, g(1, 0)]]).unwrap();
        u.mul(&l)
    })
}

/// Roots `[a : b]` with multiplicities summing to 4, kept projectively distinct.
fn rooted_quartic() -> impl Strategy<Value = (Vec<usize>, QuarticForm<Rational>)> {
    let partitions: Vec<Vec<usize>> = vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]];
    (proptest::sample::select(partitions), proptest::collection::vec(-4i64..=4, 4)).prop_filter_map(
        "distinct roots",
        |(parts, shifts)| {
            // roots t_k = shifts[k] + 9k are distinct for distinct k (shifts span 8)
            let ts: Vec<i64> = (0..parts.len()).map(|k| shifts[k] + 9 * k as i64).collect();
            let mut roots = Vec::new();
            for (t, &m) in ts.iter().zip(&parts) {
                roots.extend(std::iter::repeat_n((g(*t, 0), g(1, 0)), m));
            }
            Some((parts, QuarticForm::from_roots(&roots)))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_quartic_round_trip(phi in quartic()) {
        let frame = SpinorFrame::<Rational>::new(2).unwrap();
        let w = frame.weyl_from_quartic(&phi).unwrap();
        prop_assert!(is_weyl_member(&w));
        prop_assert_eq!(frame.quartic_from_weyl(&w).unwrap(), phi);
    }

    #[test]
    fn derived_action_is_a_representation(a in sl2(), b in sl2(), phi in quartic()) {
        let lhs = act_quartic(&a.commutator(&b), &phi);
        let rhs = act_quartic(&a, &act_quartic(&b, &phi)).sub(&act_quartic(&b, &act_quartic(&a, &phi)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn group_action_composes(a in unimodular(), b in unimodular(), phi in quartic()) {
        let stepwise = phi.transform(&b).unwrap().transform(&a).unwrap();
        prop_assert_eq!(stepwise, phi.transform(&a.mul(&b)).unwrap());
    }

    #[test]
    fn petrov_type_matches_root_multiplicities((parts, phi) in rooted_quartic(), a in unimodular()) {
        let want = PetrovType::from_partition(&parts).unwrap();
        let opts = PetrovOptions::default();
        prop_assert_eq!(petrov_classify(&phi, &opts).petrov, want);
        let moved = phi.transform(&a).unwrap();
        prop_assert_eq!(petrov_classify(&moved, &opts).petrov, want);
        // in floats the answer must be the type, or the type must be among those
        // the classifier says the rounded input cannot be told apart from
        let f = petrov_classify(&moved.to_c64(), &opts);
        prop_assert!(f.petrov == want || f.alternatives.contains(&want), "float {} (alternatives {:?}), want {}", f.petrov, f.alternatives, want);
    }

    #[test]
    fn cahen_wallach_weyl_vanishes_iff_s_is_scalar(a in small(), b in small(), c in small()) {
        let s = Mat::from_rows(vec![vec![int(a), int(b)], vec![int(b), int(c)]]).unwrap();
        let r = curvature_cw::<Rational>(&s).unwrap();
        prop_assert!(r.symmetry().all());
        let w = weyl(&r).unwrap();
        prop_assert!(is_weyl_member(&w));
        prop_assert_eq!(w.is_zero(), b == 0 && a == c);
    }

    #[test]
    fn tensor_file_round_trip(a in small(), b in small(), c in small()) {
        let s = Mat::from_rows(vec![vec![int(a), int(b)], vec![int(b), rat(c, 2)]]).unwrap();
        let r = curvature_cw::<Rational>(&s).unwrap();
        let f = TensorFile::from_tensor(&r);
        let back: TensorFile = from_str(&to_pretty(&f).unwrap()).unwrap();
        let t = back.to_tensor::<Rational>().unwrap();
        prop_assert_eq!(t.low_components(), r.low_components());
    }

    #[test]
    fn quartic_file_round_trip(phi in quartic()) {
        let f = QuarticFile::from_quartic(&phi);
        let back: QuarticFile = from_str(&to_pretty(&f).unwrap()).unwrap();
        prop_assert_eq!(back.to_quartic::<Rational>().unwrap(), phi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn algebra_file_round_trip(k in 0usize..=1, l in 1usize..=2) {
        prop_assume!(k <= l);
        let s = build_su_graded(k, l).unwrap();
        let f = AlgebraFile::from_algebra(&s.algebra, Some(&s.grading), None);
        let back: FiniteLieAlgebra<Rational> = from_str::<AlgebraFile>(&to_pretty(&f).unwrap()).unwrap().to_algebra().unwrap();
        prop_assert_eq!(back.dim(), s.algebra.dim());
        prop_assert!(back.jacobi_check().passed());
        prop_assert_eq!(AlgebraFile::from_algebra(&back, Some(&s.grading), None), f);
    }
}
