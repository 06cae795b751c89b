use num_rational::BigRational;
use num_traits::{One, Zero};
use planedual::poly::{
    bareiss_det, cofactor_det, exact_poly, parse_rat, rat, sylvester_matrix, AnyPoly, ExactGroup, ExactPoly,
    HomogPoly, PolyMatrix, Space,
};
use planedual::Error;
use proptest::prelude::*;

fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for k in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn poly_from(n: usize, d: u32, coeffs: &[i64]) -> ExactPoly {
    let terms = monomials(n, d).into_iter().zip(coeffs).map(|(e, &c)| (rat(c, 1), e));
    HomogPoly::from_terms(n, Space::Point, terms).unwrap().with_degree_hint(d)
}

trait DegreeHint {
    fn with_degree_hint(self, d: u32) -> Self;
}

impl DegreeHint for ExactPoly {
    // An all-zero coefficient vector yields the zero polynomial of degree 0;
    // rebuild it at the intended degree so ring operations line up.
    fn with_degree_hint(self, d: u32) -> Self {
        if self.is_zero() {
            HomogPoly::zero(self.nvars(), d, self.space())
        } else {
            self
        }
    }
}

fn arb_poly(d: u32) -> impl Strategy<Value = ExactPoly> {
    let len = monomials(3, d).len();
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -5i64..=5], len).prop_map(move |c| poly_from(3, d, &c))
}

fn arb_group() -> impl Strategy<Value = ExactGroup> {
    prop::collection::vec(-3i64..=3, 9).prop_filter_map("singular", |v| {
        let g = ExactGroup::new(3, v.iter().map(|&x| rat(x, 1)).collect()).ok()?;
        if g.det().is_zero() {
            None
        } else {
            Some(g)
        }
    })
}

fn conic_veronese() -> ExactPoly {
    exact_poly(3, Space::Point, &[("1", &[1, 0, 1]), ("-1", &[0, 2, 0])])
}

#[test]
fn evaluation_examples() {
    let fermat = exact_poly(3, Space::Point, &[("1", &[2, 0, 0]), ("1", &[0, 2, 0]), ("1", &[0, 0, 2])]);
    assert_eq!(fermat.eval(&[rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap(), rat(1, 1));
    let q = conic_veronese();
    assert_eq!(q.eval(&[rat(1, 1), rat(1, 1), rat(1, 1)]).unwrap(), rat(0, 1));
    assert_eq!(q.eval(&[rat(2, 1), rat(2, 1), rat(2, 1)]).unwrap(), rat(0, 1));
    assert_eq!(q.eval(&[rat(1, 1), rat(2, 1), rat(1, 1)]).unwrap(), rat(-3, 1));
}

#[test]
fn derivative_examples() {
    let z0sq = exact_poly(3, Space::Point, &[("1", &[2, 0, 0])]);
    assert_eq!(z0sq.partial(0), exact_poly(3, Space::Point, &[("2", &[1, 0, 0])]));
    assert_eq!(conic_veronese().partial(1), exact_poly(3, Space::Point, &[("-2", &[0, 1, 0])]));
}

#[test]
fn torus_semi_invariance_of_veronese_conic() {
    let t = rat(5, 2);
    let g = ExactGroup::diag(&[t.clone(), rat(1, 1), BigRational::one() / t]).unwrap();
    assert_eq!(g.act_on_point_poly(&conic_veronese()).unwrap(), conic_veronese());
}

#[test]
fn substitute_identity() {
    let p = conic_veronese();
    assert_eq!(p.substitute(&ExactGroup::identity(3)).unwrap(), p);
}

#[test]
fn sylvester_layout_and_determinant() {
    let a = exact_poly(3, Space::Point, &[("1", &[1, 0, 0])]);
    let b = exact_poly(3, Space::Point, &[("1", &[0, 1, 0])]);
    let c = exact_poly(3, Space::Point, &[("1", &[0, 0, 1])]);
    let two_a = a.scale(&rat(2, 1));
    let m = sylvester_matrix(&[a.clone(), b.clone(), c.clone()], &[two_a.clone(), b.clone()]).unwrap();
    let zero = HomogPoly::zero(3, 1, Space::Point);
    let want: PolyMatrix<BigRational> = vec![
        vec![a.clone(), b.clone(), c.clone()],
        vec![two_a.clone(), b.clone(), zero.clone()],
        vec![zero, two_a, b.clone()],
    ];
    assert_eq!(m, want);
    // -a(b^2 - 4ac)
    let want_det = exact_poly(3, Space::Point, &[("-1", &[1, 2, 0]), ("4", &[2, 0, 1])]);
    assert_eq!(bareiss_det(&m).unwrap(), want_det);
    assert_eq!(cofactor_det(&m).unwrap(), want_det);
}

#[test]
fn sylvester_vanishes_on_shared_root() {
    // (t - 2)(t + 1) and (t - 2)(3t - 1) as constant coefficient polynomials.
    let k = |v: i64| HomogPoly::constant(1, rat(v, 1), Space::Point);
    let m = sylvester_matrix(&[k(1), k(-1), k(-2)], &[k(3), k(-7), k(2)]).unwrap();
    assert!(bareiss_det(&m).unwrap().is_zero());
}

#[test]
fn determinant_edge_cases() {
    let one = HomogPoly::constant(3, rat(1, 1), Space::Point);
    let zero = HomogPoly::zero(3, 0, Space::Point);
    let id: PolyMatrix<BigRational> =
        (0..3).map(|i| (0..3).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    assert_eq!(bareiss_det(&id).unwrap(), one);

    let x = |i: usize| HomogPoly::var(3, i, Space::Point);
    let row = vec![x(0), x(1), x(2), x(0).add(&x(1))];
    let m: PolyMatrix<BigRational> = vec![row.clone(), vec![x(2), x(0), x(1), x(2)], row, vec![x(1), x(1), x(0), x(2)]];
    assert!(bareiss_det(&m).unwrap().is_zero());
}

#[test]
fn exact_division_examples() {
    let p = conic_veronese();
    let one = HomogPoly::constant(3, rat(1, 1), Space::Point);
    assert_eq!(p.exact_divide(&one).unwrap(), p);
    let num = exact_poly(3, Space::Point, &[("1", &[2, 0, 0]), ("1", &[0, 2, 0])]);
    let den = exact_poly(3, Space::Point, &[("1", &[1, 0, 0]), ("1", &[0, 1, 0])]);
    assert!(matches!(num.exact_divide(&den), Err(Error::InexactDivision)));
}

#[test]
fn fs_norm_examples() {
    assert_eq!(HomogPoly::<BigRational>::zero(3, 2, Space::Point).fs_norm_sq_exact(), rat(0, 1));
    for d in 1..=6u32 {
        let mut e = vec![0u32; 3];
        e[0] = d;
        let p = HomogPoly::from_terms(3, Space::Point, [(rat(1, 1), e)]).unwrap();
        let fact: i64 = (1..=d as i64).product();
        assert_eq!(p.fs_norm_sq_exact(), rat(1, fact));
    }
    let disc = exact_poly(3, Space::Dual, &[("1", &[0, 2, 0]), ("-4", &[1, 0, 1])]);
    assert_eq!(disc.fs_norm_sq_exact(), rat(33, 2));
    assert!((disc.to_float().fs_norm_sq() - 16.5).abs() < 1e-12);
}

#[test]
fn canonical_form_is_primitive_with_positive_lead() {
    let p = exact_poly(3, Space::Dual, &[("-3/2", &[0, 2, 0]), ("6", &[1, 0, 1])]);
    let c = p.canonical();
    assert_eq!(c, exact_poly(3, Space::Dual, &[("1", &[0, 2, 0]), ("-4", &[1, 0, 1])]).canonical());
    assert!(c.leading().unwrap().1 > &BigRational::zero());
}

#[test]
fn json_round_trip_and_rejections() {
    let p = conic_veronese();
    let s = serde_json::to_string(&p.to_file()).unwrap();
    assert_eq!(AnyPoly::from_json(&s).unwrap(), AnyPoly::Exact(p));
    let bad_degree = r#"{"vars":3,"degree":2,"space":"point","terms":[{"c":"1","e":[3,0,0]}]}"#;
    assert!(AnyPoly::from_json(bad_degree).is_err());
    let float = r#"{"vars":3,"degree":1,"space":"point","terms":[{"c":[0.5,1.0],"e":[1,0,0]}]}"#;
    assert!(matches!(AnyPoly::from_json(float).unwrap(), AnyPoly::Float(_)));
    assert_eq!(parse_rat("-7/14"), Some(rat(-1, 2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(p in arb_poly(2), q in arb_poly(2), r in arb_poly(1)) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&r), r.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.add(&q).mul(&r), p.mul(&r).add(&q.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_is_a_right_action(p in arb_poly(3), m in arb_group(), n in arb_group()) {
        prop_assert_eq!(p.substitute(&m).unwrap().substitute(&n).unwrap(), p.substitute(&m.mul(&n)).unwrap());
    }

    #[test]
    fn induced_actions_are_left_actions(p in arb_poly(2), s in arb_group(), t in arb_group(),
                                        v in prop::collection::vec(-4i64..=4, 3)) {
        let st = s.mul(&t);
        prop_assert_eq!(
            s.act_on_point_poly(&t.act_on_point_poly(&p).unwrap()).unwrap(),
            st.act_on_point_poly(&p).unwrap()
        );
        let dual = p.clone().with_space(Space::Dual);
        prop_assert_eq!(
            s.act_on_dual_poly(&t.act_on_dual_poly(&dual).unwrap()).unwrap(),
            st.act_on_dual_poly(&dual).unwrap()
        );
        let a: Vec<BigRational> = v.iter().map(|&x| rat(x, 1)).collect();
        prop_assert_eq!(s.act_on_dual_vector(&t.act_on_dual_vector(&a)), st.act_on_dual_vector(&a));
        // The dual action preserves incidence: (σ·a)(σz) = a(z).
        let z: Vec<BigRational> = vec![rat(1, 1), rat(-2, 1), rat(3, 1)];
        let sa = s.act_on_dual_vector(&a);
        let sz = s.apply(&z);
        let pair = |u: &[BigRational], w: &[BigRational]| u.iter().zip(w).fold(rat(0, 1), |acc, (x, y)| acc + x * y);
        prop_assert_eq!(pair(&sa, &sz), pair(&a, &z));
    }

    #[test]
    fn euler_identity(p in arb_poly(4)) {
        let mut lhs = HomogPoly::zero(3, 4, Space::Point);
        for i in 0..3 {
            lhs = lhs.add(&HomogPoly::var(3, i, Space::Point).mul(&p.partial(i)));
        }
        prop_assert_eq!(lhs, p.scale(&rat(4, 1)));
    }

    #[test]
    fn bareiss_matches_cofactor(n in 1usize..=4, seed in prop::collection::vec(-3i64..=3, 48)) {
        let m: PolyMatrix<BigRational> = (0..n)
            .map(|i| (0..n).map(|j| {
                let k = 3 * (i * 4 + j);
                poly_from(3, 1, &seed[k..k + 3])
            }).collect())
            .collect();
        prop_assert_eq!(bareiss_det(&m).unwrap(), cofactor_det(&m).unwrap());
    }

    #[test]
    fn division_round_trip(q in arb_poly(1), r in arb_poly(2)) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!(q.mul(&r).exact_divide(&q).unwrap(), r);
    }

    #[test]
    fn fs_norm_is_permutation_invariant(p in arb_poly(3), perm in Just([0usize, 1, 2]).prop_shuffle()) {
        let mut entries = vec![rat(0, 1); 9];
        for (i, &j) in perm.iter().enumerate() {
            entries[i * 3 + j] = rat(1, 1);
        }
        let g = ExactGroup::new(3, entries).unwrap();
        prop_assert_eq!(p.substitute(&g).unwrap().fs_norm_sq_exact(), p.fs_norm_sq_exact());
    }
}
