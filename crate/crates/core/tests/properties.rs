use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use torick_core::algebra::{exp_expand, sum_localized, Character, LaurentPolynomial, RatPoly};
use torick_core::catalog::random_complete_fan_2d;
use torick_core::divisor::{cartier_data, polytope_points, positivity_check};
use torick_core::euler::{chi_classical, chi_t_divisor};
use torick_core::fan::{box_points, dual_generators};
use torick_core::multiplicity::em_k;
use torick_core::{Divisor, Error, Fan, PiecewiseExponential};

fn character(rank: usize, bound: i64) -> impl Strategy<Value = Character> {
    prop::collection::vec(-bound..=bound, rank).prop_map(Character::new)
}

fn primitive_character(rank: usize, bound: i64) -> impl Strategy<Value = Character> {
    character(rank, bound)
        .prop_filter("nonzero", |c| !c.is_zero())
        .prop_map(|c| c.primitive())
}

fn poly(rank: usize, terms: usize, bound: i64) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((-6i128..=6, character(rank, bound)), 0..=terms)
        .prop_map(move |ts| LaurentPolynomial::from_terms(rank, ts).unwrap())
}

fn nonzero_poly(rank: usize, terms: usize, bound: i64) -> impl Strategy<Value = LaurentPolynomial> {
    poly(rank, terms, bound).prop_filter("nonzero", |p| !p.is_zero())
}

fn rank_and_polys(k: usize) -> impl Strategy<Value = (usize, Vec<LaurentPolynomial>)> {
    (1usize..=3).prop_flat_map(move |r| (Just(r), prop::collection::vec(poly(r, 5, 3), k)))
}

fn random_fan() -> impl Strategy<Value = Fan> {
    any::<u64>().prop_map(|seed| random_complete_fan_2d(&mut StdRng::seed_from_u64(seed), 5, 4))
}

/// A random full-rank cone in dimension 2 or 3 with primitive generators.
fn simplicial_cone() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=3)
        .prop_flat_map(|n| prop::collection::vec(primitive_character(n, 3), n))
        .prop_map(|gens| {
            gens.into_iter()
                .map(Character::into_entries)
                .collect::<Vec<_>>()
        })
        .prop_filter("independent", |gens| dual_generators(gens).is_ok())
}

fn plane_cone() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(primitive_character(2, 3), 2)
        .prop_map(|gens| {
            gens.into_iter()
                .map(Character::into_entries)
                .collect::<Vec<_>>()
        })
        .prop_filter("independent", |gens| dual_generators(gens).is_ok())
}

/// A small factor making every divisor Cartier: the lcm of the cone
/// multiplicities when that is at most 4, and 1 otherwise.
fn cartier_scale(fan: &Fan) -> i64 {
    use num_integer::Integer;
    let l = fan
        .cones()
        .iter()
        .map(|c| c.kind().multiplicity().unwrap() as i64)
        .fold(1, |a, b| a.lcm(&b));
    if l <= 4 {
        l
    } else {
        1
    }
}

fn det(rows: &[Vec<i64>]) -> i64 {
    match rows.len() {
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => {
            let (a, b, c) = (&rows[0], &rows[1], &rows[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        }
        _ => unreachable!(),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Bernoulli numbers `B_k` with `B_1 = +1/2`, by the Akiyama–Tanigawa
/// algorithm. These are the coefficients of `x / (1 - e^{-x}) = Σ B_k x^k / k!`.
fn bernoulli_plus(count: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for m in 0..count {
        a.push(rat(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = (&a[j - 1] - &a[j]) * BigRational::from_integer(BigInt::from(j as i64));
        }
        out.push(a[0].clone());
    }
    out
}

proptest! {
    #[test]
    fn ring_laws((r, ps) in rank_and_polys(3)) {
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a * &LaurentPolynomial::one(r), a.clone());
        prop_assert_eq!(a + &LaurentPolynomial::zero(r), a.clone());
        prop_assert!((a - &a.clone()).is_zero());
    }

    #[test]
    fn augment_is_a_ring_homomorphism((_r, ps) in rank_and_polys(2)) {
        let (a, b) = (&ps[0], &ps[1]);
        prop_assert_eq!((a + b).augment(), a.augment() + b.augment());
        prop_assert_eq!((a * b).augment(), a.augment() * b.augment());
    }

    #[test]
    fn shift_is_multiplication_by_a_monomial(p in poly(2, 6, 4), m in character(2, 4)) {
        prop_assert_eq!(p.shift(&m), &p * &LaurentPolynomial::exp(m));
    }

    #[test]
    fn exact_divide_round_trip(
        (a, b) in (1usize..=3).prop_flat_map(|r| (poly(r, 5, 3), nonzero_poly(r, 4, 3)))
    ) {
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn exact_divide_by_zero_fails(a in poly(2, 4, 3)) {
        prop_assert_eq!(a.exact_divide(&LaurentPolynomial::zero(2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn exp_expand_is_multiplicative(a in poly(2, 3, 2), b in poly(2, 3, 2)) {
        let order = 3;
        let lhs = exp_expand(&(&a * &b), order);
        let rhs = exp_expand(&a, order).mul(&exp_expand(&b, order));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_expand_degree_zero_is_augment(a in poly(3, 5, 3)) {
        let s = exp_expand(&a, 2);
        prop_assert_eq!(
            s.component(0).clone(),
            RatPoly::constant(3, BigRational::from_integer(BigInt::from(a.augment())))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    /// The `M/Zu` coset criterion agrees with actual division by `1 - e^u`.
    /// Half of the samples are built divisible.
    #[test]
    fn divisibility_matches_division(
        (p, u, force) in (1usize..=3).prop_flat_map(|r| {
            (poly(r, 5, 3), primitive_character(r, 3), any::<bool>())
        })
    ) {
        let cyclo = LaurentPolynomial::one_minus_exp(&u);
        let f = if force { &p * &cyclo } else { p };
        let by_coset = f.divisible_by_cyclo(&u).unwrap();
        let by_division = f.exact_divide(&cyclo);
        prop_assert_eq!(by_coset, by_division.is_ok());
        if force {
            prop_assert!(by_coset);
        }
        if let Ok(q) = by_division {
            prop_assert_eq!(&q * &cyclo, f);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn box_count_is_dual_multiplicity(gens in simplicial_cone()) {
        let duals = dual_generators(&gens).unwrap();
        let rows: Vec<Vec<i64>> = duals.iter().map(|u| u.entries().to_vec()).collect();
        prop_assert_eq!(box_points(&duals).unwrap().len() as i64, det(&rows).abs());
    }

    #[test]
    fn dual_of_dual_is_the_cone(gens in simplicial_cone()) {
        let duals = dual_generators(&gens).unwrap();
        let rows: Vec<Vec<i64>> = duals.iter().map(|u| u.entries().to_vec()).collect();
        let back = dual_generators(&rows).unwrap();
        for (b, v) in back.iter().zip(&gens) {
            prop_assert_eq!(b.entries(), v.as_slice());
        }
        for (i, u) in duals.iter().enumerate() {
            for (j, v) in gens.iter().enumerate() {
                let p = u.pair(v);
                let ok = if i == j { p > 0 } else { p == 0 };
                prop_assert!(ok);
            }
        }
    }

    /// `em^K` agrees with the Hilbert series `Σ_{m ∈ σ^∨ ∩ M} e^m` of the
    /// dual cone: multiplying the truncated series by `Π (1 - e^{u_i})`
    /// reproduces the box numerator in low degree.
    #[test]
    fn em_k_is_the_dual_cone_hilbert_series(gens in plane_cone()) {
        let n = gens.len();
        let fan = Fan::new(n, gens.clone(), vec![(0..n).collect()]).unwrap();
        let em = em_k(&fan, 0).unwrap();
        let duals = dual_generators(&gens).unwrap();
        let w: Vec<i64> = (0..n).map(|k| gens.iter().map(|v| v[k]).sum()).collect();
        let deg = |m: &Character| m.pair(&w);
        let top: i64 = duals.iter().map(deg).sum();
        let reach: i64 = top * duals.iter().map(|u| u.entries().iter().map(|x| x.abs()).max().unwrap()).sum::<i64>();

        let mut series = LaurentPolynomial::zero(n);
        let mut x = vec![-reach; n];
        'scan: loop {
            let m = Character::new(x.clone());
            if gens.iter().all(|v| m.pair(v) >= 0) && deg(&m) <= top {
                series = &series + &LaurentPolynomial::exp(m);
            }
            let mut k = 0;
            loop {
                if k == n { break 'scan; }
                if x[k] < reach { x[k] += 1; break; }
                x[k] = -reach;
                k += 1;
            }
        }
        let mut product = series;
        for u in &duals {
            product = &product * &LaurentPolynomial::one_minus_exp(u);
        }
        let low = LaurentPolynomial::from_terms(
            n,
            product.terms().filter(|(m, _)| deg(m) <= top).map(|(m, c)| (c, m.clone())),
        ).unwrap();
        prop_assert_eq!(&low, em.numerator());
        let lambdas: Vec<Character> = duals.iter().map(|u| -u).collect();
        let mut sorted = lambdas.clone();
        sorted.sort();
        prop_assert_eq!(em.denominator(), sorted.as_slice());
    }

    #[test]
    fn completeness_identity_on_random_fans(fan in random_fan()) {
        let terms: Vec<_> = (0..fan.cones().len()).map(|c| em_k(&fan, c).unwrap()).collect();
        prop_assert_eq!(
            sum_localized(&terms).unwrap().clear_to_polynomial().unwrap(),
            LaurentPolynomial::one(2)
        );
    }

    #[test]
    fn localized_sum_ignores_order(fan in random_fan(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut terms: Vec<_> = (0..fan.cones().len()).map(|c| em_k(&fan, c).unwrap()).collect();
        let a = sum_localized(&terms).unwrap().clear_to_polynomial().unwrap();
        terms.shuffle(&mut StdRng::seed_from_u64(seed));
        let b = sum_localized(&terms).unwrap().clear_to_polynomial().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn divisor_classes_are_piecewise_exponential(
        (fan, coeffs) in random_fan().prop_flat_map(|f| {
            let k = f.rays().len();
            (Just(f), prop::collection::vec(-4i64..=4, k))
        })
    ) {
        let d = Divisor::new(coeffs);
        match PiecewiseExponential::from_divisor(&fan, &d) {
            Ok(_) => {}
            Err(Error::NotCartier { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn pexp_closed_under_ring_operations_and_pushforward_is_linear(
        (fan, c1, c2, lam) in random_fan().prop_flat_map(|f| {
            let k = f.rays().len();
            (
                Just(f),
                prop::collection::vec(-2i64..=2, k),
                prop::collection::vec(-2i64..=2, k),
                poly(2, 3, 2),
            )
        })
    ) {
        let s = cartier_scale(&fan);
        let d1 = Divisor::new(c1).scaled(s);
        let d2 = Divisor::new(c2).scaled(s);
        if cartier_data(&fan, &d1).is_err() || cartier_data(&fan, &d2).is_err() {
            return Ok(());
        }
        let x = PiecewiseExponential::from_divisor(&fan, &d1).unwrap();
        let y = PiecewiseExponential::from_divisor(&fan, &d2).unwrap();
        let sum = x.add(&y).unwrap();
        let prod = x.mul(&y).unwrap();
        prop_assert_eq!(
            sum.pushforward_to_point().unwrap(),
            &x.pushforward_to_point().unwrap() + &y.pushforward_to_point().unwrap()
        );
        // The product is the class of O(D1 + D2).
        let combined = Divisor::new(d1.coeffs().iter().zip(d2.coeffs()).map(|(a, b)| a + b).collect());
        prop_assert_eq!(prod.pushforward_to_point().unwrap(), chi_t_divisor(&fan, &combined).unwrap());
        prop_assert_eq!(
            x.scale(&lam).unwrap().pushforward_to_point().unwrap(),
            &lam * &x.pushforward_to_point().unwrap()
        );
    }

    #[test]
    fn translation_identity(
        (fan, coeffs, m) in random_fan().prop_flat_map(|f| {
            let k = f.rays().len();
            (Just(f), prop::collection::vec(-2i64..=2, k), character(2, 4))
        })
    ) {
        let d = Divisor::new(coeffs).scaled(cartier_scale(&fan));
        if cartier_data(&fan, &d).is_err() {
            return Ok(());
        }
        let moved = d.translate(&fan, &m);
        prop_assert_eq!(
            chi_t_divisor(&fan, &moved).unwrap(),
            &LaurentPolynomial::exp(m) * &chi_t_divisor(&fan, &d).unwrap()
        );
    }

    #[test]
    fn ample_vertices_are_distinct_lattice_points_of_the_polytope(
        (fan, coeffs) in random_fan().prop_flat_map(|f| {
            let k = f.rays().len();
            (Just(f), prop::collection::vec(0i64..=5, k))
        })
    ) {
        let d = Divisor::new(coeffs);
        let Ok(pos) = positivity_check(&fan, &d) else { return Ok(()); };
        if !pos.is_basepoint_free() {
            return Ok(());
        }
        let verts = cartier_data(&fan, &d).unwrap().vertices;
        let pts = polytope_points(&fan, &d).unwrap();
        for v in &verts {
            prop_assert!(pts.contains(v));
        }
        if pos == torick_core::Positivity::Ample {
            let mut dedup = verts.clone();
            dedup.sort();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), verts.len());
        }
    }

    #[test]
    fn ehrhart_counts_grow_with_dilation(
        (fan, coeffs) in random_fan().prop_flat_map(|f| {
            let k = f.rays().len();
            (Just(f), prop::collection::vec(0i64..=3, k))
        })
    ) {
        let d = Divisor::new(coeffs);
        let Ok(pos) = positivity_check(&fan, &d) else { return Ok(()); };
        if !pos.is_basepoint_free() {
            return Ok(());
        }
        let mut prev = 0usize;
        for k in 1..=3 {
            let dk = d.scaled(k);
            let count = polytope_points(&fan, &dk).unwrap().len();
            prop_assert!(count >= prev);
            prop_assert_eq!(chi_classical(&fan, &dk).unwrap(), count as i128);
            prev = count;
        }
    }
}

#[test]
fn todd_series_matches_bernoulli_oracle() {
    let b = bernoulli_plus(5);
    assert_eq!(
        b,
        vec![rat(1, 1), rat(1, 2), rat(1, 6), rat(0, 1), rat(-1, 30)]
    );
    let u = Character::from([1]);
    let s = torick_core::todd_series(&[u], 1, 4).unwrap();
    let mut fact = 1i64;
    for (k, bk) in b.iter().enumerate() {
        if k > 0 {
            fact *= k as i64;
        }
        let expect = bk / BigRational::from_integer(BigInt::from(fact));
        assert_eq!(s.component(k).coeff(&[k as u32]), expect, "degree {k}");
    }
    let expected = [rat(1, 1), rat(1, 2), rat(1, 12), rat(0, 1), rat(-1, 720)];
    for (k, e) in expected.iter().enumerate() {
        assert_eq!(&s.component(k).coeff(&[k as u32]), e);
    }
}
