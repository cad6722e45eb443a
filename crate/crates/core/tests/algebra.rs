#![allow(clippy::type_complexity)]

mod common;

use cfl_core::algebra::*;
use cfl_core::rational::{int, rat};
use cfl_core::Rational;
use common::{ell, z};
use proptest::prelude::*;

fn galilei(doubled: u32) -> AlgebraParams {
    AlgebraParams::Galilei(ell(doubled))
}

fn c(n: u32, i: usize) -> GeneratorLabel {
    GeneratorLabel::C { n, i }
}

#[test]
fn time_translation_is_pure_time_derivative() {
    let h = make_generator(GeneratorLabel::H, galilei(1), 1).unwrap();
    let n = h.layout().nvars();
    assert_eq!(h.coefficient(0), &Polynomial::constant(n, int(1)));
    for v in 1..n {
        assert!(h.coefficient(v).is_zero(), "component {v}");
    }
}

#[test]
fn dilatation_at_half() {
    let g = make_generator(GeneratorLabel::D, galilei(1), 1).unwrap();
    let lay = g.layout();
    let n = lay.nvars();
    let half = rat(1, 2);
    assert_eq!(g.coefficient(lay.t()), &Polynomial::var(n, lay.t()));
    assert_eq!(g.coefficient(lay.x(0)), &Polynomial::monomial(n, half, &[(lay.x(0), 1)]));
    assert_eq!(g.coefficient(lay.rho()), &Polynomial::monomial(n, -half, &[(lay.rho(), 1)]));
    assert_eq!(g.coefficient(lay.v(0)), &Polynomial::monomial(n, -half, &[(lay.v(0), 1)]));
}

#[test]
fn acceleration_generator_at_integer_ell() {
    let g = make_generator(c(2, 0), galilei(2), 1).unwrap();
    let lay = g.layout();
    let n = lay.nvars();
    assert!(g.coefficient(lay.t()).is_zero());
    assert!(g.coefficient(lay.rho()).is_zero());
    assert_eq!(g.coefficient(lay.x(0)), &Polynomial::monomial(n, int(1), &[(lay.t(), 2)]));
    assert_eq!(g.coefficient(lay.v(0)), &Polynomial::monomial(n, int(2), &[(lay.t(), 1)]));
}

#[test]
fn bracket_examples() {
    let p = galilei(5);
    let gen = |l| make_generator(l, p, 1).unwrap();
    let h = gen(GeneratorLabel::H);
    let d = gen(GeneratorLabel::D);
    let k = gen(GeneratorLabel::K);
    assert_eq!(h.commutator(&d).unwrap(), h);
    assert_eq!(h.commutator(&k).unwrap(), d.scale(int(2)));
    assert_eq!(d.commutator(&gen(c(3, 0))).unwrap(), gen(c(3, 0)).scale(rat(1, 2)));
    assert!(k.commutator(&k).unwrap().is_zero());
    assert!(k.commutator(&gen(c(5, 0))).unwrap().is_zero());
}

#[test]
fn lifshitz_dilatation_weight() {
    let p = AlgebraParams::Lifshitz(z(2, 1));
    let h = make_generator(GeneratorLabel::H, p, 2).unwrap();
    let d = make_generator(GeneratorLabel::D, p, 2).unwrap();
    assert_eq!(h.commutator(&d).unwrap(), h.scale(int(2)));
    assert!(make_generator(GeneratorLabel::K, p, 2).is_err());
}

#[test]
fn structure_relations_hold() {
    for (p, d) in [(galilei(1), 3), (galilei(9), 1), (AlgebraParams::Lifshitz(z(7, 3)), 2)] {
        let report = verify_structure_relations(p, d).unwrap();
        assert!(report.all_hold(), "{p}: {:?}", report.mismatches().collect::<Vec<_>>());
        assert!(report.jacobi_triples > 0);
    }
    let report = verify_structure_relations(galilei(9), 1).unwrap();
    let with_d: Vec<_> = report.relations.iter().filter(|r| r.relation.starts_with("[D,C(")).collect();
    assert_eq!(with_d.len(), 10);
}

#[test]
fn unknown_acceleration_index_is_rejected() {
    assert!(make_generator(c(6, 0), galilei(5), 1).is_err());
    assert!(make_generator(c(0, 1), galilei(5), 1).is_err());
}

fn admissible_doubled() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 2, 4, 5, 6, 8, 9])
}

fn combination(labels: Vec<GeneratorLabel>) -> impl Strategy<Value = Vec<(Rational, GeneratorLabel)>> {
    prop::collection::vec(-3i128..=3, labels.len())
        .prop_map(move |cs| cs.into_iter().zip(labels.clone()).map(|(c, l)| (int(c), l)).collect())
}

fn algebra_and_pair() -> impl Strategy<Value = (AlgebraParams, usize, Vec<(Rational, GeneratorLabel)>, Vec<(Rational, GeneratorLabel)>)>
{
    (admissible_doubled(), 1usize..=2).prop_flat_map(|(doubled, d)| {
        let p = galilei(doubled);
        let labels = generator_labels(p, d);
        (Just(p), Just(d), combination(labels.clone()), combination(labels))
    })
}

/// The bracket of two combinations, expanded bilinearly with the tabulated
/// structure constants.
fn bracket_from_table(
    p: AlgebraParams,
    d: usize,
    a: &[(Rational, GeneratorLabel)],
    b: &[(Rational, GeneratorLabel)],
) -> VectorFieldGenerator {
    let mut terms = Vec::new();
    for (ca, la) in a {
        for (cb, lb) in b {
            for (c, l) in expected_bracket(p, *la, *lb) {
                terms.push((*ca * *cb * c, l));
            }
        }
    }
    linear_combination(&terms, p, d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brackets_match_structure_constants((p, d, a, b) in algebra_and_pair()) {
        let ga = linear_combination(&a, p, d).unwrap();
        let gb = linear_combination(&b, p, d).unwrap();
        let ab = ga.commutator(&gb).unwrap();
        prop_assert_eq!(&ab, &bracket_from_table(p, d, &a, &b));
        prop_assert!(ab.add(&gb.commutator(&ga).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn jacobi_on_combinations((p, d, a, b) in algebra_and_pair(), pick in 0usize..64) {
        let labels = generator_labels(p, d);
        let gc = make_generator(labels[pick % labels.len()], p, d).unwrap();
        let ga = linear_combination(&a, p, d).unwrap();
        let gb = linear_combination(&b, p, d).unwrap();
        let cyc = |x: &VectorFieldGenerator, y: &VectorFieldGenerator, w: &VectorFieldGenerator| {
            x.commutator(&y.commutator(w).unwrap()).unwrap()
        };
        let sum = cyc(&ga, &gb, &gc).add(&cyc(&gb, &gc, &ga)).unwrap().add(&cyc(&gc, &ga, &gb)).unwrap();
        prop_assert!(sum.is_zero());
    }
}
