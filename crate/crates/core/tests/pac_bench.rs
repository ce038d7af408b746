mod common;

use elq_core::bench::{gen_k1conj, gen_k2conj, gen_kpath, gen_planted, Counts};
use elq_core::fitloop::{bounded_fit, FitOptions};
use elq_core::model::{Concept, Ontology};
use elq_core::pac::{
    adversarial_most_general_suite, occam_sample_size, sample_size_bound, ExampleDistribution, PacError, PacParams,
    Variant,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn sample_size_is_monotone(e in 0.01f64..0.9, d in 0.01f64..0.9, vc in 0.5f64..50.0) {
        let m = occam_sample_size(e, d, vc);
        prop_assert!(occam_sample_size(e / 2.0, d, vc) >= m);
        prop_assert!(occam_sample_size(e, d / 2.0, vc) >= m);
        prop_assert!(occam_sample_size(e, d, vc * 2.0) >= m);
        prop_assert!(m as f64 >= 4.0 / e * (2.0 / d).log2());
    }

    #[test]
    fn larger_targets_need_more_examples(s in 1usize..30, k in 0usize..10) {
        for v in [Variant::Size, Variant::Restrictions] {
            let a = sample_size_bound(&PacParams::new(0.1, 0.1, k, s).unwrap(), v).unwrap();
            let b = sample_size_bound(&PacParams::new(0.1, 0.1, k, s + 1).unwrap(), v).unwrap();
            prop_assert!(b > a);
        }
    }
}

#[test]
fn parameters_outside_the_unit_interval_are_rejected() {
    assert_eq!(PacParams::new(0.0, 0.5, 1, 1).unwrap_err(), PacError::OutOfRange("epsilon", 0.0));
    assert_eq!(PacParams::new(0.5, 1.0, 1, 1).unwrap_err(), PacError::OutOfRange("delta", 1.0));
}

#[test]
fn sampling_follows_the_weights() {
    let s = adversarial_most_general_suite(2);
    let n = s.dist.len();
    let probs: Vec<f64> = (0..n).map(|i| if i == 0 { 0.7 } else { 0.3 / (n - 1) as f64 }).collect();
    let d = ExampleDistribution::new(s.dist.points.clone(), probs).unwrap();
    let draws = d.sample(20_000, 3);
    let hits = draws.iter().filter(|&&i| i == 0).count() as f64 / 20_000.0;
    // four standard deviations of a binomial proportion
    assert!((hits - 0.7).abs() < 4.0 * (0.7f64 * 0.3 / 20_000.0).sqrt(), "{hits}");
    assert_eq!(d.sample(50, 9), d.sample(50, 9));
}

#[test]
fn benchmark_families_fit_their_targets() {
    for k in 1..=6 {
        for inst in [gen_kpath(k), gen_k1conj(k), gen_k2conj(k)] {
            assert!(common::fits(&inst.target, &inst.examples), "{}", inst.name);
            let r = bounded_fit(&inst.examples, &Ontology::new(), &FitOptions::default()).unwrap();
            let q = r.query.expect("a fitting exists");
            assert!(common::fits(&q, &inst.examples));
            assert!(q.restriction_count() <= inst.target.restriction_count(), "{}: {q}", inst.name);
        }
    }
}

#[test]
fn planted_labels_agree_with_the_chase() {
    let target: Concept = "(and A (ex r (and B (ex s top))))".parse().unwrap();
    let o = Ontology::parse("CI C A\nCI (ex r D) (ex s top)\nRI t r").unwrap();
    let p = gen_planted(&target, &o, Counts::default(), 11).unwrap();
    for x in &p.examples.examples {
        assert_eq!(common::entails(&target, &x.example, &o), x.label.is_positive());
    }
    assert_eq!(p.dist.len(), p.examples.len());
}
