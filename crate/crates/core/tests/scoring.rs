mod oracle {
    pub mod reward;
}

use std::time::Instant;

use molbench_core::descriptors::ParameterTables;
use molbench_core::scoring::*;
use oracle::reward::{self as ro, Intended, World};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<String> {
    include_str!("fixtures/corpus.smi").lines().map(str::to_string).filter(|l| !l.is_empty()).collect()
}

#[test]
fn rewards_match_direct_evaluation() {
    let tables = ParameterTables::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let world = World::new(corpus(), &mut rng);
    let (dock, labels) = world.tables();
    let eval = Evaluators::new(tables).with_docking(&dock).with_labels(&labels);
    let start = Instant::now();
    let mut zeros = 0;
    for i in 0..1000 {
        let (prompt, text, intended) = ro::random_case(&world, i, &mut rng);
        prompt.validate().unwrap();
        let report = score_completion(&prompt, &text, &eval);
        let expected: Vec<f64> = prompt.objectives.iter().map(|o| ro::reward(&world, tables, o, &intended)).collect();
        assert_eq!(report.per_property.len(), expected.len());
        for (got, want) in report.per_property.iter().zip(&expected) {
            assert!((got - want).abs() <= 1e-12, "{text}: {:?} vs {expected:?} for {prompt:?}", report.per_property);
        }
        assert!((report.aggregate - ro::aggregate(&expected)).abs() <= 1e-12);
        if report.per_property.contains(&0.0) {
            assert_eq!(report.aggregate, 0.0);
            zeros += 1;
        }
        assert_eq!(matches!(intended, Intended::Invalid), report.validity != Validity::Valid, "{text}");
    }
    assert!(zeros > 50 && zeros < 950, "degenerate sample: {zeros} zero aggregates");
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn score_is_deterministic() {
    let tables = ParameterTables::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let world = World::new(corpus(), &mut rng);
    let (dock, labels) = world.tables();
    let eval = Evaluators::new(tables).with_docking(&dock).with_labels(&labels);
    for i in 0..100 {
        let (prompt, text, _) = ro::random_case(&world, i, &mut rng);
        let a = serde_json::to_string(&score_completion(&prompt, &text, &eval)).unwrap();
        let b = serde_json::to_string(&score_completion(&prompt, &text, &eval)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn validity_categories() {
    let cases = [
        ("<answer>CCO</answer>", AnswerKind::Smiles, Validity::Valid),
        ("plain text", AnswerKind::Smiles, Validity::Invalid(InvalidCategory::NoAnswerTags)),
        ("<answer>a molecule</answer>", AnswerKind::Smiles, Validity::Invalid(InvalidCategory::NoSmilesInAnswer)),
        ("<answer>c1cccc1</answer>", AnswerKind::Smiles, Validity::Invalid(InvalidCategory::InvalidSmiles)),
        ("<answer>CCO or c1ccccc1</answer>", AnswerKind::Smiles, Validity::Invalid(InvalidCategory::MultipleSmiles)),
        ("<answer>not sure</answer>", AnswerKind::Number, Validity::Invalid(InvalidCategory::NoNumber)),
        ("<answer>-2 or -3</answer>", AnswerKind::Number, Validity::Invalid(InvalidCategory::AmbiguousNumber)),
        ("<answer>draft</answer> final: <answer>-2.5</answer>", AnswerKind::Number, Validity::Valid),
    ];
    for (text, kind, want) in cases {
        assert_eq!(extract_answer(text, kind).validity(), want, "{text}");
    }
}

proptest! {
    #[test]
    fn aggregate_properties(rs in prop::collection::vec(0.0f64..=1.0, 1..6), i in 0usize..6, bump in 0.0f64..1.0) {
        let a = aggregate_reward(&rs);
        prop_assert!((0.0..=1.0).contains(&a));
        let i = i % rs.len();

        let mut zeroed = rs.clone();
        zeroed[i] = 0.0;
        prop_assert_eq!(aggregate_reward(&zeroed), 0.0);

        let mut raised = rs.clone();
        raised[i] = (raised[i] + bump).min(1.0);
        prop_assert!(aggregate_reward(&raised) >= a - 1e-15);

        let mut rotated = rs.clone();
        rotated.rotate_left(i);
        prop_assert!((aggregate_reward(&rotated) - a).abs() <= 1e-15);
        let mut reversed = rs.clone();
        reversed.reverse();
        prop_assert!((aggregate_reward(&reversed) - a).abs() <= 1e-15);
    }

    #[test]
    fn extraction_never_panics(text in "\\PC{0,200}", inner in "[ -~]{0,60}") {
        for kind in [AnswerKind::Smiles, AnswerKind::Number, AnswerKind::ClassLabel] {
            let _ = extract_answer(&text, kind);
            let wrapped = format!("{text}<answer>{inner}</answer>");
            prop_assert!(!matches!(extract_answer(&wrapped, kind).validity(), Validity::Invalid(InvalidCategory::NoAnswerTags)));
        }
    }

    #[test]
    fn scoring_fuzzed_transcripts(inner in "[A-Za-z0-9()=#\\[\\]@+\\-. ]{0,40}") {
        let tables = ParameterTables::bundled();
        let eval = Evaluators::new(tables);
        let prompt: Prompt = serde_json::from_str(
            r#"{"id":"f","task":"generation","objectives":[{"nu":"maximize","rho":"QED"},{"nu":"below","rho":"SA","sigma":0.5}]}"#,
        ).unwrap();
        let report = score_completion(&prompt, &format!("<answer>{inner}</answer>"), &eval);
        prop_assert!((0.0..=1.0).contains(&report.aggregate));
        prop_assert!(report.per_property.iter().all(|r| (0.0..=1.0).contains(r)));
        if report.validity != Validity::Valid {
            prop_assert_eq!(report.aggregate, 0.0);
        }
    }
}
