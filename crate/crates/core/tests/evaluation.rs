mod common;

use common::rng;
use lgmgc::evaluation::{
    dcg_at_k, evaluate_qa, f1_single, normalize_answer, qa_f1, recall_at_k, relabel_gold, rouge_f, rouge_l_f,
    AnswerQAExample, QaEvalOptions, RougeVariant,
};
use lgmgc::granularity::GranularIndex;
use lgmgc::retrieval::{embed_index, ExtractiveMockGenerator, HashEmbedder};
use lgmgc::segmentation::{recursive_chunk, Separator};
use lgmgc::Error;
use proptest::prelude::*;

#[test]
fn dcg_hand_fixture() {
    let ranks = [Some(1), Some(2), None, Some(4), Some(9)];
    let expected = (1.0 + 1.0 / 3f64.log2() + 1.0 / 5f64.log2()) / 5.0 * 100.0;
    assert!((dcg_at_k(&ranks, 5).unwrap() - expected).abs() < 1e-12);
    assert_eq!(recall_at_k(&ranks, 5).unwrap(), 60.0);
    assert_eq!(recall_at_k(&ranks, 1).unwrap(), 20.0);
    assert!(matches!(dcg_at_k(&ranks, 0), Err(Error::InvalidK)));
    assert!(matches!(recall_at_k(&[], 3), Err(Error::EmptyEvaluation)));
}

#[test]
fn qa_f1_hand_fixtures() {
    // min-frequency intersection: {cat:1, sat:1} against {cat:1, sat:1, down:1}
    assert!((f1_single("The cat sat.", "a cat sat down") - 0.8).abs() < 1e-15);
    // pred {x:3, y:1}, gold {x:1, z:1}: overlap 1, P = 1/4, R = 1/2
    assert!((f1_single("x x x y", "x z") - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(f1_single("An apple!", "apple"), 1.0);
    assert_eq!(f1_single("the", "a"), 1.0);
    assert_eq!(f1_single("the", "apple"), 0.0);
    assert_eq!(qa_f1("Paris", &["London".into(), "paris, France".into()]), 2.0 / 3.0);
    assert_eq!(normalize_answer("The  Quick, brown fox."), ["quick", "brown", "fox"]);
}

#[test]
fn rouge_fixtures() {
    assert_eq!(rouge_l_f("a b c d", "a b c d"), 1.0);
    assert_eq!(rouge_l_f("a b", "c d"), 0.0);
    // LCS "a c" of length 2 over 3 and 4 tokens
    let f = rouge_l_f("a b c", "a x c y");
    assert!((f - 2.0 * (2.0 / 3.0) * 0.5 / (2.0 / 3.0 + 0.5)).abs() < 1e-15);
    assert_eq!(rouge_f(RougeVariant::Two, "a b c", "a b d"), 0.5);
    assert_eq!(rouge_f(RougeVariant::One, "a b c", "c b a"), 1.0);
}

#[test]
fn relabel_finds_evidence_in_mini_corpus() {
    let corpus = common::mini_corpus();
    let doc = corpus.get("glass").unwrap();
    let chunks = recursive_chunk(doc, 50, &Separator::default_hierarchy()).unwrap();
    let gold = relabel_gold("Cobalt gives a deep blue and copper gives turquoise.", &chunks, &corpus).unwrap();
    let chunk = chunks.iter().find(|c| c.chunk_id == gold).unwrap();
    assert!(doc.chunk_text(chunk).contains("Cobalt gives a deep blue"));
}

#[test]
fn qa_evaluation_with_extractive_generator() {
    let corpus = common::mini_corpus();
    let mut index = GranularIndex::default();
    for doc in corpus.docs() {
        let parents = recursive_chunk(doc, 60, &Separator::default_hierarchy()).unwrap();
        index.extend(lgmgc::granularity::build_index(doc, parents, 60).unwrap());
    }
    let embedder = HashEmbedder::new(128);
    let store = embed_index(&index, &corpus, &embedder, 32).unwrap();
    let examples = vec![AnswerQAExample {
        id: None,
        question: "Which oxide gives a deep blue, cobalt or copper?".into(),
        gold_answers: vec!["Cobalt gives a deep blue and copper gives turquoise.".into()],
        doc_id: "glass".into(),
    }];
    let report = evaluate_qa(
        &examples,
        &corpus,
        &index,
        &store,
        &embedder,
        &ExtractiveMockGenerator,
        &QaEvalOptions::default(),
        Default::default(),
    )
    .unwrap();
    assert_eq!(report.per_query[0].query_id, "q1");
    assert_eq!(report.f1_mean, Some(100.0));
}

fn ranks_strategy() -> impl Strategy<Value = Vec<Option<usize>>> {
    prop::collection::vec(prop::option::of(1usize..40), 1..60)
}

proptest! {
    #[test]
    fn dcg_one_equals_recall_one(ranks in ranks_strategy()) {
        prop_assert_eq!(dcg_at_k(&ranks, 1).unwrap().to_bits(), recall_at_k(&ranks, 1).unwrap().to_bits());
    }

    #[test]
    fn metrics_are_bounded_and_monotone(ranks in ranks_strategy(), k in 1usize..30) {
        let (d, d1) = (dcg_at_k(&ranks, k).unwrap(), dcg_at_k(&ranks, k + 1).unwrap());
        let (r, r1) = (recall_at_k(&ranks, k).unwrap(), recall_at_k(&ranks, k + 1).unwrap());
        prop_assert!((0.0..=100.0).contains(&d) && d <= r + 1e-12);
        prop_assert!(d <= d1 && r <= r1);
    }

    #[test]
    fn f1_symmetric_and_bounded(a in "[a-d ]{0,20}", b in "[a-d ]{0,20}") {
        let f = f1_single(&a, &b);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert_eq!(f, f1_single(&b, &a));
    }

    #[test]
    fn rouge_l_bounded_and_symmetric(a in "[a-c ]{0,30}", b in "[a-c ]{0,30}") {
        let f = rouge_l_f(&a, &b);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert_eq!(f, rouge_l_f(&b, &a));
    }
}

#[test]
fn random_rank_vectors_are_stable_under_shuffle() {
    use rand::seq::SliceRandom;
    let mut r = rng(3);
    let mut ranks: Vec<Option<usize>> = (0..50).map(|i| (i % 3 != 0).then_some(i % 7 + 1)).collect();
    let before = dcg_at_k(&ranks, 5).unwrap();
    ranks.shuffle(&mut r);
    assert!((dcg_at_k(&ranks, 5).unwrap() - before).abs() < 1e-12);
}
