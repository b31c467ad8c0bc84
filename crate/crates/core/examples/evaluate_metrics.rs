use lgmgc::evaluation::{dcg_at_k, qa_f1, recall_at_k, render_table, rouge_l_f, Cell, MetricRow};

fn main() -> lgmgc::Result<()> {
    // 1-based rank of each query's gold chunk; None = not retrieved
    let ranks = [Some(1), Some(3), None, Some(1), Some(2), Some(8)];
    let mut row = MetricRow {
        label: "example".into(),
        dcg: Default::default(),
        recall: Default::default(),
    };
    for k in [1, 2, 5, 10] {
        row.dcg.insert(k, Cell::single(dcg_at_k(&ranks, k)?));
        row.recall.insert(k, Cell::single(recall_at_k(&ranks, k)?));
    }
    print!("{}", render_table(&[row]));

    let evidence = "The wheel stopped turning for good in 1951.";
    let chunk = "In 1951 a paddle shaft snapped and the wheel stopped turning for good.";
    println!("ROUGE-L F = {:.4}", rouge_l_f(evidence, chunk));

    let golds = vec!["a paddle shaft snapped".to_string(), "the shaft broke".to_string()];
    println!("QA F1 = {:.4}", qa_f1("The paddle shaft snapped.", &golds));
    Ok(())
}
