//! Classifies a synthetic corpus of debate logs into interaction-pattern
//! categories, prints the distribution table, and shows the annotation
//! prompt used for LLM-assisted labeling.
//!
//! ```sh
//! cargo run --example classify_patterns
//! ```

use rand::SeedableRng;

use madforge::analysis::{build_annotation_prompt, category_distribution, classify_debate};
use madforge::testutil;

fn main() {
    env_logger::init();
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let logs: Vec<_> = (0..40)
        .map(|i| testutil::random_log(&mut rng, &format!("sample-{i:02}")))
        .collect();

    let mut labels = Vec::new();
    for log in &logs {
        let category = classify_debate(log).expect("valid logs classify");
        println!("{}\t{}", log.sample_id, category.name());
        labels.push(category);
    }

    println!();
    println!("{}", category_distribution(&labels).render_table());

    // The annotation prompt for the first log, with three few-shot
    // examples drawn from the rest of the corpus.
    let few_shots: Vec<_> = logs[1..4]
        .iter()
        .zip(&labels[1..4])
        .map(|(log, cat)| (log.clone(), *cat))
        .collect();
    let prompt = build_annotation_prompt(&logs[0], &few_shots, true);
    println!("--- annotation prompt (first 30 lines) ---");
    for line in prompt.lines().take(30) {
        println!("{line}");
    }
}
