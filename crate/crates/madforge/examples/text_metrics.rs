//! Scores candidate summaries against references with BLEU, ROUGE-L, and
//! the METEOR variant, at both sentence and corpus level.
//!
//! ```sh
//! cargo run --example text_metrics
//! ```

use madforge::metrics::{bleu, corpus_bleu, meteor_lite, rouge_l, TokenizedText};

fn main() {
    let pairs = [
        (
            "returns the sum of the two arguments",
            "Returns the sum of two numbers.",
        ),
        (
            "sorts the list in place using quicksort",
            "Sorts the given list in place.",
        ),
        (
            "opens a file and counts its lines",
            "Counts the number of lines in a file.",
        ),
    ];

    println!(
        "{:<45} {:>8} {:>8} {:>8}",
        "candidate", "BLEU", "ROUGE-L", "METEOR"
    );
    let mut corpus_pairs = Vec::new();
    for (candidate, reference) in pairs {
        let c = TokenizedText::natural(candidate);
        let r = TokenizedText::natural(reference);
        let b = bleu(&c, std::slice::from_ref(&r), 4).unwrap();
        let rl = rouge_l(&c, &r).unwrap();
        let m = meteor_lite(&c, &r).unwrap();
        println!("{candidate:<45} {b:>8.4} {:>8.4} {m:>8.4}", rl.f1);
        corpus_pairs.push((c, vec![r]));
    }
    println!();
    println!(
        "corpus-level BLEU: {:.4}",
        corpus_bleu(&corpus_pairs, 4).unwrap()
    );

    // Code tokenization keeps identifiers and operators apart.
    let translated = TokenizedText::code("int total = a + b;");
    let reference = TokenizedText::code("int total=a+b;");
    println!(
        "code ROUGE-L (whitespace-insensitive): {:.4}",
        rouge_l(&translated, &reference).unwrap().f1
    );
}
