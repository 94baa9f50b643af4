//! Textual similarity metrics built from scratch: sentence/corpus BLEU,
//! ROUGE-L, and a synonym-free METEOR variant (`meteor_lite`).
//!
//! Tokenization caveat: natural-language text is lowercased and split on
//! whitespace and punctuation boundaries; code is split on identifier and
//! operator boundaries preserving case. Scores are therefore not directly
//! comparable to pipelines using other tokenizers.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("metric input must contain at least one token")]
    EmptyInput,
}

/// A deterministic tokenization of a text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedText {
    pub tokens: Vec<String>,
    pub original: String,
}

impl TokenizedText {
    /// Natural-language tokenizer: lowercase, alphanumeric runs and single
    /// punctuation marks become tokens.
    pub fn natural(text: &str) -> TokenizedText {
        let mut tokens = Vec::new();
        let mut current = String::new();
        for ch in text.to_lowercase().chars() {
            if ch.is_alphanumeric() {
                current.push(ch);
            } else {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                if !ch.is_whitespace() {
                    tokens.push(ch.to_string());
                }
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
        TokenizedText {
            tokens,
            original: text.to_string(),
        }
    }

    /// Code tokenizer: identifier runs (case preserved) and operator
    /// characters become tokens.
    pub fn code(text: &str) -> TokenizedText {
        let mut tokens = Vec::new();
        let mut current = String::new();
        for ch in text.chars() {
            if ch.is_alphanumeric() || ch == '_' {
                current.push(ch);
            } else {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                if !ch.is_whitespace() {
                    tokens.push(ch.to_string());
                }
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
        TokenizedText {
            tokens,
            original: text.to_string(),
        }
    }

    pub fn from_tokens(tokens: Vec<String>) -> TokenizedText {
        let original = tokens.join(" ");
        TokenizedText { tokens, original }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts: HashMap<&[String], u64> = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped matches and totals for one n-gram order.
fn clipped_precision(candidate: &[String], references: &[&[String]], n: usize) -> (u64, u64) {
    let cand_counts = ngram_counts(candidate, n);
    let total: u64 = cand_counts.values().sum();
    let ref_counts: Vec<HashMap<&[String], u64>> =
        references.iter().map(|r| ngram_counts(r, n)).collect();
    let mut matches = 0;
    for (gram, count) in &cand_counts {
        let max_ref = ref_counts
            .iter()
            .map(|rc| rc.get(gram).copied().unwrap_or(0))
            .max()
            .unwrap_or(0);
        matches += (*count).min(max_ref);
    }
    (matches, total)
}

/// Effective reference length: the reference length closest to the
/// candidate's, shorter winning ties.
fn effective_ref_len(cand_len: usize, references: &[&[String]]) -> usize {
    references
        .iter()
        .map(|r| r.len())
        .min_by_key(|len| (len.abs_diff(cand_len), *len))
        .unwrap_or(0)
}

fn bleu_from_stats(
    cand_len: usize,
    ref_len: usize,
    levels: &[(u64, u64)],
) -> f64 {
    // Unigram precision of zero means no overlap at all.
    if levels.is_empty() || levels[0].0 == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for (n, (matches, total)) in levels.iter().enumerate() {
        let precision = if *matches == 0 && n > 0 {
            // Add-one smoothing on zero higher-order precisions.
            (*matches as f64 + 1.0) / (*total as f64 + 1.0)
        } else {
            *matches as f64 / *total as f64
        };
        log_sum += precision.ln();
    }
    let geo_mean = (log_sum / levels.len() as f64).exp();
    let bp = if cand_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    };
    bp * geo_mean
}

/// Sentence BLEU: geometric mean of clipped modified n-gram precisions up
/// to `max_n` (capped by the candidate length), with brevity penalty and
/// add-one smoothing on zero higher-order precisions.
pub fn bleu(
    candidate: &TokenizedText,
    references: &[TokenizedText],
    max_n: usize,
) -> Result<f64, MetricError> {
    if candidate.is_empty() || references.is_empty() || references.iter().any(|r| r.is_empty()) {
        return Err(MetricError::EmptyInput);
    }
    let refs: Vec<&[String]> = references.iter().map(|r| r.tokens.as_slice()).collect();
    let n_max = max_n.min(candidate.len());
    let levels: Vec<(u64, u64)> = (1..=n_max)
        .map(|n| clipped_precision(&candidate.tokens, &refs, n))
        .collect();
    let ref_len = effective_ref_len(candidate.len(), &refs);
    Ok(bleu_from_stats(candidate.len(), ref_len, &levels))
}

/// Corpus-level BLEU: n-gram statistics pooled over all pairs before the
/// geometric mean and brevity penalty.
pub fn corpus_bleu(
    pairs: &[(TokenizedText, Vec<TokenizedText>)],
    max_n: usize,
) -> Result<f64, MetricError> {
    if pairs.is_empty()
        || pairs
            .iter()
            .any(|(c, rs)| c.is_empty() || rs.is_empty() || rs.iter().any(|r| r.is_empty()))
    {
        return Err(MetricError::EmptyInput);
    }
    let n_max = max_n
        .min(pairs.iter().map(|(c, _)| c.len()).min().unwrap_or(max_n))
        .max(1);
    let mut levels = vec![(0u64, 0u64); n_max];
    let mut cand_len = 0usize;
    let mut ref_len = 0usize;
    for (candidate, references) in pairs {
        let refs: Vec<&[String]> = references.iter().map(|r| r.tokens.as_slice()).collect();
        for (n, level) in levels.iter_mut().enumerate() {
            let (m, t) = clipped_precision(&candidate.tokens, &refs, n + 1);
            level.0 += m;
            level.1 += t;
        }
        cand_len += candidate.len();
        ref_len += effective_ref_len(candidate.len(), &refs);
    }
    Ok(bleu_from_stats(cand_len, ref_len, &levels))
}

/// ROUGE-L precision, recall, and F1 over the token LCS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    for ai in a {
        for (j, bj) in b.iter().enumerate() {
            row[j + 1] = if ai == bj {
                prev[j] + 1
            } else {
                row[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

pub fn rouge_l(
    candidate: &TokenizedText,
    reference: &TokenizedText,
) -> Result<RougeScore, MetricError> {
    if candidate.is_empty() || reference.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let lcs = lcs_len(&candidate.tokens, &reference.tokens) as f64;
    let precision = lcs / candidate.len() as f64;
    let recall = lcs / reference.len() as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(RougeScore {
        precision,
        recall,
        f1,
    })
}

/// Light stemmer used by meteor_lite's second matching stage.
fn stem(token: &str) -> String {
    for suffix in ["ing", "ed", "es", "ly", "s"] {
        if let Some(stripped) = token.strip_suffix(suffix) {
            if stripped.len() >= 3 {
                // Collapse a doubled final letter ("runn" -> "run") so
                // gerunds align with their base forms.
                let bytes = stripped.as_bytes();
                let n = bytes.len();
                if n >= 4 && bytes[n - 1] == bytes[n - 2] && bytes[n - 1].is_ascii_alphabetic() {
                    return stripped[..n - 1].to_string();
                }
                return stripped.to_string();
            }
        }
    }
    token.to_string()
}

/// METEOR without the synonym stage: unigram alignment with exact then
/// stemmed matching, harmonic mean F(alpha = 0.9), and the fragmentation
/// penalty 0.5 * (chunks / matches)^3.
pub fn meteor_lite(
    candidate: &TokenizedText,
    reference: &TokenizedText,
) -> Result<f64, MetricError> {
    if candidate.is_empty() || reference.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let mut cand_match: Vec<Option<usize>> = vec![None; candidate.len()];
    let mut ref_taken = vec![false; reference.len()];
    // Stage 1: exact matches, left to right.
    for (ci, token) in candidate.tokens.iter().enumerate() {
        if let Some(ri) = reference
            .tokens
            .iter()
            .enumerate()
            .position(|(ri, r)| !ref_taken[ri] && r == token)
        {
            cand_match[ci] = Some(ri);
            ref_taken[ri] = true;
        }
    }
    // Stage 2: stem matches for whatever is left.
    for (ci, token) in candidate.tokens.iter().enumerate() {
        if cand_match[ci].is_some() {
            continue;
        }
        let stemmed = stem(token);
        if let Some(ri) = reference
            .tokens
            .iter()
            .enumerate()
            .position(|(ri, r)| !ref_taken[ri] && stem(r) == stemmed)
        {
            cand_match[ci] = Some(ri);
            ref_taken[ri] = true;
        }
    }
    let pairs: Vec<(usize, usize)> = cand_match
        .iter()
        .enumerate()
        .filter_map(|(ci, ri)| ri.map(|r| (ci, r)))
        .collect();
    let matches = pairs.len();
    if matches == 0 {
        return Ok(0.0);
    }
    let mut chunks = 1usize;
    for window in pairs.windows(2) {
        let (c0, r0) = window[0];
        let (c1, r1) = window[1];
        if c1 != c0 + 1 || r1 != r0 + 1 {
            chunks += 1;
        }
    }
    let m = matches as f64;
    let precision = m / candidate.len() as f64;
    let recall = m / reference.len() as f64;
    let f_mean = precision * recall / (0.9 * precision + 0.1 * recall);
    let penalty = 0.5 * (chunks as f64 / m).powi(3);
    Ok(f_mean * (1.0 - penalty))
}
