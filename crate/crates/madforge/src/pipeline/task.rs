//! Built-in task decompositions and judge assessment factors.

use serde::{Deserialize, Serialize};

use crate::record::{AssessmentFactor, TaskKind};

/// One sub-task of a decomposed SE task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSpec {
    pub id: String,
    pub name: String,
    pub goal: String,
    pub input_description: String,
    pub output_description: String,
    pub assessment_factors: Vec<AssessmentFactor>,
}

/// A task decomposed into ordered stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub stages: Vec<StageSpec>,
    pub intent_vocabulary: Option<Vec<IntentCategory>>,
}

impl TaskSpec {
    pub fn overall_description(&self) -> &'static str {
        match self.kind {
            TaskKind::CodeSummarization => {
                "Produce a concise natural-language summary of the given source code."
            }
            TaskKind::CodeTranslation => {
                "Translate the given source code into the target programming language, preserving its behavior."
            }
        }
    }
}

/// Summarization intent categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntentCategory {
    What,
    Why,
    HowToUse,
    HowItIsDone,
    Property,
    Others,
}

impl IntentCategory {
    pub const ALL: [IntentCategory; 6] = [
        IntentCategory::What,
        IntentCategory::Why,
        IntentCategory::HowToUse,
        IntentCategory::HowItIsDone,
        IntentCategory::Property,
        IntentCategory::Others,
    ];

    /// Surface form used in prompts and task outputs.
    pub fn render(&self) -> &'static str {
        match self {
            IntentCategory::What => "What",
            IntentCategory::Why => "Why",
            IntentCategory::HowToUse => "How-to-use",
            IntentCategory::HowItIsDone => "How-it-is-done",
            IntentCategory::Property => "Property",
            IntentCategory::Others => "Others",
        }
    }

    pub fn parse(text: &str) -> Option<IntentCategory> {
        let trimmed = text.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.render().eq_ignore_ascii_case(trimmed))
    }

    pub fn description(&self) -> &'static str {
        match self {
            IntentCategory::What => "description of the functionality",
            IntentCategory::Why => "the design rationale of the code",
            IntentCategory::HowToUse => "description of the usage",
            IntentCategory::HowItIsDone => "implementation details of the functionality",
            IntentCategory::Property => {
                "the properties of the code including pre-conditions or post-conditions"
            }
            IntentCategory::Others => "anything not covered by the other categories",
        }
    }
}

/// Snaps an intent-identification task output onto the six-category
/// vocabulary. Off-vocabulary replies land on `Others` with a warning.
pub fn snap_intent(text: &str) -> IntentCategory {
    match IntentCategory::parse(text) {
        Some(c) => c,
        None => {
            log::warn!("off-vocabulary intent {text:?} snapped to Others");
            IntentCategory::Others
        }
    }
}

const SUMMARIZATION_FACTORS: [AssessmentFactor; 3] = [
    AssessmentFactor::Expressiveness,
    AssessmentFactor::ContentAdequacy,
    AssessmentFactor::Conciseness,
];

const TRANSLATION_FACTORS: [AssessmentFactor; 2] = [
    AssessmentFactor::TranslationAccuracy,
    AssessmentFactor::FunctionalCorrectness,
];

fn stage(
    id: &str,
    name: &str,
    goal: &str,
    input: &str,
    output: &str,
    factors: &[AssessmentFactor],
) -> StageSpec {
    StageSpec {
        id: id.to_string(),
        name: name.to_string(),
        goal: goal.to_string(),
        input_description: input.to_string(),
        output_description: output.to_string(),
        assessment_factors: factors.to_vec(),
    }
}

/// The built-in three-stage decomposition for a task kind.
pub fn stages_for_task(kind: TaskKind) -> TaskSpec {
    match kind {
        TaskKind::CodeSummarization => TaskSpec {
            kind,
            stages: vec![
                stage(
                    "intent_identification",
                    "Intent Identification",
                    "Identify the perspective from which the code should be summarized, choosing exactly one intent category from the provided vocabulary.",
                    "The source code to summarize.",
                    "A single intent category name from the vocabulary.",
                    &SUMMARIZATION_FACTORS,
                ),
                stage(
                    "summary_generation",
                    "Summary Generation",
                    "Generate a code summary written from the identified intent.",
                    "The source code and the accepted intent category.",
                    "A natural-language summary of the code.",
                    &SUMMARIZATION_FACTORS,
                ),
                stage(
                    "summary_refinement",
                    "Summary Refinement",
                    "Evaluate and refine the generated summary to improve its semantic relevance to the code.",
                    "The source code and the accepted draft summary.",
                    "The refined natural-language summary.",
                    &SUMMARIZATION_FACTORS,
                ),
            ],
            intent_vocabulary: Some(IntentCategory::ALL.to_vec()),
        },
        TaskKind::CodeTranslation => TaskSpec {
            kind,
            stages: vec![
                stage(
                    "translation",
                    "Translation",
                    "Translate the original code into the target programming language.",
                    "The source code and the target language.",
                    "The translated code in the target language.",
                    &TRANSLATION_FACTORS,
                ),
                stage(
                    "syntactic_error_resolution",
                    "Syntactic Error Resolution",
                    "Resolve syntactic errors in the translated code.",
                    "The translated code from the previous stage.",
                    "The translated code with syntactic errors fixed.",
                    &TRANSLATION_FACTORS,
                ),
                stage(
                    "semantic_error_resolution",
                    "Semantic Error Resolution",
                    "Resolve semantic errors in the translated code.",
                    "The syntactically repaired code from the previous stage.",
                    "The translated code with semantic errors fixed.",
                    &TRANSLATION_FACTORS,
                ),
            ],
            intent_vocabulary: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summarization_stage_order() {
        let spec = stages_for_task(TaskKind::CodeSummarization);
        let ids: Vec<&str> = spec.stages.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(
            ids,
            ["intent_identification", "summary_generation", "summary_refinement"]
        );
        assert!(spec.intent_vocabulary.is_some());
    }

    #[test]
    fn translation_stage_order() {
        let spec = stages_for_task(TaskKind::CodeTranslation);
        let ids: Vec<&str> = spec.stages.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(
            ids,
            ["translation", "syntactic_error_resolution", "semantic_error_resolution"]
        );
        assert!(spec.intent_vocabulary.is_none());
    }

    #[test]
    fn factor_sets_match_their_task() {
        let cs = stages_for_task(TaskKind::CodeSummarization);
        for stage in &cs.stages {
            assert_eq!(stage.assessment_factors, SUMMARIZATION_FACTORS.to_vec());
        }
        let ct = stages_for_task(TaskKind::CodeTranslation);
        for stage in &ct.stages {
            assert_eq!(stage.assessment_factors, TRANSLATION_FACTORS.to_vec());
        }
        assert_eq!(
            ct.stages[1].assessment_factors,
            vec![
                AssessmentFactor::TranslationAccuracy,
                AssessmentFactor::FunctionalCorrectness
            ]
        );
    }

    #[test]
    fn factor_definitions_are_wired() {
        assert_eq!(
            AssessmentFactor::Expressiveness.definition(),
            "Clarity and readability of summary."
        );
        assert_eq!(
            AssessmentFactor::FunctionalCorrectness.definition(),
            "Maintaining the code functionality."
        );
    }

    #[test]
    fn intent_render_parse_bijection() {
        for cat in IntentCategory::ALL {
            assert_eq!(IntentCategory::parse(cat.render()), Some(cat));
        }
        assert_eq!(IntentCategory::parse("how-to-use"), Some(IntentCategory::HowToUse));
        assert_eq!(IntentCategory::parse("nonsense"), None);
    }

    #[test]
    fn off_vocabulary_intent_snaps_to_others() {
        assert_eq!(snap_intent("What"), IntentCategory::What);
        assert_eq!(snap_intent("free-form prose"), IntentCategory::Others);
    }
}
