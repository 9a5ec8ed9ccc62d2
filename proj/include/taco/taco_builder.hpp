#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taco/core.hpp"

namespace taco {

/// A composed chain-of-thought training example. The target-language
/// instruction (and optional input) form the prompt side; the output chains
/// the English instruction translation, the English response, and the
/// target-language response. The English input is never part of the output.
struct TacoRecord {
    LanguageTag language;
    std::string instruction_xx;
    std::optional<std::string> input_xx;
    std::string instruction_en;
    std::string response_en;
    std::string response_xx;

    bool operator==(const TacoRecord&) const = default;
};

/// A model response split into labeled segments. In taco mode all three
/// segments are expected; `complete` is false when any is missing or empty,
/// which is the truncation signal for token-limited generations.
struct ParsedResponse {
    EvalMode mode = EvalMode::taco;
    std::optional<std::string> instruction_en;
    std::optional<std::string> response_en;
    std::optional<std::string> response_xx;
    bool complete = false;
};

/// An evaluation-time generation prompt: English system prompt, the
/// target-language question, and the fixed length-limit clause, always last.
struct PromptEnvelope {
    std::string system_prompt;
    std::string user_instruction;
    std::optional<std::string> user_input;
    std::string length_limit_clause;

    std::string render() const;
};

/// The clause appended to every evaluation-time generation prompt.
extern const std::string kLengthLimitClause;

/// Composite section labels. Labels are line-initial and order-fixed so the
/// composer/parser pair is a bijection on valid records.
std::string instruction_label();
std::string response_en_label();
std::string response_xx_label(const LanguageTag& language);

/// Composes a TacoRecord from the same example in English and in the target
/// language. The ids must match; the English input is dropped.
TacoRecord build_taco_record(const InstructionRecord& en, const InstructionRecord& xx,
                             const LanguageTag& language);

/// Renders the canonical three-section composite:
///   Instruction in English: <instruction_en>
///   Response in English: <response_en>
///   Response in <DisplayName>: <response_xx>
std::string render_output(const TacoRecord& record);

/// Total parser for model responses. In taco mode, splits on line-initial
/// labels in canonical order; degradation is encoded in `complete` and
/// absent segments, never thrown. In plain mode the whole text is the
/// target-language response.
ParsedResponse parse_response(std::string_view response_text, EvalMode mode,
                              const LanguageTag& language);

/// Sentence splitting rule: a terminator in {. ! ? … ।} followed by
/// whitespace or end-of-text closes a unit, unless the word ending at a '.'
/// is on the abbreviation stop-list. Text after the last boundary is not a
/// unit.
struct SentenceOptions {
    std::vector<std::string> abbreviations;

    static SentenceOptions defaults();
};

std::vector<std::string> split_sentences(std::string_view text_in,
                                         const SentenceOptions& options = SentenceOptions::defaults());

std::size_t count_sentences(std::string_view text_in,
                            const SentenceOptions& options = SentenceOptions::defaults());

/// Builds the generation prompt for one benchmark question. Throws
/// ValidationError on an empty question. The rendered prompt always ends
/// with the length-limit clause.
PromptEnvelope make_eval_prompt(std::string_view question, const LanguageTag& language,
                                std::string_view system_prompt);

/// Default English system prompt for evaluation-time generation.
std::string default_generation_system_prompt();

/// Serializes a TacoRecord as a canonical training line (id, language,
/// instruction, input, output) with the composite in `output`.
std::string training_line(const TacoRecord& record, const std::string& id);

/// Reconstructs a TacoRecord from the prompt-side fields plus a parsed
/// composite. Throws ValidationError when the composite is incomplete.
TacoRecord reconstruct_taco_record(const LanguageTag& language, std::string instruction_xx,
                                   std::optional<std::string> input_xx,
                                   const ParsedResponse& parsed);

} // namespace taco
