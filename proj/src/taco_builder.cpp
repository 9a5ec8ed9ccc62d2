#include "taco/taco_builder.hpp"

#include <json.hpp>

#include "taco/text.hpp"

namespace taco {

namespace {

constexpr std::string_view kInstructionLabel = "Instruction in English:";
constexpr std::string_view kResponseEnLabel = "Response in English:";

bool is_terminator(char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'…' || cp == U'।';
}

/// First occurrence of `label` at or after `from` that starts a line.
std::optional<std::size_t> find_line_initial(std::string_view haystack, std::string_view label,
                                             std::size_t from) {
    std::size_t pos = from;
    while (pos <= haystack.size()) {
        pos = haystack.find(label, pos);
        if (pos == std::string_view::npos) return std::nullopt;
        if (pos == 0 || haystack[pos - 1] == '\n') return pos;
        ++pos;
    }
    return std::nullopt;
}

/// Section content between the end of a label and the next boundary; the
/// space the composer writes after the label is consumed.
std::string section_content(std::string_view text_in, std::size_t label_end,
                            std::size_t next_label_start) {
    std::size_t begin = label_end;
    if (begin < text_in.size() && text_in[begin] == ' ') ++begin;
    std::size_t end = next_label_start == std::string_view::npos
                          ? text_in.size()
                          : next_label_start - 1;  // drop the newline before the label
    if (end < begin) end = begin;
    return std::string(text_in.substr(begin, end - begin));
}

void require_nonempty(std::string_view value, const char* field) {
    if (text::trim(value).empty()) {
        throw ValidationError(std::string("taco record: empty ") + field);
    }
}

} // namespace

const std::string kLengthLimitClause = "Your response must be less than 6 sentences.";

std::string instruction_label() {
    return std::string(kInstructionLabel);
}

std::string response_en_label() {
    return std::string(kResponseEnLabel);
}

std::string response_xx_label(const LanguageTag& language) {
    return "Response in " + language.display_name + ":";
}

TacoRecord build_taco_record(const InstructionRecord& en, const InstructionRecord& xx,
                             const LanguageTag& language) {
    if (en.id != xx.id) {
        throw ValidationError("taco record: id mismatch ('" + en.id + "' vs '" + xx.id + "')");
    }
    if (language.code == "en") {
        throw ValidationError("taco record: target language must not be the pivot");
    }
    validate_record(en);
    validate_record(xx);
    TacoRecord record;
    record.language = language;
    record.instruction_xx = xx.instruction;
    record.input_xx = xx.input;  // the English input never enters the composite
    record.instruction_en = en.instruction;
    record.response_en = en.output;
    record.response_xx = xx.output;
    return record;
}

std::string render_output(const TacoRecord& record) {
    require_nonempty(record.instruction_xx, "instruction_xx");
    require_nonempty(record.instruction_en, "instruction_en");
    require_nonempty(record.response_en, "response_en");
    require_nonempty(record.response_xx, "response_xx");
    if (record.language.code == "en") {
        throw ValidationError("taco record: target language must not be the pivot");
    }
    std::string out;
    out.reserve(record.instruction_en.size() + record.response_en.size() +
                record.response_xx.size() + 80);
    out += kInstructionLabel;
    out += ' ';
    out += record.instruction_en;
    out += '\n';
    out += kResponseEnLabel;
    out += ' ';
    out += record.response_en;
    out += '\n';
    out += response_xx_label(record.language);
    out += ' ';
    out += record.response_xx;
    return out;
}

ParsedResponse parse_response(std::string_view response_text, EvalMode mode,
                              const LanguageTag& language) {
    ParsedResponse parsed;
    parsed.mode = mode;
    if (mode == EvalMode::plain) {
        parsed.response_xx = std::string(response_text);
        parsed.complete = !text::trim(response_text).empty();
        return parsed;
    }

    const std::string label_xx = response_xx_label(language);
    auto pos1 = find_line_initial(response_text, kInstructionLabel, 0);
    auto pos2 = find_line_initial(response_text, kResponseEnLabel,
                                  pos1 ? *pos1 + kInstructionLabel.size() : 0);
    auto pos3 = find_line_initial(response_text, label_xx,
                                  pos2 ? *pos2 + kResponseEnLabel.size()
                                       : (pos1 ? *pos1 + kInstructionLabel.size() : 0));

    if (pos1) {
        parsed.instruction_en = section_content(
            response_text, *pos1 + kInstructionLabel.size(),
            pos2 ? *pos2 : (pos3 ? *pos3 : std::string_view::npos));
    }
    if (pos2) {
        parsed.response_en = section_content(response_text, *pos2 + kResponseEnLabel.size(),
                                             pos3 ? *pos3 : std::string_view::npos);
    }
    if (pos3) {
        parsed.response_xx = section_content(response_text, *pos3 + label_xx.size(),
                                             std::string_view::npos);
    }
    auto filled = [](const std::optional<std::string>& s) {
        return s.has_value() && !text::trim(*s).empty();
    };
    parsed.complete =
        filled(parsed.instruction_en) && filled(parsed.response_en) && filled(parsed.response_xx);
    return parsed;
}

SentenceOptions SentenceOptions::defaults() {
    SentenceOptions options;
    options.abbreviations = {"Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.",  "Jr.", "Sr.",
                             "vs.", "etc.", "e.g.", "i.e.", "No.",   "Fig.", "al."};
    return options;
}

std::vector<std::string> split_sentences(std::string_view text_in, const SentenceOptions& options) {
    std::u32string cps = text::decode_utf8(text_in);
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (!is_terminator(cps[i])) continue;
        bool at_end = i + 1 == cps.size();
        if (!at_end && !text::is_ascii_space(cps[i + 1])) continue;
        if (cps[i] == U'.') {
            // Word ending here, leading punctuation stripped, e.g. "(Mr." -> "Mr."
            std::size_t w = i;
            while (w > 0 && !text::is_ascii_space(cps[w - 1])) --w;
            while (w < i && text::is_punct(cps[w])) ++w;
            std::string word = text::encode_utf8(cps.substr(w, i - w + 1));
            bool abbreviated = false;
            for (const auto& abbr : options.abbreviations) {
                if (word == abbr) {
                    abbreviated = true;
                    break;
                }
            }
            if (abbreviated) continue;
        }
        std::string unit = text::trim(text::encode_utf8(cps.substr(start, i - start + 1)));
        if (!unit.empty()) sentences.push_back(std::move(unit));
        start = i + 1;
    }
    return sentences;
}

std::size_t count_sentences(std::string_view text_in, const SentenceOptions& options) {
    return split_sentences(text_in, options).size();
}

std::string default_generation_system_prompt() {
    return "You are a helpful assistant. Answer the user's instruction accurately, "
           "responding in the language of the instruction.";
}

std::string PromptEnvelope::render() const {
    std::string out = system_prompt;
    out += "\n\n";
    out += user_instruction;
    if (user_input && !user_input->empty()) {
        out += "\n\n";
        out += *user_input;
    }
    out += "\n\n";
    out += length_limit_clause;
    return out;
}

PromptEnvelope make_eval_prompt(std::string_view question, const LanguageTag& language,
                                std::string_view system_prompt) {
    (void)language;  // the question is already in the target language
    if (text::trim(question).empty()) {
        throw ValidationError("eval prompt: empty question");
    }
    PromptEnvelope envelope;
    envelope.system_prompt = std::string(system_prompt);
    envelope.user_instruction = std::string(question);
    envelope.length_limit_clause = kLengthLimitClause;
    return envelope;
}

std::string training_line(const TacoRecord& record, const std::string& id) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["language"] = record.language.code;
    j["instruction"] = record.instruction_xx;
    j["input"] = record.input_xx.value_or("");
    j["output"] = render_output(record);
    return j.dump();
}

TacoRecord reconstruct_taco_record(const LanguageTag& language, std::string instruction_xx,
                                   std::optional<std::string> input_xx,
                                   const ParsedResponse& parsed) {
    if (!parsed.complete || !parsed.instruction_en || !parsed.response_en || !parsed.response_xx) {
        throw ValidationError("cannot reconstruct taco record from incomplete response");
    }
    TacoRecord record;
    record.language = language;
    record.instruction_xx = std::move(instruction_xx);
    record.input_xx = std::move(input_xx);
    record.instruction_en = *parsed.instruction_en;
    record.response_en = *parsed.response_en;
    record.response_xx = *parsed.response_xx;
    return record;
}

} // namespace taco
