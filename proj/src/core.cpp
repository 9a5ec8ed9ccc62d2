#include "taco/core.hpp"

#include <fstream>

#include "taco/text.hpp"

namespace taco {

bool is_valid_language_code(std::string_view code) {
    if (code.empty()) return false;
    for (char c : code) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
        if (!ok) return false;
    }
    return true;
}

LanguageRegistry::LanguageRegistry() {
    add(english());
}

const LanguageTag& LanguageRegistry::english() {
    static const LanguageTag en{"en", "English"};
    return en;
}

void LanguageRegistry::add(LanguageTag tag) {
    if (!is_valid_language_code(tag.code)) {
        throw ValidationError("invalid language code: '" + tag.code + "'");
    }
    if (tag.display_name.empty()) {
        throw ValidationError("empty display name for code '" + tag.code + "'");
    }
    if (index_.count(tag.code) != 0) {
        throw ValidationError("duplicate language code: '" + tag.code + "'");
    }
    index_.emplace(tag.code, tags_.size());
    tags_.push_back(std::move(tag));
}

bool LanguageRegistry::contains(std::string_view code) const {
    return index_.count(std::string(code)) != 0;
}

const LanguageTag& LanguageRegistry::lookup(std::string_view code) const {
    auto it = index_.find(std::string(code));
    if (it == index_.end()) {
        throw ValidationError("unknown language code: '" + std::string(code) + "'");
    }
    return tags_[it->second];
}

LanguageRegistry load_language_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open language registry: " + path.string());
    }
    LanguageRegistry registry;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::size_t sep = trimmed.find(' ');
        if (sep == std::string::npos || sep == 0 || sep + 1 >= trimmed.size()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected '<code> <display name>', got '" + trimmed + "'");
        }
        std::string code = trimmed.substr(0, sep);
        std::string name = trimmed.substr(sep + 1);
        if (!is_valid_language_code(code)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": invalid language code '" + code + "'");
        }
        if (code == "en") continue;  // pivot is implicit and already present
        if (registry.contains(code)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": duplicate language code '" + code + "'");
        }
        registry.add(LanguageTag{std::move(code), std::move(name)});
    }
    return registry;
}

std::string_view to_string(Source s) {
    return s == Source::alpaca ? "alpaca" : "dolly";
}

Source source_from_string(std::string_view s) {
    if (s == "alpaca") return Source::alpaca;
    if (s == "dolly") return Source::dolly;
    throw ValidationError("unknown source: '" + std::string(s) + "'");
}

const InstructionRecord& validate_record(const InstructionRecord& record) {
    if (record.id.empty()) {
        throw ValidationError("record has empty id");
    }
    if (text::trim(record.instruction).empty()) {
        throw ValidationError("record '" + record.id + "' has empty instruction");
    }
    if (text::trim(record.output).empty()) {
        throw ValidationError("record '" + record.id + "' has empty output");
    }
    return record;
}

std::string_view to_string(EvalMode m) {
    return m == EvalMode::taco ? "taco" : "plain";
}

EvalMode eval_mode_from_string(std::string_view s) {
    if (s == "taco") return EvalMode::taco;
    if (s == "plain") return EvalMode::plain;
    throw ValidationError("unknown eval mode: '" + std::string(s) + "'");
}

void TrainingRecipe::validate() const {
    if (learning_rate <= 0) throw ValidationError("learning_rate must be > 0");
    if (cutoff_length <= 0) throw ValidationError("cutoff_length must be > 0");
    if (lora_r <= 0) throw ValidationError("lora_r must be > 0");
    if (lora_alpha <= 0) throw ValidationError("lora_alpha must be > 0");
    if (lora_dropout < 0 || lora_dropout >= 1) {
        throw ValidationError("lora_dropout must be in [0, 1)");
    }
    if (lora_targets.empty()) throw ValidationError("lora_targets must be non-empty");
    if (base_model.empty()) throw ValidationError("base_model must be non-empty");
}

} // namespace taco
