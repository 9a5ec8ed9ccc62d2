#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "taco/errors.hpp"

namespace taco {

/// A registered language. `code` is a lowercase ISO-639-style identifier
/// ("ne", "fa", "zh-cn"); `display_name` is the human-readable name used in
/// composite labels and report rows.
struct LanguageTag {
    std::string code;
    std::string display_name;

    bool operator==(const LanguageTag&) const = default;
};

/// True when the string is a well-formed code: non-empty, ASCII lowercase
/// letters, digits, and hyphens only.
bool is_valid_language_code(std::string_view code);

/// The set of supported languages. "en" is always present and is the pivot.
class LanguageRegistry {
public:
    LanguageRegistry();

    /// Adds a tag. Throws ValidationError on malformed codes and duplicates.
    void add(LanguageTag tag);

    bool contains(std::string_view code) const;

    /// Throws ValidationError when the code is not registered.
    const LanguageTag& lookup(std::string_view code) const;

    std::size_t size() const { return tags_.size(); }

    /// Tags in registration order; "en" is always first.
    const std::vector<LanguageTag>& tags() const { return tags_; }

    static const LanguageTag& english();

private:
    std::vector<LanguageTag> tags_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Loads a registry file: one `<code><space><display name>` entry per line,
/// `#` comment lines and blank lines ignored. "en" is injected when absent.
/// Throws IoError on unreadable paths and ParseError (with line number) on
/// malformed lines or duplicate codes.
LanguageRegistry load_language_registry(const std::filesystem::path& path);

enum class Source : std::uint8_t { alpaca, dolly };

std::string_view to_string(Source s);
Source source_from_string(std::string_view s);

/// One instruction/input/output triple from Alpaca or Dolly.
struct InstructionRecord {
    std::string id;
    std::string instruction;
    std::optional<std::string> input;
    std::string output;
    Source source = Source::alpaca;
    std::optional<std::string> category;

    bool operator==(const InstructionRecord&) const = default;
};

/// Returns the record unchanged when its invariants hold; throws
/// ValidationError otherwise. Id uniqueness is checked at dataset level.
const InstructionRecord& validate_record(const InstructionRecord& record);

/// Response format under evaluation: `taco` composite output vs `plain`
/// single target-language answer (the instruction-tuned baseline format).
enum class EvalMode : std::uint8_t { taco, plain };

std::string_view to_string(EvalMode m);
EvalMode eval_mode_from_string(std::string_view s);

/// Emitted fine-tuning configuration; training itself is out of scope.
struct TrainingRecipe {
    double learning_rate = 3e-4;
    std::int64_t cutoff_length = 2000;
    std::vector<std::string> lora_targets = {"q_proj", "k_proj", "v_proj", "o_proj"};
    std::int64_t lora_r = 32;
    std::int64_t lora_alpha = 64;
    double lora_dropout = 0.05;
    std::string base_model = "guanaco-33b";
    LanguageTag language;

    /// Throws ValidationError when any hyperparameter is out of range.
    void validate() const;
};

} // namespace taco
