#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "taco/core.hpp"
#include "taco/translator.hpp"

namespace taco {

/// One benchmark question. `text` is in the language under evaluation;
/// translations live in parallel per-language benchmark files.
struct BenchmarkQuestion {
    int question_id = 0;
    std::string category;
    std::string text;
};

/// Loads a benchmark JSON-lines file ({question_id, category, text}).
/// Throws ParseError with the line number on malformed lines; question ids
/// must be unique.
std::vector<BenchmarkQuestion> load_benchmark(const std::filesystem::path& path);

/// A parsed judge score for one question. `percent` is always 10 * score_10.
struct JudgeVerdict {
    int question_id = 0;
    std::string category;
    std::string model_tag;
    std::string raw_judgment;
    double score_10 = 0.0; // [1, 10], parsed, never invented
    double percent = 0.0;  // [0, 100]
};

/// The sentence every judge prompt must contain verbatim.
extern const std::string kLengthNeutralitySentence;

/// Single-answer grading prompt: question, answer, a 1-10 rating request in
/// the exact form `Rating: [[N]]`, and the length-neutrality sentence.
/// Throws ValidationError on an empty answer.
std::string build_judge_prompt(const BenchmarkQuestion& question, std::string_view answer,
                               const LanguageTag& language);

/// Replaces `{question}` / `{answer}` in a custom template. The template
/// must contain the length-neutrality sentence and both placeholders.
std::string build_judge_prompt_from_template(std::string_view prompt_template,
                                             const BenchmarkQuestion& question,
                                             std::string_view answer);

std::string default_judge_prompt_template();

/// Extracts the last `Rating: [[N]]` (or `[[N.M]]`) from raw judge output.
/// Throws UnparsedVerdictError when no rating is present and
/// ValidationError when the rating is outside [1, 10].
JudgeVerdict parse_verdict(std::string_view raw, const BenchmarkQuestion& question,
                           std::string_view model_tag);

/// Judge capability: raw judgment text for a grading prompt. Must be safe
/// to call concurrently.
class JudgeBackend {
public:
    virtual ~JudgeBackend() = default;

    virtual std::string judge(const std::string& prompt, int question_id) = 0;
    virtual std::string name() const = 0;
};

/// Replays canned judgments from a JSON-lines file of
/// {question_id, judgment}. A question with no entry fails that question.
class MockJudgeBackend : public JudgeBackend {
public:
    explicit MockJudgeBackend(const std::filesystem::path& fixtures_path);

    std::string judge(const std::string& prompt, int question_id) override;
    std::string name() const override { return "mock"; }

private:
    std::map<int, std::string> judgments_;
    std::string path_;
};

/// Generic HTTP judge: POST {"prompt": text} -> {"text": judgment}.
class HttpJudgeBackend : public JudgeBackend {
public:
    explicit HttpJudgeBackend(HttpBackendConfig config);

    std::string judge(const std::string& prompt, int question_id) override;
    std::string name() const override { return "http"; }

private:
    HttpBackendConfig config_;
};

/// Per-question outcome: a verdict or a recorded failure, never both.
struct JudgeOutcome {
    int question_id = 0;
    std::optional<JudgeVerdict> verdict;
    std::string error; // non-empty iff the question failed
};

struct JudgeRunOptions {
    std::size_t workers = 4;
    std::shared_ptr<RateLimiter> limiter;
    std::string prompt_template; // empty selects the default template
};

/// Grades one answer per question. Failures are recorded per question and
/// the run continues; outcomes are ordered by question_id. Throws
/// ValidationError when answers and questions differ in size.
std::vector<JudgeOutcome> judge_run(const std::vector<BenchmarkQuestion>& questions,
                                    const std::vector<std::string>& answers,
                                    JudgeBackend& backend, std::string_view model_tag,
                                    const JudgeRunOptions& options = {});

/// Per-category means plus the unweighted overall mean over non-excluded
/// categories. Full precision is retained; rounding happens at render time.
struct CategoryReport {
    std::string model_tag;
    std::map<std::string, double> per_category; // category -> mean percent
    std::vector<std::string> excluded;
    double overall = 0.0;
};

/// Aggregates verdicts into a CategoryReport. `excluded` defaults to
/// {"coding"}. When `known_categories` is non-empty, a verdict outside it is
/// an error. Throws ValidationError on an empty verdict list.
CategoryReport aggregate(const std::vector<JudgeVerdict>& verdicts, std::string_view model_tag,
                         const std::vector<std::string>& excluded = {"coding"},
                         const std::vector<std::string>& known_categories = {});

/// Builds a CategoryReport directly from per-category means (fixture entry
/// point; maintains the same overall invariant as aggregate).
CategoryReport category_report_from_means(std::string_view model_tag,
                                          const std::map<std::string, double>& means,
                                          const std::vector<std::string>& excluded = {"coding"});

/// Side-by-side category values and the overall score ratio a/b.
struct ModelComparison {
    std::string model_a;
    std::string model_b;
    std::map<std::string, std::pair<double, double>> per_category;
    double overall_ratio = 0.0;
};

/// Throws ValidationError when the two reports cover different categories.
ModelComparison compare_models(const CategoryReport& a, const CategoryReport& b);

/// Round-half-even at `decimals` places; display rounding for reports.
double round_half_even(double value, int decimals);

} // namespace taco
