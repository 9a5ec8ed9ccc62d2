#include "taco/judge.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "taco/text.hpp"

namespace taco {

const std::string kLengthNeutralitySentence =
    "Do not allow the length of the responses to influence your evaluation";

namespace {

std::string replace_all(std::string haystack, std::string_view needle, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        haystack.replace(pos, needle.size(), value);
        pos += value.size();
    }
    return haystack;
}

} // namespace

std::vector<BenchmarkQuestion> load_benchmark(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open benchmark: " + path.string());
    std::vector<BenchmarkQuestion> questions;
    std::set<int> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        std::string where = path.string() + ":" + std::to_string(line_no);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": malformed JSON line: " + e.what());
        }
        if (!obj.contains("question_id") || !obj["question_id"].is_number_integer()) {
            throw ParseError(where + ": missing integer 'question_id'");
        }
        if (!obj.contains("category") || !obj["category"].is_string()) {
            throw ParseError(where + ": missing string 'category'");
        }
        if (!obj.contains("text") || !obj["text"].is_string()) {
            throw ParseError(where + ": missing string 'text'");
        }
        BenchmarkQuestion q;
        q.question_id = obj["question_id"].get<int>();
        q.category = obj["category"].get<std::string>();
        q.text = obj["text"].get<std::string>();
        if (q.category.empty()) throw ParseError(where + ": empty category");
        if (!seen.insert(q.question_id).second) {
            throw ParseError(where + ": duplicate question_id " + std::to_string(q.question_id));
        }
        questions.push_back(std::move(q));
    }
    return questions;
}

std::string default_judge_prompt_template() {
    return "[Instruction]\n"
           "Please act as an impartial judge and evaluate the quality of the response "
           "provided by an AI assistant to the user question displayed below. Consider "
           "correctness, helpfulness, relevance, depth, and clarity. " +
           kLengthNeutralitySentence +
           ". Begin with a short explanation of your assessment. After the explanation, "
           "you must rate the response on a scale of 1 to 10 by strictly following this "
           "format: \"Rating: [[N]]\", for example: \"Rating: [[5]]\".\n\n"
           "[Question]\n{question}\n\n"
           "[The Start of Assistant's Answer]\n{answer}\n"
           "[The End of Assistant's Answer]";
}

std::string build_judge_prompt_from_template(std::string_view prompt_template,
                                             const BenchmarkQuestion& question,
                                             std::string_view answer) {
    if (text::trim(answer).empty()) {
        throw ValidationError("judge prompt: empty answer for question " +
                              std::to_string(question.question_id));
    }
    if (prompt_template.find("{question}") == std::string_view::npos ||
        prompt_template.find("{answer}") == std::string_view::npos) {
        throw ValidationError("judge prompt template: missing {question} or {answer}");
    }
    if (prompt_template.find(kLengthNeutralitySentence) == std::string_view::npos) {
        throw ValidationError("judge prompt template: missing the length-neutrality sentence");
    }
    std::string prompt = replace_all(std::string(prompt_template), "{question}", question.text);
    return replace_all(std::move(prompt), "{answer}", answer);
}

std::string build_judge_prompt(const BenchmarkQuestion& question, std::string_view answer,
                               const LanguageTag& language) {
    (void)language;  // the answer is judged in its own language
    return build_judge_prompt_from_template(default_judge_prompt_template(), question, answer);
}

JudgeVerdict parse_verdict(std::string_view raw, const BenchmarkQuestion& question,
                           std::string_view model_tag) {
    // Last occurrence of `Rating: [[N]]` / `Rating: [[N.M]]` wins.
    static const std::string kPrefix = "Rating: [[";
    std::optional<double> value;
    std::size_t pos = 0;
    while ((pos = raw.find(kPrefix, pos)) != std::string_view::npos) {
        std::size_t digits = pos + kPrefix.size();
        std::size_t end = digits;
        while (end < raw.size() && ((raw[end] >= '0' && raw[end] <= '9') || raw[end] == '.')) {
            ++end;
        }
        if (end > digits && end + 1 < raw.size() && raw[end] == ']' && raw[end + 1] == ']') {
            std::string number(raw.substr(digits, end - digits));
            if (number.find('.') != 0 && number.back() != '.' &&
                std::count(number.begin(), number.end(), '.') <= 1) {
                value = std::stod(number);
            }
        }
        pos += kPrefix.size();
    }
    if (!value) {
        throw UnparsedVerdictError("no rating found in judgment for question " +
                                       std::to_string(question.question_id),
                                   std::string(raw));
    }
    if (*value < 1.0 || *value > 10.0) {
        throw ValidationError("rating out of range [1,10]: " + std::to_string(*value) +
                              " for question " + std::to_string(question.question_id));
    }
    JudgeVerdict verdict;
    verdict.question_id = question.question_id;
    verdict.category = question.category;
    verdict.model_tag = std::string(model_tag);
    verdict.raw_judgment = std::string(raw);
    verdict.score_10 = *value;
    verdict.percent = 10.0 * *value;
    return verdict;
}

MockJudgeBackend::MockJudgeBackend(const std::filesystem::path& fixtures_path)
    : path_(fixtures_path.string()) {
    std::ifstream in(fixtures_path);
    if (!in) throw IoError("cannot open judge fixtures: " + path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        std::string where = path_ + ":" + std::to_string(line_no);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": malformed JSON line: " + e.what());
        }
        if (!obj.contains("question_id") || !obj.contains("judgment")) {
            throw ParseError(where + ": fixture line must have 'question_id' and 'judgment'");
        }
        judgments_[obj["question_id"].get<int>()] = obj["judgment"].get<std::string>();
    }
}

std::string MockJudgeBackend::judge(const std::string& prompt, int question_id) {
    (void)prompt;
    auto it = judgments_.find(question_id);
    if (it == judgments_.end()) {
        throw BackendError("mock judge: no canned judgment for question " +
                           std::to_string(question_id));
    }
    return it->second;
}

HttpJudgeBackend::HttpJudgeBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw ConfigError("http judge: empty endpoint");
}

std::string HttpJudgeBackend::judge(const std::string& prompt, int question_id) {
    std::size_t scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("http judge: endpoint must include a scheme: " + config_.endpoint);
    }
    std::size_t path_start = config_.endpoint.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? config_.endpoint
                                                       : config_.endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/"
                                                       : config_.endpoint.substr(path_start);
    nlohmann::json body;
    body["prompt"] = prompt;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 2)));
        }
        if (config_.limiter) config_.limiter->acquire();

        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::seconds(10));
        client.set_read_timeout(std::chrono::seconds(120));
        httplib::Headers headers;
        if (!config_.api_key.empty()) headers.emplace(config_.auth_header, config_.api_key);
        auto result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status != 200) {
            last_error = "HTTP status " + std::to_string(result->status);
            continue;
        }
        try {
            nlohmann::json response = nlohmann::json::parse(result->body);
            if (!response.contains("text") || !response["text"].is_string()) {
                last_error = "response missing 'text'";
                continue;
            }
            return response["text"].get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed response JSON: ") + e.what();
            continue;
        }
    }
    throw BackendError("http judge: " + std::to_string(config_.max_attempts) +
                       " attempts exhausted for question " + std::to_string(question_id) +
                       "; last error: " + last_error);
}

std::vector<JudgeOutcome> judge_run(const std::vector<BenchmarkQuestion>& questions,
                                    const std::vector<std::string>& answers,
                                    JudgeBackend& backend, std::string_view model_tag,
                                    const JudgeRunOptions& options) {
    if (questions.size() != answers.size()) {
        throw ValidationError("judge run: " + std::to_string(questions.size()) +
                              " questions vs " + std::to_string(answers.size()) + " answers");
    }
    std::vector<JudgeOutcome> outcomes(questions.size());
    const std::string prompt_template =
        options.prompt_template.empty() ? default_judge_prompt_template()
                                        : options.prompt_template;

    auto grade_one = [&](std::size_t i) {
        outcomes[i].question_id = questions[i].question_id;
        try {
            std::string prompt =
                build_judge_prompt_from_template(prompt_template, questions[i], answers[i]);
            std::string raw = backend.judge(prompt, questions[i].question_id);
            outcomes[i].verdict = parse_verdict(raw, questions[i], model_tag);
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    };

    const std::size_t workers =
        std::min(std::max<std::size_t>(1, options.workers), questions.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < questions.size(); ++i) {
            if (options.limiter) options.limiter->acquire();
            grade_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= outcomes.size()) return;
                    if (options.limiter) options.limiter->acquire();
                    grade_one(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::stable_sort(outcomes.begin(), outcomes.end(),
                     [](const JudgeOutcome& a, const JudgeOutcome& b) {
                         return a.question_id < b.question_id;
                     });
    return outcomes;
}

CategoryReport aggregate(const std::vector<JudgeVerdict>& verdicts, std::string_view model_tag,
                         const std::vector<std::string>& excluded,
                         const std::vector<std::string>& known_categories) {
    if (verdicts.empty()) throw ValidationError("aggregate: no verdicts");
    if (!known_categories.empty()) {
        std::set<std::string> known(known_categories.begin(), known_categories.end());
        for (const auto& v : verdicts) {
            if (known.find(v.category) == known.end()) {
                throw ValidationError("aggregate: unknown category '" + v.category + "'");
            }
        }
    }
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const auto& v : verdicts) {
        if (v.category.empty()) throw ValidationError("aggregate: verdict with empty category");
        auto& [sum, count] = sums[v.category];
        sum += v.percent;
        ++count;
    }
    std::map<std::string, double> means;
    for (const auto& [category, sc] : sums) means[category] = sc.first / static_cast<double>(sc.second);
    return category_report_from_means(model_tag, means, excluded);
}

CategoryReport category_report_from_means(std::string_view model_tag,
                                          const std::map<std::string, double>& means,
                                          const std::vector<std::string>& excluded) {
    if (means.empty()) throw ValidationError("category report: no categories");
    CategoryReport report;
    report.model_tag = std::string(model_tag);
    report.per_category = means;
    report.excluded = excluded;
    std::set<std::string> excluded_set(excluded.begin(), excluded.end());
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [category, mean] : means) {
        if (excluded_set.count(category)) continue;
        sum += mean;
        ++count;
    }
    if (count == 0) throw ValidationError("category report: every category excluded");
    report.overall = sum / static_cast<double>(count);
    return report;
}

ModelComparison compare_models(const CategoryReport& a, const CategoryReport& b) {
    auto keys = [](const CategoryReport& r) {
        std::set<std::string> out;
        for (const auto& [category, mean] : r.per_category) out.insert(category);
        return out;
    };
    if (keys(a) != keys(b)) {
        throw ValidationError("compare: category sets differ between '" + a.model_tag +
                              "' and '" + b.model_tag + "'");
    }
    ModelComparison cmp;
    cmp.model_a = a.model_tag;
    cmp.model_b = b.model_tag;
    for (const auto& [category, mean] : a.per_category) {
        cmp.per_category[category] = {mean, b.per_category.at(category)};
    }
    if (b.overall == 0.0) throw ValidationError("compare: second model has overall 0");
    cmp.overall_ratio = a.overall / b.overall;
    return cmp;
}

double round_half_even(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    double scaled = value * scale;
    double floor_value = std::floor(scaled);
    double fraction = scaled - floor_value;
    double rounded;
    if (fraction > 0.5) {
        rounded = floor_value + 1.0;
    } else if (fraction < 0.5) {
        rounded = floor_value;
    } else {
        rounded = (std::fmod(floor_value, 2.0) == 0.0) ? floor_value : floor_value + 1.0;
    }
    return rounded / scale;
}

} // namespace taco
