#include "taco/mt_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "taco/text.hpp"

namespace taco {

namespace {

constexpr int kBleuOrder = 4;
constexpr int kMaxShiftLength = 10;
constexpr char kSep = '\x1f';

std::vector<std::string> apply_tokenizer(const Tokenizer& tokenizer, std::string_view text_in) {
    if (tokenizer) return tokenizer(text_in);
    return tokenize_words(text_in);
}

void check_corpus(const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references) {
    if (hypotheses.empty() || references.empty()) {
        throw ValidationError("metric: empty corpus");
    }
    if (hypotheses.size() != references.size()) {
        throw ValidationError("metric: " + std::to_string(hypotheses.size()) +
                              " hypotheses vs " + std::to_string(references.size()) +
                              " references");
    }
}

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin,
                        std::size_t count) {
    std::string key;
    for (std::size_t i = 0; i < count; ++i) {
        if (i) key += kSep;
        key += tokens[begin + i];
    }
    return key;
}

/// Clipped n-gram matches and hypothesis totals for one segment and order.
void accumulate_ngrams(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                       int order, std::int64_t& matches, std::int64_t& total) {
    std::size_t n = static_cast<std::size_t>(order);
    if (hyp.size() >= n) total += static_cast<std::int64_t>(hyp.size() - n + 1);
    if (hyp.size() < n || ref.size() < n) return;
    std::unordered_map<std::string, std::int64_t> ref_counts;
    for (std::size_t i = 0; i + n <= ref.size(); ++i) {
        ++ref_counts[join_tokens(ref, i, n)];
    }
    std::unordered_map<std::string, std::int64_t> hyp_counts;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
        ++hyp_counts[join_tokens(hyp, i, n)];
    }
    for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches += std::min(count, it->second);
    }
}

double geometric_mean(const std::array<double, 4>& precisions) {
    double log_sum = 0.0;
    for (double p : precisions) {
        if (p <= 0.0) return 0.0;
        log_sum += std::log(p);
    }
    return std::exp(log_sum / kBleuOrder);
}

BleuScore finish_bleu(BleuScore s) {
    for (int n = 0; n < kBleuOrder; ++n) {
        s.precisions[static_cast<std::size_t>(n)] =
            s.total_counts[static_cast<std::size_t>(n)] > 0
                ? static_cast<double>(s.match_counts[static_cast<std::size_t>(n)]) /
                      static_cast<double>(s.total_counts[static_cast<std::size_t>(n)])
                : 0.0;
    }
    s.brevity_penalty =
        s.hyp_length > 0
            ? std::min(1.0, std::exp(1.0 - static_cast<double>(s.ref_length) /
                                               static_cast<double>(s.hyp_length)))
            : 0.0;
    s.score = 100.0 * s.brevity_penalty * geometric_mean(s.precisions);
    return s;
}

// --- TER -------------------------------------------------------------------

std::int64_t edit_distance(const std::vector<std::string>& hyp,
                           const std::vector<std::string>& ref) {
    std::size_t n = hyp.size();
    std::size_t m = ref.size();
    std::vector<std::int64_t> prev(m + 1);
    std::vector<std::int64_t> cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::int64_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<std::int64_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            std::int64_t sub = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::vector<std::string> apply_shift(const std::vector<std::string>& words, std::size_t start,
                                     std::size_t length, std::size_t dest) {
    std::vector<std::string> out;
    out.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i < start || i >= start + length) out.push_back(words[i]);
    }
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(dest),
               words.begin() + static_cast<std::ptrdiff_t>(start),
               words.begin() + static_cast<std::ptrdiff_t>(start + length));
    return out;
}

struct SegmentEdits {
    std::int64_t edits = 0;
    std::int64_t shifts = 0;
};

SegmentEdits ter_segment(std::vector<std::string> hyp, const std::vector<std::string>& ref) {
    // Blocks that may shift must appear contiguously in the reference.
    std::unordered_set<std::string> ref_blocks;
    for (std::size_t len = 1; len <= std::min<std::size_t>(ref.size(), kMaxShiftLength); ++len) {
        for (std::size_t i = 0; i + len <= ref.size(); ++i) {
            ref_blocks.insert(join_tokens(ref, i, len));
        }
    }

    SegmentEdits result;
    std::int64_t current = edit_distance(hyp, ref);
    while (current > 0 && hyp.size() > 1) {
        std::int64_t best_gain = 0;
        std::size_t best_len = 0, best_start = 0, best_dest = 0;
        std::vector<std::string> best_hyp;
        std::size_t max_len = std::min<std::size_t>(hyp.size(), kMaxShiftLength);
        for (std::size_t len = 1; len <= max_len; ++len) {
            for (std::size_t start = 0; start + len <= hyp.size(); ++start) {
                if (ref_blocks.find(join_tokens(hyp, start, len)) == ref_blocks.end()) continue;
                for (std::size_t dest = 0; dest + len <= hyp.size(); ++dest) {
                    if (dest == start) continue;
                    auto shifted = apply_shift(hyp, start, len, dest);
                    std::int64_t gain = current - edit_distance(shifted, ref);
                    bool better =
                        gain > best_gain ||
                        (gain == best_gain && gain > 0 &&
                         (len > best_len ||
                          (len == best_len &&
                           (start < best_start || (start == best_start && dest < best_dest)))));
                    if (better) {
                        best_gain = gain;
                        best_len = len;
                        best_start = start;
                        best_dest = dest;
                        best_hyp = std::move(shifted);
                    }
                }
            }
        }
        if (best_gain <= 0) break;
        hyp = std::move(best_hyp);
        current -= best_gain;
        ++result.shifts;
    }
    result.edits = result.shifts + current;
    return result;
}

// --- ChrF ------------------------------------------------------------------

struct OrderStats {
    std::int64_t matches = 0;
    std::int64_t hyp_total = 0;
    std::int64_t ref_total = 0;
};

std::u32string char_stream(std::string_view text_in) {
    std::u32string cps = text::decode_utf8(text::nfc(text_in));
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!text::is_ascii_space(cp)) out.push_back(cp);
    }
    return out;
}

void accumulate_char_ngrams(const std::u32string& hyp, const std::u32string& ref, int order,
                            OrderStats& stats) {
    std::size_t n = static_cast<std::size_t>(order);
    if (hyp.size() >= n) stats.hyp_total += static_cast<std::int64_t>(hyp.size() - n + 1);
    if (ref.size() >= n) stats.ref_total += static_cast<std::int64_t>(ref.size() - n + 1);
    if (hyp.size() < n || ref.size() < n) return;
    std::unordered_map<std::u32string, std::int64_t> ref_counts;
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[ref.substr(i, n)];
    std::unordered_map<std::u32string, std::int64_t> hyp_counts;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[hyp.substr(i, n)];
    for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) stats.matches += std::min(count, it->second);
    }
}

void accumulate_word_ngrams(const std::vector<std::string>& hyp,
                            const std::vector<std::string>& ref, int order, OrderStats& stats) {
    std::size_t n = static_cast<std::size_t>(order);
    if (hyp.size() >= n) stats.hyp_total += static_cast<std::int64_t>(hyp.size() - n + 1);
    if (ref.size() >= n) stats.ref_total += static_cast<std::int64_t>(ref.size() - n + 1);
    if (hyp.size() < n || ref.size() < n) return;
    std::unordered_map<std::string, std::int64_t> ref_counts;
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[join_tokens(ref, i, n)];
    std::unordered_map<std::string, std::int64_t> hyp_counts;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[join_tokens(hyp, i, n)];
    for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) stats.matches += std::min(count, it->second);
    }
}

} // namespace

std::vector<std::string> tokenize_words(std::string_view text_in) {
    std::u32string cps = text::decode_utf8(text_in);
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (char32_t cp : cps) {
        if (text::is_ascii_space(cp)) {
            flush();
        } else if (text::is_punct(cp)) {
            flush();
            std::string p;
            text::append_utf8(p, cp);
            tokens.push_back(std::move(p));
        } else {
            text::append_utf8(current, cp);
        }
    }
    flush();
    return tokens;
}

BleuScore bleu(const std::vector<std::string>& hypotheses,
               const std::vector<std::string>& references, const Tokenizer& tokenizer) {
    check_corpus(hypotheses, references);
    BleuScore s;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        auto hyp = apply_tokenizer(tokenizer, text::nfc(hypotheses[i]));
        auto ref = apply_tokenizer(tokenizer, text::nfc(references[i]));
        s.hyp_length += static_cast<std::int64_t>(hyp.size());
        s.ref_length += static_cast<std::int64_t>(ref.size());
        for (int n = 1; n <= kBleuOrder; ++n) {
            accumulate_ngrams(hyp, ref, n, s.match_counts[static_cast<std::size_t>(n - 1)],
                              s.total_counts[static_cast<std::size_t>(n - 1)]);
        }
    }
    return finish_bleu(s);
}

BleuScore sentence_bleu(const std::string& hypothesis, const std::string& reference,
                        const Tokenizer& tokenizer) {
    auto hyp = apply_tokenizer(tokenizer, text::nfc(hypothesis));
    auto ref = apply_tokenizer(tokenizer, text::nfc(reference));
    BleuScore s;
    s.hyp_length = static_cast<std::int64_t>(hyp.size());
    s.ref_length = static_cast<std::int64_t>(ref.size());
    for (int n = 1; n <= kBleuOrder; ++n) {
        accumulate_ngrams(hyp, ref, n, s.match_counts[static_cast<std::size_t>(n - 1)],
                          s.total_counts[static_cast<std::size_t>(n - 1)]);
    }
    // Add-one smoothing on orders >= 2.
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        double matches = static_cast<double>(s.match_counts[n]);
        double total = static_cast<double>(s.total_counts[n]);
        if (n > 0) {
            matches += 1.0;
            total += 1.0;
        }
        s.precisions[n] = total > 0.0 ? matches / total : 0.0;
    }
    s.brevity_penalty =
        s.hyp_length > 0
            ? std::min(1.0, std::exp(1.0 - static_cast<double>(s.ref_length) /
                                               static_cast<double>(s.hyp_length)))
            : 0.0;
    s.score = 100.0 * s.brevity_penalty * geometric_mean(s.precisions);
    return s;
}

ChrfScore chrf(const std::vector<std::string>& hypotheses,
               const std::vector<std::string>& references, const ChrfConfig& config) {
    check_corpus(hypotheses, references);
    if (config.char_order < 1 || config.word_order < 0 || config.beta <= 0) {
        throw ValidationError("chrf: invalid configuration");
    }
    const int total_orders = config.char_order + config.word_order;
    std::vector<OrderStats> stats(static_cast<std::size_t>(total_orders));

    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        std::u32string hyp_chars = char_stream(hypotheses[i]);
        std::u32string ref_chars = char_stream(references[i]);
        for (int n = 1; n <= config.char_order; ++n) {
            accumulate_char_ngrams(hyp_chars, ref_chars, n, stats[static_cast<std::size_t>(n - 1)]);
        }
        if (config.word_order > 0) {
            auto hyp_words = text::split_whitespace(text::nfc(hypotheses[i]));
            auto ref_words = text::split_whitespace(text::nfc(references[i]));
            for (int n = 1; n <= config.word_order; ++n) {
                accumulate_word_ngrams(hyp_words, ref_words, n,
                                       stats[static_cast<std::size_t>(config.char_order + n - 1)]);
            }
        }
    }

    const double factor = config.beta * config.beta;
    double f_sum = 0.0;
    int effective_orders = 0;
    for (const auto& st : stats) {
        if (st.hyp_total == 0 && st.ref_total == 0) continue;  // order absent on both sides
        ++effective_orders;
        double precision = st.hyp_total > 0 ? static_cast<double>(st.matches) /
                                                  static_cast<double>(st.hyp_total)
                                            : 0.0;
        double recall = st.ref_total > 0 ? static_cast<double>(st.matches) /
                                               static_cast<double>(st.ref_total)
                                         : 0.0;
        double denom = factor * precision + recall;
        if (denom > 0.0) f_sum += (1.0 + factor) * precision * recall / denom;
    }

    ChrfScore score;
    score.char_order = config.char_order;
    score.word_order = config.word_order;
    score.beta = config.beta;
    score.score = effective_orders > 0 ? 100.0 * f_sum / effective_orders : 0.0;
    return score;
}

TerScore ter(const std::vector<std::string>& hypotheses,
             const std::vector<std::string>& references, const Tokenizer& tokenizer) {
    check_corpus(hypotheses, references);
    TerScore score;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        auto hyp = apply_tokenizer(tokenizer, text::nfc(hypotheses[i]));
        auto ref = apply_tokenizer(tokenizer, text::nfc(references[i]));
        if (ref.empty()) {
            throw ValidationError("ter: empty reference segment at index " + std::to_string(i));
        }
        SegmentEdits edits = ter_segment(std::move(hyp), ref);
        score.edits += edits.edits;
        score.shifts += edits.shifts;
        score.ref_length += static_cast<std::int64_t>(ref.size());
    }
    score.score = 100.0 * static_cast<double>(score.edits) / static_cast<double>(score.ref_length);
    return score;
}

MetricReport qa_report(const std::vector<RoundTripSample>& samples, const Tokenizer& tokenizer) {
    if (samples.empty()) throw ValidationError("qa report: no samples");
    const LanguageTag& language = samples.front().language;
    std::vector<std::string> hypotheses;
    std::vector<std::string> references;
    hypotheses.reserve(samples.size());
    references.reserve(samples.size());
    for (const auto& sample : samples) {
        if (sample.language.code != language.code) {
            throw ValidationError("qa report: mixed languages ('" + language.code + "' and '" +
                                  sample.language.code + "')");
        }
        hypotheses.push_back(sample.back_en);
        references.push_back(sample.original_en);
    }
    MetricReport report;
    report.language = language;
    report.bleu = bleu(hypotheses, references, tokenizer);
    report.chrf = chrf(hypotheses, references);
    report.ter = ter(hypotheses, references, tokenizer);
    report.sample_size = samples.size();
    return report;
}

} // namespace taco
