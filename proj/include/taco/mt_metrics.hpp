#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "taco/core.hpp"
#include "taco/translator.hpp"

namespace taco {

/// Word tokenization rule for BLEU and TER.
using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

/// Language-agnostic default: every punctuation codepoint becomes its own
/// token, then the text splits on whitespace. No case folding.
std::vector<std::string> tokenize_words(std::string_view text);

/// Corpus BLEU with all intermediate components. Counts are summed over
/// segments before dividing (corpus-level aggregation).
struct BleuScore {
    double score = 0.0;                         // [0, 100]
    std::array<double, 4> precisions{};         // modified n-gram precisions, n = 1..4
    std::array<std::int64_t, 4> match_counts{}; // clipped n-gram matches
    std::array<std::int64_t, 4> total_counts{}; // hypothesis n-gram totals
    double brevity_penalty = 1.0;
    std::int64_t hyp_length = 0; // tokens
    std::int64_t ref_length = 0; // tokens
};

/// Corpus BLEU, no smoothing: any zero precision yields score 0;
/// brevity_penalty = min(1, exp(1 - ref_len/hyp_len)). Throws
/// ValidationError on empty corpora or length mismatch.
BleuScore bleu(const std::vector<std::string>& hypotheses,
               const std::vector<std::string>& references, const Tokenizer& tokenizer = {});

/// Sentence-level BLEU with add-one smoothing on orders >= 2. Not used by
/// qa_report; provided for per-segment diagnostics.
BleuScore sentence_bleu(const std::string& hypothesis, const std::string& reference,
                        const Tokenizer& tokenizer = {});

struct ChrfConfig {
    int char_order = 6;  // character n-grams 1..char_order
    int word_order = 2;  // word n-grams 1..word_order (0 recovers plain ChrF)
    double beta = 2.0;   // recall weight
};

struct ChrfScore {
    double score = 0.0; // [0, 100]
    int char_order = 6;
    int word_order = 2;
    double beta = 2.0;
};

/// ChrF++ : F_beta over character n-grams (whitespace stripped from the
/// character stream) plus word n-grams, averaged across orders. Counts are
/// summed over segments per order; orders with no n-grams on either side
/// are skipped. Throws ValidationError on empty corpora or length mismatch.
ChrfScore chrf(const std::vector<std::string>& hypotheses,
               const std::vector<std::string>& references, const ChrfConfig& config = {});

struct TerScore {
    double score = 0.0;          // percent, >= 0; may exceed 100
    std::int64_t edits = 0;      // insertions + deletions + substitutions + shifts
    std::int64_t shifts = 0;     // block shifts among those edits
    std::int64_t ref_length = 0; // reference words
};

/// Translation error rate: per segment, word-level edit distance plus block
/// shifts (cost 1 each) found greedily — apply the shift that most reduces
/// the remaining edit distance, repeat until no improvement. A shifted
/// block must match a reference subsequence exactly and spans at most 10
/// words; ties prefer the longer block, then the leftmost origin, then the
/// leftmost destination. Corpus score = 100 * edits / reference words.
/// Throws ValidationError on empty corpora, length mismatch, or an empty
/// reference segment.
TerScore ter(const std::vector<std::string>& hypotheses,
             const std::vector<std::string>& references, const Tokenizer& tokenizer = {});

/// All three corpus scores for one language's round-trip sample.
struct MetricReport {
    LanguageTag language;
    BleuScore bleu;
    ChrfScore chrf;
    TerScore ter;
    std::size_t sample_size = 0;
};

/// Scores back-translations against the originals (hypothesis = back_en,
/// reference = original_en). Throws ValidationError on empty input or mixed
/// languages.
MetricReport qa_report(const std::vector<RoundTripSample>& samples,
                       const Tokenizer& tokenizer = {});

} // namespace taco
