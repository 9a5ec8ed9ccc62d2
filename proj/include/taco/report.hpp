#pragma once

#include <string>
#include <vector>

#include "taco/judge.hpp"
#include "taco/mt_metrics.hpp"

namespace taco {

/// Counters for one pipeline stage.
struct StageStats {
    std::string name;
    std::size_t records_in = 0;
    std::size_t records_out = 0;
    std::size_t failures = 0;
};

/// Run accounting printed by every CLI command. Stage names are unique.
class RunSummary {
public:
    void add_stage(StageStats stats);

    void set_cache_hit_rate(double rate) { cache_hit_rate_ = rate; }
    void set_wall_seconds(double seconds) { wall_seconds_ = seconds; }

    const std::vector<StageStats>& stages() const { return stages_; }
    std::size_t total_failures() const;

    std::string render_markdown() const;

private:
    std::vector<StageStats> stages_;
    double cache_hit_rate_ = 0.0;
    double wall_seconds_ = 0.0;
};

/// Judge-score table: categories as rows (alphabetical by display label),
/// models as columns, one decimal, bold overall row. Throws ValidationError
/// when the reports' included category sets differ.
std::string render_table1(const std::vector<CategoryReport>& reports);
std::string render_table1_csv(const std::vector<CategoryReport>& reports);

/// Translation-QA table: Language, BLEU, CHRF++, TER at two decimals, rows
/// in input order.
std::string render_table2(const std::vector<MetricReport>& reports);
std::string render_table2_csv(const std::vector<MetricReport>& reports);

/// Side-by-side model comparison with the overall ratio at one decimal.
std::string render_comparison(const ModelComparison& comparison);

/// "common-sense" -> "Common Sense".
std::string category_display_name(std::string_view category);

/// Fixed-decimal formatting with half-to-even rounding.
std::string format_decimal(double value, int decimals);

} // namespace taco
