#include "taco/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace taco {

namespace {

/// Included categories sorted by display label; this reproduces the
/// benchmark table's row order.
std::vector<std::string> included_categories(const CategoryReport& report) {
    std::set<std::string> excluded(report.excluded.begin(), report.excluded.end());
    std::vector<std::string> out;
    for (const auto& [category, mean] : report.per_category) {
        if (!excluded.count(category)) out.push_back(category);
    }
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return category_display_name(a) < category_display_name(b);
    });
    return out;
}

std::vector<std::string> common_categories(const std::vector<CategoryReport>& reports) {
    if (reports.empty()) throw ValidationError("table: no reports");
    auto categories = included_categories(reports.front());
    for (const auto& report : reports) {
        if (included_categories(report) != categories) {
            throw ValidationError("table: category sets differ between '" +
                                  reports.front().model_tag + "' and '" + report.model_tag + "'");
        }
    }
    return categories;
}

} // namespace

void RunSummary::add_stage(StageStats stats) {
    for (const auto& existing : stages_) {
        if (existing.name == stats.name) {
            throw ValidationError("run summary: duplicate stage '" + stats.name + "'");
        }
    }
    stages_.push_back(std::move(stats));
}

std::size_t RunSummary::total_failures() const {
    std::size_t total = 0;
    for (const auto& s : stages_) total += s.failures;
    return total;
}

std::string RunSummary::render_markdown() const {
    std::string out = "| Stage | In | Out | Failures |\n| --- | --- | --- | --- |\n";
    for (const auto& s : stages_) {
        out += "| " + s.name + " | " + std::to_string(s.records_in) + " | " +
               std::to_string(s.records_out) + " | " + std::to_string(s.failures) + " |\n";
    }
    out += "\ncache hit rate: " + format_decimal(100.0 * cache_hit_rate_, 1) + "%\n";
    out += "wall time: " + format_decimal(wall_seconds_, 2) + "s\n";
    return out;
}

std::string category_display_name(std::string_view category) {
    std::string out;
    bool word_start = true;
    for (char c : category) {
        if (c == '-' || c == '_' || c == ' ') {
            out += ' ';
            word_start = true;
        } else if (word_start && c >= 'a' && c <= 'z') {
            out += static_cast<char>(c - 'a' + 'A');
            word_start = false;
        } else {
            out += c;
            word_start = false;
        }
    }
    return out;
}

std::string format_decimal(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, round_half_even(value, decimals));
    return buffer;
}

std::string render_table1(const std::vector<CategoryReport>& reports) {
    auto categories = common_categories(reports);
    std::string out = "| Category |";
    for (const auto& report : reports) out += " " + report.model_tag + " |";
    out += "\n| --- |";
    for (std::size_t i = 0; i < reports.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& category : categories) {
        out += "| " + category_display_name(category) + " |";
        for (const auto& report : reports) {
            out += " " + format_decimal(report.per_category.at(category), 1) + " |";
        }
        out += "\n";
    }
    out += "| **Overall Average** |";
    for (const auto& report : reports) {
        out += " **" + format_decimal(report.overall, 1) + "** |";
    }
    out += "\n";
    return out;
}

std::string render_table1_csv(const std::vector<CategoryReport>& reports) {
    auto categories = common_categories(reports);
    std::string out = "Category";
    for (const auto& report : reports) out += "," + report.model_tag;
    out += "\n";
    for (const auto& category : categories) {
        out += category_display_name(category);
        for (const auto& report : reports) {
            out += "," + format_decimal(report.per_category.at(category), 1);
        }
        out += "\n";
    }
    out += "Overall Average";
    for (const auto& report : reports) out += "," + format_decimal(report.overall, 1);
    out += "\n";
    return out;
}

std::string render_table2(const std::vector<MetricReport>& reports) {
    if (reports.empty()) throw ValidationError("table: no reports");
    std::string out = "| Language | BLEU | CHRF++ | TER |\n| --- | --- | --- | --- |\n";
    for (const auto& report : reports) {
        out += "| " + report.language.display_name + " | " +
               format_decimal(report.bleu.score, 2) + " | " +
               format_decimal(report.chrf.score, 2) + " | " +
               format_decimal(report.ter.score, 2) + " |\n";
    }
    return out;
}

std::string render_table2_csv(const std::vector<MetricReport>& reports) {
    if (reports.empty()) throw ValidationError("table: no reports");
    std::string out = "Language,BLEU,CHRF++,TER\n";
    for (const auto& report : reports) {
        out += report.language.display_name + "," + format_decimal(report.bleu.score, 2) + "," +
               format_decimal(report.chrf.score, 2) + "," + format_decimal(report.ter.score, 2) +
               "\n";
    }
    return out;
}

std::string render_comparison(const ModelComparison& comparison) {
    std::string out = "| Category | " + comparison.model_a + " | " + comparison.model_b + " |\n";
    out += "| --- | --- | --- |\n";
    std::vector<std::string> categories;
    for (const auto& [category, values] : comparison.per_category) categories.push_back(category);
    std::sort(categories.begin(), categories.end(), [](const std::string& a, const std::string& b) {
        return category_display_name(a) < category_display_name(b);
    });
    for (const auto& category : categories) {
        const auto& [a, b] = comparison.per_category.at(category);
        out += "| " + category_display_name(category) + " | " + format_decimal(a, 1) + " | " +
               format_decimal(b, 1) + " |\n";
    }
    out += "\noverall ratio (" + comparison.model_a + " / " + comparison.model_b +
           "): " + format_decimal(comparison.overall_ratio, 1) + "\n";
    return out;
}

} // namespace taco
