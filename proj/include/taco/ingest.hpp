#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "taco/core.hpp"

namespace taco {

/// An ordered, id-unique collection of instruction records plus provenance
/// (source file, record count) pairs. Immutable once constructed; order is
/// stable so equal inputs serialize to identical bytes.
class Dataset {
public:
    Dataset() = default;

    /// Throws ValidationError on duplicate ids.
    void append(InstructionRecord record);

    void add_provenance(std::string file, std::size_t count);

    const std::vector<InstructionRecord>& records() const { return records_; }
    const std::vector<std::pair<std::string, std::size_t>>& provenance() const {
        return provenance_;
    }
    std::size_t size() const { return records_.size(); }
    bool contains_id(const std::string& id) const;

private:
    std::vector<InstructionRecord> records_;
    std::vector<std::pair<std::string, std::size_t>> provenance_;
    std::unordered_map<std::string, std::size_t> ids_;
};

/// Reads an Alpaca-style JSON array (`instruction`, `input`, `output`).
/// Records get ids `alpaca-000000`.. in file order; empty `input` maps to
/// absent. Throws ParseError with the element index on schema violations.
Dataset read_alpaca(const std::filesystem::path& path);

/// Reads a Dolly-style JSON-lines file (`instruction`, `context`,
/// `response`, `category`). `context` maps to input, `response` to output.
/// Throws ParseError with the line number on malformed lines.
Dataset read_dolly(const std::filesystem::path& path);

/// Concatenates a then b. Throws ValidationError on id collisions.
Dataset merge(const Dataset& a, const Dataset& b);

/// Canonical JSON-lines interchange format: one record per line with keys
/// in fixed order (id, source, category, instruction, input, output).
/// Absent input/category serialize as empty strings.
void write_canonical(const Dataset& dataset, const std::filesystem::path& path);

/// Serializes one record to its canonical JSON line (no trailing newline).
std::string canonical_line(const InstructionRecord& record);

Dataset read_canonical(const std::filesystem::path& path);

} // namespace taco
