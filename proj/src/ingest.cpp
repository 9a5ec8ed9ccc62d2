#include "taco/ingest.hpp"

#include <fstream>

#include <json.hpp>

#include "taco/text.hpp"

namespace taco {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string pad6(std::size_t n) {
    std::string digits = std::to_string(n);
    if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
    return digits;
}

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing required key '" + key + "'");
    }
    if (!it->is_string()) {
        throw ParseError(where + ": key '" + key + "' is not a string");
    }
    return it->get<std::string>();
}

std::optional<std::string> nonempty_or_absent(std::string s) {
    if (s.empty()) return std::nullopt;
    return std::optional<std::string>(std::move(s));
}

} // namespace

void Dataset::append(InstructionRecord record) {
    auto [it, inserted] = ids_.emplace(record.id, records_.size());
    if (!inserted) {
        throw ValidationError("duplicate record id: '" + record.id + "'");
    }
    records_.push_back(std::move(record));
}

void Dataset::add_provenance(std::string file, std::size_t count) {
    provenance_.emplace_back(std::move(file), count);
}

bool Dataset::contains_id(const std::string& id) const {
    return ids_.count(id) != 0;
}

Dataset read_alpaca(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open alpaca file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what());
    }
    if (!doc.is_array()) {
        throw ParseError(path.string() + ": expected a JSON array");
    }
    Dataset dataset;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        std::string where = path.string() + " element " + std::to_string(i);
        if (!obj.is_object()) throw ParseError(where + ": not an object");
        InstructionRecord record;
        record.id = "alpaca-" + pad6(i);
        record.instruction = require_string(obj, "instruction", where);
        record.input = nonempty_or_absent(require_string(obj, "input", where));
        record.output = require_string(obj, "output", where);
        record.source = Source::alpaca;
        dataset.append(std::move(record));
    }
    dataset.add_provenance(path.string(), dataset.size());
    return dataset;
}

Dataset read_dolly(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dolly file: " + path.string());
    Dataset dataset;
    std::string line;
    std::size_t line_no = 0;
    std::size_t ordinal = 0;
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
        if (!obj.is_object()) throw ParseError(where + ": not an object");
        InstructionRecord record;
        record.id = "dolly-" + pad6(ordinal++);
        record.instruction = require_string(obj, "instruction", where);
        record.input = nonempty_or_absent(require_string(obj, "context", where));
        record.output = require_string(obj, "response", where);
        record.category = nonempty_or_absent(require_string(obj, "category", where));
        record.source = Source::dolly;
        dataset.append(std::move(record));
    }
    dataset.add_provenance(path.string(), dataset.size());
    return dataset;
}

Dataset merge(const Dataset& a, const Dataset& b) {
    Dataset out;
    for (const auto& r : a.records()) out.append(r);
    for (const auto& r : b.records()) {
        if (out.contains_id(r.id)) {
            throw ValidationError("id collision on merge: '" + r.id + "'");
        }
        out.append(r);
    }
    for (const auto& p : a.provenance()) out.add_provenance(p.first, p.second);
    for (const auto& p : b.provenance()) out.add_provenance(p.first, p.second);
    return out;
}

std::string canonical_line(const InstructionRecord& record) {
    ordered_json j;
    j["id"] = record.id;
    j["source"] = std::string(to_string(record.source));
    j["category"] = record.category.value_or("");
    j["instruction"] = record.instruction;
    j["input"] = record.input.value_or("");
    j["output"] = record.output;
    return j.dump();
}

void write_canonical(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset: " + path.string());
    for (const auto& record : dataset.records()) {
        out << canonical_line(record) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

Dataset read_canonical(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path.string());
    Dataset dataset;
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
        InstructionRecord record;
        record.id = require_string(obj, "id", where);
        record.source = source_from_string(require_string(obj, "source", where));
        record.category = nonempty_or_absent(require_string(obj, "category", where));
        record.instruction = require_string(obj, "instruction", where);
        record.input = nonempty_or_absent(require_string(obj, "input", where));
        record.output = require_string(obj, "output", where);
        dataset.append(std::move(record));
    }
    dataset.add_provenance(path.string(), dataset.size());
    return dataset;
}

} // namespace taco
