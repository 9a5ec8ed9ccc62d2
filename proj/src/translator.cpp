#include "taco/translator.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "taco/taco_builder.hpp"
#include "taco/text.hpp"

namespace taco {

namespace {

std::string table_key(const std::string& source, const std::string& target,
                      const std::string& text_value) {
    std::string key = source;
    key += '\x1f';
    key += target;
    key += '\x1f';
    key += text_value;
    return key;
}

std::string preview(const std::string& s, std::size_t limit = 40) {
    if (s.size() <= limit) return s;
    return s.substr(0, limit) + "...";
}

} // namespace

void TranslationRequest::validate() const {
    if (text.empty()) throw ValidationError("translation request: empty text");
    if (source_lang.code == target_lang.code) {
        throw ValidationError("translation request: source equals target ('" +
                              source_lang.code + "')");
    }
}

std::vector<std::string> IdentityBackend::translate(
    const std::vector<TranslationRequest>& requests) {
    std::vector<std::string> out;
    out.reserve(requests.size());
    for (const auto& r : requests) out.push_back(r.text);
    return out;
}

FileBackend::FileBackend(const std::filesystem::path& table_path) : path_(table_path.string()) {
    std::ifstream in(table_path);
    if (!in) throw IoError("cannot open translation table: " + path_);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path_ + ": malformed JSON: " + e.what());
    }
    if (!doc.is_array()) throw ParseError(path_ + ": expected a JSON array of entries");
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        std::string where = path_ + " entry " + std::to_string(i);
        for (const char* key : {"source", "target", "text", "translation"}) {
            if (!entry.contains(key) || !entry[key].is_string()) {
                throw ParseError(where + ": missing string key '" + key + "'");
            }
        }
        table_[table_key(entry["source"], entry["target"], entry["text"])] =
            entry["translation"].get<std::string>();
    }
}

std::vector<std::string> FileBackend::translate(const std::vector<TranslationRequest>& requests) {
    std::vector<std::string> out;
    out.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto& r = requests[i];
        auto it = table_.find(table_key(r.source_lang.code, r.target_lang.code, r.text));
        if (it == table_.end()) {
            throw BackendError("file backend: no entry for '" + preview(r.text) + "' (" +
                                   r.source_lang.code + "->" + r.target_lang.code + ")",
                               i);
        }
        out.push_back(it->second);
    }
    return out;
}

RateLimiter::RateLimiter(double requests_per_second, Clock clock)
    : rps_(requests_per_second),
      clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      next_slot_(clock_()) {}

std::chrono::milliseconds RateLimiter::next_delay() {
    if (rps_ <= 0) return std::chrono::milliseconds(0);
    auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rps_));
    std::lock_guard<std::mutex> lock(mutex_);
    auto now = clock_();
    if (next_slot_ < now) next_slot_ = now;
    auto delay = next_slot_ - now;
    next_slot_ += interval;
    return std::chrono::duration_cast<std::chrono::milliseconds>(delay);
}

void RateLimiter::acquire() {
    auto delay = next_delay();
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw ConfigError("http backend: empty endpoint");
}

std::vector<std::string> HttpBackend::post_group(const std::vector<TranslationRequest>& group) {
    std::size_t scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("http backend: endpoint must include a scheme: " + config_.endpoint);
    }
    std::size_t path_start = config_.endpoint.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? config_.endpoint
                                                       : config_.endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/"
                                                       : config_.endpoint.substr(path_start);

    nlohmann::json body;
    auto texts = nlohmann::json::array();
    for (const auto& r : group) texts.push_back(r.text);
    body["q"] = std::move(texts);
    body["source"] = group.front().source_lang.code;
    body["target"] = group.front().target_lang.code;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto backoff = config_.backoff_base * (1 << (attempt - 2));
            std::this_thread::sleep_for(backoff);
        }
        if (config_.limiter) config_.limiter->acquire();

        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::seconds(10));
        client.set_read_timeout(std::chrono::seconds(60));
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
        nlohmann::json response;
        try {
            response = nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed response JSON: ") + e.what();
            continue;
        }
        if (!response.contains("translations") || !response["translations"].is_array()) {
            last_error = "response missing 'translations' array";
            continue;
        }
        std::vector<std::string> out;
        for (const auto& t : response["translations"]) {
            if (!t.is_string()) {
                throw BackendError("http backend: non-string translation in response");
            }
            out.push_back(t.get<std::string>());
        }
        if (out.size() != group.size()) {
            throw BackendError("http backend: returned " + std::to_string(out.size()) +
                               " translations for " + std::to_string(group.size()) + " requests");
        }
        return out;
    }
    throw BackendError("http backend: " + std::to_string(config_.max_attempts) +
                       " attempts exhausted; last error: " + last_error);
}

std::vector<std::string> HttpBackend::translate(const std::vector<TranslationRequest>& requests) {
    if (requests.empty()) return {};
    // One POST per language pair, order restored afterwards.
    std::vector<std::string> out(requests.size());
    std::vector<bool> done(requests.size(), false);
    for (std::size_t i = 0; i < requests.size(); ++i) {
        if (done[i]) continue;
        std::vector<TranslationRequest> group;
        std::vector<std::size_t> positions;
        for (std::size_t j = i; j < requests.size(); ++j) {
            if (done[j]) continue;
            if (requests[j].source_lang.code == requests[i].source_lang.code &&
                requests[j].target_lang.code == requests[i].target_lang.code) {
                group.push_back(requests[j]);
                positions.push_back(j);
            }
        }
        auto translated = post_group(group);
        for (std::size_t k = 0; k < positions.size(); ++k) {
            out[positions[k]] = std::move(translated[k]);
            done[positions[k]] = true;
        }
    }
    return out;
}

TranslationCache::TranslationCache(const std::filesystem::path& path)
    : path_(path), persistent_(true) {
    std::ifstream in(path);
    if (in) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (text::trim(line).empty()) continue;
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": malformed cache line: " + e.what());
            }
            if (!obj.contains("key") || !obj.contains("text")) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": cache line must have 'key' and 'text'");
            }
            entries_[obj["key"].get<std::string>()] = obj["text"].get<std::string>();
        }
    }
}

std::string TranslationCache::key_for(const TranslationRequest& request) {
    return request.source_lang.code + ":" + request.target_lang.code + ":" +
           text::fnv1a64_hex(request.text);
}

std::optional<std::string> TranslationCache::get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

void TranslationCache::put(const std::string& key, const std::string& translated) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_[key] = translated;
    if (persistent_) {
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out) throw IoError("cannot append to cache: " + path_.string());
        nlohmann::ordered_json obj;
        obj["key"] = key;
        obj["text"] = translated;
        out << obj.dump() << '\n';
        if (!out) throw IoError("cache write failed: " + path_.string());
    }
}

std::size_t TranslationCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

double TranslationCache::hit_rate() const {
    std::uint64_t total = hits_ + misses_;
    return total == 0 ? 0.0 : static_cast<double>(hits_) / static_cast<double>(total);
}

std::vector<std::string> translate_batch(const std::vector<TranslationRequest>& requests,
                                         TranslationBackend& backend, TranslationCache& cache,
                                         const BatchOptions& options) {
    for (const auto& r : requests) r.validate();
    std::vector<std::string> out(requests.size());
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        if (auto cached = cache.get(TranslationCache::key_for(requests[i]))) {
            out[i] = std::move(*cached);
        } else {
            misses.push_back(i);
        }
    }
    if (misses.empty()) return out;

    const std::size_t chunk_size = std::max<std::size_t>(1, options.chunk_size);
    std::vector<std::vector<std::size_t>> chunks;
    for (std::size_t i = 0; i < misses.size(); i += chunk_size) {
        chunks.emplace_back(misses.begin() + static_cast<std::ptrdiff_t>(i),
                            misses.begin() +
                                static_cast<std::ptrdiff_t>(std::min(i + chunk_size, misses.size())));
    }

    std::mutex error_mutex;
    std::optional<std::size_t> error_index;
    std::string error_message;
    bool has_error = false;
    std::atomic<bool> failed{false};

    auto record_error = [&](std::string message, std::optional<std::size_t> index) {
        std::lock_guard<std::mutex> lock(error_mutex);
        // Keep the failure with the smallest request index for determinism.
        if (!has_error || (index && (!error_index || *index < *error_index))) {
            has_error = true;
            error_index = index;
            error_message = std::move(message);
        }
        failed.store(true);
    };

    auto process_chunk = [&](const std::vector<std::size_t>& chunk) {
        std::vector<TranslationRequest> sub;
        sub.reserve(chunk.size());
        for (std::size_t idx : chunk) sub.push_back(requests[idx]);
        try {
            auto results = backend.translate(sub);
            if (results.size() != sub.size()) {
                throw BackendError("backend '" + backend.name() + "' returned " +
                                   std::to_string(results.size()) + " results for " +
                                   std::to_string(sub.size()) + " requests");
            }
            for (std::size_t k = 0; k < chunk.size(); ++k) {
                cache.put(TranslationCache::key_for(sub[k]), results[k]);
                out[chunk[k]] = std::move(results[k]);
            }
        } catch (const BackendError& e) {
            record_error(e.what(), e.index ? std::optional<std::size_t>(chunk[*e.index])
                                           : std::nullopt);
        } catch (const std::exception& e) {
            record_error(e.what(), std::nullopt);
        }
    };

    const std::size_t workers = std::min(std::max<std::size_t>(1, options.workers), chunks.size());
    if (workers <= 1) {
        for (const auto& chunk : chunks) {
            if (failed.load()) break;
            process_chunk(chunk);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (!failed.load()) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= chunks.size()) return;
                    process_chunk(chunks[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    if (has_error) {
        std::string message = error_message;
        if (error_index) message += " (request index " + std::to_string(*error_index) + ")";
        throw BackendError(message, error_index);
    }
    return out;
}

std::vector<RoundTripSample> round_trip(const std::vector<std::string>& sentences,
                                        const LanguageTag& language, TranslationBackend& backend,
                                        TranslationCache& cache, const BatchOptions& options) {
    if (language.code == "en") {
        throw ValidationError("round trip: language must differ from the pivot");
    }
    const LanguageTag& en = LanguageRegistry::english();

    std::vector<TranslationRequest> forward;
    forward.reserve(sentences.size());
    for (const auto& s : sentences) forward.push_back({s, en, language});
    auto forward_texts = translate_batch(forward, backend, cache, options);
    for (std::size_t i = 0; i < forward_texts.size(); ++i) {
        if (forward_texts[i].empty()) {
            throw BackendError("round trip: empty forward translation", i);
        }
    }

    std::vector<TranslationRequest> backward;
    backward.reserve(forward_texts.size());
    for (const auto& t : forward_texts) backward.push_back({t, language, en});
    auto back_texts = translate_batch(backward, backend, cache, options);

    std::vector<RoundTripSample> samples;
    samples.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (back_texts[i].empty()) {
            throw BackendError("round trip: empty back translation", i);
        }
        samples.push_back({sentences[i], forward_texts[i], back_texts[i], language});
    }
    return samples;
}

std::vector<std::string> sample_for_qa(const Dataset& dataset, std::size_t n, std::uint64_t seed) {
    std::vector<std::string> population;
    std::unordered_map<std::string, bool> seen;
    for (const auto& record : dataset.records()) {
        for (auto& sentence : split_sentences(record.output)) {
            if (seen.emplace(sentence, true).second) {
                population.push_back(std::move(sentence));
            }
        }
    }
    if (n > population.size()) {
        throw ValidationError("qa sample: requested " + std::to_string(n) +
                              " sentences but population has " +
                              std::to_string(population.size()));
    }
    // Hand-rolled Fisher–Yates; std::shuffle is not bit-stable across
    // standard library implementations.
    std::mt19937_64 rng(seed);
    for (std::size_t i = population.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(population[i - 1], population[j]);
    }
    population.resize(n);
    return population;
}

} // namespace taco
