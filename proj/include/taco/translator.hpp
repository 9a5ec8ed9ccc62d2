#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "taco/core.hpp"
#include "taco/ingest.hpp"

namespace taco {

/// One text to translate between two registered languages.
struct TranslationRequest {
    std::string text;
    LanguageTag source_lang;
    LanguageTag target_lang;

    /// Throws ValidationError on empty text or equal languages.
    void validate() const;
};

/// An en-xx-xx-en probe: the original English sentence, its forward
/// translation, and the back-translation scored against the original.
struct RoundTripSample {
    std::string original_en;
    std::string forward_xx;
    std::string back_en;
    LanguageTag language;
};

/// Translation capability. Implementations must return exactly one output
/// per request, in request order. Must be safe to call from multiple
/// threads.
class TranslationBackend {
public:
    virtual ~TranslationBackend() = default;

    /// Translates a batch. Throws BackendError on failure; when the failure
    /// is attributable to one request, the error carries its batch index.
    virtual std::vector<std::string> translate(const std::vector<TranslationRequest>& requests) = 0;

    virtual std::string name() const = 0;
};

/// Returns every input verbatim. Deterministic; used for tests and as the
/// fixed point of round-trip QA.
class IdentityBackend : public TranslationBackend {
public:
    std::vector<std::string> translate(const std::vector<TranslationRequest>& requests) override;
    std::string name() const override { return "identity"; }
};

/// Deterministic lookup-table backend. The table file is a JSON array of
/// {"source", "target", "text", "translation"} objects. A request not in
/// the table is an error carrying the request index.
class FileBackend : public TranslationBackend {
public:
    explicit FileBackend(const std::filesystem::path& table_path);

    std::vector<std::string> translate(const std::vector<TranslationRequest>& requests) override;
    std::string name() const override { return "file"; }

    std::size_t table_size() const { return table_.size(); }

private:
    std::unordered_map<std::string, std::string> table_;
    std::string path_;
};

/// Shared requests-per-second budget. Zero means unlimited. The clock is
/// injectable for tests.
class RateLimiter {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit RateLimiter(double requests_per_second, Clock clock = nullptr);

    /// Blocks until a token is available.
    void acquire();

    /// Non-blocking variant: returns the wait duration (zero when a token
    /// was granted immediately).
    std::chrono::milliseconds next_delay();

private:
    double rps_;
    Clock clock_;
    std::mutex mutex_;
    std::chrono::steady_clock::time_point next_slot_;
};

struct HttpBackendConfig {
    std::string endpoint;              // e.g. "http://127.0.0.1:8089/translate"
    std::string auth_header = "Authorization";
    std::string api_key;               // from TACO_API_KEY, never logged
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{1000};  // doubles per retry
    std::shared_ptr<RateLimiter> limiter;
};

/// Generic HTTP translation backend. POSTs {"q": [texts], "source", "target"}
/// and expects {"translations": [texts]}. Requests are grouped by language
/// pair; order is preserved.
class HttpBackend : public TranslationBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    std::vector<std::string> translate(const std::vector<TranslationRequest>& requests) override;
    std::string name() const override { return "http"; }

private:
    std::vector<std::string> post_group(const std::vector<TranslationRequest>& group);

    HttpBackendConfig config_;
};

/// Append-friendly on-disk key-value cache: JSON-lines of {"key", "text"},
/// last-write-wins on identical keys. Keys are
/// `<source>:<target>:<fnv1a64(text)>`. Safe for concurrent readers and
/// serialized appends.
class TranslationCache {
public:
    /// In-memory only.
    TranslationCache() = default;

    /// Loads existing entries; appends go to the same file.
    explicit TranslationCache(const std::filesystem::path& path);

    static std::string key_for(const TranslationRequest& request);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& translated);

    std::size_t size() const;
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }
    double hit_rate() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::string> entries_;
    std::filesystem::path path_;
    bool persistent_ = false;
    mutable std::uint64_t hits_ = 0;
    mutable std::uint64_t misses_ = 0;
};

struct BatchOptions {
    std::size_t workers = 4;     // concurrent backend calls
    std::size_t chunk_size = 64; // requests per backend call
};

/// Translates a batch through the cache. The cache is consulted first;
/// every backend result is written back. Output order matches request
/// order. Any backend failure aborts the whole batch; the error carries the
/// failing request's index in `requests` when known.
std::vector<std::string> translate_batch(const std::vector<TranslationRequest>& requests,
                                         TranslationBackend& backend, TranslationCache& cache,
                                         const BatchOptions& options = {});

/// Runs the en-xx-xx-en probe over `sentences`. Forward outputs are the
/// inputs to the backward pass. Throws ValidationError when language is the
/// pivot.
std::vector<RoundTripSample> round_trip(const std::vector<std::string>& sentences,
                                        const LanguageTag& language, TranslationBackend& backend,
                                        TranslationCache& cache, const BatchOptions& options = {});

/// Deterministic sample (without replacement) of n distinct sentences drawn
/// from the dataset's output fields, split with the canonical sentence
/// rule. Same (dataset, n, seed) always yields the same list. Throws
/// ValidationError when n exceeds the distinct-sentence population.
std::vector<std::string> sample_for_qa(const Dataset& dataset, std::size_t n, std::uint64_t seed);

} // namespace taco
