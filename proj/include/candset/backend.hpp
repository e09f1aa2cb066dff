#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace candset {

/**
 * Decoding hyperparameters, defaults matching the Qwen3-recommended values
 * used for every strategy: temperature 0.6, top_p 0.95, top_k 20,
 * repetition_penalty 1.0.
 */
struct DecodingParams {
    double temperature = 0.6;          // [0, 2]
    double top_p = 0.95;               // (0, 1]
    int top_k = 20;                    // 0 disables
    double repetition_penalty = 1.0;   // > 0
    int max_new_tokens = 4096;         // > 0
    std::optional<std::uint64_t> seed;

    /// Canonical JSON with fixed field order; equal params always serialize
    /// to equal bytes.
    std::string to_canonical_json() const;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    bool operator==(const DecodingParams&) const = default;
};

struct GenerationRequest {
    std::string prompt;          // non-empty
    DecodingParams params;
    std::string model_id;
    bool thinking_mode = true;   // passed through to the endpoint
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct GenerationResult {
    std::string text;            // final channel, thinking stripped
    std::string raw;             // full payload text, untrimmed
    TokenUsage usage;
    std::int64_t latency_ms = 0;
    std::int64_t call_index = 0;
};

/// Transport-level failure (connect, timeout, HTTP status). Retryable
/// failures are transient by nature (timeouts, 5xx, connect errors);
/// non-retryable ones (4xx, poisoned mock entries) fail immediately.
class TransportError : public std::runtime_error {
public:
    TransportError(const std::string& what, bool retryable)
        : std::runtime_error(what), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

/// Endpoint answered, but the body is not a chat-completions response.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The mock script ran out of entries.
class ScriptUnderflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One or more elements of a concurrent batch failed after retries.
/// Successful elements are preserved for inspection.
class AggregateGenerationError : public std::runtime_error {
public:
    AggregateGenerationError(const std::string& what,
                             std::vector<std::size_t> failed_indices,
                             std::vector<std::string> failure_messages,
                             std::vector<std::optional<GenerationResult>> partial);

    const std::vector<std::size_t>& failed_indices() const { return failed_indices_; }
    const std::vector<std::string>& failure_messages() const { return failure_messages_; }
    const std::vector<std::optional<GenerationResult>>& partial_results() const {
        return partial_;
    }

private:
    std::vector<std::size_t> failed_indices_;
    std::vector<std::string> failure_messages_;
    std::vector<std::optional<GenerationResult>> partial_;
};

struct RetryPolicy {
    int attempts = 3;               // total attempts per request
    int initial_backoff_ms = 500;   // doubles per retry
};

/**
 * Uniform text-generation access. Implementations are safe for concurrent
 * generate() calls from multiple threads.
 */
class Backend {
public:
    virtual ~Backend() = default;

    /// One sampled continuation. Throws TransportError / ProtocolError /
    /// ScriptUnderflowError; empty prompt throws std::invalid_argument.
    virtual GenerationResult generate(const GenerationRequest& request) = 0;

    /// Results in request order regardless of completion order. Throws
    /// AggregateGenerationError naming failed indices; empty input throws
    /// std::invalid_argument.
    virtual std::vector<GenerationResult> generate_concurrent(
        const std::vector<GenerationRequest>& requests, int max_concurrency = 8);
};

/// Thread fan-out used by network-backed implementations; results land in
/// their request slots, so output order always equals input order.
std::vector<GenerationResult> threaded_generate_concurrent(
    Backend& backend, const std::vector<GenerationRequest>& requests, int max_concurrency);

/**
 * Deterministic scripted backend. Entries are served strictly FIFO; a pure
 * function of (script, call order). Concurrent batches are assigned entries
 * in request order under one lock, so completion timing never affects the
 * mapping.
 */
class MockBackend : public Backend {
public:
    struct ScriptEntry {
        std::string text;
        std::int64_t latency_ms = 0;  // simulated; recorded verbatim
        bool poison = false;          // serving it raises a hard transport error
    };

    MockBackend() = default;
    explicit MockBackend(std::vector<ScriptEntry> script, RetryPolicy retry = {});

    /// Array of strings or {"text":..., "latency_ms":..., "error":...} objects.
    static std::shared_ptr<MockBackend> from_json_file(const std::filesystem::path& path,
                                                       RetryPolicy retry = {});

    GenerationResult generate(const GenerationRequest& request) override;
    std::vector<GenerationResult> generate_concurrent(
        const std::vector<GenerationRequest>& requests, int max_concurrency = 8) override;

    /// Next `count` generate attempts fail with a retryable transport error
    /// before any script entry is consumed.
    void inject_transport_faults(int count);

    /// Drops the first `count` entries and advances call indexing past them
    /// (resume support).
    void skip_entries(std::size_t count);

    std::size_t remaining() const;
    std::int64_t calls_served() const;

private:
    GenerationResult serve_locked(const GenerationRequest& request);

    mutable std::mutex mutex_;
    std::deque<ScriptEntry> script_;
    RetryPolicy retry_;
    int pending_faults_ = 0;
    std::int64_t next_call_index_ = 0;
};

/// Builds a FIFO mock preloaded with plain text entries.
std::shared_ptr<MockBackend> load_script(const std::vector<std::string>& entries);

/**
 * Chat-completions client over HTTP. POSTs
 * {model, messages, temperature, top_p, top_k, repetition_penalty,
 *  max_tokens, seed, stream:false} and reads choices[0].message. A separate
 * reasoning channel (reasoning_content or an inline <think> block) is kept in
 * GenerationResult.raw and stripped from .text.
 */
class HttpBackend : public Backend {
public:
    struct Options {
        std::string url;                       // e.g. http://host:port/v1/chat/completions
        std::string api_token_env = "CANDSET_API_TOKEN";
        int timeout_ms = 300000;
        RetryPolicy retry;
    };

    explicit HttpBackend(Options options);

    GenerationResult generate(const GenerationRequest& request) override;

private:
    Options options_;
    std::string host_;       // scheme://host:port
    std::string path_;
    std::mutex mutex_;
    std::int64_t next_call_index_ = 0;
};

/// Removes balanced <think>...</think> blocks (case-insensitive) and trims;
/// used to project the final channel out of a mixed payload.
std::string strip_thinking_blocks(const std::string& content);

/// Chat-completions request body for a single-user-turn prompt; exposed for
/// protocol-isolation tests.
std::string build_chat_completions_body(const GenerationRequest& request);

}  // namespace candset
