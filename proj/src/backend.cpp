#include "candset/backend.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace candset {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void validate_request(const GenerationRequest& request) {
    if (request.prompt.empty()) {
        throw std::invalid_argument("generation request prompt must be non-empty");
    }
    request.params.validate();
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::int64_t whitespace_token_count(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::int64_t n = 0;
    while (in >> tok) ++n;
    return n;
}

/// Runs fn up to policy.attempts times, backing off on retryable transport
/// errors only.
template <typename Fn>
auto run_with_retries(Fn&& fn, const RetryPolicy& policy) {
    int backoff = policy.initial_backoff_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            return fn();
        } catch (const TransportError& e) {
            if (!e.retryable() || attempt >= policy.attempts) throw;
            if (backoff > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            }
            backoff *= 2;
        }
    }
}

}  // namespace

void DecodingParams::validate() const {
    if (temperature < 0.0 || temperature > 2.0) {
        throw std::invalid_argument("temperature must be in [0, 2]");
    }
    if (!(top_p > 0.0) || top_p > 1.0) {
        throw std::invalid_argument("top_p must be in (0, 1]");
    }
    if (top_k < 0) throw std::invalid_argument("top_k must be >= 0");
    if (!(repetition_penalty > 0.0)) {
        throw std::invalid_argument("repetition_penalty must be positive");
    }
    if (max_new_tokens <= 0) throw std::invalid_argument("max_new_tokens must be positive");
}

std::string DecodingParams::to_canonical_json() const {
    ordered_json j;
    j["temperature"] = temperature;
    j["top_p"] = top_p;
    j["top_k"] = top_k;
    j["repetition_penalty"] = repetition_penalty;
    j["max_new_tokens"] = max_new_tokens;
    if (seed) j["seed"] = *seed;
    return j.dump();
}

AggregateGenerationError::AggregateGenerationError(
    const std::string& what, std::vector<std::size_t> failed_indices,
    std::vector<std::string> failure_messages,
    std::vector<std::optional<GenerationResult>> partial)
    : std::runtime_error(what),
      failed_indices_(std::move(failed_indices)),
      failure_messages_(std::move(failure_messages)),
      partial_(std::move(partial)) {}

std::vector<GenerationResult> threaded_generate_concurrent(
    Backend& backend, const std::vector<GenerationRequest>& requests, int max_concurrency) {
    if (requests.empty()) {
        throw std::invalid_argument("generate_concurrent requires a non-empty request list");
    }
    const std::size_t n = requests.size();
    std::vector<std::optional<GenerationResult>> results(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    const int workers =
        static_cast<int>(std::min<std::size_t>(n, std::max(1, max_concurrency)));

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                results[i] = backend.generate(requests[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<std::size_t> failed;
    std::vector<std::string> messages;
    for (std::size_t i = 0; i < n; ++i) {
        if (!results[i]) {
            failed.push_back(i);
            messages.push_back(errors[i]);
        }
    }
    if (!failed.empty()) {
        std::string what = "generation failed for " + std::to_string(failed.size()) +
                           " of " + std::to_string(n) + " requests (indices:";
        for (std::size_t i : failed) what += " " + std::to_string(i);
        what += ")";
        throw AggregateGenerationError(what, std::move(failed), std::move(messages),
                                       std::move(results));
    }
    std::vector<GenerationResult> out;
    out.reserve(n);
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

std::vector<GenerationResult> Backend::generate_concurrent(
    const std::vector<GenerationRequest>& requests, int max_concurrency) {
    return threaded_generate_concurrent(*this, requests, max_concurrency);
}

// ---------------------------------------------------------------------------
// MockBackend
// ---------------------------------------------------------------------------

MockBackend::MockBackend(std::vector<ScriptEntry> script, RetryPolicy retry)
    : script_(script.begin(), script.end()), retry_(retry) {
    retry_.initial_backoff_ms = 0;  // retries must not slow down tests
}

std::shared_ptr<MockBackend> MockBackend::from_json_file(const std::filesystem::path& path,
                                                         RetryPolicy retry) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mock script: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error("mock script is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array()) {
        throw std::runtime_error("mock script must be a JSON array");
    }
    std::vector<ScriptEntry> entries;
    entries.reserve(doc.size());
    for (const auto& item : doc) {
        ScriptEntry entry;
        if (item.is_string()) {
            entry.text = item.get<std::string>();
        } else if (item.is_object()) {
            if (item.contains("text")) entry.text = item["text"].get<std::string>();
            if (item.contains("latency_ms")) entry.latency_ms = item["latency_ms"].get<std::int64_t>();
            if (item.contains("error")) {
                entry.poison = item["error"].is_boolean() ? item["error"].get<bool>() : true;
            }
        } else {
            throw std::runtime_error(
                "mock script entries must be strings or {\"text\": ...} objects");
        }
        entries.push_back(std::move(entry));
    }
    return std::make_shared<MockBackend>(std::move(entries), retry);
}

GenerationResult MockBackend::serve_locked(const GenerationRequest& request) {
    if (pending_faults_ > 0) {
        --pending_faults_;
        throw TransportError("injected transport fault", /*retryable=*/true);
    }
    if (script_.empty()) {
        throw ScriptUnderflowError("mock script exhausted");
    }
    ScriptEntry entry = std::move(script_.front());
    script_.pop_front();
    std::int64_t index = next_call_index_++;
    if (entry.poison) {
        throw TransportError("poisoned script entry at call " + std::to_string(index),
                             /*retryable=*/false);
    }
    if (entry.latency_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(entry.latency_ms));
    }
    GenerationResult result;
    result.raw = entry.text;
    result.text = strip_thinking_blocks(entry.text);
    result.usage.prompt_tokens = whitespace_token_count(request.prompt);
    result.usage.completion_tokens = whitespace_token_count(result.text);
    result.latency_ms = entry.latency_ms;
    result.call_index = index;
    return result;
}

GenerationResult MockBackend::generate(const GenerationRequest& request) {
    validate_request(request);
    return run_with_retries(
        [&]() {
            std::lock_guard<std::mutex> lock(mutex_);
            return serve_locked(request);
        },
        retry_);
}

std::vector<GenerationResult> MockBackend::generate_concurrent(
    const std::vector<GenerationRequest>& requests, int /*max_concurrency*/) {
    if (requests.empty()) {
        throw std::invalid_argument("generate_concurrent requires a non-empty request list");
    }
    // Entries are assigned in request order under one lock; completion timing
    // of real threads can never permute the script mapping.
    std::vector<std::optional<GenerationResult>> results(requests.size());
    std::vector<std::size_t> failed;
    std::vector<std::string> messages;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        try {
            results[i] = generate(requests[i]);
        } catch (const std::exception& e) {
            failed.push_back(i);
            messages.push_back(e.what());
        }
    }
    if (!failed.empty()) {
        std::string what = "generation failed for " + std::to_string(failed.size()) + " of " +
                           std::to_string(requests.size()) + " requests (indices:";
        for (std::size_t i : failed) what += " " + std::to_string(i);
        what += ")";
        throw AggregateGenerationError(what, std::move(failed), std::move(messages),
                                       std::move(results));
    }
    std::vector<GenerationResult> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

void MockBackend::inject_transport_faults(int count) {
    std::lock_guard<std::mutex> lock(mutex_);
    pending_faults_ += count;
}

void MockBackend::skip_entries(std::size_t count) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (count > script_.size()) {
        throw std::runtime_error("cannot skip past the end of the mock script");
    }
    script_.erase(script_.begin(), script_.begin() + static_cast<std::ptrdiff_t>(count));
    next_call_index_ += static_cast<std::int64_t>(count);
}

std::size_t MockBackend::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return script_.size();
}

std::int64_t MockBackend::calls_served() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return next_call_index_;
}

std::shared_ptr<MockBackend> load_script(const std::vector<std::string>& entries) {
    std::vector<MockBackend::ScriptEntry> script;
    script.reserve(entries.size());
    for (const auto& text : entries) script.push_back({text, 0, false});
    return std::make_shared<MockBackend>(std::move(script));
}

// ---------------------------------------------------------------------------
// HttpBackend
// ---------------------------------------------------------------------------

std::string strip_thinking_blocks(const std::string& content) {
    std::string lower = lowercase(content);
    std::string out;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t open = lower.find("<think>", pos);
        if (open == std::string::npos) {
            out.append(content, pos, content.size() - pos);
            break;
        }
        std::size_t close = lower.find("</think>", open + 7);
        if (close == std::string::npos) {
            // unclosed block: leave it alone
            out.append(content, pos, content.size() - pos);
            break;
        }
        out.append(content, pos, open - pos);
        pos = close + 8;
    }
    // trim
    std::size_t b = out.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = out.find_last_not_of(" \t\r\n");
    return out.substr(b, e - b + 1);
}

std::string build_chat_completions_body(const GenerationRequest& request) {
    ordered_json body;
    body["model"] = request.model_id;
    body["messages"] = json::array({ordered_json{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.params.temperature;
    body["top_p"] = request.params.top_p;
    body["top_k"] = request.params.top_k;
    body["repetition_penalty"] = request.params.repetition_penalty;
    body["max_tokens"] = request.params.max_new_tokens;
    if (request.params.seed) body["seed"] = *request.params.seed;
    body["stream"] = false;
    body["chat_template_kwargs"] = ordered_json{{"enable_thinking", request.thinking_mode}};
    return body.dump();
}

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
    const std::string& url = options_.url;
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("endpoint URL must include a scheme: " + url);
    }
    std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = url;
        path_ = "/v1/chat/completions";
    } else {
        host_ = url.substr(0, path_start);
        path_ = url.substr(path_start);
        if (path_ == "/") path_ = "/v1/chat/completions";
    }
}

GenerationResult HttpBackend::generate(const GenerationRequest& request) {
    validate_request(request);
    const std::string body = build_chat_completions_body(request);

    auto attempt_once = [&]() -> GenerationResult {
        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::milliseconds(options_.timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(options_.timeout_ms));
        client.set_write_timeout(std::chrono::milliseconds(options_.timeout_ms));
        httplib::Headers headers;
        if (const char* token = std::getenv(options_.api_token_env.c_str());
            token != nullptr && *token != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }
        auto started = std::chrono::steady_clock::now();
        httplib::Result res = client.Post(path_, headers, body, "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        if (!res) {
            throw TransportError("endpoint unreachable: " + httplib::to_string(res.error()),
                                 /*retryable=*/true);
        }
        if (res->status >= 400) {
            bool retryable = res->status >= 500 || res->status == 429;
            throw TransportError("endpoint returned HTTP " + std::to_string(res->status),
                                 retryable);
        }

        json doc;
        try {
            doc = json::parse(res->body);
        } catch (const json::exception&) {
            throw ProtocolError("response body is not valid JSON");
        }
        if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
            throw ProtocolError("response has no choices");
        }
        const json& message = doc["choices"][0].value("message", json::object());
        if (!message.contains("content") || !message["content"].is_string()) {
            throw ProtocolError("response choice has no message content");
        }
        const std::string content = message["content"].get<std::string>();
        std::string reasoning;
        if (message.contains("reasoning_content") && message["reasoning_content"].is_string()) {
            reasoning = message["reasoning_content"].get<std::string>();
        }

        GenerationResult result;
        result.raw = reasoning.empty()
                         ? content
                         : "<think>" + reasoning + "</think>" + content;
        result.text = strip_thinking_blocks(content);
        if (doc.contains("usage") && doc["usage"].is_object()) {
            result.usage.prompt_tokens = doc["usage"].value("prompt_tokens", std::int64_t{0});
            result.usage.completion_tokens =
                doc["usage"].value("completion_tokens", std::int64_t{0});
        }
        result.latency_ms = elapsed;
        return result;
    };

    GenerationResult result = run_with_retries(attempt_once, options_.retry);
    std::lock_guard<std::mutex> lock(mutex_);
    result.call_index = next_call_index_++;
    return result;
}

}  // namespace candset
