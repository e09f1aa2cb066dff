#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "candset/backend.hpp"
#include "candset/prompts.hpp"

namespace candset {

enum class StrategyKind {
    Parallel,     // n independent draws, distinct seeds
    Enumeration,  // one call, the model enumerates solutions itself
    Iterative,    // n sequential calls, each conditioned on prior solutions
};

/// Report-style names: "parallel", "enumeration", "iteration".
std::string to_string(StrategyKind kind);
/// Accepts the report names plus "iterative"; throws std::invalid_argument.
StrategyKind strategy_from_string(const std::string& name);

struct SamplingBudget {
    int n = 5;  // >= 1; advisory for Enumeration (never rendered into prompts)
};

/// Raw transcript of one (problem, strategy) sampling run, before parsing.
struct RawRun {
    std::string problem_id;
    StrategyKind strategy = StrategyKind::Parallel;
    std::vector<GenerationResult> calls;
    std::vector<std::string> raw_texts;          // one per call, = calls[i].text
    std::vector<std::string> prompt_transcript;  // rendered prompt per call
};

/// Backend failure mid-run; the partial transcript stays attached.
class SamplingError : public std::runtime_error {
public:
    SamplingError(const std::string& what, RawRun partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const RawRun& partial_run() const { return partial_; }

private:
    RawRun partial_;
};

struct SamplingOptions {
    int max_concurrency = 8;  // parallel fan-out bound
    PromptTemplates templates = PromptTemplates::defaults();
    bool thinking_mode = true;
};

/**
 * Runs one sampling protocol for one problem. Decoding params are identical
 * across strategies; only the call pattern differs:
 *  - Parallel: n concurrent calls, per-call seed = base seed + call index.
 *  - Enumeration: exactly one call.
 *  - Iterative: n sequential calls, call k conditioned on the solutions
 *    parsed from calls 1..k-1 (unparseable calls contribute nothing but
 *    still count against the budget).
 */
RawRun sample(StrategyKind strategy, const std::string& problem_id,
              const std::string& question, SamplingBudget budget, Backend& backend,
              const DecodingParams& params, const std::string& model_id,
              const SamplingOptions& options = {});

}  // namespace candset
