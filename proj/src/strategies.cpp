#include "candset/strategies.hpp"

#include "candset/parsing.hpp"

namespace candset {

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Parallel: return "parallel";
        case StrategyKind::Enumeration: return "enumeration";
        case StrategyKind::Iterative: return "iteration";
    }
    return "parallel";
}

StrategyKind strategy_from_string(const std::string& name) {
    if (name == "parallel") return StrategyKind::Parallel;
    if (name == "enumeration") return StrategyKind::Enumeration;
    if (name == "iteration" || name == "iterative") return StrategyKind::Iterative;
    throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

DecodingParams with_seed(const DecodingParams& params, std::size_t call_index) {
    DecodingParams p = params;
    if (p.seed) p.seed = *p.seed + call_index;
    return p;
}

GenerationRequest make_request(std::string prompt, const DecodingParams& params,
                               const std::string& model_id, const SamplingOptions& options) {
    GenerationRequest req;
    req.prompt = std::move(prompt);
    req.params = params;
    req.model_id = model_id;
    req.thinking_mode = options.thinking_mode;
    return req;
}

RawRun sample_parallel(const std::string& problem_id, const std::string& question,
                       SamplingBudget budget, Backend& backend, const DecodingParams& params,
                       const std::string& model_id, const SamplingOptions& options) {
    RawRun run;
    run.problem_id = problem_id;
    run.strategy = StrategyKind::Parallel;

    const std::string prompt = render_parallel_prompt(question, options.templates);
    std::vector<GenerationRequest> requests;
    requests.reserve(static_cast<std::size_t>(budget.n));
    for (int i = 0; i < budget.n; ++i) {
        requests.push_back(
            make_request(prompt, with_seed(params, static_cast<std::size_t>(i)), model_id,
                         options));
        run.prompt_transcript.push_back(prompt);
    }
    try {
        run.calls = backend.generate_concurrent(requests, options.max_concurrency);
    } catch (const AggregateGenerationError& e) {
        for (const auto& r : e.partial_results()) {
            if (r) {
                run.calls.push_back(*r);
                run.raw_texts.push_back(r->text);
            }
        }
        throw SamplingError(std::string("parallel sampling failed: ") + e.what(), run);
    }
    for (const auto& call : run.calls) run.raw_texts.push_back(call.text);
    return run;
}

RawRun sample_enumeration(const std::string& problem_id, const std::string& question,
                          Backend& backend, const DecodingParams& params,
                          const std::string& model_id, const SamplingOptions& options) {
    RawRun run;
    run.problem_id = problem_id;
    run.strategy = StrategyKind::Enumeration;

    const std::string prompt = render_enumeration_prompt(question, options.templates);
    run.prompt_transcript.push_back(prompt);
    try {
        run.calls.push_back(
            backend.generate(make_request(prompt, with_seed(params, 0), model_id, options)));
    } catch (const std::exception& e) {
        throw SamplingError(std::string("enumeration sampling failed: ") + e.what(), run);
    }
    run.raw_texts.push_back(run.calls.back().text);
    return run;
}

RawRun sample_iterative(const std::string& problem_id, const std::string& question,
                        SamplingBudget budget, Backend& backend, const DecodingParams& params,
                        const std::string& model_id, const SamplingOptions& options) {
    RawRun run;
    run.problem_id = problem_id;
    run.strategy = StrategyKind::Iterative;

    std::vector<std::string> priors;
    for (int k = 0; k < budget.n; ++k) {
        const std::string prompt = render_iterative_prompt(question, priors, options.templates);
        run.prompt_transcript.push_back(prompt);
        GenerationResult call;
        try {
            call = backend.generate(
                make_request(prompt, with_seed(params, static_cast<std::size_t>(k)), model_id,
                             options));
        } catch (const std::exception& e) {
            // hard failure aborts the remaining sequential calls
            throw SamplingError(std::string("iterative sampling failed at call ") +
                                    std::to_string(k) + ": " + e.what(),
                                run);
        }
        run.calls.push_back(call);
        run.raw_texts.push_back(call.text);
        // an unparseable call contributes nothing to the conditioning list
        auto bodies = extract_tagged_solutions(
            call.text, scheme_for_call(StrategyKind::Iterative, static_cast<std::size_t>(k)));
        if (!bodies.empty()) priors.push_back(bodies.front());
    }
    return run;
}

}  // namespace

RawRun sample(StrategyKind strategy, const std::string& problem_id, const std::string& question,
              SamplingBudget budget, Backend& backend, const DecodingParams& params,
              const std::string& model_id, const SamplingOptions& options) {
    if (budget.n < 1) throw std::invalid_argument("sampling budget must be >= 1");
    if (question.empty()) throw std::invalid_argument("question must be non-empty");
    switch (strategy) {
        case StrategyKind::Parallel:
            return sample_parallel(problem_id, question, budget, backend, params, model_id,
                                   options);
        case StrategyKind::Enumeration:
            return sample_enumeration(problem_id, question, backend, params, model_id, options);
        case StrategyKind::Iterative:
            return sample_iterative(problem_id, question, budget, backend, params, model_id,
                                    options);
    }
    throw std::logic_error("unreachable strategy kind");
}

}  // namespace candset
