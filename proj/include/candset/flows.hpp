#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "candset/backend.hpp"
#include "candset/parsing.hpp"
#include "candset/prompts.hpp"
#include "candset/rational.hpp"

namespace candset {

/**
 * One normalized arithmetic step, e.g. "9 * 2 = 18". The canonical form uses
 * only {0-9 ( ) + - * / ^ = space}: single spaces around binary operators and
 * "=", signs and parentheses hugging their operands, digit runs untouched.
 */
struct ArithmeticStep {
    std::string lhs;                        // expression text, canonicalized
    std::optional<std::string> result_text; // text after "=", canonicalized
    std::optional<Rational> result;         // result_text parsed, when numeric
    std::string canonical;                  // "lhs = result_text" or bare lhs
};

enum class FlowSource { Llm, RuleBased };

std::string to_string(FlowSource source);

struct ComputationFlow {
    std::string problem_id;
    int candidate_index = 0;
    std::vector<ArithmeticStep> steps;  // extraction order
    FlowSource extraction_source = FlowSource::RuleBased;
    int rejected_lines = 0;             // extraction noise, not fatal
};

/**
 * Splits extractor output into validated steps: lines are trimmed, empty
 * lines dropped, Unicode x / division / minus signs mapped to * / -, and any
 * line with characters outside the allowed step charset is excluded and
 * counted in `rejected_lines`.
 */
std::vector<ArithmeticStep> parse_flow_lines(std::string_view text, int* rejected_lines = nullptr);

/// Builds one step from a single already-validated line (testing helper).
std::optional<ArithmeticStep> parse_flow_line(std::string_view line);

enum class StepVerdict {
    Consistent,    // result present and exactly equal to eval(lhs)
    Inconsistent,  // result present and different
    Indeterminate, // result absent, division by zero, or value not exactly representable
};

struct EvalStepOptions {
    Rational tolerance = Rational(0);  // absolute; 0 keeps division exact
};

/// Evaluates lhs with exact rational arithmetic: ^ highest and
/// right-associative, then * /, then + -, parentheses override. Malformed
/// expressions throw ExpressionParseError.
class ExpressionParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact evaluation of an expression string; nullopt when evaluation cannot
/// produce a value (division by zero, non-integer exponent, overflow).
std::optional<Rational> eval_expression(std::string_view expression);

StepVerdict eval_step(const ArithmeticStep& step, const EvalStepOptions& options = {});

/**
 * LLM-based flow extraction: renders the one-shot prompt, generates once
 * greedily (temperature 0), parses the output lines. Backend errors
 * propagate; fully rejected output yields an empty flow with the tally set.
 */
ComputationFlow extract_flow(const std::string& question, const Candidate& candidate,
                             Backend& backend, const std::string& model_id,
                             const PromptTemplates& templates = PromptTemplates::defaults(),
                             int max_new_tokens = 1024);

/**
 * Deterministic oracle: scans the solution text for explicit
 * "number op number (op number)* = number" patterns (Unicode signs mapped,
 * "$" prefixes tolerated, comma groups absorbed) and emits them in order.
 * A lower-bound checker: it cannot infer steps that are not literally
 * present in the text.
 */
ComputationFlow extract_flow_rule_based(const Candidate& candidate);

}  // namespace candset
