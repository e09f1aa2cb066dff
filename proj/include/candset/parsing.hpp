#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "candset/rational.hpp"
#include "candset/strategies.hpp"

namespace candset {

/// Tag grammar matching the strategy's prompt format.
enum class TagScheme {
    Plain,     // <Solution>...</Solution>
    Numbered,  // <Solution k>...</Solution k>, closing index optional
    New,       // <New Solution>...</New Solution>
};

std::string to_string(TagScheme scheme);
TagScheme tag_scheme_from_string(const std::string& name);

/// One parsed response y = (r, a).
struct Candidate {
    std::string raw;        // solution body between tags, surrounding whitespace trimmed
    std::string reasoning;  // body with the answer sentence retained
    std::optional<Rational> answer;
    std::optional<std::string> answer_text;  // matched answer span
};

struct ResponseSet {
    std::string problem_id;
    StrategyKind strategy = StrategyKind::Parallel;
    std::vector<Candidate> candidates;  // generation order
    int requested_n = 0;
    int parsed_n = 0;  // == candidates.size()
};

/**
 * All non-overlapping tag bodies in document order. Tag names match
 * case-insensitively with whitespace tolerated inside the brackets; matching
 * is non-greedy to the nearest closing tag and an unclosed opening tag at
 * end-of-text yields no match. Bodies are trimmed. Zero matches is a data
 * outcome, not an error.
 */
std::vector<std::string> extract_tagged_solutions(std::string_view text, TagScheme scheme);

/**
 * Final-answer extraction: the LAST case-insensitive "answer is" anchor wins;
 * the first numeric token after it is parsed with currency/thousands/trailing
 * punctuation stripped. Absent when no anchor or no parseable number follows
 * the last anchor.
 */
std::optional<Rational> extract_answer(std::string_view solution);

/// The matched answer span (pre-normalization), for Candidate.answer_text.
std::optional<std::string> extract_answer_text(std::string_view solution);

/// Tag scheme used by call `call_index` of a strategy's run (Iterative uses
/// the plain scheme for its unconditioned first call).
TagScheme scheme_for_call(StrategyKind strategy, std::size_t call_index);

/**
 * RawRun -> ResponseSet. Parallel/Iterative take at most one solution per
 * call (the first match); Enumeration takes every match from its single
 * call. parsed_n counts tag-parsed solutions whether or not an answer was
 * found.
 */
ResponseSet parse_run(const RawRun& raw, int requested_n);

}  // namespace candset
