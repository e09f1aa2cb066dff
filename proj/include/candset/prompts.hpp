#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace candset {

/**
 * Prompt templates for the three samplers and the flow extractor.
 *
 * Defaults are the built-in templates; any of them can be overridden from a
 * text file (same {question} / {solutions} / {solution} placeholders) to
 * retarget the harness at other tasks.
 */
struct PromptTemplates {
    std::string parallel;
    std::string enumeration;
    std::string iterative;
    std::string flow;

    static const PromptTemplates& defaults();
};

/// Single-pass placeholder substitution: occurrences of {key} in the template
/// are replaced by the paired value; substituted text is never re-scanned, so
/// a value containing "{question}" stays verbatim.
std::string render_template(std::string_view tmpl,
                            const std::vector<std::pair<std::string_view, std::string_view>>& values);

std::string render_parallel_prompt(std::string_view question,
                                   const PromptTemplates& templates = PromptTemplates::defaults());
std::string render_enumeration_prompt(std::string_view question,
                                      const PromptTemplates& templates = PromptTemplates::defaults());

/// With no prior solutions this degenerates to the parallel single-solution
/// prompt (the first iterative draw is unconditioned). Priors are rendered as
/// "Solution k: <text>" entries joined by blank lines.
std::string render_iterative_prompt(std::string_view question,
                                    const std::vector<std::string>& prior_solutions,
                                    const PromptTemplates& templates = PromptTemplates::defaults());

std::string render_flow_prompt(std::string_view question, std::string_view solution,
                               const PromptTemplates& templates = PromptTemplates::defaults());

/// Reads a template override from a UTF-8 text file, byte-preserving.
std::string load_template_file(const std::filesystem::path& path);

}  // namespace candset
