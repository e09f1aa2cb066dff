#include "candset/prompts.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace candset {

namespace {

constexpr std::string_view kParallelTemplate =
    R"(Given the following problem, reason through it and provide a solution:

Problem: {question}

You must wrap your reasoning and answer into <Solution> ...reasoning here... 'The answer is [numerical value].'</Solution> format.)";

constexpr std::string_view kEnumerationTemplate =
    R"(Given the following problem, reason through it and provide multiple different solutions:

Problem: {question}

Use exactly this format (no extra text):
<Solution 1> [Your reasoning should go here] The answer is [Answer 1]. </Solution 1>
...
<Solution N> [Your reasoning should go here] The answer is [Answer N]. </Solution N>)";

constexpr std::string_view kIterativeTemplate =
    R"(Given a problem and a set of solutions, reason through it and provide a new solution. The new solution may result in the same answer, but it must be different from the ones already provided.

Problem: {question}

Existing solutions:
{solutions}

Use exactly this format (no extra text):
<New Solution> [Your reasoning should go here]. The answer is [answer]. </New Solution>)";

constexpr std::string_view kFlowTemplate =
    R"(You will receive a math question and a free-form solution. Extract the sequence of arithmetic steps from the solution and output them one by one.

Rules:
- Output ONLY lines made of digits 0-9, parentheses (), the operators + - * / ^, and optionally "=" to show each step's result.
- No words, units, currency symbols, or extra text.
- One step per line, in the order implied by the solution.
- Convert verbal quantities to numbers. Replace references like "the remainder" with the actual numeric value.
- Keep only the steps that lead to the final answer.
- If no computable arithmetic appears, output an empty line.

Example:

Question: Janet lays 16 eggs a day. She eats 3, uses 4 for baking, and sells the rest for $2 each. How much money does she make?
Solution: Janet lays 16 eggs per day. She eats 3 and uses 4 for baking, so 16 - 7 = 9 eggs left. She sells them at $2 each → 9 * 2 = $18.
Output:
3 + 4 = 7
16 - 7 = 9
9 * 2 = 18

Now, extract the arithmetic steps from the following:

Question: {question}
Solution: {solution}
Output:)";

void require_non_empty(std::string_view value, const char* what) {
    if (value.empty()) {
        throw std::invalid_argument(std::string(what) + " must be non-empty");
    }
}

}  // namespace

const PromptTemplates& PromptTemplates::defaults() {
    static const PromptTemplates t{
        std::string(kParallelTemplate),
        std::string(kEnumerationTemplate),
        std::string(kIterativeTemplate),
        std::string(kFlowTemplate),
    };
    return t;
}

std::string render_template(
    std::string_view tmpl,
    const std::vector<std::pair<std::string_view, std::string_view>>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t brace = tmpl.find('{', pos);
        if (brace == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, brace - pos));
        bool replaced = false;
        for (const auto& [key, value] : values) {
            std::size_t close = brace + 1 + key.size();
            if (close < tmpl.size() && tmpl[close] == '}' &&
                tmpl.compare(brace + 1, key.size(), key) == 0) {
                out.append(value);
                pos = close + 1;
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            out.push_back('{');
            pos = brace + 1;
        }
    }
    return out;
}

std::string render_parallel_prompt(std::string_view question, const PromptTemplates& templates) {
    require_non_empty(question, "question");
    return render_template(templates.parallel, {{"question", question}});
}

std::string render_enumeration_prompt(std::string_view question, const PromptTemplates& templates) {
    require_non_empty(question, "question");
    return render_template(templates.enumeration, {{"question", question}});
}

std::string render_iterative_prompt(std::string_view question,
                                    const std::vector<std::string>& prior_solutions,
                                    const PromptTemplates& templates) {
    require_non_empty(question, "question");
    if (prior_solutions.empty()) {
        return render_parallel_prompt(question, templates);
    }
    std::string solutions;
    for (std::size_t i = 0; i < prior_solutions.size(); ++i) {
        if (i != 0) solutions += "\n\n";
        solutions += "Solution " + std::to_string(i + 1) + ": " + prior_solutions[i];
    }
    return render_template(templates.iterative,
                           {{"question", question}, {"solutions", solutions}});
}

std::string render_flow_prompt(std::string_view question, std::string_view solution,
                               const PromptTemplates& templates) {
    require_non_empty(question, "question");
    require_non_empty(solution, "solution");
    return render_template(templates.flow,
                           {{"question", question}, {"solution", solution}});
}

std::string load_template_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open template file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace candset
