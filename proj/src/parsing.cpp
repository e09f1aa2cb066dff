#include "candset/parsing.hpp"

#include <cctype>

namespace candset {

namespace {

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

std::size_t skip_ws(std::string_view text, std::size_t pos) {
    while (pos < text.size() && is_ws(text[pos])) ++pos;
    return pos;
}

bool ci_equal(char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
}

/// Matches `word` case-insensitively at pos; returns one past it.
std::optional<std::size_t> match_word(std::string_view text, std::size_t pos,
                                      std::string_view word) {
    if (pos + word.size() > text.size()) return std::nullopt;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!ci_equal(text[pos + i], word[i])) return std::nullopt;
    }
    return pos + word.size();
}

/// Matches the scheme's tag name starting at pos ("solution" or
/// "new<ws>solution"), returns one past it.
std::optional<std::size_t> match_tag_name(std::string_view text, std::size_t pos,
                                          TagScheme scheme) {
    if (scheme == TagScheme::New) {
        auto after_new = match_word(text, pos, "new");
        if (!after_new) return std::nullopt;
        std::size_t p = skip_ws(text, *after_new);
        if (p == *after_new) return std::nullopt;  // "newsolution" is not the tag
        return match_word(text, p, "solution");
    }
    return match_word(text, pos, "solution");
}

/// Opening tag at pos ('<' expected); returns one past '>'.
std::optional<std::size_t> match_open_tag(std::string_view text, std::size_t pos,
                                          TagScheme scheme) {
    if (pos >= text.size() || text[pos] != '<') return std::nullopt;
    std::size_t p = skip_ws(text, pos + 1);
    auto after_name = match_tag_name(text, p, scheme);
    if (!after_name) return std::nullopt;
    p = skip_ws(text, *after_name);
    if (scheme == TagScheme::Numbered) {
        std::size_t digits = 0;
        while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) {
            ++p;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
        p = skip_ws(text, p);
    }
    if (p < text.size() && text[p] == '>') return p + 1;
    return std::nullopt;
}

/// Closing tag at pos; the numbered scheme accepts the index or not.
std::optional<std::size_t> match_close_tag(std::string_view text, std::size_t pos,
                                           TagScheme scheme) {
    if (pos >= text.size() || text[pos] != '<') return std::nullopt;
    std::size_t p = skip_ws(text, pos + 1);
    if (p >= text.size() || text[p] != '/') return std::nullopt;
    p = skip_ws(text, p + 1);
    auto after_name = match_tag_name(text, p, scheme);
    if (!after_name) return std::nullopt;
    p = skip_ws(text, *after_name);
    if (scheme == TagScheme::Numbered) {
        while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
        p = skip_ws(text, p);
    }
    if (p < text.size() && text[p] == '>') return p + 1;
    return std::nullopt;
}

std::string trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_ws(text[b])) ++b;
    while (e > b && is_ws(text[e - 1])) --e;
    return std::string(text.substr(b, e - b));
}

struct AnswerMatch {
    std::string span;       // matched text, pre-normalization
    Rational value;
};

/// Number token at pos: optional '$' / sign (either order), digits with
/// 3-digit comma groups, optional decimal part, optional trailing '%'.
std::optional<std::pair<AnswerMatch, std::size_t>> parse_number_at(std::string_view text,
                                                                   std::size_t pos) {
    std::size_t p = pos;
    bool saw_currency = false;
    bool saw_sign = false;
    for (int i = 0; i < 2 && p < text.size(); ++i) {
        if (!saw_currency && text[p] == '$') {
            saw_currency = true;
            ++p;
        } else if (!saw_sign && (text[p] == '+' || text[p] == '-')) {
            saw_sign = true;
            ++p;
        } else {
            break;
        }
    }
    if (p >= text.size() || !std::isdigit(static_cast<unsigned char>(text[p]))) {
        return std::nullopt;
    }
    std::string digits;
    if (saw_sign) {
        // sign char is the one immediately before the digits or the currency
        for (std::size_t q = pos; q < p; ++q) {
            if (text[q] == '+' || text[q] == '-') digits.push_back(text[q]);
        }
    }
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) {
        digits.push_back(text[p]);
        ++p;
    }
    // thousands separators: ',' followed by exactly three digits
    while (p < text.size() && text[p] == ',') {
        if (p + 3 >= text.size()) break;  // need room for a full group
        bool three = std::isdigit(static_cast<unsigned char>(text[p + 1])) &&
                     std::isdigit(static_cast<unsigned char>(text[p + 2])) &&
                     std::isdigit(static_cast<unsigned char>(text[p + 3]));
        bool followed_by_digit =
            p + 4 < text.size() && std::isdigit(static_cast<unsigned char>(text[p + 4]));
        if (!three || followed_by_digit) break;
        digits.push_back(text[p + 1]);
        digits.push_back(text[p + 2]);
        digits.push_back(text[p + 3]);
        p += 4;
    }
    // decimal part
    if (p + 1 < text.size() && text[p] == '.' &&
        std::isdigit(static_cast<unsigned char>(text[p + 1]))) {
        digits.push_back('.');
        ++p;
        while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) {
            digits.push_back(text[p]);
            ++p;
        }
    }
    if (p < text.size() && text[p] == '%') ++p;

    auto value = Rational::parse_decimal(digits);
    if (!value) return std::nullopt;
    AnswerMatch match{std::string(text.substr(pos, p - pos)), *value};
    return std::make_pair(std::move(match), p);
}

std::optional<AnswerMatch> find_answer(std::string_view solution) {
    static constexpr std::string_view kAnchor = "answer is";
    std::size_t last_anchor = std::string_view::npos;
    for (std::size_t i = 0; i + kAnchor.size() <= solution.size(); ++i) {
        if (match_word(solution, i, kAnchor)) last_anchor = i;
    }
    if (last_anchor == std::string_view::npos) return std::nullopt;
    std::size_t from = last_anchor + kAnchor.size();
    for (std::size_t i = from; i < solution.size(); ++i) {
        char c = solution[i];
        bool could_start = std::isdigit(static_cast<unsigned char>(c)) || c == '$' ||
                           c == '+' || c == '-';
        if (!could_start) continue;
        if (auto parsed = parse_number_at(solution, i)) {
            return parsed->first;
        }
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(TagScheme scheme) {
    switch (scheme) {
        case TagScheme::Plain: return "plain";
        case TagScheme::Numbered: return "numbered";
        case TagScheme::New: return "new";
    }
    return "plain";
}

TagScheme tag_scheme_from_string(const std::string& name) {
    if (name == "plain") return TagScheme::Plain;
    if (name == "numbered") return TagScheme::Numbered;
    if (name == "new") return TagScheme::New;
    throw std::invalid_argument("unknown tag scheme: " + name);
}

std::vector<std::string> extract_tagged_solutions(std::string_view text, TagScheme scheme) {
    std::vector<std::string> bodies;
    std::size_t pos = 0;
    while (pos < text.size()) {
        // next opening tag
        std::optional<std::size_t> open_end;
        std::size_t open_at = pos;
        for (; open_at < text.size(); ++open_at) {
            if (text[open_at] != '<') continue;
            if ((open_end = match_open_tag(text, open_at, scheme))) break;
        }
        if (!open_end) break;
        // nearest closing tag after it
        std::optional<std::size_t> close_end;
        std::size_t close_at = *open_end;
        for (; close_at < text.size(); ++close_at) {
            if (text[close_at] != '<') continue;
            if ((close_end = match_close_tag(text, close_at, scheme))) break;
        }
        if (!close_end) break;  // unclosed at end-of-text: no match possible further on
        bodies.push_back(trim(text.substr(*open_end, close_at - *open_end)));
        pos = *close_end;
    }
    return bodies;
}

std::optional<Rational> extract_answer(std::string_view solution) {
    auto match = find_answer(solution);
    if (!match) return std::nullopt;
    return match->value;
}

std::optional<std::string> extract_answer_text(std::string_view solution) {
    auto match = find_answer(solution);
    if (!match) return std::nullopt;
    return match->span;
}

TagScheme scheme_for_call(StrategyKind strategy, std::size_t call_index) {
    switch (strategy) {
        case StrategyKind::Parallel: return TagScheme::Plain;
        case StrategyKind::Enumeration: return TagScheme::Numbered;
        case StrategyKind::Iterative:
            return call_index == 0 ? TagScheme::Plain : TagScheme::New;
    }
    return TagScheme::Plain;
}

ResponseSet parse_run(const RawRun& raw, int requested_n) {
    ResponseSet set;
    set.problem_id = raw.problem_id;
    set.strategy = raw.strategy;
    set.requested_n = requested_n;

    auto add_candidate = [&set](const std::string& body) {
        Candidate c;
        c.raw = body;
        c.reasoning = body;
        if (auto match = find_answer(body)) {
            c.answer = match->value;
            c.answer_text = match->span;
        }
        set.candidates.push_back(std::move(c));
    };

    for (std::size_t i = 0; i < raw.raw_texts.size(); ++i) {
        TagScheme scheme = scheme_for_call(raw.strategy, i);
        auto bodies = extract_tagged_solutions(raw.raw_texts[i], scheme);
        if (raw.strategy == StrategyKind::Enumeration) {
            for (const auto& body : bodies) add_candidate(body);
        } else if (!bodies.empty()) {
            add_candidate(bodies.front());
        }
    }
    set.parsed_n = static_cast<int>(set.candidates.size());
    return set;
}

}  // namespace candset
