#include "videoqa/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "videoqa/errors.hpp"

namespace videoqa {

namespace {

const std::vector<std::string> kStopWords = {
    "a",  "an", "the", "is",  "are", "was",  "were", "be",  "been", "being",
    "of", "to", "in",  "on",  "at",  "by",   "his",  "her", "its",  "their",
    "my", "it", "and", "for", "with", "this", "that", "these", "those",
};

const std::unordered_set<std::string>& stop_set() {
    static const std::unordered_set<std::string> s(kStopWords.begin(), kStopWords.end());
    return s;
}

const std::vector<std::string> kSpecials = {kNumberToken, kUnkToken, kEosToken, kBosToken};

// If a special token starts at position i, returns its length, else 0.
size_t match_special(const std::string& s, size_t i) {
    for (const auto& sp : kSpecials) {
        if (s.compare(i, sp.size(), sp) == 0) return sp.size();
    }
    return 0;
}

}  // namespace

std::vector<std::string> tokenize_lenient(const std::string& raw) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            out.push_back(current);
            current.clear();
        }
    };
    size_t i = 0;
    while (i < raw.size()) {
        if (size_t len = match_special(raw, i); len > 0) {
            flush();
            out.emplace_back(raw.substr(i, len));
            i += len;
            continue;
        }
        unsigned char c = static_cast<unsigned char>(raw[i]);
        if (std::isalpha(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (std::isdigit(c)) {
            flush();
            while (i + 1 < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i + 1]))) ++i;
            out.emplace_back(kNumberToken);
        } else {
            // whitespace and punctuation both end the current token
            flush();
        }
        ++i;
    }
    flush();
    return out;
}

std::vector<std::string> preprocess_question(const std::string& raw) {
    if (raw.empty()) throw DataError("empty question string");
    std::vector<std::string> tokens = tokenize_lenient(raw);
    if (tokens.empty()) throw DataError("question empty after cleaning: '" + raw + "'");
    return tokens;
}

std::vector<std::string> preprocess_answer(const std::string& raw) {
    return remove_stop_words(tokenize_lenient(raw));
}

bool is_stop_word(const std::string& token) { return stop_set().count(token) > 0; }

const std::vector<std::string>& stop_words() { return kStopWords; }

std::vector<std::string> remove_stop_words(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!is_stop_word(t)) out.push_back(t);
    }
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) s.push_back(' ');
        s += tokens[i];
    }
    return s;
}

}  // namespace videoqa
