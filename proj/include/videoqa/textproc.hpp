#pragma once

#include <string>
#include <vector>

namespace videoqa {

// Special tokens. Preserved verbatim by the tokenizer so that preprocessing
// its own output is a fixed point.
inline constexpr const char* kNumberToken = "<NUMBER>";
inline constexpr const char* kUnkToken = "<UNK>";
inline constexpr const char* kEosToken = "<EOS>";
inline constexpr const char* kBosToken = "<BOS>";

// Lowercases, strips punctuation (apostrophes included), replaces each
// maximal digit run with <NUMBER>, and splits on whitespace.
// Throws DataError if nothing survives cleaning.
std::vector<std::string> preprocess_question(const std::string& raw);

// Same pipeline but an empty result is returned instead of thrown;
// used where unparseable input is skipped rather than rejected.
std::vector<std::string> tokenize_lenient(const std::string& raw);

// Answer cleaning: tokenize, then drop stop words. May come back empty
// (answer made only of stop words); callers decide how to treat that.
std::vector<std::string> preprocess_answer(const std::string& raw);

bool is_stop_word(const std::string& token);
const std::vector<std::string>& stop_words();

// Removes stop words from a token list, preserving order.
std::vector<std::string> remove_stop_words(const std::vector<std::string>& tokens);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace videoqa
