#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace taco::text {

/// Decodes UTF-8 into codepoints. Sets `ok` to false and stops at the first
/// invalid byte sequence.
std::u32string decode_utf8(std::string_view s, bool& ok);

/// Decodes UTF-8, throwing away validity information (invalid input yields
/// the longest valid prefix).
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(const std::u32string& s);
void append_utf8(std::string& out, char32_t cp);

/// Canonical composition (NFC). Invalid UTF-8 input is returned unchanged.
std::string nfc(std::string_view s);

/// Canonical combining class; 0 for starters.
int combining_class(char32_t cp);

bool is_ascii_space(char32_t cp);

/// Punctuation set used by the metric tokenizer and the sentence splitter:
/// ASCII punctuation plus common general punctuation (guillemets, curly
/// quotes, dashes, ellipsis, Arabic and Devanagari stops, CJK stops).
bool is_punct(char32_t cp);

/// Splits on runs of ASCII whitespace. No punctuation handling.
std::vector<std::string> split_whitespace(std::string_view s);

/// Whitespace-trimmed copy.
std::string trim(std::string_view s);

/// Number of whitespace-separated tokens. Approximates model tokens only
/// loosely; used for truncation diagnostics, never for training decisions.
std::size_t approx_token_count(std::string_view s);

/// FNV-1a 64-bit over raw bytes, rendered as 16 hex digits. Stable across
/// platforms and runs; used for cache keys.
std::string fnv1a64_hex(std::string_view s);

} // namespace taco::text
