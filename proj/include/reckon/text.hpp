#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace reckon {

/// Canonical form used for dedup keys, unit ids and embedding-cache keys:
/// ASCII-lowercased, whitespace runs collapsed to one space, trimmed,
/// trailing punctuation stripped.
std::string normalize_text(std::string_view s);

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);
std::string to_hex(std::uint64_t v, int digits = 16);

/// Content-addressed unit id: "u" + 12 hex digits over
/// (source_doc_id, normalized keyword, normalized description).
std::string make_unit_id(std::string_view source_doc_id, std::string_view keyword,
                         std::string_view description);

/// ceil(character count / 4); the usage estimator for backends that do not
/// report real token counts.
long long estimate_tokens(std::string_view text);

/// Lowercased word tokens: maximal alphanumeric runs, plus every other
/// non-space character as a single token.
std::vector<std::string> tokenize_words(std::string_view text);

}  // namespace reckon
