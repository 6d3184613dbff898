#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace persona_audit {

using json = nlohmann::json;

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

/// Canonical serialization: sorted keys, UTF-8, no insignificant whitespace.
/// nlohmann::json already stores object keys sorted, so dump() is canonical.
inline std::string canonical_json(const json& j) { return j.dump(); }

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// "Workplace/Hiring" -> "workplace-hiring"
std::string slugify(std::string_view s);

/// Case-insensitive whole-word occurrences of `phrase` in `text`.
/// A boundary is any non-alphanumeric character (or the text edge), so
/// "male" does not match inside "female" and "abled person" does not match
/// inside "disabled person".
int count_word_occurrences(std::string_view text, std::string_view phrase);
inline bool contains_word(std::string_view text, std::string_view phrase) {
    return count_word_occurrences(text, phrase) > 0;
}

/// Whole-word token replacement, boundary rules as above.
std::string replace_word(std::string_view text, std::string_view token, std::string_view replacement);

/// splitmix64: tiny portable PRNG used by the deterministic mock provider.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    /// uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n);
    /// uniform in [0, 1)
    double next_double();
};

/// First 8 bytes of SHA-256(data), big-endian, as a PRNG seed.
std::uint64_t hash_seed(std::string_view data);

std::string fmt_fixed(double value, int decimals);
/// "+16.7%", "-8.8%", "0.0%"
std::string fmt_percent(double value, int decimals);

// ---- file helpers ------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);
void append_jsonl(const std::filesystem::path& path, const json& record);

}  // namespace persona_audit
