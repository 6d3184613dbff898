#include "persona_audit/util.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace persona_audit {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: EVP_Digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string slugify(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool last_dash = true;  // suppress leading dash
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            out.push_back(static_cast<char>(std::tolower(u)));
            last_dash = false;
        } else if (!last_dash) {
            out.push_back('-');
            last_dash = true;
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

namespace {
inline bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
}  // namespace

int count_word_occurrences(std::string_view text, std::string_view phrase) {
    if (phrase.empty() || text.size() < phrase.size()) return 0;
    const std::string t = to_lower(text);
    const std::string p = to_lower(phrase);
    int count = 0;
    size_t pos = 0;
    while ((pos = t.find(p, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !word_char(t[pos - 1]);
        const size_t end = pos + p.size();
        const bool right_ok = end == t.size() || !word_char(t[end]);
        if (left_ok && right_ok) ++count;
        ++pos;
    }
    return count;
}

std::string replace_word(std::string_view text, std::string_view token, std::string_view replacement) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (i + token.size() <= text.size() && text.compare(i, token.size(), token) == 0) {
            const bool left_ok = i == 0 || !word_char(text[i - 1]);
            const size_t end = i + token.size();
            const bool right_ok = end == text.size() || !word_char(text[end]);
            if (left_ok && right_ok) {
                out.append(replacement);
                i = end;
                continue;
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_below(std::uint64_t n) {
    return n == 0 ? 0 : next() % n;
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t hash_seed(std::string_view data) {
    const std::string hex = sha256_hex(data);
    std::uint64_t v = 0;
    for (int i = 0; i < 16; ++i) {
        const char c = hex[i];
        v = (v << 4) | static_cast<std::uint64_t>(c <= '9' ? c - '0' : c - 'a' + 10);
    }
    return v;
}

std::string fmt_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string fmt_percent(double value, int decimals) {
    std::string body = fmt_fixed(value, decimals);
    // "-0.0" -> "0.0"
    if (body.find_first_not_of("-0.") == std::string::npos) body = fmt_fixed(0.0, decimals);
    std::string out;
    if (value > 0 && body.find_first_not_of("0.") != std::string::npos) out.push_back('+');
    out += body;
    out.push_back('%');
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::vector<json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        out.push_back(json::parse(line));
    }
    return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
    std::string buf;
    for (const json& r : records) {
        buf += r.dump();
        buf.push_back('\n');
    }
    write_file(path, buf);
}

void append_jsonl(const std::filesystem::path& path, const json& record) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to file: " + path.string());
    out << record.dump() << '\n';
}

}  // namespace persona_audit
