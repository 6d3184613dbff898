#include "persona_audit/cache.hpp"

#include <fstream>

#include "persona_audit/util.hpp"

namespace persona_audit {

CacheStore::CacheStore(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(path_)) return;
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("value")) continue;
        entries_[j["key"].get<std::string>()] = j["value"].get<std::string>();
    }
}

std::string CacheStore::make_key(std::string_view endpoint_kind, std::string_view model,
                                 std::string_view canonical_body) {
    std::string material;
    material.reserve(endpoint_kind.size() + model.size() + canonical_body.size() + 2);
    material.append(endpoint_kind);
    material.push_back('\n');
    material.append(model);
    material.push_back('\n');
    material.append(canonical_body);
    return sha256_hex(material);
}

std::optional<std::string> CacheStore::get(const std::string& key) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void CacheStore::put(const std::string& key, std::string_view endpoint_kind, std::string_view model,
                     std::string_view value) {
    std::lock_guard lock(mutex_);
    entries_[key] = std::string(value);
    append_jsonl(path_, json{{"key", key},
                             {"kind", std::string(endpoint_kind)},
                             {"model", std::string(model)},
                             {"value", std::string(value)}});
}

bool CacheStore::contains(const std::string& key) const {
    std::lock_guard lock(mutex_);
    return entries_.count(key) > 0;
}

std::size_t CacheStore::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

}  // namespace persona_audit
