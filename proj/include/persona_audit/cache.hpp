#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace persona_audit {

/// Content-addressed response cache backed by a single append-only JSONL
/// file. Keys are SHA-256 over (endpoint kind, model id, canonical request
/// body); values are the raw response bytes. Writes are serialized by a
/// mutex (single-writer discipline); on reload the last record per key wins.
class CacheStore {
  public:
    explicit CacheStore(std::filesystem::path path);

    static std::string make_key(std::string_view endpoint_kind, std::string_view model,
                                std::string_view canonical_body);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, std::string_view endpoint_kind, std::string_view model,
             std::string_view value);
    bool contains(const std::string& key) const;
    std::size_t size() const;
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::string> entries_;
};

}  // namespace persona_audit
