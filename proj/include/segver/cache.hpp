#pragma once

#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>

namespace segver {

/// 64-bit FNV-1a of `text` as 16 hex digits.
std::string fingerprint(const std::string& text);

/// Content-addressed store of finished records, one JSON file per key.
/// Writes go through a temporary file and an atomic rename.
class ResultCache {
 public:
  /// An empty directory disables the cache.
  ResultCache(std::string directory, std::ostream& log);

  bool enabled() const noexcept { return !dir_.empty(); }

  /// Corrupt entries are reported on the log stream and treated as misses.
  std::optional<nlohmann::json> lookup(const std::string& key) const;
  void store(const std::string& key, const nlohmann::json& record) const;

  std::size_t hits() const noexcept { return hits_; }

 private:
  std::string path_for(const std::string& key) const;

  std::string dir_;
  std::ostream* log_;
  mutable std::size_t hits_ = 0;
};

}  // namespace segver
