#include "segver/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace segver {

namespace fs = std::filesystem;

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResultCache::ResultCache(std::string directory, std::ostream& log) : dir_(std::move(directory)), log_(&log) {}

std::string ResultCache::path_for(const std::string& key) const {
  return (fs::path(dir_) / (fingerprint(key) + ".json")).string();
}

std::optional<nlohmann::json> ResultCache::lookup(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  const std::string path = path_for(key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    nlohmann::json entry = nlohmann::json::parse(in);
    if (entry.at("key").get<std::string>() != key || !entry.contains("record")) {
      throw std::runtime_error("key mismatch");
    }
    ++hits_;
    *log_ << "cache hit: " << key << '\n';
    return entry.at("record");
  } catch (const std::exception& e) {
    *log_ << "warning: ignoring corrupt cache entry " << path << " (" << e.what() << ")\n";
    return std::nullopt;
  }
}

void ResultCache::store(const std::string& key, const nlohmann::json& record) const {
  if (!enabled()) return;
  fs::create_directories(dir_);
  const std::string path = path_for(key);
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  const std::string tmp = path + suffix.str();
  {
    std::ofstream out(tmp);
    if (!out) {
      *log_ << "warning: cannot write cache entry " << tmp << '\n';
      return;
    }
    out << nlohmann::json{{"key", key}, {"record", record}}.dump() << '\n';
  }
  fs::rename(tmp, path);
}

}  // namespace segver
