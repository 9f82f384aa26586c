#pragma once

#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "mid/complexity.hpp"

namespace mid {

// Content-addressed store of compressed sizes. One record per line:
//   <16 hex digest> TAB <compressor id> TAB <bits>
// An empty path gives a purely in-memory cache. Appends are flushed
// immediately so concurrent tool runs can share a cache file.
class SizeCache {
 public:
  SizeCache() = default;
  explicit SizeCache(std::string path);

  std::optional<double> lookup(const std::string& compressor_id,
                               const std::string& digest);
  void insert(const std::string& compressor_id, const std::string& digest,
              double bits);

  std::size_t entries() const;
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  const std::string& path() const { return path_; }

 private:
  mutable std::mutex mu_;
  std::string path_;
  std::unordered_map<std::string, double> map_;  // key: digest \t id
  std::ofstream append_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// Wraps any source with digest-keyed memoization, optionally file-backed.
class CachingSource final : public ComplexitySource {
 public:
  CachingSource(ComplexitySource& inner, SizeCache& cache)
      : inner_(inner), cache_(cache) {}

  double size_bits(const Bytes& data) override;
  std::string id() const override { return inner_.id(); }

 private:
  ComplexitySource& inner_;
  SizeCache& cache_;
};

}  // namespace mid
