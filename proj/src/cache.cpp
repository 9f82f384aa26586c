#include "mid/cache.hpp"

#include <charconv>
#include <cstdio>

#include "mid/bytes.hpp"
#include "mid/errors.hpp"

namespace mid {

static std::string cache_key(const std::string& digest, const std::string& id) {
  return digest + "\t" + id;
}

SizeCache::SizeCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = line.rfind('\t');
    if (t1 == std::string::npos || t2 == t1)
      throw InputError("cache file corrupt: " + path_);
    std::string digest = line.substr(0, t1);
    std::string id = line.substr(t1 + 1, t2 - t1 - 1);
    double bits = 0.0;
    const char* b = line.data() + t2 + 1;
    const char* e = line.data() + line.size();
    auto res = std::from_chars(b, e, bits);
    if (res.ec != std::errc{} || res.ptr != e)
      throw InputError("cache file corrupt: " + path_);
    map_[cache_key(digest, id)] = bits;
  }
  append_.open(path_, std::ios::app);
  if (!append_) throw InputError("cannot open cache file for append: " + path_);
}

std::optional<double> SizeCache::lookup(const std::string& compressor_id,
                                        const std::string& digest) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find(cache_key(digest, compressor_id));
  if (it == map_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void SizeCache::insert(const std::string& compressor_id,
                       const std::string& digest, double bits) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, fresh] = map_.emplace(cache_key(digest, compressor_id), bits);
  (void)it;
  if (fresh && append_.is_open()) {
    char num[64];
    std::snprintf(num, sizeof(num), "%.17g", bits);
    append_ << digest << '\t' << compressor_id << '\t' << num << '\n';
    append_.flush();
  }
}

std::size_t SizeCache::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

double CachingSource::size_bits(const Bytes& data) {
  std::string digest = digest_hex(data);
  if (auto hit = cache_.lookup(inner_.id(), digest)) return *hit;
  double bits = inner_.size_bits(data);
  cache_.insert(inner_.id(), digest, bits);
  return bits;
}

}  // namespace mid
