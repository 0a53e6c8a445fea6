#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace spags {

// All randomness in the pipeline flows from one manifest seed through named
// substreams, so stages can be re-run independently and still reproduce.
inline std::uint64_t substream_seed(std::uint64_t root, std::string_view name) {
  // FNV-1a over the name, mixed with the root seed.
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : name) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 1099511628211ull;
  }
  h ^= root + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::string_view name) {
  return std::mt19937_64(substream_seed(root, name));
}

}  // namespace spags
