#pragma once

#include <cstdint>
#include <string_view>

namespace pecsim {

// SplitMix64. Fully specified output sequence, unlike the std distributions,
// so traces stay byte-identical across platforms.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next()
  {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). Modulo bias is irrelevant at the bounds used here.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
  std::uint64_t state_;
};

constexpr std::uint64_t fnv1a64(std::string_view s)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Per-node stream: adding a node to a scenario must not perturb any other
// node's draws, so each node hashes its id into the run seed.
inline SplitMix64 node_stream(std::uint64_t run_seed, std::string_view node_id)
{
  return SplitMix64(run_seed ^ fnv1a64(node_id));
}

} // namespace pecsim
