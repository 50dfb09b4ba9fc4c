#pragma once

#include <cstdint>
#include <random>

namespace ins {

// splitmix64, used as the stream-derivation mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream scheme: stream k of master seed s is seeded with
// splitmix64(s ^ splitmix64(k)).  Replications use stream = replicate index,
// particles within a run use stream = particle index, auxiliary clocks use
// fixed high stream ids.  Documented here once; everything else calls these.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream));
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(master, stream));
}

}  // namespace ins
