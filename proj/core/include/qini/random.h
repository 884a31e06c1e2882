#ifndef QINI_RANDOM_H_
#define QINI_RANDOM_H_

#include <cstdint>
#include <random>

namespace qini {

// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of substream `stream` under master `seed`. Substreams are keyed by a
// counter, so replicate r draws the same numbers regardless of which thread
// runs it or in which order.
constexpr std::uint64_t SubstreamSeed(std::uint64_t seed, std::uint64_t stream) {
  return MixBits(MixBits(seed) ^ MixBits(stream + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine MakeEngine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(SubstreamSeed(seed, stream));
}

}  // namespace qini

#endif  // QINI_RANDOM_H_
