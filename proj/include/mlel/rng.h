#ifndef MLEL_RNG_H_
#define MLEL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mlel {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a sequence of coordinates into one seed:
//   h_1 = mix64(c_1),  h_k = mix64(h_{k-1} ^ mix64(c_k + k - 1)).
// Used for stream(seed, layer) and for the Monte Carlo replication key
// (master_seed, scenario_id, replication, ordering).
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = 0;
  std::uint64_t k = 0;
  for (std::uint64_t c : coords) {
    h = (k == 0) ? mix64(c) : mix64(h ^ mix64(c + k));
    ++k;
  }
  return h;
}

// Value-semantic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard, and uniform() keeps the top 53 bits, so
// draws do not depend on the standard library's distribution classes.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream derived from this stream's seed (not its position).
  RandomStream split(std::uint64_t index) const {
    return RandomStream(derive_seed({seed_, index}));
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mlel

#endif  // MLEL_RNG_H_
