#ifndef PREPLY_NN_RNG_H_
#define PREPLY_NN_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace preply::nn {

// xoshiro256** seeded through splitmix64. Every derived quantity (doubles,
// bounded integers, shuffles) is computed with integer arithmetic only, so a
// given seed produces the same stream on every platform. std:: distributions
// are deliberately not used: their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();

  // Uniform in [lo, hi].
  double uniform(double lo, double hi);

  // Uniform integer in [0, bound). bound must be > 0. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  // Index drawn from an unnormalized non-negative weight vector.
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Independent child stream; `tag` names the consumer so that adding a new
  // consumer never perturbs existing ones.
  Rng fork(std::string_view tag) const;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a, 64-bit. Used for feature hashing and config fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace preply::nn

#endif  // PREPLY_NN_RNG_H_
