#pragma once

#include "nbpc/rational.hpp"

#include <cstdint>
#include <limits>

namespace nbpc {

/// splitmix64 step: adds the golden-ratio increment, then finalizes.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// SplitMix64 stream: cheap to seed, which matters because every predictor
/// call builds a fresh generator from its derived seed.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const result_type out = mix64(state_);
        state_ += 0x9e3779b97f4a7c15ULL;
        return out;
    }

private:
    std::uint64_t state_;
};

/// Independent streams derived from one root seed. Every consumer of
/// randomness takes a seed built by derive_seed(root, index, role), so two
/// roles never share a stream.
enum class SeedRole : std::uint64_t {
    advice = 1,
    encoder = 2,
    decoder = 3,
    sample = 4,
    trial = 5,
    self_test = 6,
    predictor = 7,
    fault = 8,
    encode_root = 9,
    decode_root = 10,
};

/// seed = mix64(mix64(mix64(root) ^ index) ^ role). Counter-based: the
/// derived seed depends only on (root, index, role).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index, SeedRole role) noexcept;

/// Uniform integer in [0, bound) by rejection; bound >= 1.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
BigInt uniform_below(Rng& rng, const BigInt& bound);

/// Exact Bernoulli(p) draw for a rational p in [0, 1].
bool bernoulli(Rng& rng, const Rational& p);

}  // namespace nbpc
