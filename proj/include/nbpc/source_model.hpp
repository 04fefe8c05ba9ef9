#pragma once

#include "nbpc/bitstring.hpp"
#include "nbpc/rational.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace nbpc {

/// Every string of length ell equally likely.
struct UniformSource {};

/// Independent bits, each equal to 1 with probability p_one.
struct IidBernoulliSource {
    Rational p_one;
};

/// Two-state Markov chain. initial[b] = Pr[x_1 = b];
/// transition[a][b] = Pr[x_{i+1} = b | x_i = a].
struct MarkovSource {
    std::array<Rational, 2> initial;
    std::array<std::array<Rational, 2>, 2> transition;
};

/// Deterministic table from r-bit randomness to ell-bit output; the
/// randomness is uniform, so table.size() == 2^r.
struct SamplerSource {
    unsigned randomness_bits = 0;
    std::vector<BitString> table;
};

inline constexpr unsigned kMaxSamplerRandomness = 24;
inline constexpr std::size_t kMaxEnumerableLength = 20;

/// A distribution D_n over {0,1}^ell with exactly computable conditionals.
class SourceSpec {
public:
    using Kind = std::variant<UniformSource, IidBernoulliSource, MarkovSource, SamplerSource>;

    /// Validates every invariant (probabilities in [0,1] summing to one,
    /// table shape) and throws ConfigError naming the offending field.
    SourceSpec(Kind kind, std::uint64_t n, std::size_t ell);

    static SourceSpec uniform(std::uint64_t n, std::size_t ell);
    static SourceSpec iid(std::uint64_t n, std::size_t ell, Rational p_one);
    static SourceSpec markov(std::uint64_t n, std::size_t ell, std::array<Rational, 2> initial,
                             std::array<std::array<Rational, 2>, 2> transition);
    static SourceSpec sampler(std::uint64_t n, std::size_t ell, unsigned randomness_bits,
                              std::vector<BitString> table);

    const Kind& kind() const noexcept { return kind_; }
    std::uint64_t n() const noexcept { return n_; }
    std::size_t ell() const noexcept { return ell_; }
    std::string kind_name() const;

    /// Number of table rows whose output starts with `prefix` (sampler only).
    std::size_t sampler_count(const BitString& prefix) const;

private:
    Kind kind_;
    std::uint64_t n_;
    std::size_t ell_;
    std::vector<BitString> sorted_table_;
};

/// D*(b | prefix). Throws ZeroMassPrefix when the prefix has no mass and
/// InvalidLength when |prefix| >= ell.
ExactProb exact_conditional(const SourceSpec& src, const BitString& prefix, int b);

/// D(x) for |x| == ell; zero outside the support.
ExactProb mass(const SourceSpec& src, const BitString& x);

/// Pr[x_[|prefix|] = prefix]; zero outside the support.
ExactProb prefix_mass(const SourceSpec& src, const BitString& prefix);

/// Deterministic in seed; over uniform seeds distributed exactly as src.
BitString sample(const SourceSpec& src, std::uint64_t seed);

/// Number of positions i in [from, to] (1-based, inclusive) where x_i is a
/// delta-light next bit: D*(x_i | x_[i-1]) <= delta.
std::size_t light_count(const SourceSpec& src, const BitString& x, const ExactProb& delta,
                        std::size_t from, std::size_t to);

/// Pr_{x ~ D}[x has a delta-light next bit], exactly. ell <= 20.
ExactProb light_event_prob(const SourceSpec& src, const ExactProb& delta);

/// Calls fn(x, D(x)) for every x of positive mass, in lexicographic order.
/// ell <= 20.
void for_each_support_string(const SourceSpec& src,
                             const std::function<void(const BitString&, const ExactProb&)>& fn);

}  // namespace nbpc
