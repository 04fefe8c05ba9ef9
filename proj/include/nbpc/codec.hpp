#pragma once

#include "nbpc/bitstring.hpp"
#include "nbpc/predictor.hpp"
#include "nbpc/rational.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace nbpc {

/// A position whose bit was escaped instead of arithmetic-coded.
struct LightBit {
    std::uint64_t index = 0;  // 1-based position in x
    int bit = 0;
    friend bool operator==(const LightBit&, const LightBit&) = default;
};

/// The arithmetic-coded form (v, L, alpha, n, k), plus q so the decoder can
/// rebuild the predictor parameters.
struct ArithmeticCode {
    std::uint64_t n = 0;
    std::uint64_t k = 1;
    std::uint64_t q = 1;
    std::uint64_t alpha = 0;
    std::vector<LightBit> light;  // strictly increasing indices in [k, ell]
    BitString v;                  // |v| >= 1
    friend bool operator==(const ArithmeticCode&, const ArithmeticCode&) = default;
};

/// Canonical fallback: the suffix x_[k:ell] verbatim.
struct RawCode {
    BitString raw;
    friend bool operator==(const RawCode&, const RawCode&) = default;
};

using Encoding = std::variant<ArithmeticCode, RawCode>;

inline bool is_fallback(const Encoding& e)
{
    return std::holds_alternative<RawCode>(e);
}

/// Interval [p_less, p_less + p_eq) at the end of encoding.
struct CodecState {
    Rational p_less{0};
    Rational p_eq{1};
};

/// The fallback fires when ceil(-log2 p_eq) + 1 exceeds this many times ell.
inline constexpr std::uint64_t kFallbackFactor = 4;

struct EncodeOptions {
    /// Skips advice sampling; used by golden vectors and hand traces.
    std::optional<std::uint64_t> forced_alpha;
};

struct EncodeResult {
    Encoding encoding;
    CodecState state;
};

/// Encodes x_[k:ell] given x_[k-1]. Randomness: advice from
/// derive_seed(root_seed, 0, advice); predictor call at position i uses
/// derive_seed(root_seed, i, encoder).
///
/// Throws InvalidLength when |x| != ell or k is outside [1, ell + 1], and
/// propagates ZeroMassPrefix from the base predictor.
EncodeResult encode_traced(const BasePredictor& base, const PredictorParams& params,
                           const BitString& x, std::uint64_t k, std::uint64_t root_seed,
                           const EncodeOptions& options = {});

Encoding encode(const BasePredictor& base, const PredictorParams& params, const BitString& x,
                std::uint64_t k, std::uint64_t root_seed, const EncodeOptions& options = {});

/// Recovers x_[k:ell] from an encoding and x_[k-1]. Predictor call at
/// position i uses derive_seed(root_seed, i, decoder), independent of the
/// encoder's randomness.
///
/// Throws MalformedEncoding when the encoding is inconsistent with params
/// (L index out of range, alpha too large, empty v, q or n mismatch) and
/// InvalidLength when |prefix| does not match.
BitString decode(const BasePredictor& base, const PredictorParams& params, const Encoding& enc,
                 const BitString& prefix, std::uint64_t root_seed);

}  // namespace nbpc
