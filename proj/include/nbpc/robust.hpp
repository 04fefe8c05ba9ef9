#pragma once

#include "nbpc/codec.hpp"
#include "nbpc/container.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace nbpc {

/// The whole string, sent when the self-test rejects the codec for x.
struct VerbatimCode {
    BitString x;
    friend bool operator==(const VerbatimCode&, const VerbatimCode&) = default;
};

/// Flag 0 followed by an ordinary encoding, or flag 1 followed by x.
using RobustEncoding = std::variant<Encoding, VerbatimCode>;

struct RobustOptions {
    /// Independent encode/decode rounds in the self-test.
    std::uint64_t self_test_trials = 1;
    /// A round counts as a success only if x is recovered and the encoding
    /// takes at most this many bits.
    std::uint64_t length_budget = 0;
};

/// Rounds needed to estimate a success probability within 1/(8 ell) except
/// with probability 2^-n (Hoeffding): ceil(32 ell^2 (n + 1) ln 2).
std::uint64_t hoeffding_self_test_trials(std::uint64_t n, std::uint64_t ell);

struct SelfTestResult {
    std::uint64_t trials_run = 0;
    std::uint64_t successes = 0;
    bool passed = false;
};

/// Runs the self-test and reports its verdict: passed iff the success
/// frequency over all self_test_trials rounds is at least 1 - 3/(4 ell).
/// Stops as soon as the verdict can no longer change, which yields the same
/// verdict as running every round.
SelfTestResult run_self_test(const BasePredictor& base, const PredictorParams& params,
                             const BitString& x, std::uint64_t root_seed,
                             const RobustOptions& options);

struct RobustEncodeResult {
    RobustEncoding encoding;
    SelfTestResult self_test;
};

/// Whole-string (k = 1) encoding: a fresh encode if the self-test passes,
/// x verbatim otherwise.
RobustEncodeResult robustify_encode(const BasePredictor& base, const PredictorParams& params,
                                    const BitString& x, std::uint64_t root_seed,
                                    const RobustOptions& options);

BitString robustify_decode(const BasePredictor& base, const PredictorParams& params,
                           const RobustEncoding& enc, std::uint64_t root_seed);

// Robust container: 0 <container body> pad, or 1 x pad. The decoder knows
// ell out of band, so the verbatim branch carries no length.
std::vector<std::uint8_t> serialize(const RobustEncoding& enc);
RobustEncoding deserialize_robust(std::span<const std::uint8_t> bytes, std::size_t ell);
std::size_t bit_length(const RobustEncoding& enc);

}  // namespace nbpc
