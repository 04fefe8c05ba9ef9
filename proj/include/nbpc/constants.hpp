#pragma once

#include <cstdint>

namespace nbpc {

// Constants of the length bounds, fixed by the container format. The sweep
// in tests/unit/test_constants.cpp checks each one against the format.

/// Cost per escaped light bit: gamma(index) + 1 <= 2 log2 ell + 2 <= C1 log2 ell
/// for ell >= 4.
inline constexpr std::uint64_t kC1 = 3;

/// Header and truncation overhead of an arithmetic container beyond
/// -log2 D*(suffix | prefix) + 3, in units of log2(n ell q); valid for
/// n >= 2, ell >= 4, q >= 2.
inline constexpr std::uint64_t kC2 = 11;

/// Worst-case overhead in units of log2 n when n = ell and q = ell^kappa:
/// C2 log2(n ell q) + 3 = C2 (kappa + 2) log2 n + 3 <= (C2 (kappa + 2) + 2) log2 n.
constexpr std::uint64_t c3(std::uint64_t kappa)
{
    return kC2 * (kappa + 2) + 2;
}

/// Expected-length overhead in units of log2(n ell), for ell <= q <= n ell:
/// E[m] C1 log2 ell <= 2 C1 log2 ell, C2 log2(n ell q) <= 2 C2 log2(n ell),
/// and the additive 3 is at most 2 log2(n ell).
inline constexpr std::uint64_t kC4 = 2 * kC2 + 2 * kC1 + 2;

/// Robust mean-length overhead in units of log2 n when n = ell: the flag bit
/// is the "+1" and C4 log2(n ell) = 2 C4 log2 n.
inline constexpr std::uint64_t kCRobust = 2 * kC4;

}  // namespace nbpc
