#include "nbpc/random.hpp"

#include "nbpc/errors.hpp"

namespace nbpc {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index, SeedRole role) noexcept
{
    return mix64(mix64(mix64(root) ^ index) ^ static_cast<std::uint64_t>(role));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound)
{
    if (bound == 0) {
        throw InvalidArgument("uniform_below: empty range");
    }
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r <= limit) {
            return r % bound;
        }
    }
}

BigInt uniform_below(Rng& rng, const BigInt& bound)
{
    if (bound <= 0) {
        throw InvalidArgument("uniform_below: empty range");
    }
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        BigInt r = 0;
        for (std::size_t w = 0; w < words; ++w) {
            r <<= 64;
            r += from_u64(rng());
        }
        r >>= static_cast<mp_bitcnt_t>(words * 64 - bits);
        if (r < bound) {
            return r;
        }
    }
}

bool bernoulli(Rng& rng, const Rational& p)
{
    if (sgn(p) < 0 || p > 1) {
        throw InvalidArgument("bernoulli parameter outside [0,1]");
    }
    const BigInt& den = p.get_den();
    if (mpz_sizeinbase(den.get_mpz_t(), 2) <= 64) {
        const std::uint64_t d = to_u64(den, "denominator");
        const std::uint64_t n = to_u64(p.get_num(), "numerator");
        return uniform_below(rng, d) < n;
    }
    return uniform_below(rng, den) < p.get_num();
}

}  // namespace nbpc
