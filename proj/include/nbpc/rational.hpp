#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace nbpc {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "num/den" or a bare integer. Throws ConfigError on bad syntax or a
/// zero denominator. The result is canonicalized.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

/// log2 of a positive integer, accurate to double precision for any size.
double log2_of(const BigInt& value);

/// -log2(value); +inf when value is zero. value must be non-negative.
double neg_log2(const Rational& value);

/// Smallest integer c with 2^-c <= value, i.e. ceil(-log2(value)), for
/// 0 < value. Computed exactly.
std::int64_t ceil_neg_log2(const Rational& value);

/// Converts to uint64, throwing InvalidArgument when out of range.
std::uint64_t to_u64(const BigInt& value, std::string_view what);

BigInt from_u64(std::uint64_t value);

/// A probability in [0, 1], stored exactly.
class ExactProb {
public:
    ExactProb() = default;
    /// Throws InvalidArgument when value lies outside [0, 1].
    explicit ExactProb(Rational value);
    ExactProb(std::int64_t num, std::int64_t den);

    const Rational& value() const noexcept { return value_; }
    ExactProb complement() const;
    std::string str() const { return to_string(value_); }

    friend bool operator==(const ExactProb& a, const ExactProb& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const ExactProb& a, const ExactProb& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    Rational value_{0};
};

}  // namespace nbpc
