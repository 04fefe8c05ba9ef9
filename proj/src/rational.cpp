#include "nbpc/rational.hpp"

#include "nbpc/errors.hpp"

#include <cmath>
#include <limits>

namespace nbpc {

Rational parse_rational(std::string_view text)
{
    const std::string s(text);
    if (s.empty()) {
        throw ConfigError("empty rational");
    }
    const auto slash = s.find('/');
    const std::string num_text = s.substr(0, slash);
    const std::string den_text = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto valid = [](const std::string& t) {
        std::size_t start = (!t.empty() && t[0] == '-') ? 1 : 0;
        if (t.size() <= start) {
            return false;
        }
        for (std::size_t i = start; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') {
                return false;
            }
        }
        return true;
    };
    if (!valid(num_text) || !valid(den_text)) {
        throw ConfigError("malformed rational '" + s + "'");
    }
    BigInt num(num_text, 10);
    BigInt den(den_text, 10);
    if (den == 0) {
        throw ConfigError("zero denominator in '" + s + "'");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value)
{
    return value.get_str();
}

std::string to_string(const BigInt& value)
{
    return value.get_str();
}

double log2_of(const BigInt& value)
{
    if (value <= 0) {
        throw InvalidArgument("log2 of non-positive integer");
    }
    long exp = 0;
    const double mantissa = mpz_get_d_2exp(&exp, value.get_mpz_t());
    return std::log2(mantissa) + static_cast<double>(exp);
}

double neg_log2(const Rational& value)
{
    if (sgn(value) < 0) {
        throw InvalidArgument("neg_log2 of negative value");
    }
    if (sgn(value) == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return log2_of(value.get_den()) - log2_of(value.get_num());
}

std::int64_t ceil_neg_log2(const Rational& value)
{
    if (sgn(value) <= 0) {
        throw InvalidArgument("ceil_neg_log2 of non-positive value");
    }
    const BigInt& a = value.get_num();
    const BigInt& b = value.get_den();
    const auto la = static_cast<std::int64_t>(mpz_sizeinbase(a.get_mpz_t(), 2));
    const auto lb = static_cast<std::int64_t>(mpz_sizeinbase(b.get_mpz_t(), 2));
    const std::int64_t c0 = lb - la;
    // Smallest c with a * 2^c >= b is either c0 or c0 + 1.
    bool reaches = false;
    if (c0 >= 0) {
        BigInt shifted = a << static_cast<mp_bitcnt_t>(c0);
        reaches = shifted >= b;
    } else {
        BigInt shifted = b << static_cast<mp_bitcnt_t>(-c0);
        reaches = a >= shifted;
    }
    return reaches ? c0 : c0 + 1;
}

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "GMP ulong must be 64-bit");

std::uint64_t to_u64(const BigInt& value, std::string_view what)
{
    if (sgn(value) < 0 || !mpz_fits_ulong_p(value.get_mpz_t())) {
        throw InvalidArgument(std::string(what) + " does not fit in 64 bits: " + value.get_str());
    }
    return mpz_get_ui(value.get_mpz_t());
}

BigInt from_u64(std::uint64_t value)
{
    return BigInt(static_cast<unsigned long>(value));
}

ExactProb::ExactProb(Rational value) : value_(std::move(value))
{
    value_.canonicalize();
    if (sgn(value_) < 0 || value_ > 1) {
        throw InvalidArgument("probability outside [0,1]: " + value_.get_str());
    }
}

ExactProb::ExactProb(std::int64_t num, std::int64_t den)
    : ExactProb(Rational(BigInt(std::to_string(num)), BigInt(std::to_string(den))))
{
}

ExactProb ExactProb::complement() const
{
    return ExactProb(Rational(1) - value_);
}

}  // namespace nbpc
