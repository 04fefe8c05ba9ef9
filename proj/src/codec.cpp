#include "nbpc/codec.hpp"

#include "nbpc/errors.hpp"
#include "nbpc/random.hpp"

namespace nbpc {
namespace {

// p_less = less / scale and p_eq = eq / scale. Every predictor output is
// N / D with D = grid_denominator, so the scale is D^(heavy steps) and no
// normalization is ever needed.
struct ScaledInterval {
    BigInt less{0};
    BigInt eq{1};
    BigInt scale{1};

    void take_zero(const BigInt& n0, const BigInt& d)
    {
        less *= d;
        eq *= n0;
        scale *= d;
    }

    void take_one(const BigInt& n0, const BigInt& d)
    {
        less = less * d + eq * n0;
        eq *= BigInt(d - n0);
        scale *= d;
    }

    CodecState state() const
    {
        CodecState s;
        s.p_less = Rational(less, scale);
        s.p_less.canonicalize();
        s.p_eq = Rational(eq, scale);
        s.p_eq.canonicalize();
        return s;
    }
};

BigInt bits_to_integer(const BitString& v)
{
    BigInt out = 0;
    for (auto b : v) {
        out <<= 1;
        out += b;
    }
    return out;
}

BitString integer_to_bits(const BigInt& value, std::size_t width)
{
    BitString out;
    for (std::size_t i = 0; i < width; ++i) {
        out.push_back(mpz_tstbit(value.get_mpz_t(), width - 1 - i));
    }
    return out;
}

void check_k(std::uint64_t k, std::uint64_t ell)
{
    if (k < 1 || k > ell + 1) {
        throw InvalidLength("k = " + std::to_string(k) + " outside [1, ell + 1] for ell = " +
                            std::to_string(ell));
    }
}

}  // namespace

EncodeResult encode_traced(const BasePredictor& base, const PredictorParams& params,
                           const BitString& x, std::uint64_t k, std::uint64_t root_seed,
                           const EncodeOptions& options)
{
    const std::uint64_t ell = params.ell();
    if (x.size() != ell) {
        throw InvalidLength("encode requires |x| = ell = " + std::to_string(ell) + ", got " +
                            std::to_string(x.size()));
    }
    check_k(k, ell);

    const Advice advice = options.forced_alpha
                              ? Advice{*options.forced_alpha}
                              : sample_advice(params, derive_seed(root_seed, 0, SeedRole::advice));
    if (advice.alpha > params.advice_max()) {
        throw InvalidArgument("forced alpha exceeds advice_max");
    }
    const BigInt& d = params.grid_denominator();
    const BigInt light_limit = 2 * d;  // q_i <= 2 / q_mod  <=>  N_b * q_mod <= 2 D
    const BigInt q_mod = from_u64(params.q_mod());

    ArithmeticCode code;
    code.n = params.n();
    code.k = k;
    code.q = params.q();
    code.alpha = advice.alpha;

    ScaledInterval interval;
    for (std::uint64_t i = k; i <= ell; ++i) {
        const BitString prefix = x.prefix(i - 1);
        const int bit = x[i - 1];
        const BigInt n0 = pseudo_predict_index(base, params, prefix, advice,
                                               derive_seed(root_seed, i, SeedRole::encoder));
        const BigInt nb = bit == 0 ? n0 : BigInt(d - n0);
        if (nb * q_mod <= light_limit) {
            code.light.push_back(LightBit{i, bit});
            continue;
        }
        if (bit == 0) {
            interval.take_zero(n0, d);
        } else {
            interval.take_one(n0, d);
        }
    }

    CodecState state = interval.state();
    const std::int64_t width = ceil_neg_log2(state.p_eq) + 1;
    if (static_cast<std::uint64_t>(width) > kFallbackFactor * ell) {
        return {RawCode{x.slice(k - 1, ell)}, std::move(state)};
    }
    // v = first `width` bits of p_less + p_eq / 2, truncated.
    BigInt value = (2 * interval.less + interval.eq) << static_cast<mp_bitcnt_t>(width);
    value /= 2 * interval.scale;
    code.v = integer_to_bits(value, static_cast<std::size_t>(width));
    return {std::move(code), std::move(state)};
}

Encoding encode(const BasePredictor& base, const PredictorParams& params, const BitString& x,
                std::uint64_t k, std::uint64_t root_seed, const EncodeOptions& options)
{
    return encode_traced(base, params, x, k, root_seed, options).encoding;
}

BitString decode(const BasePredictor& base, const PredictorParams& params, const Encoding& enc,
                 const BitString& prefix, std::uint64_t root_seed)
{
    const std::uint64_t ell = params.ell();
    if (const auto* raw = std::get_if<RawCode>(&enc)) {
        if (prefix.size() + raw->raw.size() != ell) {
            throw InvalidLength("fallback payload of " + std::to_string(raw->raw.size()) +
                                " bits does not complete a prefix of " +
                                std::to_string(prefix.size()) + " bits to ell = " +
                                std::to_string(ell));
        }
        return raw->raw;
    }

    const auto& code = std::get<ArithmeticCode>(enc);
    if (code.k < 1 || code.k > ell + 1) {
        throw MalformedEncoding("k = " + std::to_string(code.k) + " outside [1, ell + 1]");
    }
    if (prefix.size() != code.k - 1) {
        throw InvalidLength("decode needs a prefix of length k - 1 = " +
                            std::to_string(code.k - 1) + ", got " + std::to_string(prefix.size()));
    }
    if (code.q != params.q() || code.n != params.n()) {
        throw MalformedEncoding("encoding parameters (n, q) do not match the decoder's");
    }
    if (code.alpha > params.advice_max()) {
        throw MalformedEncoding("alpha exceeds advice_max");
    }
    if (code.v.empty()) {
        throw MalformedEncoding("empty v");
    }
    std::uint64_t last = 0;
    for (const auto& lb : code.light) {
        if (lb.index < code.k || lb.index > ell || lb.index <= last || (lb.bit != 0 && lb.bit != 1)) {
            throw MalformedEncoding("light-bit list entry at index " + std::to_string(lb.index) +
                                    " is out of range or out of order");
        }
        last = lb.index;
    }

    const BigInt& d = params.grid_denominator();
    const Advice advice{code.alpha};
    const BigInt v_value = bits_to_integer(code.v);
    const auto v_width = static_cast<mp_bitcnt_t>(code.v.size());

    BitString out = prefix;
    auto next_light = code.light.begin();
    ScaledInterval interval;
    for (std::uint64_t i = code.k; i <= ell; ++i) {
        if (next_light != code.light.end() && next_light->index == i) {
            out.push_back(next_light->bit);
            ++next_light;
            continue;
        }
        const BigInt n0 = pseudo_predict_index(base, params, out, advice,
                                               derive_seed(root_seed, i, SeedRole::decoder));
        // v >= p_less + p_eq * q0  <=>  V * scale * D >= (less * D + eq * N0) * 2^|v|
        const BigInt split = interval.less * d + interval.eq * n0;
        if (v_value * interval.scale * d >= (split << v_width)) {
            out.push_back(1);
            interval.take_one(n0, d);
        } else {
            out.push_back(0);
            interval.take_zero(n0, d);
        }
    }
    return out.slice(code.k - 1, ell);
}

}  // namespace nbpc
