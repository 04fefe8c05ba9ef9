#include "nbpc/robust.hpp"

#include "nbpc/errors.hpp"
#include "nbpc/random.hpp"

#include <cmath>

namespace nbpc {

std::uint64_t hoeffding_self_test_trials(std::uint64_t n, std::uint64_t ell)
{
    const double trials = 32.0 * static_cast<double>(ell) * static_cast<double>(ell) *
                          (static_cast<double>(n) + 1.0) * std::log(2.0);
    return static_cast<std::uint64_t>(std::ceil(trials));
}

SelfTestResult run_self_test(const BasePredictor& base, const PredictorParams& params,
                             const BitString& x, std::uint64_t root_seed,
                             const RobustOptions& options)
{
    if (options.self_test_trials == 0) {
        throw InvalidArgument("self-test needs at least one trial");
    }
    const BigInt total = from_u64(options.self_test_trials);
    const BigInt four_ell = from_u64(4 * params.ell());
    // passed  <=>  4 ell * successes >= (4 ell - 3) * total
    const BigInt needed = (four_ell - 3) * total;

    SelfTestResult result;
    for (std::uint64_t t = 0; t < options.self_test_trials; ++t) {
        const std::uint64_t seed = derive_seed(root_seed, t + 1, SeedRole::self_test);
        bool ok = false;
        try {
            const Encoding enc = encode(base, params, x, 1, seed);
            ok = bit_length(enc) <= options.length_budget &&
                 decode(base, params, enc, BitString{}, seed) == x;
        } catch (const ZeroMassPrefix&) {
            ok = false;  // the decoder wandered outside the support
        }
        ++result.trials_run;
        result.successes += ok ? 1 : 0;

        const BigInt best = four_ell * from_u64(result.successes + options.self_test_trials -
                                                result.trials_run);
        if (four_ell * from_u64(result.successes) >= needed) {
            result.passed = true;
            return result;
        }
        if (best < needed) {
            return result;
        }
    }
    return result;
}

RobustEncodeResult robustify_encode(const BasePredictor& base, const PredictorParams& params,
                                    const BitString& x, std::uint64_t root_seed,
                                    const RobustOptions& options)
{
    if (x.size() != params.ell()) {
        throw InvalidLength("robust encode requires |x| = ell");
    }
    RobustEncodeResult out{VerbatimCode{x}, run_self_test(base, params, x, root_seed, options)};
    if (out.self_test.passed) {
        out.encoding = encode(base, params, x, 1, derive_seed(root_seed, 0, SeedRole::encode_root));
    }
    return out;
}

BitString robustify_decode(const BasePredictor& base, const PredictorParams& params,
                           const RobustEncoding& enc, std::uint64_t root_seed)
{
    if (const auto* verbatim = std::get_if<VerbatimCode>(&enc)) {
        if (verbatim->x.size() != params.ell()) {
            throw InvalidLength("verbatim payload length differs from ell");
        }
        return verbatim->x;
    }
    return decode(base, params, std::get<Encoding>(enc), BitString{}, root_seed);
}

namespace {

BitWriter write_robust(const RobustEncoding& enc)
{
    BitWriter out;
    if (const auto* verbatim = std::get_if<VerbatimCode>(&enc)) {
        out.put(1);
        out.put_bits(verbatim->x);
    } else {
        out.put(0);
        write_encoding(out, std::get<Encoding>(enc));
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> serialize(const RobustEncoding& enc)
{
    return write_robust(enc).bytes();
}

RobustEncoding deserialize_robust(std::span<const std::uint8_t> bytes, std::size_t ell)
{
    BitReader in(bytes);
    RobustEncoding enc;
    if (in.get() == 1) {
        enc = VerbatimCode{in.get_bits(ell)};
    } else {
        enc = read_encoding(in);
    }
    if (in.remaining() >= 8) {
        throw MalformedEncoding("trailing bytes after container");
    }
    while (in.remaining() > 0) {
        if (in.get() != 0) {
            throw MalformedEncoding("non-zero padding");
        }
    }
    return enc;
}

std::size_t bit_length(const RobustEncoding& enc)
{
    return write_robust(enc).bit_count();
}

}  // namespace nbpc
