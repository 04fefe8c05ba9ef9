#include "nbpc/predictor.hpp"

#include "nbpc/errors.hpp"
#include "nbpc/random.hpp"

#include <cmath>
#include <random>

namespace nbpc {

PredictorParams PredictorParams::make(std::uint64_t n, std::uint64_t ell, std::uint64_t q)
{
    if (ell == 0) {
        throw InvalidArgument("ell must be positive");
    }
    if (q == 0) {
        throw InvalidArgument("q must be positive");
    }
    const BigInt ell_z = from_u64(ell);
    const BigInt q_mod = ell_z * from_u64(q) + 1;
    const BigInt q_mod3 = q_mod * q_mod * q_mod;

    PredictorParams p;
    p.n_ = n;
    p.ell_ = ell;
    p.q_ = q;
    p.q_mod_ = to_u64(q_mod, "q_mod");
    p.base_err_ = 32 * ell_z * q_mod3;
    p.grid_den_ = 4 * q_mod * q_mod;
    p.grid_ = Rational(BigInt(1), p.grid_den_);
    p.noise_step_ = Rational(BigInt(1), BigInt(8 * ell_z * q_mod3));
    p.noise_in_grid_units_ = Rational(BigInt(1), BigInt(2 * ell_z * q_mod));
    // The advice range {0, ..., advice_max} itself must be countable in 64 bits.
    p.advice_max_ = to_u64(2 * ell_z * q_mod, "advice range") - 1;
    return p;
}

namespace {

class OraclePredictor final : public BasePredictor {
public:
    OraclePredictor(SourceSpec src, BigInt err) : BasePredictor(std::move(err)), src_(std::move(src)) {}

    Rational predict(const BitString& prefix, int b, std::uint64_t) const override
    {
        return exact_conditional(src_, prefix, b).value();
    }

private:
    SourceSpec src_;
};

class NoisyPredictor final : public BasePredictor {
public:
    NoisyPredictor(SourceSpec src, BigInt err, BigInt trials)
        : BasePredictor(std::move(err)), src_(std::move(src)), trials_(std::move(trials))
    {
    }

    Rational predict(const BitString& prefix, int b, std::uint64_t seed) const override
    {
        const Rational p = exact_conditional(src_, prefix, b).value();
        Rng rng(derive_seed(seed, 0, SeedRole::predictor));
        BigInt count;
        if (trials_ <= kDirectSimulationLimit) {
            const std::uint64_t t = to_u64(trials_, "trials");
            std::uint64_t hits = 0;
            for (std::uint64_t i = 0; i < t; ++i) {
                hits += bernoulli(rng, p) ? 1 : 0;
            }
            count = from_u64(hits);
        } else {
            // trials * p + sqrt(trials * p * (1 - p)) * Z, rounded and clamped.
            const Rational mean = Rational(trials_) * p;
            const double var = mpq_get_d(Rational(mean * (1 - p)).get_mpq_t());
            std::normal_distribution<double> normal(0.0, 1.0);
            const double dev = std::sqrt(var) * normal(rng);
            const Rational shifted = mean + Rational(dev) + Rational(1, 2);
            mpz_fdiv_q(count.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
            if (count < 0) {
                count = 0;
            }
            if (count > trials_) {
                count = trials_;
            }
        }
        Rational freq(count, trials_);
        freq.canonicalize();
        return freq;
    }

private:
    SourceSpec src_;
    BigInt trials_;
};

class AdversarialPredictor final : public BasePredictor {
public:
    AdversarialPredictor(SourceSpec src, BigInt err)
        : BasePredictor(std::move(err)), src_(std::move(src))
    {
    }

    Rational predict(const BitString& prefix, int b, std::uint64_t seed) const override
    {
        const Rational p = exact_conditional(src_, prefix, b).value();
        const Rational shift(BigInt(1), error_parameter());
        return (derive_seed(seed, 0, SeedRole::predictor) & 1U) ? Rational(p + shift)
                                                                 : Rational(p - shift);
    }

private:
    SourceSpec src_;
};

class FaultyPredictor final : public BasePredictor {
public:
    FaultyPredictor(SourceSpec src, BasePredictorPtr inner, Rational fault_rate)
        : BasePredictor(inner->error_parameter()),
          src_(std::move(src)),
          inner_(std::move(inner)),
          fault_num_(to_u64(fault_rate.get_num(), "fault rate numerator")),
          fault_den_(to_u64(fault_rate.get_den(), "fault rate denominator"))
    {
    }

    Rational predict(const BitString& prefix, int b, std::uint64_t seed) const override
    {
        Rng rng(derive_seed(seed, 0, SeedRole::fault));
        if (uniform_below(rng, fault_den_) < fault_num_) {
            const Rational p = exact_conditional(src_, prefix, b).value();
            return p < Rational(1, 2) ? Rational(p + Rational(1, 2)) : Rational(p - Rational(1, 2));
        }
        return inner_->predict(prefix, b, seed);
    }

private:
    SourceSpec src_;
    BasePredictorPtr inner_;
    std::uint64_t fault_num_;
    std::uint64_t fault_den_;
};

}  // namespace

BasePredictorPtr oracle_base_predictor(SourceSpec src, BigInt err)
{
    return std::make_shared<OraclePredictor>(std::move(src), std::move(err));
}

BigInt min_noisy_trials(const BigInt& err)
{
    if (err <= 0) {
        throw InvalidArgument("error parameter must be positive");
    }
    // ln(2 err) via the exact binary exponent, then err^2 * ln / 2 in
    // 256-bit floating point and rounded up.
    const double ln_two_err = (log2_of(err) + 1.0) * std::log(2.0);
    mpf_class bound(0, 256);
    mpf_class err_f(err, 256);
    bound = err_f * err_f * mpf_class(ln_two_err, 256) / 2;
    mpf_class rounded(0, 256);
    mpf_ceil(rounded.get_mpf_t(), bound.get_mpf_t());
    BigInt out(rounded);
    return out;
}

BasePredictorPtr noisy_base_predictor(SourceSpec src, BigInt err, BigInt trials)
{
    const BigInt needed = min_noisy_trials(err);
    if (trials < needed) {
        throw InvalidArgument("noisy predictor needs at least " + needed.get_str() +
                              " trials for error parameter " + err.get_str());
    }
    return std::make_shared<NoisyPredictor>(std::move(src), std::move(err), std::move(trials));
}

BasePredictorPtr adversarial_base_predictor(SourceSpec src, BigInt err)
{
    return std::make_shared<AdversarialPredictor>(std::move(src), std::move(err));
}

BasePredictorPtr faulty_base_predictor(SourceSpec src, BasePredictorPtr inner, Rational fault_rate)
{
    if (sgn(fault_rate) < 0 || fault_rate > 1) {
        throw InvalidArgument("fault rate outside [0,1]");
    }
    return std::make_shared<FaultyPredictor>(std::move(src), std::move(inner), std::move(fault_rate));
}

BigInt pseudo_predict_index(const BasePredictor& base, const PredictorParams& params,
                            const BitString& prefix, Advice advice, std::uint64_t seed)
{
    if (base.error_parameter() < params.base_err()) {
        throw InvalidArgument("base predictor error parameter " + base.error_parameter().get_str() +
                              " is below the required " + params.base_err().get_str());
    }
    if (advice.alpha > params.advice_max()) {
        throw InvalidArgument("advice " + std::to_string(advice.alpha) + " exceeds advice_max " +
                              std::to_string(params.advice_max()));
    }
    const Rational v0 = base.predict(prefix, 0, seed);
    // With v0 = a / b and noise_in_grid_units = 1 / M:
    //   t = (v0 + alpha * noise_step) / grid = (a D M + alpha b) / (b M).
    // Nearest integer with ties down is ceil(t - 1/2) = ceil((2 num - den) / (2 den));
    // clamping t to [0, D] first is the same as clamping the result.
    const BigInt& d = params.grid_denominator();
    const BigInt& m = params.noise_in_grid_units().get_den();
    const BigInt num = v0.get_num() * d * m + from_u64(advice.alpha) * v0.get_den();
    const BigInt den = v0.get_den() * m;
    const BigInt twice_num = 2 * num - den;
    const BigInt twice_den = 2 * den;
    BigInt index;
    mpz_cdiv_q(index.get_mpz_t(), twice_num.get_mpz_t(), twice_den.get_mpz_t());
    if (sgn(index) < 0) {
        index = 0;
    } else if (index > d) {
        index = d;
    }
    return index;
}

ExactProb pseudo_predict(const BasePredictor& base, const PredictorParams& params,
                         const BitString& prefix, int b, Advice advice, std::uint64_t seed)
{
    if (b != 0 && b != 1) {
        throw InvalidArgument("bit value must be 0 or 1");
    }
    const BigInt index = pseudo_predict_index(base, params, prefix, advice, seed);
    const BigInt numer = b == 0 ? index : BigInt(params.grid_denominator() - index);
    Rational out(numer, params.grid_denominator());
    out.canonicalize();
    return ExactProb(out);
}

Advice sample_advice(const PredictorParams& params, std::uint64_t seed)
{
    Rng rng(seed);
    return Advice{uniform_below(rng, params.advice_max() + 1)};
}

}  // namespace nbpc
