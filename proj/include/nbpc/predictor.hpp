#pragma once

#include "nbpc/bitstring.hpp"
#include "nbpc/rational.hpp"
#include "nbpc/source_model.hpp"

#include <cstdint>
#include <memory>

namespace nbpc {

/// Parameter chain of the pseudo-deterministic predictor, built from the
/// user error parameter q:
///
///   q_mod      = ell * q + 1
///   base_err   = 32 * ell * q_mod^3      (accuracy the base predictor must meet)
///   grid       = 1 / (4 * q_mod^2)       (outputs are multiples of grid)
///   noise_step = 1 / (8 * ell * q_mod^3) (shift per unit of advice)
///   advice_max = 2 * ell * q_mod - 1
class PredictorParams {
public:
    /// Throws InvalidArgument for ell == 0, q == 0, or when q_mod or
    /// advice_max do not fit in 64 bits.
    static PredictorParams make(std::uint64_t n, std::uint64_t ell, std::uint64_t q);

    std::uint64_t n() const noexcept { return n_; }
    std::uint64_t ell() const noexcept { return ell_; }
    std::uint64_t q() const noexcept { return q_; }
    std::uint64_t q_mod() const noexcept { return q_mod_; }
    const BigInt& base_err() const noexcept { return base_err_; }
    const Rational& grid() const noexcept { return grid_; }
    /// 4 * q_mod^2: outputs are N / grid_denominator for N in [0, grid_denominator].
    const BigInt& grid_denominator() const noexcept { return grid_den_; }
    const Rational& noise_step() const noexcept { return noise_step_; }
    std::uint64_t advice_max() const noexcept { return advice_max_; }
    /// noise_step / grid = 1 / (2 * ell * q_mod).
    const Rational& noise_in_grid_units() const noexcept { return noise_in_grid_units_; }

private:
    PredictorParams() = default;

    std::uint64_t n_ = 0;
    std::uint64_t ell_ = 0;
    std::uint64_t q_ = 0;
    std::uint64_t q_mod_ = 0;
    BigInt base_err_;
    Rational grid_;
    BigInt grid_den_;
    Rational noise_step_;
    Rational noise_in_grid_units_;
    std::uint64_t advice_max_ = 0;
};

/// The shared advice: the noise multiplier carried inside an encoding.
struct Advice {
    std::uint64_t alpha = 0;
    friend bool operator==(Advice, Advice) = default;
};

/// A randomized next-bits predictor: estimates D*(b | prefix) using the
/// randomness in `seed`. Declares the error parameter E it claims to meet:
/// for every prefix and b, Pr_seed[|output - D*| <= 1/E] >= 1 - 1/E.
class BasePredictor {
public:
    explicit BasePredictor(BigInt error_parameter) : error_parameter_(std::move(error_parameter)) {}
    virtual ~BasePredictor() = default;

    virtual Rational predict(const BitString& prefix, int b, std::uint64_t seed) const = 0;
    const BigInt& error_parameter() const noexcept { return error_parameter_; }

private:
    BigInt error_parameter_;
};

using BasePredictorPtr = std::shared_ptr<const BasePredictor>;

/// Returns D*(b | prefix) exactly and ignores the seed.
BasePredictorPtr oracle_base_predictor(SourceSpec src, BigInt err);

/// Smallest trial count for which Hoeffding gives accuracy 1/err with
/// failure probability at most 1/err: ceil(err^2 * ln(2 err) / 2).
BigInt min_noisy_trials(const BigInt& err);

/// Trial counts up to this are simulated draw by draw.
inline constexpr std::uint64_t kDirectSimulationLimit = 1U << 16;

/// Empirical frequency of b among `trials` draws of the next bit conditioned
/// on the prefix. Up to kDirectSimulationLimit draws are simulated exactly;
/// beyond that the count is drawn from the normal approximation of its
/// binomial law and rounded to an integer. Either way the output is
/// count / trials. Throws InvalidArgument when trials < min_noisy_trials(err).
BasePredictorPtr noisy_base_predictor(SourceSpec src, BigInt err, BigInt trials);

/// Returns D*(b | prefix) + s / err with the sign s = +-1 drawn from the
/// seed: always on the edge of the contract.
BasePredictorPtr adversarial_base_predictor(SourceSpec src, BigInt err);

/// Wraps `inner`; on a `fault_rate` fraction of calls (drawn from the seed)
/// answers D* shifted by 1/2 modulo 1, violating any contract.
BasePredictorPtr faulty_base_predictor(SourceSpec src, BasePredictorPtr inner, Rational fault_rate);

/// Grid index N of the rounded value v~0 = N * grid for b = 0:
/// v0 = base(prefix, 0, seed), clamped to [0,1] after adding
/// alpha * noise_step, then rounded to the nearest grid multiple with ties
/// going down. Throws InvalidArgument when the base's error parameter is
/// below params.base_err() or alpha exceeds advice_max.
BigInt pseudo_predict_index(const BasePredictor& base, const PredictorParams& params,
                            const BitString& prefix, Advice advice, std::uint64_t seed);

/// v~0 for b = 0 and 1 - v~0 for b = 1.
ExactProb pseudo_predict(const BasePredictor& base, const PredictorParams& params,
                         const BitString& prefix, int b, Advice advice, std::uint64_t seed);

/// Uniform over {0, ..., advice_max}; deterministic in seed.
Advice sample_advice(const PredictorParams& params, std::uint64_t seed);

}  // namespace nbpc
