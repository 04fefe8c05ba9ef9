#pragma once

#include "nbpc/bitstring.hpp"
#include "nbpc/predictor.hpp"
#include "nbpc/rational.hpp"
#include "nbpc/source_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nbpc {

enum class PredictorKind { oracle, noisy, adversarial, faulty };

struct PredictorConfig {
    PredictorKind kind = PredictorKind::oracle;
    /// Draws per noisy call; empty means min_noisy_trials(base_err).
    std::optional<BigInt> noisy_trials;
    /// Fraction of calls a faulty predictor corrupts.
    Rational fault_rate{1, 10};
};

/// "oracle", "noisy:<trials|auto>", "adversarial" or "faulty:<rate>".
PredictorConfig parse_predictor_config(const std::string& text);
std::string predictor_config_text(const PredictorConfig& cfg);

/// Base predictor declaring error parameter params.base_err(). A faulty
/// predictor wraps the exact oracle.
BasePredictorPtr make_base_predictor(const SourceSpec& src, const PredictorParams& params,
                                     const PredictorConfig& cfg);

enum class Mode { average, worst_case, conditional, robust };

Mode parse_mode(const std::string& text);  // avg | worst | cond | robust
std::string mode_name(Mode mode);

struct ExperimentConfig {
    explicit ExperimentConfig(SourceSpec src) : source(std::move(src)) {}

    SourceSpec source;
    std::uint64_t q = 1;
    std::uint64_t k = 1;
    /// Sampled trials (average, conditional) or repetitions per support
    /// string (robust). Unused by worst-case enumeration.
    std::uint64_t trials = 1;
    std::uint64_t root_seed = 0;
    PredictorConfig predictor;
    Mode mode = Mode::average;
    /// Worst-case mode: target (1 + epsilon) factor and exponent kappa of
    /// q = ell^kappa. kappa = 0 picks ceil(C1 / epsilon); q is then ignored.
    Rational epsilon{1, 4};
    std::uint64_t kappa = 0;
    /// Robust mode self-test rounds; empty means hoeffding_self_test_trials.
    std::optional<std::uint64_t> self_test_trials;
};

/// Shannon entropy in bits of the first `len` bits of a sample; closed form
/// for uniform, iid and Markov sources, enumeration for samplers.
struct EntropyStat {
    double entropy = 0;
};
EntropyStat entropy(const SourceSpec& src, std::size_t len);
EntropyStat entropy(const SourceSpec& src);

/// 1 - p - 3 sqrt(p (1 - p) / trials).
double required_frequency(double p, std::uint64_t trials);

/// -log2 D*(suffix | prefix) + m C1 log2 ell + C2 log2(n ell q) + 3.
double arithmetic_length_bound(double neg_log_conditional, std::size_t m_light, std::uint64_t n,
                               std::uint64_t ell, std::uint64_t q);

/// (1 + epsilon) (-log2 D(x)) + C3(kappa) log2 max(n, ell).
double worst_case_length_bound(double neg_log_mass, const Rational& epsilon, std::uint64_t kappa,
                               std::uint64_t n, std::uint64_t ell);

/// H + C4 log2(n ell).
double average_length_bound(double entropy, std::uint64_t n, std::uint64_t ell);

/// H + C_robust log2 n + 1.
double robust_length_bound(double entropy, std::uint64_t n);

/// ceil(C1 / epsilon).
std::uint64_t kappa_for_epsilon(const Rational& epsilon);

struct TrialReport {
    std::uint64_t trial_id = 0;
    BitString x;
    double neg_log_mass = 0;  // -log2 of D(x), or of D*(suffix | prefix) in conditional mode
    std::uint64_t m_light = 0;  // light bits at delta = 1/q over the coded range
    std::uint64_t enc_bits = 0;
    bool decode_ok = false;
    bool fallback_used = false;  // raw fallback, or verbatim in robust mode
    double bound = 0;
    bool within_bound = false;
    double weight = 1;  // mass share of this record in the mean length
};

/// Everything the summary depends on besides the per-trial records.
struct ReportContext {
    Mode mode = Mode::average;
    std::string source;
    std::string predictor;
    bool exact = true;  // oracle predictor: zero-tolerance verdicts
    std::uint64_t n = 0;
    std::uint64_t ell = 0;
    std::uint64_t q = 0;
    std::uint64_t q_mod = 0;
    std::uint64_t k = 1;
    std::uint64_t root_seed = 0;
    double entropy = 0;  // of the coded part
};

struct Summary {
    std::uint64_t trials = 0;
    double mean_enc_bits = 0;
    double success_frequency = 0;
    double required_success = 0;
    double bound_frequency = 0;
    double required_bound = 0;
    double light_free_fraction = 0;
    double fallback_fraction = 0;
    double entropy = 0;
    std::optional<double> mean_upper;
    std::optional<double> mean_lower;
    /// Robust mode: lowest per-string success frequency.
    std::optional<double> min_string_success;
    double max_excess = 0;  // max over records of enc_bits - bound
    bool passed = false;
    friend bool operator==(const Summary&, const Summary&) = default;
};

/// Deterministic fold of the records in trial_id order.
Summary aggregate(const ReportContext& ctx, const std::vector<TrialReport>& trials);

struct ExperimentReport {
    ReportContext context;
    std::vector<TrialReport> trials;
    Summary summary;
};

/// Samples x ~ D per trial, encodes x_[k:ell] given x_[k-1], decodes, and
/// checks the per-trial length bound. With k = 1 and ell <= q <= n ell also
/// checks H - 1 <= mean length <= H + C4 log2(n ell).
ExperimentReport run_average_experiment(const ExperimentConfig& cfg);
ExperimentReport run_conditional_experiment(const ExperimentConfig& cfg);

/// Every support string, k = 1, q = ell^kappa; no tolerance. ell <= 16.
ExperimentReport run_worst_case_enumeration(const ExperimentConfig& cfg);

/// `trials` robust encode/decode repetitions of every support string.
/// Every string must decode with frequency >= 2/3 - 3 sigma, and the
/// mass-weighted mean length must be <= H + C_robust log2 n + 1. ell <= 16.
ExperimentReport run_robust_experiment(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct PseudoDeterminismReport {
    std::uint64_t draws = 0;
    std::uint64_t all_positions_ok = 0;  // agreement and accuracy at every position
    std::uint64_t calls = 0;
    std::uint64_t complement_exact = 0;  // calls with P(0) + P(1) = 1
    double rate = 0;
    double required_rate = 0;
    bool passed = false;
};

/// Per draw: x ~ D, fresh advice, and two independent seeds per position.
/// A draw succeeds when both calls round to the same grid point and both
/// are within 1/q_mod^2 of D* for b = 0 and b = 1 at every position.
PseudoDeterminismReport check_pseudodeterminism(const ExperimentConfig& cfg);

struct LightBoundReport {
    Rational probability;
    Rational bound;  // ell * delta
    bool passed = false;
};

/// Exact Pr[m_delta > 0] <= ell delta. ell <= 12.
LightBoundReport check_light_bound(const SourceSpec& src, const ExactProb& delta);

struct RoundTripReport {
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    bool passed = false;
};

/// decode(encode(x, k)) = x_[k:ell] for every support string and every k in
/// ks, with fixed seeds.
RoundTripReport check_roundtrip(const SourceSpec& src, std::uint64_t q,
                                const std::vector<std::uint64_t>& ks, std::uint64_t root_seed,
                                const PredictorConfig& predictor = {});

}  // namespace nbpc
