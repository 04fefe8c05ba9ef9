#include "nbpc/harness.hpp"

#include "nbpc/codec.hpp"
#include "nbpc/constants.hpp"
#include "nbpc/container.hpp"
#include "nbpc/errors.hpp"
#include "nbpc/random.hpp"
#include "nbpc/robust.hpp"
#include "nbpc/source_config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace nbpc {
namespace {

double binary_entropy(const Rational& p)
{
    const double x = p.get_d();
    double h = 0;
    if (x > 0) {
        h -= x * std::log2(x);
    }
    if (x < 1) {
        h -= (1 - x) * std::log2(1 - x);
    }
    return h;
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exponent)
{
    BigInt out = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        out *= from_u64(base);
    }
    return to_u64(out, "q = ell^kappa");
}

void require_enumerable(const SourceSpec& src, std::size_t limit, const std::string& what)
{
    if (src.ell() > limit) {
        throw SupportTooLarge(what + " enumerates the support and needs ell <= " +
                              std::to_string(limit) + ", got " + std::to_string(src.ell()));
    }
}

ReportContext make_context(const ExperimentConfig& cfg, const PredictorParams& params,
                           std::uint64_t k, double coded_entropy)
{
    ReportContext ctx;
    ctx.mode = cfg.mode;
    ctx.source = source_config_text(cfg.source);
    ctx.predictor = predictor_config_text(cfg.predictor);
    ctx.exact = cfg.predictor.kind == PredictorKind::oracle;
    ctx.n = params.n();
    ctx.ell = params.ell();
    ctx.q = params.q();
    ctx.q_mod = params.q_mod();
    ctx.k = k;
    ctx.root_seed = cfg.root_seed;
    ctx.entropy = coded_entropy;
    return ctx;
}

bool decodes_to(const BasePredictor& base, const PredictorParams& params, const Encoding& enc,
                const BitString& prefix, std::uint64_t seed, const BitString& expected)
{
    try {
        return decode(base, params, enc, prefix, seed) == expected;
    } catch (const ZeroMassPrefix&) {
        return false;  // a wrong guess led outside the support
    }
}

ExperimentReport run_sampled(const ExperimentConfig& cfg, std::uint64_t k)
{
    const SourceSpec& src = cfg.source;
    const std::uint64_t ell = src.ell();
    if (k < 1 || k > ell + 1) {
        throw ConfigError("k = " + std::to_string(k) + " outside [1, ell + 1]");
    }
    if (cfg.trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
    const auto params = PredictorParams::make(src.n(), ell, cfg.q);
    const auto base = make_base_predictor(src, params, cfg.predictor);
    const ExactProb delta(Rational(1, cfg.q));

    ExperimentReport report;
    report.context =
        make_context(cfg, params, k, entropy(src).entropy - entropy(src, k - 1).entropy);
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        const BitString x = sample(src, derive_seed(cfg.root_seed, t, SeedRole::sample));
        const std::uint64_t seed = derive_seed(cfg.root_seed, t, SeedRole::trial);
        const BitString prefix = x.prefix(k - 1);
        const Encoding enc = encode(*base, params, x, k, seed);

        TrialReport tr;
        tr.trial_id = t;
        tr.x = x;
        Rational conditional = mass(src, x).value() / prefix_mass(src, prefix).value();
        tr.neg_log_mass = neg_log2(conditional);
        tr.m_light = k <= ell ? light_count(src, x, delta, k, ell) : 0;
        tr.enc_bits = bit_length(enc);
        tr.decode_ok = decodes_to(*base, params, enc, prefix, seed, x.slice(k - 1, ell));
        tr.fallback_used = is_fallback(enc);
        tr.bound = arithmetic_length_bound(tr.neg_log_mass, tr.m_light, src.n(), ell, cfg.q);
        tr.within_bound = static_cast<double>(tr.enc_bits) <= tr.bound;
        report.trials.push_back(std::move(tr));
    }
    report.summary = aggregate(report.context, report.trials);
    return report;
}

std::vector<std::pair<BitString, Rational>> support_of(const SourceSpec& src)
{
    std::vector<std::pair<BitString, Rational>> out;
    for_each_support_string(src, [&](const BitString& x, const ExactProb& m) {
        out.emplace_back(x, m.value());
    });
    return out;
}

}  // namespace

PredictorConfig parse_predictor_config(const std::string& text)
{
    PredictorConfig cfg;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "oracle" && colon == std::string::npos) {
        cfg.kind = PredictorKind::oracle;
    } else if (kind == "adversarial" && colon == std::string::npos) {
        cfg.kind = PredictorKind::adversarial;
    } else if (kind == "noisy") {
        cfg.kind = PredictorKind::noisy;
        if (!arg.empty() && arg != "auto") {
            BigInt trials;
            if (trials.set_str(arg, 10) != 0 || trials < 1) {
                throw ConfigError("predictor: noisy trial count '" + arg + "' is not a positive integer");
            }
            cfg.noisy_trials = trials;
        }
    } else if (kind == "faulty") {
        cfg.kind = PredictorKind::faulty;
        if (!arg.empty()) {
            try {
                cfg.fault_rate = parse_rational(arg);
            } catch (const ConfigError&) {
                throw ConfigError("predictor: fault rate '" + arg + "' is not a rational");
            }
            if (cfg.fault_rate < 0 || cfg.fault_rate > 1) {
                throw ConfigError("predictor: fault rate must lie in [0, 1]");
            }
        }
    } else {
        throw ConfigError("predictor: unknown kind '" + text +
                          "' (expected oracle, noisy:<trials|auto>, adversarial, faulty:<rate>)");
    }
    return cfg;
}

std::string predictor_config_text(const PredictorConfig& cfg)
{
    switch (cfg.kind) {
    case PredictorKind::oracle:
        return "oracle";
    case PredictorKind::noisy:
        return "noisy:" + (cfg.noisy_trials ? to_string(*cfg.noisy_trials) : std::string("auto"));
    case PredictorKind::adversarial:
        return "adversarial";
    case PredictorKind::faulty:
        return "faulty:" + to_string(cfg.fault_rate);
    }
    return "";
}

BasePredictorPtr make_base_predictor(const SourceSpec& src, const PredictorParams& params,
                                     const PredictorConfig& cfg)
{
    const BigInt& err = params.base_err();
    switch (cfg.kind) {
    case PredictorKind::oracle:
        return oracle_base_predictor(src, err);
    case PredictorKind::noisy:
        return noisy_base_predictor(src, err, cfg.noisy_trials.value_or(min_noisy_trials(err)));
    case PredictorKind::adversarial:
        return adversarial_base_predictor(src, err);
    case PredictorKind::faulty:
        return faulty_base_predictor(src, oracle_base_predictor(src, err), cfg.fault_rate);
    }
    throw InvalidArgument("unknown predictor kind");
}

Mode parse_mode(const std::string& text)
{
    if (text == "avg") {
        return Mode::average;
    }
    if (text == "worst") {
        return Mode::worst_case;
    }
    if (text == "cond") {
        return Mode::conditional;
    }
    if (text == "robust") {
        return Mode::robust;
    }
    throw ConfigError("mode: unknown value '" + text + "' (expected avg, worst, cond, robust)");
}

std::string mode_name(Mode mode)
{
    switch (mode) {
    case Mode::average:
        return "avg";
    case Mode::worst_case:
        return "worst";
    case Mode::conditional:
        return "cond";
    case Mode::robust:
        return "robust";
    }
    return "";
}

EntropyStat entropy(const SourceSpec& src, std::size_t len)
{
    if (len > src.ell()) {
        throw InvalidLength("entropy of more bits than ell");
    }
    if (len == 0) {
        return {0};
    }
    struct Visitor {
        std::size_t len;
        const SourceSpec& src;

        double operator()(const UniformSource&) const { return static_cast<double>(len); }

        double operator()(const IidBernoulliSource& s) const
        {
            return static_cast<double>(len) * binary_entropy(s.p_one);
        }

        double operator()(const MarkovSource& s) const
        {
            // H(x_1..x_len) = h(x_1) + sum_i sum_a Pr[x_{i-1} = a] h(row a)
            double h = binary_entropy(s.initial[1]);
            std::array<Rational, 2> marginal = s.initial;
            for (std::size_t i = 2; i <= len; ++i) {
                h += marginal[0].get_d() * binary_entropy(s.transition[0][1]) +
                     marginal[1].get_d() * binary_entropy(s.transition[1][1]);
                std::array<Rational, 2> next;
                for (int b = 0; b < 2; ++b) {
                    next[b] = marginal[0] * s.transition[0][b] + marginal[1] * s.transition[1][b];
                    next[b].canonicalize();
                }
                marginal = next;
            }
            return h;
        }

        double operator()(const SamplerSource& s) const
        {
            std::map<BitString, std::uint64_t> counts;
            for (const auto& row : s.table) {
                ++counts[row.prefix(len)];
            }
            const double total = static_cast<double>(s.table.size());
            double h = 0;
            for (const auto& [prefix, count] : counts) {
                const double p = static_cast<double>(count) / total;
                h -= p * std::log2(p);
            }
            return h;
        }
    };
    return {std::visit(Visitor{len, src}, src.kind())};
}

EntropyStat entropy(const SourceSpec& src)
{
    return entropy(src, src.ell());
}

double required_frequency(double p, std::uint64_t trials)
{
    return 1.0 - p - 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double arithmetic_length_bound(double neg_log_conditional, std::size_t m_light, std::uint64_t n,
                               std::uint64_t ell, std::uint64_t q)
{
    const double log_nlq = std::log2(static_cast<double>(n)) + std::log2(static_cast<double>(ell)) +
                           std::log2(static_cast<double>(q));
    return neg_log_conditional +
           static_cast<double>(m_light) * kC1 * std::log2(static_cast<double>(ell)) +
           kC2 * log_nlq + 3.0;
}

double worst_case_length_bound(double neg_log_mass, const Rational& epsilon, std::uint64_t kappa,
                               std::uint64_t n, std::uint64_t ell)
{
    return (1.0 + epsilon.get_d()) * neg_log_mass +
           static_cast<double>(c3(kappa)) * std::log2(static_cast<double>(std::max(n, ell)));
}

double average_length_bound(double entropy, std::uint64_t n, std::uint64_t ell)
{
    return entropy + kC4 * (std::log2(static_cast<double>(n)) + std::log2(static_cast<double>(ell)));
}

double robust_length_bound(double entropy, std::uint64_t n)
{
    return entropy + kCRobust * std::log2(static_cast<double>(n)) + 1.0;
}

std::uint64_t kappa_for_epsilon(const Rational& epsilon)
{
    if (epsilon <= 0) {
        throw InvalidArgument("epsilon must be positive");
    }
    const BigInt num = BigInt(kC1) * epsilon.get_den();
    const BigInt& den = epsilon.get_num();
    return to_u64(BigInt((num + den - 1) / den), "kappa");
}

Summary aggregate(const ReportContext& ctx, const std::vector<TrialReport>& trials)
{
    Summary s;
    s.entropy = ctx.entropy;
    s.trials = trials.size();
    if (trials.empty()) {
        return s;
    }
    double weighted_bits = 0;
    double total_weight = 0;
    std::uint64_t ok = 0;
    std::uint64_t within = 0;
    std::uint64_t light_free = 0;
    std::uint64_t fallback = 0;
    s.max_excess = -INFINITY;
    for (const auto& t : trials) {
        weighted_bits += t.weight * static_cast<double>(t.enc_bits);
        total_weight += t.weight;
        ok += t.decode_ok ? 1 : 0;
        within += t.within_bound ? 1 : 0;
        light_free += t.m_light == 0 ? 1 : 0;
        fallback += t.fallback_used ? 1 : 0;
        s.max_excess = std::max(s.max_excess, static_cast<double>(t.enc_bits) - t.bound);
    }
    const double count = static_cast<double>(trials.size());
    s.mean_enc_bits = weighted_bits / total_weight;
    s.success_frequency = static_cast<double>(ok) / count;
    s.bound_frequency = static_cast<double>(within) / count;
    s.light_free_fraction = static_cast<double>(light_free) / count;
    s.fallback_fraction = static_cast<double>(fallback) / count;

    switch (ctx.mode) {
    case Mode::average:
    case Mode::conditional: {
        const double p_fail = 1.0 / static_cast<double>(ctx.q_mod);
        const double p_long = 1.0 / (static_cast<double>(ctx.q) * static_cast<double>(ctx.ell));
        s.required_success = ctx.exact ? 1.0 : required_frequency(p_fail, s.trials);
        s.required_bound = ctx.exact ? 1.0 : required_frequency(p_long, s.trials);
        s.passed = s.success_frequency >= s.required_success && s.bound_frequency >= s.required_bound;
        if (ctx.mode == Mode::average && ctx.k == 1 && ctx.ell <= ctx.q && ctx.q <= ctx.n * ctx.ell) {
            s.mean_upper = average_length_bound(ctx.entropy, ctx.n, ctx.ell);
            s.mean_lower = ctx.entropy - 1.0;
            s.passed = s.passed && s.mean_enc_bits <= *s.mean_upper && s.mean_enc_bits >= *s.mean_lower;
        }
        break;
    }
    case Mode::worst_case:
        s.required_success = 1.0;
        s.required_bound = 1.0;
        s.passed = ok == trials.size() && within == trials.size();
        break;
    case Mode::robust: {
        std::map<BitString, std::pair<std::uint64_t, std::uint64_t>> per_string;
        for (const auto& t : trials) {
            auto& [hits, total] = per_string[t.x];
            hits += t.decode_ok ? 1 : 0;
            ++total;
        }
        double min_success = 1.0;
        std::uint64_t min_reps = trials.size();
        for (const auto& [x, counts] : per_string) {
            min_success = std::min(min_success, static_cast<double>(counts.first) /
                                                    static_cast<double>(counts.second));
            min_reps = std::min(min_reps, counts.second);
        }
        s.min_string_success = min_success;
        s.required_success = ctx.exact ? 1.0 : required_frequency(1.0 / 3.0, min_reps);
        s.required_bound = 0.0;
        s.mean_upper = robust_length_bound(ctx.entropy, ctx.n);
        s.passed = min_success >= s.required_success && s.mean_enc_bits <= *s.mean_upper;
        break;
    }
    }
    return s;
}

ExperimentReport run_average_experiment(const ExperimentConfig& cfg)
{
    return run_sampled(cfg, 1);
}

ExperimentReport run_conditional_experiment(const ExperimentConfig& cfg)
{
    return run_sampled(cfg, cfg.k);
}

ExperimentReport run_worst_case_enumeration(const ExperimentConfig& cfg)
{
    const SourceSpec& src = cfg.source;
    require_enumerable(src, 16, "worst-case mode");
    const std::uint64_t ell = src.ell();
    const std::uint64_t kappa = cfg.kappa != 0 ? cfg.kappa : kappa_for_epsilon(cfg.epsilon);
    const std::uint64_t q = checked_power(ell, kappa);
    const auto params = PredictorParams::make(src.n(), ell, q);
    const auto base = make_base_predictor(src, params, cfg.predictor);
    const ExactProb delta(Rational(1, q));

    ExperimentReport report;
    report.context = make_context(cfg, params, 1, entropy(src).entropy);
    std::uint64_t id = 0;
    for (const auto& [x, m] : support_of(src)) {
        const std::uint64_t seed = derive_seed(cfg.root_seed, id, SeedRole::trial);
        const Encoding enc = encode(*base, params, x, 1, seed);
        TrialReport tr;
        tr.trial_id = id++;
        tr.x = x;
        tr.neg_log_mass = neg_log2(m);
        tr.m_light = light_count(src, x, delta, 1, ell);
        tr.enc_bits = bit_length(enc);
        tr.decode_ok = decodes_to(*base, params, enc, BitString{}, seed, x);
        tr.fallback_used = is_fallback(enc);
        tr.bound = worst_case_length_bound(tr.neg_log_mass, cfg.epsilon, kappa, src.n(), ell);
        tr.within_bound = static_cast<double>(tr.enc_bits) <= tr.bound;
        tr.weight = m.get_d();
        report.trials.push_back(std::move(tr));
    }
    report.summary = aggregate(report.context, report.trials);
    return report;
}

ExperimentReport run_robust_experiment(const ExperimentConfig& cfg)
{
    const SourceSpec& src = cfg.source;
    require_enumerable(src, 16, "robust mode");
    if (cfg.trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
    const std::uint64_t ell = src.ell();
    const auto params = PredictorParams::make(src.n(), ell, cfg.q);
    const auto base = make_base_predictor(src, params, cfg.predictor);
    const ExactProb delta(Rational(1, cfg.q));
    RobustOptions options;
    options.self_test_trials = cfg.self_test_trials.value_or(hoeffding_self_test_trials(src.n(), ell));

    ExperimentReport report;
    report.context = make_context(cfg, params, 1, entropy(src).entropy);
    std::uint64_t id = 0;
    for (const auto& [x, m] : support_of(src)) {
        const double nlm = neg_log2(m);
        const std::size_t m_light = light_count(src, x, delta, 1, ell);
        const double budget = arithmetic_length_bound(nlm, m_light, src.n(), ell, cfg.q);
        options.length_budget = static_cast<std::uint64_t>(std::floor(budget));
        for (std::uint64_t r = 0; r < cfg.trials; ++r) {
            const std::uint64_t seed = derive_seed(cfg.root_seed, id, SeedRole::trial);
            const auto result = robustify_encode(*base, params, x,
                                                 derive_seed(seed, 0, SeedRole::encode_root), options);
            TrialReport tr;
            tr.trial_id = id++;
            tr.x = x;
            tr.neg_log_mass = nlm;
            tr.m_light = m_light;
            tr.enc_bits = bit_length(result.encoding);
            try {
                tr.decode_ok = robustify_decode(*base, params, result.encoding,
                                                derive_seed(seed, 0, SeedRole::decode_root)) == x;
            } catch (const ZeroMassPrefix&) {
                tr.decode_ok = false;
            }
            tr.fallback_used = std::holds_alternative<VerbatimCode>(result.encoding);
            tr.bound = budget + 1.0;
            tr.within_bound = static_cast<double>(tr.enc_bits) <= tr.bound;
            tr.weight = m.get_d() / static_cast<double>(cfg.trials);
            report.trials.push_back(std::move(tr));
        }
    }
    report.summary = aggregate(report.context, report.trials);
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.mode) {
    case Mode::average:
        return run_average_experiment(cfg);
    case Mode::conditional:
        return run_conditional_experiment(cfg);
    case Mode::worst_case:
        return run_worst_case_enumeration(cfg);
    case Mode::robust:
        return run_robust_experiment(cfg);
    }
    throw InvalidArgument("unknown mode");
}

PseudoDeterminismReport check_pseudodeterminism(const ExperimentConfig& cfg)
{
    const SourceSpec& src = cfg.source;
    const std::uint64_t ell = src.ell();
    if (cfg.trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
    const auto params = PredictorParams::make(src.n(), ell, cfg.q);
    const auto base = make_base_predictor(src, params, cfg.predictor);
    const BigInt q_mod = from_u64(params.q_mod());
    const Rational tolerance(BigInt(1), BigInt(q_mod * q_mod));

    PseudoDeterminismReport report;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        const BitString x = sample(src, derive_seed(cfg.root_seed, t, SeedRole::sample));
        const Advice advice = sample_advice(params, derive_seed(cfg.root_seed, t, SeedRole::advice));
        const std::uint64_t draw = derive_seed(cfg.root_seed, t, SeedRole::trial);
        bool all_ok = true;
        for (std::uint64_t i = 1; i <= ell; ++i) {
            const BitString prefix = x.prefix(i - 1);
            const std::uint64_t seeds[2] = {derive_seed(draw, i, SeedRole::encoder),
                                            derive_seed(draw, i, SeedRole::decoder)};
            const Rational truth[2] = {exact_conditional(src, prefix, 0).value(),
                                       exact_conditional(src, prefix, 1).value()};
            BigInt index[2];
            for (int s = 0; s < 2; ++s) {
                index[s] = pseudo_predict_index(*base, params, prefix, advice, seeds[s]);
                const ExactProb p0 = pseudo_predict(*base, params, prefix, 0, advice, seeds[s]);
                const ExactProb p1 = pseudo_predict(*base, params, prefix, 1, advice, seeds[s]);
                ++report.calls;
                report.complement_exact += p0.value() + p1.value() == 1 ? 1 : 0;
                all_ok = all_ok && abs(p0.value() - truth[0]) <= tolerance &&
                         abs(p1.value() - truth[1]) <= tolerance;
            }
            all_ok = all_ok && index[0] == index[1];
        }
        ++report.draws;
        report.all_positions_ok += all_ok ? 1 : 0;
    }
    report.rate = static_cast<double>(report.all_positions_ok) / static_cast<double>(report.draws);
    report.required_rate = cfg.predictor.kind == PredictorKind::oracle
                               ? 1.0
                               : required_frequency(1.0 / static_cast<double>(params.q_mod()),
                                                    report.draws);
    report.passed = report.rate >= report.required_rate && report.complement_exact == report.calls;
    return report;
}

LightBoundReport check_light_bound(const SourceSpec& src, const ExactProb& delta)
{
    require_enumerable(src, 12, "light-bit check");
    LightBoundReport report;
    report.probability = light_event_prob(src, delta).value();
    report.bound = Rational(from_u64(src.ell())) * delta.value();
    report.passed = report.probability <= report.bound;
    return report;
}

RoundTripReport check_roundtrip(const SourceSpec& src, std::uint64_t q,
                                const std::vector<std::uint64_t>& ks, std::uint64_t root_seed,
                                const PredictorConfig& predictor)
{
    require_enumerable(src, 16, "round-trip check");
    const std::uint64_t ell = src.ell();
    const auto params = PredictorParams::make(src.n(), ell, q);
    const auto base = make_base_predictor(src, params, predictor);
    RoundTripReport report;
    for (const auto& [x, m] : support_of(src)) {
        for (const std::uint64_t k : ks) {
            const Encoding enc = encode(*base, params, x, k, root_seed);
            ++report.cases;
            if (!decodes_to(*base, params, enc, x.prefix(k - 1), root_seed, x.slice(k - 1, ell))) {
                ++report.failures;
            }
        }
    }
    report.passed = report.failures == 0;
    return report;
}

}  // namespace nbpc
