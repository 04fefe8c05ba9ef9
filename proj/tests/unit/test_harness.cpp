#include "nbpc/constants.hpp"
#include "nbpc/container.hpp"
#include "nbpc/errors.hpp"
#include "nbpc/harness.hpp"
#include "nbpc/report.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using nbpc::BitString;
using nbpc::ExactProb;
using nbpc::ExperimentConfig;
using nbpc::Mode;
using nbpc::PredictorKind;
using nbpc::Rational;
using nbpc::SourceSpec;

namespace {

double enumerated_entropy(const SourceSpec& src, std::size_t len)
{
    double h = 0;
    for (const auto& p : oracle::all_strings(len)) {
        const double m = oracle::direct_prefix_mass(src, p).get_d();
        if (m > 0) {
            h -= m * std::log2(m);
        }
    }
    return h;
}

std::string report_text(const nbpc::ExperimentReport& r)
{
    std::ostringstream out;
    nbpc::write_report(out, r);
    return out.str();
}

ExperimentConfig config(SourceSpec src, std::uint64_t q, std::uint64_t trials, std::uint64_t seed = 1)
{
    ExperimentConfig cfg(std::move(src));
    cfg.q = q;
    cfg.trials = trials;
    cfg.root_seed = seed;
    return cfg;
}

SourceSpec sticky_markov(std::size_t ell)
{
    return SourceSpec::markov(ell, ell, {Rational(1, 2), Rational(1, 2)},
                              {{{Rational(3, 4), Rational(1, 4)}, {Rational(1, 4), Rational(3, 4)}}});
}

}  // namespace

TEST_CASE("entropy matches enumeration")
{
    std::mt19937_64 rng(61);
    for (int t = 0; t < 10; ++t) {
        const std::size_t ell = 1 + t % 9;
        for (const auto& src : {oracle::random_markov(rng, ell), oracle::random_iid(rng, ell),
                                oracle::random_sampler(rng, ell, 4), SourceSpec::uniform(3, ell)}) {
            for (std::size_t len = 0; len <= ell; ++len) {
                CHECK(nbpc::entropy(src, len).entropy == doctest::Approx(enumerated_entropy(src, len)).epsilon(1e-12));
            }
            CHECK(nbpc::entropy(src).entropy >= 0);
            CHECK(nbpc::entropy(src).entropy <= static_cast<double>(ell) + 1e-12);
        }
    }
    const double h = -(0.9 * std::log2(0.9) + 0.1 * std::log2(0.1));
    CHECK(nbpc::entropy(SourceSpec::iid(256, 256, Rational(9, 10))).entropy == doctest::Approx(256 * h));
    CHECK(256 * h == doctest::Approx(120.06).epsilon(1e-4));
    CHECK_THROWS_AS(nbpc::entropy(SourceSpec::uniform(2, 2), 3), nbpc::InvalidLength);
}

TEST_CASE("bound helpers")
{
    CHECK(nbpc::required_frequency(0.01, 10000) == doctest::Approx(1 - 0.01 - 3 * std::sqrt(0.01 * 0.99 / 10000)));
    CHECK(nbpc::required_frequency(0, 5) == 1.0);
    CHECK(nbpc::arithmetic_length_bound(10, 2, 4, 8, 16) ==
          doctest::Approx(10 + 2 * nbpc::kC1 * 3 + nbpc::kC2 * 9 + 3));
    CHECK(nbpc::worst_case_length_bound(8, Rational(1, 4), 12, 12, 12) ==
          doctest::Approx(10 + nbpc::c3(12) * std::log2(12.0)));
    CHECK(nbpc::average_length_bound(5, 4, 8) == doctest::Approx(5 + nbpc::kC4 * 5));
    CHECK(nbpc::robust_length_bound(5, 8) == doctest::Approx(6 + nbpc::kCRobust * 3));
    CHECK(nbpc::kappa_for_epsilon(Rational(1, 4)) == 12);
    CHECK(nbpc::kappa_for_epsilon(Rational(1, 2)) == 6);
    CHECK(nbpc::kappa_for_epsilon(Rational(2, 7)) == 11);
    CHECK_THROWS_AS(nbpc::kappa_for_epsilon(Rational(0)), nbpc::InvalidArgument);
}

TEST_CASE("predictor and mode parsing")
{
    CHECK(nbpc::parse_predictor_config("oracle").kind == PredictorKind::oracle);
    CHECK(nbpc::parse_predictor_config("adversarial").kind == PredictorKind::adversarial);
    const auto noisy = nbpc::parse_predictor_config("noisy:5000");
    CHECK(noisy.kind == PredictorKind::noisy);
    CHECK(*noisy.noisy_trials == 5000);
    CHECK_FALSE(nbpc::parse_predictor_config("noisy:auto").noisy_trials);
    CHECK_FALSE(nbpc::parse_predictor_config("noisy").noisy_trials);
    CHECK(nbpc::parse_predictor_config("faulty").fault_rate == Rational(1, 10));
    CHECK(nbpc::parse_predictor_config("faulty:1/4").fault_rate == Rational(1, 4));
    for (const char* text : {"oracle", "noisy:auto", "noisy:123", "adversarial", "faulty:1/3"}) {
        CHECK(nbpc::predictor_config_text(nbpc::parse_predictor_config(text)) == text);
    }
    for (const char* bad : {"", "oracle:1", "noisy:0", "noisy:x", "faulty:2", "faulty:a/b", "gaussian"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(nbpc::parse_predictor_config(bad), nbpc::ConfigError);
    }
    for (const char* m : {"avg", "worst", "cond", "robust"}) {
        CHECK(nbpc::mode_name(nbpc::parse_mode(m)) == m);
    }
    CHECK_THROWS_AS(nbpc::parse_mode("average"), nbpc::ConfigError);
}

TEST_CASE("average mode: uniform ell = 64 decodes every trial")
{
    const auto r = nbpc::run_average_experiment(config(SourceSpec::uniform(64, 64), 64, 2000));
    CHECK(r.summary.success_frequency == 1.0);
    CHECK(r.summary.bound_frequency == 1.0);
    CHECK(r.summary.light_free_fraction == 1.0);
    CHECK(r.summary.passed);
    CHECK(r.trials.size() == 2000);
    CHECK(r.summary.entropy == 64.0);
}

TEST_CASE("reports are reproducible from the root seed")
{
    auto cfg = config(sticky_markov(16), 16, 1, 99);
    CHECK(report_text(nbpc::run_average_experiment(cfg)) == report_text(nbpc::run_average_experiment(cfg)));
    cfg.trials = 50;
    cfg.predictor = nbpc::parse_predictor_config("adversarial");
    CHECK(report_text(nbpc::run_average_experiment(cfg)) == report_text(nbpc::run_average_experiment(cfg)));
    cfg.root_seed = 100;
    const auto other = report_text(nbpc::run_average_experiment(cfg));
    cfg.root_seed = 99;
    CHECK(other != report_text(nbpc::run_average_experiment(cfg)));
}

TEST_CASE("conditional mode")
{
    auto cfg = config(sticky_markov(16), 16, 300, 5);
    cfg.mode = Mode::conditional;

    cfg.k = 17;
    const auto empty = nbpc::run_conditional_experiment(cfg);
    const std::size_t shortest = nbpc::bit_length(nbpc::ArithmeticCode{16, 17, 16, 0, {}, BitString::parse("1")});
    for (const auto& t : empty.trials) {
        CHECK(t.decode_ok);
        CHECK(t.neg_log_mass == 0);
        CHECK(t.enc_bits >= shortest);
        CHECK(t.enc_bits <= shortest + nbpc::gamma_length(2 * 16 * 257) - 1);
    }
    CHECK(empty.summary.entropy == 0);

    cfg.k = 9;
    const auto half = nbpc::run_conditional_experiment(cfg);
    CHECK(half.summary.passed);
    CHECK(half.summary.entropy == doctest::Approx(nbpc::entropy(cfg.source).entropy -
                                                  nbpc::entropy(cfg.source, 8).entropy));

    cfg.k = 1;
    const auto whole = nbpc::run_conditional_experiment(cfg);
    cfg.mode = Mode::average;
    const auto avg = nbpc::run_average_experiment(cfg);
    REQUIRE(whole.trials.size() == avg.trials.size());
    for (std::size_t i = 0; i < avg.trials.size(); ++i) {
        CHECK(whole.trials[i].x == avg.trials[i].x);
        CHECK(whole.trials[i].enc_bits == avg.trials[i].enc_bits);
        CHECK(whole.trials[i].neg_log_mass == doctest::Approx(avg.trials[i].neg_log_mass));
        CHECK(whole.trials[i].bound == doctest::Approx(avg.trials[i].bound));
    }
    CHECK(whole.summary.success_frequency == avg.summary.success_frequency);
    CHECK(whole.summary.bound_frequency == avg.summary.bound_frequency);
    CHECK(whole.summary.mean_enc_bits == avg.summary.mean_enc_bits);

    cfg.k = 18;
    CHECK_THROWS_AS(nbpc::run_conditional_experiment(cfg), nbpc::ConfigError);
    cfg.k = 1;
    cfg.trials = 0;
    CHECK_THROWS_AS(nbpc::run_average_experiment(cfg), nbpc::ConfigError);
}

TEST_CASE("worst-case enumeration")
{
    auto cfg = config(SourceSpec::uniform(8, 8), 1, 1);
    cfg.mode = Mode::worst_case;
    cfg.epsilon = Rational(1, 2);
    const auto r = nbpc::run_worst_case_enumeration(cfg);
    CHECK(r.trials.size() == 256);
    CHECK(r.context.q == 262144);  // 8^6
    CHECK(r.summary.passed);
    for (const auto& t : r.trials) {
        CHECK(t.decode_ok);
        CHECK(t.neg_log_mass == 8.0);
        CHECK(t.enc_bits > 8);
    }

    // Strings outside the support are never visited.
    auto sampler = config(SourceSpec::sampler(4, 4, 2, {BitString::parse("0000"), BitString::parse("0110"),
                                                        BitString::parse("0110"), BitString::parse("1111")}),
                          1, 1);
    sampler.mode = Mode::worst_case;
    const auto s = nbpc::run_worst_case_enumeration(sampler);
    CHECK(s.trials.size() == 3);
    CHECK(s.summary.passed);

    auto big = config(SourceSpec::uniform(17, 17), 1, 1);
    CHECK_THROWS_AS(nbpc::run_worst_case_enumeration(big), nbpc::SupportTooLarge);
}

TEST_CASE("robust mode with an exact oracle never falls back")
{
    auto cfg = config(sticky_markov(5), 5, 3, 8);
    cfg.mode = Mode::robust;
    cfg.self_test_trials = 4;
    const auto r = nbpc::run_robust_experiment(cfg);
    CHECK(r.trials.size() == 32 * 3);
    CHECK(r.summary.fallback_fraction == 0);
    CHECK(r.summary.min_string_success == 1.0);
    CHECK(r.summary.passed);
    double total_weight = 0;
    for (const auto& t : r.trials) {
        total_weight += t.weight;
    }
    CHECK(total_weight == doctest::Approx(1.0));
}

TEST_CASE("pseudo-determinism check")
{
    auto cfg = config(sticky_markov(8), 8, 200, 4);
    const auto exact = nbpc::check_pseudodeterminism(cfg);
    CHECK(exact.rate == 1.0);
    CHECK(exact.required_rate == 1.0);
    CHECK(exact.complement_exact == exact.calls);
    CHECK(exact.calls == 200 * 8 * 2);
    CHECK(exact.passed);

    cfg.predictor = nbpc::parse_predictor_config("adversarial");
    cfg.trials = 2000;
    const auto adv = nbpc::check_pseudodeterminism(cfg);
    CHECK(adv.passed);
    CHECK(adv.complement_exact == adv.calls);
    CHECK(adv.required_rate < 1.0);

    cfg.q = 16;
    const auto finer = nbpc::check_pseudodeterminism(cfg);
    CHECK(finer.required_rate > adv.required_rate);
}

TEST_CASE("light-bit bound check")
{
    const auto u = nbpc::check_light_bound(SourceSpec::uniform(8, 8), ExactProb(1, 4));
    CHECK(u.probability == 0);
    CHECK(u.bound == 2);
    CHECK(u.passed);
    const auto i = nbpc::check_light_bound(SourceSpec::iid(10, 10, Rational(9, 10)), ExactProb(3, 20));
    Rational pow = 1;
    for (int j = 0; j < 10; ++j) {
        pow *= Rational(9, 10);
    }
    CHECK(i.probability == 1 - pow);
    CHECK(i.bound == Rational(3, 2));
    CHECK(i.passed);
    CHECK(nbpc::check_light_bound(sticky_markov(10), ExactProb(0, 1)).probability == 0);
    CHECK_THROWS_AS(nbpc::check_light_bound(SourceSpec::uniform(13, 13), ExactProb(1, 4)), nbpc::SupportTooLarge);
}

TEST_CASE("round-trip check")
{
    const auto r = nbpc::check_roundtrip(SourceSpec::uniform(8, 8), 8, {1, 4, 9}, 3);
    CHECK(r.cases == 768);
    CHECK(r.failures == 0);
    CHECK(r.passed);
}

TEST_CASE("report files round-trip and re-aggregate")
{
    auto cfg = config(sticky_markov(6), 6, 10000, 12);
    const auto r = nbpc::run_average_experiment(cfg);
    std::stringstream io;
    nbpc::write_report(io, r);
    const auto back = nbpc::read_report(io);
    REQUIRE(back.trials.size() == 10000);
    CHECK(back.summary == r.summary);
    CHECK(nbpc::aggregate(back.context, back.trials) == r.summary);
    CHECK(back.context.source == r.context.source);
    CHECK(back.context.q_mod == r.context.q_mod);
    CHECK(report_text(back) == report_text(r));

    nbpc::ExperimentReport empty;
    empty.context = r.context;
    empty.summary = nbpc::aggregate(empty.context, {});
    const std::string text = report_text(empty);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    std::istringstream in(text);
    const auto empty_back = nbpc::read_report(in);
    CHECK(empty_back.trials.empty());
    CHECK(empty_back.summary == empty.summary);
}

TEST_CASE("malformed reports are rejected")
{
    auto r = nbpc::run_average_experiment(config(SourceSpec::uniform(3, 3), 3, 2));
    const std::string good = report_text(r);
    for (const std::string& bad :
         {std::string("not json\n"), good.substr(0, good.rfind("{\"record\":\"summary\"")), good + good,
          std::string("{\"record\":\"mystery\"}\n")}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(nbpc::read_report(in), nbpc::ConfigError);
    }
}
