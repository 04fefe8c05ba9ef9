#include "nbpc/errors.hpp"
#include "nbpc/predictor.hpp"
#include "nbpc/random.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <random>

using nbpc::Advice;
using nbpc::BigInt;
using nbpc::BitString;
using nbpc::PredictorParams;
using nbpc::Rational;
using nbpc::SourceSpec;

namespace {

// Returns a fixed value for b = 0 regardless of prefix and seed.
class FixedBase final : public nbpc::BasePredictor {
public:
    FixedBase(BigInt err, Rational v0) : BasePredictor(std::move(err)), v0_(std::move(v0)) {}
    Rational predict(const BitString&, int b, std::uint64_t) const override
    {
        return b == 0 ? v0_ : Rational(1 - v0_);
    }

private:
    Rational v0_;
};

// Nearest integer to t in [0, d], ties down, by direct comparison.
BigInt nearest_tie_down(const Rational& t, const BigInt& d)
{
    if (t <= 0) {
        return 0;
    }
    if (t >= Rational(d)) {
        return d;
    }
    BigInt lo;
    mpz_fdiv_q(lo.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    const Rational below = t - Rational(lo);
    return below <= Rational(1, 2) ? lo : BigInt(lo + 1);
}

Rational frac(const BigInt& num, const BigInt& den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational abs_diff(const Rational& a, const Rational& b)
{
    return a > b ? Rational(a - b) : Rational(b - a);
}

}  // namespace

TEST_CASE("parameter chain for ell = 2, q = 8")
{
    const auto p = PredictorParams::make(2, 2, 8);
    CHECK(p.q_mod() == 17);
    CHECK(p.base_err() == 314432);
    CHECK(p.grid() == Rational(1, 1156));
    CHECK(p.grid_denominator() == 1156);
    CHECK(p.noise_step() == Rational(1, 78608));
    CHECK(p.advice_max() == 67);
    CHECK(p.noise_in_grid_units() == Rational(1, 68));
    CHECK(p.noise_step() == p.noise_in_grid_units() * p.grid());
}

TEST_CASE("parameter errors")
{
    CHECK_THROWS_AS(PredictorParams::make(1, 0, 8), nbpc::InvalidArgument);
    CHECK_THROWS_AS(PredictorParams::make(1, 2, 0), nbpc::InvalidArgument);
    CHECK_THROWS_AS(PredictorParams::make(1, std::uint64_t{1} << 40, std::uint64_t{1} << 40),
                    nbpc::InvalidArgument);
}

TEST_CASE("oracle base and uniform example")
{
    const auto src = SourceSpec::uniform(2, 2);
    const auto params = PredictorParams::make(2, 2, 8);
    const auto base = nbpc::oracle_base_predictor(src, params.base_err());
    const auto v0 = nbpc::pseudo_predict(*base, params, BitString(), 0, Advice{0}, 1);
    const auto v1 = nbpc::pseudo_predict(*base, params, BitString(), 1, Advice{0}, 1);
    CHECK(v0.value() == Rational(1, 2));
    CHECK(v0.value() + v1.value() == 1);
    CHECK(nbpc::pseudo_predict_index(*base, params, BitString(), Advice{0}, 1) == 578);

    const auto iid = SourceSpec::iid(1, 2, Rational(9, 10));
    const auto ob = nbpc::oracle_base_predictor(iid, 10);
    CHECK(ob->predict(BitString::parse("1"), 1, 99) == Rational(9, 10));
    const auto m = SourceSpec::markov(2, 2, {Rational(1, 2), Rational(1, 2)},
                                      {{{Rational(3, 4), Rational(1, 4)}, {Rational(1, 4), Rational(3, 4)}}});
    CHECK(nbpc::oracle_base_predictor(m, 10)->predict(BitString::parse("0"), 1, 0) == Rational(1, 4));
}

TEST_CASE("rounding matches nearest grid point with ties down")
{
    std::mt19937_64 rng(7);
    for (auto [ell, q] : {std::pair<std::uint64_t, std::uint64_t>{2, 8}, {1, 3}, {3, 5}}) {
        const auto params = PredictorParams::make(ell, ell, q);
        const BigInt& d = params.grid_denominator();
        std::vector<Rational> values{Rational(0), Rational(1), Rational(1, 2), Rational(-1, 3), Rational(4, 3)};
        // Exact midpoints between grid points, reached with and without noise.
        for (int j = 0; j < 5; ++j) {
            values.push_back(frac(BigInt(2 * j + 1), BigInt(2 * d)));
            values.push_back(frac(BigInt(2 * j + 1), BigInt(2 * d)) - params.noise_step());
        }
        for (int j = 0; j < 40; ++j) {
            values.push_back(oracle::random_prob(rng));
        }
        for (auto& v : values) {
            v.canonicalize();
            const FixedBase base(params.base_err(), v);
            for (std::uint64_t alpha = 0; alpha <= params.advice_max(); ++alpha) {
                const Rational t = (v + Rational(nbpc::from_u64(alpha)) * params.noise_step()) / params.grid();
                const BigInt expected = nearest_tie_down(t, d);
                const BigInt got = nbpc::pseudo_predict_index(base, params, BitString(), Advice{alpha}, 0);
                CHECK(got == expected);
                const auto p0 = nbpc::pseudo_predict(base, params, BitString(), 0, Advice{alpha}, 0);
                CHECK(p0.value() == frac(got, d));
            }
        }
    }
    // A value exactly halfway rounds down.
    const auto params = PredictorParams::make(2, 2, 8);
    const FixedBase half(params.base_err(), Rational(3, 2312));
    CHECK(nbpc::pseudo_predict_index(half, params, BitString(), Advice{0}, 0) == 1);
}

TEST_CASE("accuracy, complement and grid membership for any base within contract")
{
    std::mt19937_64 rng(13);
    for (auto [ell, q] : {std::pair<std::uint64_t, std::uint64_t>{2, 8}, {4, 2}, {1, 1}}) {
        const auto params = PredictorParams::make(ell, ell, q);
        const Rational qm2(1, BigInt(nbpc::from_u64(params.q_mod()) * nbpc::from_u64(params.q_mod())));
        const Rational inv_qm(1, nbpc::from_u64(params.q_mod()));
        const Rational slack(BigInt(1), params.base_err());
        for (int j = 0; j < 60; ++j) {
            Rational truth = j == 0 ? Rational(0) : (j == 1 ? Rational(1) : oracle::random_prob(rng));
            for (const Rational& err : {Rational(0), slack, Rational(-slack)}) {
                Rational v0 = truth + err;
                v0.canonicalize();
                const FixedBase base(params.base_err(), v0);
                for (std::uint64_t alpha = 0; alpha <= params.advice_max(); ++alpha) {
                    const auto p0 = nbpc::pseudo_predict(base, params, BitString(), 0, Advice{alpha}, 0);
                    const auto p1 = nbpc::pseudo_predict(base, params, BitString(), 1, Advice{alpha}, 0);
                    CHECK(p0.value() + p1.value() == 1);
                    const Rational scaled = p0.value() * Rational(params.grid_denominator());
                    CHECK(scaled.get_den() == 1);
                    const std::array<Rational, 2> truths{truth, Rational(1 - truth)};
                    const std::array<Rational, 2> outs{p0.value(), p1.value()};
                    for (int b = 0; b < 2; ++b) {
                        CHECK(abs_diff(outs[b], truths[b]) <= qm2);
                        if (truths[b] > inv_qm) {
                            CHECK(outs[b] >= (1 - inv_qm) * truths[b]);
                            CHECK(outs[b] <= (1 + inv_qm) * truths[b]);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("pseudo_predict preconditions")
{
    const auto params = PredictorParams::make(2, 2, 8);
    const FixedBase weak(params.base_err() - 1, Rational(1, 2));
    CHECK_THROWS_AS(nbpc::pseudo_predict_index(weak, params, BitString(), Advice{0}, 0), nbpc::InvalidArgument);
    const FixedBase ok(params.base_err(), Rational(1, 2));
    CHECK_THROWS_AS(nbpc::pseudo_predict_index(ok, params, BitString(), Advice{68}, 0), nbpc::InvalidArgument);
    CHECK_THROWS_AS(nbpc::pseudo_predict(ok, params, BitString(), 2, Advice{0}, 0), nbpc::InvalidArgument);
    const auto src = SourceSpec::iid(2, 2, Rational(1));
    const auto base = nbpc::oracle_base_predictor(src, params.base_err());
    CHECK_THROWS_AS(nbpc::pseudo_predict(*base, params, BitString::parse("0"), 0, Advice{0}, 0),
                    nbpc::ZeroMassPrefix);
}

TEST_CASE("sample_advice is uniform and deterministic")
{
    const auto params = PredictorParams::make(1, 1, 7);
    REQUIRE(params.advice_max() == 15);
    std::array<int, 16> counts{};
    const int draws = 10000;
    for (int seed = 0; seed < draws; ++seed) {
        const Advice a = nbpc::sample_advice(params, static_cast<std::uint64_t>(seed));
        REQUIRE(a.alpha <= 15);
        CHECK(a == nbpc::sample_advice(params, static_cast<std::uint64_t>(seed)));
        ++counts[a.alpha];
    }
    double chi2 = 0;
    const double expected = draws / 16.0;
    for (int c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 99.9th percentile of chi-square with 15 degrees of freedom.
    CHECK(chi2 < 37.70);
}

TEST_CASE("min_noisy_trials")
{
    CHECK(nbpc::min_noisy_trials(10) == 150);
    CHECK(nbpc::min_noisy_trials(100) == 26492);
    CHECK(nbpc::min_noisy_trials(1) == 1);
    CHECK_THROWS_AS(nbpc::min_noisy_trials(0), nbpc::InvalidArgument);
    CHECK_THROWS_AS(nbpc::noisy_base_predictor(SourceSpec::uniform(1, 1), 10, 149), nbpc::InvalidArgument);
}

TEST_CASE("noisy base meets its contract")
{
    const auto u = nbpc::noisy_base_predictor(SourceSpec::uniform(1, 1), 10, 150);
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Rational v = u->predict(BitString(), 0, seed);
        CHECK(v == u->predict(BitString(), 0, seed));
        inside += (v >= Rational(2, 5) && v <= Rational(3, 5)) ? 1 : 0;
    }
    CHECK(inside >= 900);

    const auto iid = nbpc::noisy_base_predictor(SourceSpec::iid(1, 1, Rational(9, 10)), 100, 26492);
    inside = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Rational v = iid->predict(BitString(), 1, seed);
        inside += (v >= Rational(89, 100) && v <= Rational(91, 100)) ? 1 : 0;
    }
    CHECK(inside >= 198);

    // Beyond the direct-simulation limit the count comes from a normal draw.
    const BigInt err = 1000;
    const auto big = nbpc::noisy_base_predictor(SourceSpec::iid(1, 1, Rational(1, 3)), err,
                                                nbpc::min_noisy_trials(err));
    inside = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const Rational v = big->predict(BitString(), 1, seed);
        inside += abs_diff(v, Rational(1, 3)) <= Rational(1, 1000) ? 1 : 0;
    }
    CHECK(inside >= 499);
}

TEST_CASE("adversarial base sits on the contract edge")
{
    const auto src = SourceSpec::iid(3, 3, Rational(1, 3));
    const auto adv = nbpc::adversarial_base_predictor(src, 1000);
    int plus = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const Rational v = adv->predict(BitString::parse("01"), 1, seed);
        const Rational off = v - Rational(1, 3);
        CHECK((off == Rational(1, 1000) || off == Rational(-1, 1000)));
        plus += off > 0 ? 1 : 0;
    }
    CHECK(plus > 900);
    CHECK(plus < 1100);
}

TEST_CASE("faulty base corrupts the requested fraction of calls")
{
    const auto src = SourceSpec::iid(2, 2, Rational(1, 5));
    const auto inner = nbpc::oracle_base_predictor(src, 100);
    for (const Rational& rate : {Rational(0), Rational(1, 10), Rational(1)}) {
        const auto f = nbpc::faulty_base_predictor(src, inner, rate);
        CHECK(f->error_parameter() == 100);
        int faults = 0;
        const int calls = 10000;
        for (int seed = 0; seed < calls; ++seed) {
            const Rational v = f->predict(BitString::parse("0"), 1, static_cast<std::uint64_t>(seed));
            if (v != Rational(1, 5)) {
                CHECK(v == Rational(7, 10));
                ++faults;
            }
        }
        const double r = rate.get_d();
        CHECK(std::abs(faults / double(calls) - r) <= 3 * std::sqrt(r * (1 - r) / calls) + 1e-12);
    }
    CHECK_THROWS_AS(nbpc::faulty_base_predictor(src, inner, Rational(3, 2)), nbpc::InvalidArgument);
}
