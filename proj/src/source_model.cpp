#include "nbpc/source_model.hpp"

#include "nbpc/errors.hpp"
#include "nbpc/random.hpp"

#include <algorithm>

namespace nbpc {
namespace {

void check_prob(const Rational& p, const std::string& field)
{
    if (sgn(p) < 0 || p > 1) {
        throw ConfigError("field '" + field + "': probability " + to_string(p) +
                          " outside [0,1]");
    }
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Whether a Markov transition a -> b is possible.
bool markov_step_positive(const MarkovSource& m, int a, int b)
{
    return sgn(m.transition[a][b]) > 0;
}

bool prefix_in_support(const SourceSpec& src, const BitString& prefix)
{
    return std::visit(
        Overloaded{
            [](const UniformSource&) { return true; },
            [&](const IidBernoulliSource& s) {
                if (sgn(s.p_one) > 0 && s.p_one < 1) {
                    return true;
                }
                const int forced = s.p_one == 1 ? 1 : 0;
                return std::all_of(prefix.begin(), prefix.end(),
                                   [&](std::uint8_t b) { return b == forced; });
            },
            [&](const MarkovSource& s) {
                if (prefix.empty()) {
                    return true;
                }
                if (sgn(s.initial[prefix[0]]) == 0) {
                    return false;
                }
                for (std::size_t i = 1; i < prefix.size(); ++i) {
                    if (!markov_step_positive(s, prefix[i - 1], prefix[i])) {
                        return false;
                    }
                }
                return true;
            },
            [&](const SamplerSource&) { return src.sampler_count(prefix) > 0; },
        },
        src.kind());
}

// Conditional without the support check.
Rational conditional_unchecked(const SourceSpec& src, const BitString& prefix, int b)
{
    return std::visit(
        Overloaded{
            [](const UniformSource&) { return Rational(1, 2); },
            [&](const IidBernoulliSource& s) { return b == 1 ? s.p_one : Rational(1 - s.p_one); },
            [&](const MarkovSource& s) {
                if (prefix.empty()) {
                    return s.initial[b];
                }
                return s.transition[prefix[prefix.size() - 1]][b];
            },
            [&](const SamplerSource&) {
                BitString extended = prefix;
                extended.push_back(b);
                Rational r(static_cast<unsigned long>(src.sampler_count(extended)),
                           static_cast<unsigned long>(src.sampler_count(prefix)));
                r.canonicalize();
                return r;
            },
        },
        src.kind());
}

}  // namespace

SourceSpec::SourceSpec(Kind kind, std::uint64_t n, std::size_t ell)
    : kind_(std::move(kind)), n_(n), ell_(ell)
{
    if (ell_ == 0) {
        throw ConfigError("field 'ell': must be a positive integer");
    }
    std::visit(
        Overloaded{
            [](UniformSource&) {},
            [](IidBernoulliSource& s) {
                s.p_one.canonicalize();
                check_prob(s.p_one, "p");
            },
            [](MarkovSource& s) {
                for (auto& p : s.initial) {
                    p.canonicalize();
                    check_prob(p, "initial");
                }
                if (s.initial[0] + s.initial[1] != 1) {
                    throw ConfigError("field 'initial': entries must sum to 1");
                }
                for (int a = 0; a < 2; ++a) {
                    const std::string field = "transition[" + std::to_string(a) + "]";
                    for (auto& p : s.transition[a]) {
                        p.canonicalize();
                        check_prob(p, field);
                    }
                    if (s.transition[a][0] + s.transition[a][1] != 1) {
                        throw ConfigError("field '" + field + "': row must sum to 1");
                    }
                }
            },
            [&](SamplerSource& s) {
                if (s.randomness_bits > kMaxSamplerRandomness) {
                    throw ConfigError("field 'randomness_bits': at most " +
                                      std::to_string(kMaxSamplerRandomness) + " allowed");
                }
                if (s.table.size() != (std::size_t{1} << s.randomness_bits)) {
                    throw ConfigError("field 'table': expected 2^randomness_bits = " +
                                      std::to_string(std::size_t{1} << s.randomness_bits) +
                                      " entries, got " + std::to_string(s.table.size()));
                }
                for (const auto& row : s.table) {
                    if (row.size() != ell_) {
                        throw ConfigError("field 'table': entry '" + row.str() +
                                          "' does not have length ell = " + std::to_string(ell_));
                    }
                }
                sorted_table_ = s.table;
                std::sort(sorted_table_.begin(), sorted_table_.end());
            },
        },
        kind_);
}

SourceSpec SourceSpec::uniform(std::uint64_t n, std::size_t ell)
{
    return SourceSpec(UniformSource{}, n, ell);
}

SourceSpec SourceSpec::iid(std::uint64_t n, std::size_t ell, Rational p_one)
{
    return SourceSpec(IidBernoulliSource{std::move(p_one)}, n, ell);
}

SourceSpec SourceSpec::markov(std::uint64_t n, std::size_t ell, std::array<Rational, 2> initial,
                              std::array<std::array<Rational, 2>, 2> transition)
{
    return SourceSpec(MarkovSource{std::move(initial), std::move(transition)}, n, ell);
}

SourceSpec SourceSpec::sampler(std::uint64_t n, std::size_t ell, unsigned randomness_bits,
                               std::vector<BitString> table)
{
    return SourceSpec(SamplerSource{randomness_bits, std::move(table)}, n, ell);
}

std::string SourceSpec::kind_name() const
{
    return std::visit(Overloaded{
                          [](const UniformSource&) { return std::string("uniform"); },
                          [](const IidBernoulliSource&) { return std::string("iid"); },
                          [](const MarkovSource&) { return std::string("markov"); },
                          [](const SamplerSource&) { return std::string("sampler"); },
                      },
                      kind_);
}

std::size_t SourceSpec::sampler_count(const BitString& prefix) const
{
    // Rows starting with `prefix` form a contiguous run of the sorted table.
    auto starts_with = [&](const BitString& row) {
        return std::equal(prefix.begin(), prefix.end(), row.begin());
    };
    auto lo = std::lower_bound(sorted_table_.begin(), sorted_table_.end(), prefix);
    auto hi = std::partition_point(lo, sorted_table_.end(), starts_with);
    return static_cast<std::size_t>(std::distance(lo, hi));
}

ExactProb exact_conditional(const SourceSpec& src, const BitString& prefix, int b)
{
    if (b != 0 && b != 1) {
        throw InvalidArgument("bit value must be 0 or 1");
    }
    if (prefix.size() >= src.ell()) {
        throw InvalidLength("conditional requested after prefix of length " +
                            std::to_string(prefix.size()) + " >= ell = " +
                            std::to_string(src.ell()));
    }
    if (!prefix_in_support(src, prefix)) {
        throw ZeroMassPrefix("prefix '" + prefix.str() + "' has zero mass");
    }
    return ExactProb(conditional_unchecked(src, prefix, b));
}

ExactProb prefix_mass(const SourceSpec& src, const BitString& prefix)
{
    if (prefix.size() > src.ell()) {
        throw InvalidLength("prefix longer than ell");
    }
    if (const auto* s = std::get_if<SamplerSource>(&src.kind())) {
        Rational r(static_cast<unsigned long>(src.sampler_count(prefix)),
                   static_cast<unsigned long>(s->table.size()));
        r.canonicalize();
        return ExactProb(r);
    }
    Rational m = 1;
    BitString running;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        m *= conditional_unchecked(src, running, prefix[i]);
        if (sgn(m) == 0) {
            return ExactProb();
        }
        running.push_back(prefix[i]);
    }
    return ExactProb(m);
}

ExactProb mass(const SourceSpec& src, const BitString& x)
{
    if (x.size() != src.ell()) {
        throw InvalidLength("mass requires |x| = ell = " + std::to_string(src.ell()) + ", got " +
                            std::to_string(x.size()));
    }
    return prefix_mass(src, x);
}

BitString sample(const SourceSpec& src, std::uint64_t seed)
{
    Rng rng(seed);
    const std::size_t ell = src.ell();
    return std::visit(
        Overloaded{
            [&](const UniformSource&) {
                BitString x;
                for (std::size_t i = 0; i < ell; ++i) {
                    x.push_back(static_cast<int>(rng() >> 63));
                }
                return x;
            },
            [&](const IidBernoulliSource& s) {
                BitString x;
                for (std::size_t i = 0; i < ell; ++i) {
                    x.push_back(bernoulli(rng, s.p_one) ? 1 : 0);
                }
                return x;
            },
            [&](const MarkovSource& s) {
                BitString x;
                x.push_back(bernoulli(rng, s.initial[1]) ? 1 : 0);
                for (std::size_t i = 1; i < ell; ++i) {
                    x.push_back(bernoulli(rng, s.transition[x[i - 1]][1]) ? 1 : 0);
                }
                return x;
            },
            [&](const SamplerSource& s) {
                return s.table[uniform_below(rng, static_cast<std::uint64_t>(s.table.size()))];
            },
        },
        src.kind());
}

std::size_t light_count(const SourceSpec& src, const BitString& x, const ExactProb& delta,
                        std::size_t from, std::size_t to)
{
    if (from < 1 || from > to || to > x.size()) {
        throw InvalidArgument("light_count requires 1 <= from <= to <= |x|");
    }
    std::size_t count = 0;
    for (std::size_t i = from; i <= to; ++i) {
        if (exact_conditional(src, x.prefix(i - 1), x[i - 1]) <= delta) {
            ++count;
        }
    }
    return count;
}

namespace {

void check_enumerable(const SourceSpec& src)
{
    if (src.ell() > kMaxEnumerableLength) {
        throw SupportTooLarge("exhaustive enumeration needs ell <= " +
                              std::to_string(kMaxEnumerableLength) + ", got " +
                              std::to_string(src.ell()));
    }
}

// Depth-first walk of the prefix tree; a branch is absorbed as soon as a
// light bit appears on it, so its whole mass is counted once.
void light_walk(const SourceSpec& src, const ExactProb& delta, BitString& prefix,
                const Rational& prefix_p, Rational& total)
{
    if (prefix.size() == src.ell()) {
        return;
    }
    for (int b = 0; b < 2; ++b) {
        const Rational c = conditional_unchecked(src, prefix, b);
        if (sgn(c) == 0) {
            continue;
        }
        const Rational child = prefix_p * c;
        if (c <= delta.value()) {
            total += child;
            continue;
        }
        prefix.push_back(b);
        light_walk(src, delta, prefix, child, total);
        prefix = prefix.prefix(prefix.size() - 1);
    }
}

void support_walk(const SourceSpec& src, BitString& prefix, const Rational& prefix_p,
                  const std::function<void(const BitString&, const ExactProb&)>& fn)
{
    if (prefix.size() == src.ell()) {
        fn(prefix, ExactProb(prefix_p));
        return;
    }
    for (int b = 0; b < 2; ++b) {
        const Rational c = conditional_unchecked(src, prefix, b);
        if (sgn(c) == 0) {
            continue;
        }
        prefix.push_back(b);
        support_walk(src, prefix, prefix_p * c, fn);
        prefix = prefix.prefix(prefix.size() - 1);
    }
}

}  // namespace

ExactProb light_event_prob(const SourceSpec& src, const ExactProb& delta)
{
    check_enumerable(src);
    Rational total = 0;
    BitString prefix;
    light_walk(src, delta, prefix, Rational(1), total);
    return ExactProb(total);
}

void for_each_support_string(const SourceSpec& src,
                             const std::function<void(const BitString&, const ExactProb&)>& fn)
{
    check_enumerable(src);
    BitString prefix;
    support_walk(src, prefix, Rational(1), fn);
}

}  // namespace nbpc
