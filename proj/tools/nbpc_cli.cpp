#include "nbpc/codec.hpp"
#include "nbpc/container.hpp"
#include "nbpc/errors.hpp"
#include "nbpc/harness.hpp"
#include "nbpc/report.hpp"
#include "nbpc/source_config.hpp"
#include "nbpc/vectors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

namespace {

using namespace nbpc;

struct Options {
    std::string source;
    std::uint64_t q = 0;
    std::uint64_t k = 1;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string predictor = "oracle";
    std::string mode = "avg";
    std::string property;
    std::string x;
    std::string prefix;
    std::string hex;
    std::string in;
    std::string delta = "1/20";
    std::string epsilon = "1/4";
    std::uint64_t kappa = 0;
    std::uint64_t self_test_trials = 0;
    std::optional<std::uint64_t> alpha;
    std::string description;
    std::string vectors;
};

std::vector<std::uint8_t> read_bytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig experiment_config(const Options& o)
{
    ExperimentConfig cfg(load_source_config(o.source));
    cfg.q = o.q;
    cfg.k = o.k;
    cfg.trials = o.trials;
    cfg.root_seed = o.seed;
    cfg.predictor = parse_predictor_config(o.predictor);
    cfg.mode = parse_mode(o.mode);
    cfg.epsilon = parse_rational(o.epsilon);
    cfg.kappa = o.kappa;
    if (o.self_test_trials != 0) {
        cfg.self_test_trials = o.self_test_trials;
    }
    return cfg;
}

void require_q(const Options& o)
{
    if (o.q == 0) {
        throw ConfigError("--q is required");
    }
}

int run_encode(const Options& o)
{
    require_q(o);
    const SourceSpec src = load_source_config(o.source);
    const auto params = PredictorParams::make(src.n(), src.ell(), o.q);
    const auto base = make_base_predictor(src, params, parse_predictor_config(o.predictor));
    EncodeOptions options;
    options.forced_alpha = o.alpha;
    const Encoding enc = encode(*base, params, BitString::parse(o.x), o.k, o.seed, options);
    const auto bytes = serialize(enc);
    if (!o.out.empty()) {
        std::ofstream out(o.out, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw ConfigError("failed writing " + o.out);
        }
    }
    std::cout << to_hex(bytes) << '\n';
    return 0;
}

int run_decode(const Options& o)
{
    const SourceSpec src = load_source_config(o.source);
    const auto bytes = o.in.empty() ? from_hex(o.hex) : read_bytes(o.in);
    const Encoding enc = deserialize(bytes);
    std::uint64_t q = o.q;
    if (const auto* code = std::get_if<ArithmeticCode>(&enc)) {
        if (q != 0 && q != code->q) {
            throw ConfigError("--q disagrees with the q stored in the container");
        }
        q = code->q;
    }
    if (q == 0) {
        q = 1;  // a raw fallback ignores the predictor
    }
    const auto params = PredictorParams::make(src.n(), src.ell(), q);
    const auto base = make_base_predictor(src, params, parse_predictor_config(o.predictor));
    std::cout << decode(*base, params, enc, BitString::parse(o.prefix), o.seed).str() << '\n';
    return 0;
}

int run_bench(const Options& o)
{
    const ExperimentConfig cfg = experiment_config(o);
    if (cfg.mode != Mode::worst_case) {
        require_q(o);
    }
    const ExperimentReport report = run_experiment(cfg);
    if (!o.out.empty()) {
        emit_report(report, o.out);
    }
    std::cout << summary_json(report) << '\n';
    return report.summary.passed ? 0 : 1;
}

int run_check(const Options& o)
{
    if (o.property == "vectors") {
        bool all = true;
        for (const auto& r : verify_vectors(o.vectors)) {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.description
                      << (r.passed ? "" : ": " + r.message) << '\n';
            all = all && r.passed;
        }
        return all ? 0 : 1;
    }
    const SourceSpec src = load_source_config(o.source);
    if (o.property == "light") {
        const auto r = check_light_bound(src, ExactProb(parse_rational(o.delta)));
        std::cout << "{\"property\":\"light\",\"probability\":\"" << to_string(r.probability)
                  << "\",\"bound\":\"" << to_string(r.bound) << "\",\"passed\":"
                  << (r.passed ? "true" : "false") << "}\n";
        return r.passed ? 0 : 1;
    }
    if (o.property == "roundtrip") {
        require_q(o);
        const std::uint64_t ell = src.ell();
        const std::vector<std::uint64_t> ks{1, std::max<std::uint64_t>(1, ell / 2), ell + 1};
        const auto r = check_roundtrip(src, o.q, ks, o.seed, parse_predictor_config(o.predictor));
        std::cout << "{\"property\":\"roundtrip\",\"cases\":" << r.cases
                  << ",\"failures\":" << r.failures << ",\"passed\":"
                  << (r.passed ? "true" : "false") << "}\n";
        return r.passed ? 0 : 1;
    }
    if (o.property == "pseudodet") {
        require_q(o);
        ExperimentConfig cfg = experiment_config(o);
        const auto r = check_pseudodeterminism(cfg);
        std::cout << "{\"property\":\"pseudodet\",\"draws\":" << r.draws
                  << ",\"all_positions_ok\":" << r.all_positions_ok << ",\"rate\":" << r.rate
                  << ",\"required_rate\":" << r.required_rate << ",\"calls\":" << r.calls
                  << ",\"complement_exact\":" << r.complement_exact
                  << ",\"passed\":" << (r.passed ? "true" : "false") << "}\n";
        return r.passed ? 0 : 1;
    }
    if (o.property == "worstcase") {
        ExperimentConfig cfg = experiment_config(o);
        cfg.mode = Mode::worst_case;
        const ExperimentReport report = run_worst_case_enumeration(cfg);
        if (!o.out.empty()) {
            emit_report(report, o.out);
        }
        std::cout << summary_json(report) << '\n';
        return report.summary.passed ? 0 : 1;
    }
    throw ConfigError("unknown --property '" + o.property + "'");
}

int run_vector(const Options& o)
{
    require_q(o);
    GoldenVector v;
    v.description = o.description;
    v.source = source_config_text(load_source_config(o.source));
    v.predictor = o.predictor;
    v.x = BitString::parse(o.x);
    v.q = o.q;
    v.k = o.k;
    v.alpha = o.alpha;
    v.root_seed = o.seed;
    std::cout << vector_line(make_vector(v)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Arithmetic coding driven by pseudo-deterministic next-bit prediction"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("--source", o.source, "Source configuration file")->required();
        cmd->add_option("--q", o.q, "Error parameter q");
        cmd->add_option("--seed", o.seed, "Root seed");
        cmd->add_option("--predictor", o.predictor,
                        "oracle | noisy:<trials|auto> | adversarial | faulty:<rate>");
    };

    auto* enc = app.add_subcommand("encode", "Encode x_[k:ell] given x_[k-1]; prints hex");
    add_common(enc);
    enc->add_option("--x", o.x, "Whole string x (prefix included)")->required();
    enc->add_option("--k", o.k, "First coded position (1-based)");
    enc->add_option("--alpha", o.alpha, "Force the advice instead of sampling it");
    enc->add_option("--out", o.out, "Also write the container bytes to this file");

    auto* dec = app.add_subcommand("decode", "Decode a container; prints the suffix");
    add_common(dec);
    auto* hex = dec->add_option("--hex", o.hex, "Container as hex");
    auto* in = dec->add_option("--in", o.in, "Container file");
    hex->excludes(in);
    dec->add_option("--prefix", o.prefix, "Known prefix x_[k-1]");

    auto* bench = app.add_subcommand("bench", "Run an experiment; exit 0 iff its bounds hold");
    add_common(bench);
    bench->add_option("--k", o.k, "First coded position (cond mode)");
    bench->add_option("--trials", o.trials, "Trials, or repetitions per string in robust mode");
    bench->add_option("--mode", o.mode, "avg | worst | cond | robust");
    bench->add_option("--out", o.out, "JSON-lines report file");
    bench->add_option("--epsilon", o.epsilon, "Worst-case slack factor");
    bench->add_option("--kappa", o.kappa, "Worst-case exponent (q = ell^kappa); 0 = from epsilon");
    bench->add_option("--self-test-trials", o.self_test_trials, "Robust self-test rounds; 0 = Hoeffding count");

    auto* check = app.add_subcommand("check", "Check one property; exit 0 iff it holds");
    check->add_option("--property", o.property, "pseudodet | light | worstcase | roundtrip | vectors")
        ->required();
    check->add_option("--source", o.source, "Source configuration file");
    check->add_option("--q", o.q, "Error parameter q");
    check->add_option("--seed", o.seed, "Root seed");
    check->add_option("--predictor", o.predictor, "Base predictor");
    check->add_option("--trials", o.trials, "Draws for pseudodet");
    check->add_option("--delta", o.delta, "Lightness threshold for light");
    check->add_option("--epsilon", o.epsilon, "Slack factor for worstcase");
    check->add_option("--kappa", o.kappa, "Exponent for worstcase");
    check->add_option("--out", o.out, "Report file for worstcase");
    check->add_option("--vectors", o.vectors, "Golden vector file");

    auto* vec = app.add_subcommand("vector", "Print a golden-vector line for the given inputs");
    add_common(vec);
    vec->add_option("--x", o.x, "Whole string x")->required();
    vec->add_option("--k", o.k, "First coded position");
    vec->add_option("--alpha", o.alpha, "Forced advice");
    vec->add_option("--description", o.description, "Description")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (enc->parsed()) {
            return run_encode(o);
        }
        if (dec->parsed()) {
            return run_decode(o);
        }
        if (bench->parsed()) {
            return run_bench(o);
        }
        if (check->parsed()) {
            if (o.property != "vectors" && o.source.empty()) {
                throw ConfigError("--source is required");
            }
            return run_check(o);
        }
        return run_vector(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
