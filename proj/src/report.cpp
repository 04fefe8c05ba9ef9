#include "nbpc/report.hpp"

#include "nbpc/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <istream>
#include <ostream>

namespace nbpc {
namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

std::optional<double> read_optional(const Json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

Json trial_json(const TrialReport& t)
{
    Json j;
    j["record"] = "trial";
    j["trial_id"] = t.trial_id;
    j["x"] = t.x.str();
    j["neg_log_mass"] = t.neg_log_mass;
    j["m_light"] = t.m_light;
    j["enc_bits"] = t.enc_bits;
    j["decode_ok"] = t.decode_ok;
    j["fallback_used"] = t.fallback_used;
    j["bound"] = t.bound;
    j["within_bound"] = t.within_bound;
    j["weight"] = t.weight;
    return j;
}

TrialReport trial_from_json(const Json& j)
{
    TrialReport t;
    t.trial_id = j.at("trial_id").get<std::uint64_t>();
    t.x = BitString::parse(j.at("x").get<std::string>());
    t.neg_log_mass = j.at("neg_log_mass").get<double>();
    t.m_light = j.at("m_light").get<std::uint64_t>();
    t.enc_bits = j.at("enc_bits").get<std::uint64_t>();
    t.decode_ok = j.at("decode_ok").get<bool>();
    t.fallback_used = j.at("fallback_used").get<bool>();
    t.bound = j.at("bound").get<double>();
    t.within_bound = j.at("within_bound").get<bool>();
    t.weight = j.at("weight").get<double>();
    return t;
}

Json summary_record(const ReportContext& c, const Summary& s)
{
    Json j;
    j["record"] = "summary";
    j["mode"] = mode_name(c.mode);
    j["source"] = c.source;
    j["predictor"] = c.predictor;
    j["exact"] = c.exact;
    j["n"] = c.n;
    j["ell"] = c.ell;
    j["q"] = c.q;
    j["q_mod"] = c.q_mod;
    j["k"] = c.k;
    j["root_seed"] = c.root_seed;
    j["trials"] = s.trials;
    j["entropy"] = s.entropy;
    j["mean_enc_bits"] = s.mean_enc_bits;
    j["success_frequency"] = s.success_frequency;
    j["required_success"] = s.required_success;
    j["bound_frequency"] = s.bound_frequency;
    j["required_bound"] = s.required_bound;
    j["light_free_fraction"] = s.light_free_fraction;
    j["fallback_fraction"] = s.fallback_fraction;
    j["mean_upper"] = optional_number(s.mean_upper);
    j["mean_lower"] = optional_number(s.mean_lower);
    j["min_string_success"] = optional_number(s.min_string_success);
    j["max_excess"] = s.trials == 0 ? Json(nullptr) : Json(s.max_excess);
    j["passed"] = s.passed;
    return j;
}

void read_summary(const Json& j, ReportContext& c, Summary& s)
{
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.source = j.at("source").get<std::string>();
    c.predictor = j.at("predictor").get<std::string>();
    c.exact = j.at("exact").get<bool>();
    c.n = j.at("n").get<std::uint64_t>();
    c.ell = j.at("ell").get<std::uint64_t>();
    c.q = j.at("q").get<std::uint64_t>();
    c.q_mod = j.at("q_mod").get<std::uint64_t>();
    c.k = j.at("k").get<std::uint64_t>();
    c.root_seed = j.at("root_seed").get<std::uint64_t>();
    c.entropy = j.at("entropy").get<double>();
    s.trials = j.at("trials").get<std::uint64_t>();
    s.entropy = c.entropy;
    s.mean_enc_bits = j.at("mean_enc_bits").get<double>();
    s.success_frequency = j.at("success_frequency").get<double>();
    s.required_success = j.at("required_success").get<double>();
    s.bound_frequency = j.at("bound_frequency").get<double>();
    s.required_bound = j.at("required_bound").get<double>();
    s.light_free_fraction = j.at("light_free_fraction").get<double>();
    s.fallback_fraction = j.at("fallback_fraction").get<double>();
    s.mean_upper = read_optional(j.at("mean_upper"));
    s.mean_lower = read_optional(j.at("mean_lower"));
    s.min_string_success = read_optional(j.at("min_string_success"));
    s.max_excess = j.at("max_excess").is_null() ? 0.0 : j.at("max_excess").get<double>();
    s.passed = j.at("passed").get<bool>();
}

}  // namespace

void write_report(std::ostream& out, const ExperimentReport& report)
{
    for (const auto& t : report.trials) {
        out << trial_json(t).dump() << '\n';
    }
    out << summary_record(report.context, report.summary).dump() << '\n';
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open report file " + path.string());
    }
    write_report(out, report);
    if (!out) {
        throw ConfigError("failed writing report file " + path.string());
    }
}

ExperimentReport read_report(std::istream& in)
{
    ExperimentReport report;
    bool have_summary = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (have_summary) {
            throw ConfigError("report line " + std::to_string(line_no) + ": record after summary");
        }
        try {
            const Json j = Json::parse(line);
            const std::string kind = j.at("record").get<std::string>();
            if (kind == "trial") {
                report.trials.push_back(trial_from_json(j));
            } else if (kind == "summary") {
                read_summary(j, report.context, report.summary);
                have_summary = true;
            } else {
                throw ConfigError("unknown record '" + kind + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("report line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw ConfigError("report line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_summary) {
        throw ConfigError("report has no summary record");
    }
    return report;
}

ExperimentReport load_report(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open report file " + path.string());
    }
    return read_report(in);
}

std::string summary_json(const ExperimentReport& report)
{
    return summary_record(report.context, report.summary).dump();
}

}  // namespace nbpc
