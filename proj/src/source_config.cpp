#include "nbpc/source_config.hpp"

#include "nbpc/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace nbpc {
namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what)
{
    throw ConfigError("source config field '" + field + "': " + what);
}

YAML::Node require(const YAML::Node& root, const std::string& field)
{
    YAML::Node node = root[field];
    if (!node) {
        field_error(field, "missing");
    }
    return node;
}

std::string scalar(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) {
        field_error(field, "expected a scalar");
    }
    return node.Scalar();
}

std::uint64_t read_u64(const YAML::Node& root, const std::string& field)
{
    const std::string text = scalar(require(root, field), field);
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        field_error(field, "expected a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        field_error(field, "integer out of range: '" + text + "'");
    }
}

Rational read_rational(const YAML::Node& node, const std::string& field)
{
    try {
        return parse_rational(scalar(node, field));
    } catch (const ConfigError& e) {
        field_error(field, e.what());
    }
}

std::array<Rational, 2> read_pair(const YAML::Node& node, const std::string& field)
{
    if (!node.IsSequence() || node.size() != 2) {
        field_error(field, "expected a list of two rationals");
    }
    return {read_rational(node[0], field), read_rational(node[1], field)};
}

void reject_unknown(const YAML::Node& root, const std::set<std::string>& allowed)
{
    for (const auto& entry : root) {
        const std::string key = entry.first.as<std::string>();
        if (!allowed.contains(key)) {
            field_error(key, "unknown field");
        }
    }
}

}  // namespace

SourceSpec parse_source_config(std::string_view text)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("source config is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) {
        throw ConfigError("source config must be a mapping of fields");
    }
    const std::string kind = scalar(require(root, "kind"), "kind");
    const std::uint64_t n = read_u64(root, "n");
    const std::uint64_t ell = read_u64(root, "ell");
    if (ell == 0) {
        field_error("ell", "must be positive");
    }

    if (kind == "uniform") {
        reject_unknown(root, {"kind", "n", "ell"});
        return SourceSpec::uniform(n, ell);
    }
    if (kind == "iid") {
        reject_unknown(root, {"kind", "n", "ell", "p"});
        return SourceSpec::iid(n, ell, read_rational(require(root, "p"), "p"));
    }
    if (kind == "markov") {
        reject_unknown(root, {"kind", "n", "ell", "initial", "transition"});
        auto initial = read_pair(require(root, "initial"), "initial");
        const YAML::Node t = require(root, "transition");
        if (!t.IsSequence() || t.size() != 2) {
            field_error("transition", "expected two rows");
        }
        std::array<std::array<Rational, 2>, 2> rows{read_pair(t[0], "transition[0]"),
                                                    read_pair(t[1], "transition[1]")};
        return SourceSpec::markov(n, ell, std::move(initial), std::move(rows));
    }
    if (kind == "sampler") {
        reject_unknown(root, {"kind", "n", "ell", "randomness_bits", "table"});
        const std::uint64_t r = read_u64(root, "randomness_bits");
        if (r > kMaxSamplerRandomness) {
            field_error("randomness_bits", "at most " + std::to_string(kMaxSamplerRandomness));
        }
        const YAML::Node t = require(root, "table");
        if (!t.IsSequence()) {
            field_error("table", "expected a list of bit strings");
        }
        std::vector<BitString> table;
        table.reserve(t.size());
        for (const auto& row : t) {
            try {
                table.push_back(BitString::parse(scalar(row, "table")));
            } catch (const InvalidArgument& e) {
                field_error("table", e.what());
            }
        }
        return SourceSpec::sampler(n, ell, static_cast<unsigned>(r), std::move(table));
    }
    field_error("kind", "unknown kind '" + kind + "'");
}

SourceSpec load_source_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open source config " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_source_config(buffer.str());
}

std::string source_config_text(const SourceSpec& src)
{
    YAML::Emitter out;
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << src.kind_name();
    out << YAML::Key << "n" << YAML::Value << src.n();
    out << YAML::Key << "ell" << YAML::Value << src.ell();
    if (const auto* s = std::get_if<IidBernoulliSource>(&src.kind())) {
        out << YAML::Key << "p" << YAML::Value << to_string(s->p_one);
    } else if (const auto* m = std::get_if<MarkovSource>(&src.kind())) {
        out << YAML::Key << "initial" << YAML::Value << YAML::BeginSeq
            << to_string(m->initial[0]) << to_string(m->initial[1]) << YAML::EndSeq;
        out << YAML::Key << "transition" << YAML::Value << YAML::BeginSeq;
        for (const auto& row : m->transition) {
            out << YAML::BeginSeq << to_string(row[0]) << to_string(row[1]) << YAML::EndSeq;
        }
        out << YAML::EndSeq;
    } else if (const auto* t = std::get_if<SamplerSource>(&src.kind())) {
        out << YAML::Key << "randomness_bits" << YAML::Value << t->randomness_bits;
        out << YAML::Key << "table" << YAML::Value << YAML::BeginSeq;
        for (const auto& row : t->table) {
            out << YAML::DoubleQuoted << row.str();
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    return out.c_str();
}

}  // namespace nbpc
