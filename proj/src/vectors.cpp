#include "nbpc/vectors.hpp"

#include "nbpc/codec.hpp"
#include "nbpc/container.hpp"
#include "nbpc/errors.hpp"
#include "nbpc/harness.hpp"
#include "nbpc/source_config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace nbpc {
namespace {

using Json = nlohmann::ordered_json;

BitString bytes_to_bits(const std::vector<std::uint8_t>& bytes)
{
    BitString out;
    for (const auto byte : bytes) {
        for (int i = 7; i >= 0; --i) {
            out.push_back((byte >> i) & 1);
        }
    }
    return out;
}

// Index of the first position where the two strings differ, counting a
// missing bit as a difference.
std::size_t first_divergence(const BitString& a, const BitString& b)
{
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) {
        ++i;
    }
    return i;
}

std::string bit_at(const BitString& s, std::size_t i)
{
    return i < s.size() ? std::to_string(s[i]) : std::string("end");
}

[[noreturn]] void mismatch(const GoldenVector& v, const std::string& what, const BitString& expected,
                           const BitString& actual)
{
    const std::size_t i = first_divergence(expected, actual);
    throw VectorMismatch("vector '" + v.description + "': " + what + " diverges at bit " +
                         std::to_string(i) + " (expected " + bit_at(expected, i) + ", got " +
                         bit_at(actual, i) + ")");
}

}  // namespace

std::string to_hex(const std::vector<std::uint8_t>& bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (const auto b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xF];
    }
    return out;
}

std::vector<std::uint8_t> from_hex(const std::string& hex)
{
    if (hex.size() % 2 != 0) {
        throw ConfigError("hex string has odd length");
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') {
            return c - '0';
        }
        if (c >= 'a' && c <= 'f') {
            return c - 'a' + 10;
        }
        if (c >= 'A' && c <= 'F') {
            return c - 'A' + 10;
        }
        throw ConfigError(std::string("invalid hex digit '") + c + "'");
    };
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    }
    return out;
}

std::vector<GoldenVector> parse_vectors(const std::string& text)
{
    std::vector<GoldenVector> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            const Json j = Json::parse(line);
            GoldenVector v;
            v.description = j.at("description").get<std::string>();
            v.source = j.at("source").get<std::string>();
            v.predictor = j.at("predictor").get<std::string>();
            v.x = BitString::parse(j.at("x").get<std::string>());
            v.q = j.at("q").get<std::uint64_t>();
            v.k = j.at("k").get<std::uint64_t>();
            if (!j.at("alpha").is_null()) {
                v.alpha = j.at("alpha").get<std::uint64_t>();
            }
            v.root_seed = j.at("root_seed").get<std::uint64_t>();
            v.bytes = from_hex(j.at("bytes").get<std::string>());
            v.decoded = BitString::parse(j.at("decoded").get<std::string>());
            out.push_back(std::move(v));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("vector line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw ConfigError("vector line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<GoldenVector> load_vectors(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open vector file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_vectors(text.str());
}

std::string vector_line(const GoldenVector& v)
{
    Json j;
    j["description"] = v.description;
    j["source"] = v.source;
    j["predictor"] = v.predictor;
    j["x"] = v.x.str();
    j["q"] = v.q;
    j["k"] = v.k;
    j["alpha"] = v.alpha ? Json(*v.alpha) : Json(nullptr);
    j["root_seed"] = v.root_seed;
    j["bytes"] = to_hex(v.bytes);
    j["decoded"] = v.decoded.str();
    return j.dump();
}

namespace {

struct VectorSetup {
    SourceSpec source;
    PredictorParams params;
    BasePredictorPtr base;
};

VectorSetup setup(const GoldenVector& v)
{
    SourceSpec src = parse_source_config(v.source);
    auto params = PredictorParams::make(src.n(), src.ell(), v.q);
    auto base = make_base_predictor(src, params, parse_predictor_config(v.predictor));
    return {std::move(src), params, std::move(base)};
}

Encoding encode_vector(const GoldenVector& v, const VectorSetup& s)
{
    EncodeOptions options;
    options.forced_alpha = v.alpha;
    return encode(*s.base, s.params, v.x, v.k, v.root_seed, options);
}

}  // namespace

GoldenVector make_vector(GoldenVector inputs)
{
    const VectorSetup s = setup(inputs);
    const Encoding enc = encode_vector(inputs, s);
    inputs.bytes = serialize(enc);
    inputs.decoded = decode(*s.base, s.params, enc, inputs.x.prefix(inputs.k - 1), inputs.root_seed);
    return inputs;
}

void verify_vector(const GoldenVector& v)
{
    const VectorSetup s = setup(v);
    const BitString expected = bytes_to_bits(v.bytes);
    const BitString actual = bytes_to_bits(serialize(encode_vector(v, s)));
    if (actual != expected) {
        mismatch(v, "encoding", expected, actual);
    }

    Encoding parsed;
    try {
        parsed = deserialize(v.bytes);
    } catch (const MalformedEncoding& e) {
        throw VectorMismatch("vector '" + v.description + "': expected bytes do not parse: " +
                             e.what());
    }
    const BitString reserialized = bytes_to_bits(serialize(parsed));
    if (reserialized != expected) {
        mismatch(v, "re-serialization", expected, reserialized);
    }
    const BitString decoded =
        decode(*s.base, s.params, parsed, v.x.prefix(v.k - 1), v.root_seed);
    if (decoded != v.decoded) {
        mismatch(v, "decoded output", v.decoded, decoded);
    }
}

std::vector<VectorResult> verify_vectors(const std::filesystem::path& path)
{
    std::vector<VectorResult> out;
    for (const auto& v : load_vectors(path)) {
        VectorResult r{v.description, true, ""};
        try {
            verify_vector(v);
        } catch (const Error& e) {
            r.passed = false;
            r.message = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace nbpc
