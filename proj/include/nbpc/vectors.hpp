#pragma once

#include "nbpc/bitstring.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nbpc {

/// One pinned encode/decode case. The file holds one JSON object per line:
///   {"description":..,"source":<source config text>,"predictor":"oracle",
///    "x":"10","q":8,"k":1,"alpha":0,"root_seed":0,"bytes":"388c94","decoded":"10"}
/// alpha may be null, in which case it is drawn from root_seed.
struct GoldenVector {
    std::string description;
    std::string source;
    std::string predictor = "oracle";
    BitString x;
    std::uint64_t q = 1;
    std::uint64_t k = 1;
    std::optional<std::uint64_t> alpha;
    std::uint64_t root_seed = 0;
    std::vector<std::uint8_t> bytes;
    BitString decoded;
};

std::string to_hex(const std::vector<std::uint8_t>& bytes);
/// Throws ConfigError on odd length or a non-hex digit.
std::vector<std::uint8_t> from_hex(const std::string& hex);

std::vector<GoldenVector> parse_vectors(const std::string& text);
std::vector<GoldenVector> load_vectors(const std::filesystem::path& path);
std::string vector_line(const GoldenVector& v);

/// Fills in bytes and decoded by running the codec on the inputs.
GoldenVector make_vector(GoldenVector inputs);

/// Re-encodes the inputs and compares bytes exactly, then deserializes the
/// expected bytes, checks they re-serialize identically, decodes them and
/// compares with `decoded`. Throws VectorMismatch naming the first
/// divergent bit.
void verify_vector(const GoldenVector& v);

struct VectorResult {
    std::string description;
    bool passed = false;
    std::string message;
};

std::vector<VectorResult> verify_vectors(const std::filesystem::path& path);

}  // namespace nbpc
