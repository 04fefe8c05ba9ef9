#pragma once

#include "nbpc/source_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace nbpc {

/// Parses a source description (YAML; JSON objects are accepted too).
///
///     kind: markov                 # uniform | iid | markov | sampler
///     n: 16                        # instance index
///     ell: 16                      # output length
///     p: 9/10                      # iid: Pr[bit = 1]
///     initial: [1/2, 1/2]          # markov: Pr[x_1 = 0], Pr[x_1 = 1]
///     transition: [[3/4, 1/4], [1/4, 3/4]]   # markov: row a = Pr[next | a]
///     randomness_bits: 2           # sampler
///     table: ["00", "01", "01", "11"]        # sampler: 2^r outputs
///
/// Rationals are written "num/den" or as integers. Errors are ConfigError
/// with the offending field named in the message.
SourceSpec parse_source_config(std::string_view text);

SourceSpec load_source_config(const std::filesystem::path& path);

/// Single-line flow-style text that parse_source_config reads back.
std::string source_config_text(const SourceSpec& src);

}  // namespace nbpc
