#pragma once

#include "nbpc/bitio.hpp"
#include "nbpc/codec.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nbpc {

// Container layout, MSB first, gamma = Elias gamma:
//
//   arithmetic: 0 gamma(n+1) gamma(k) gamma(q) gamma(alpha+1) gamma(|L|+1)
//               { gamma(index) bit } * |L|   gamma(|v|+1) v   zero pad
//   fallback:   1 gamma(|raw|+1) raw   zero pad
//
// The pad brings the total to a whole number of bytes (fewer than 8 bits).

void write_encoding(BitWriter& out, const Encoding& enc);
/// Reads one encoding; does not look at padding.
Encoding read_encoding(BitReader& in);

std::vector<std::uint8_t> serialize(const Encoding& enc);

/// Strict inverse of serialize: rejects truncation, trailing bytes, non-zero
/// pad bits, over-long gamma codes, |v| = 0, and unordered L indices, all
/// with MalformedEncoding. Anything accepted re-serializes to the same bytes.
Encoding deserialize(std::span<const std::uint8_t> bytes);

/// Unpadded bit length of the serialized form.
std::size_t bit_length(const Encoding& enc);

}  // namespace nbpc
