#pragma once

#include "nbpc/bitstring.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nbpc {

/// Bits of the Elias-gamma code of m >= 1: 2 * floor(log2 m) + 1.
std::size_t gamma_length(std::uint64_t m);

/// MSB-first bit sink.
class BitWriter {
public:
    void put(int bit);
    void put_bits(const BitString& bits);
    /// Elias gamma: floor(log2 m) zeros, then m in binary. m >= 1.
    void put_gamma(std::uint64_t m);

    std::size_t bit_count() const noexcept { return bits_.size(); }
    const BitString& bits() const noexcept { return bits_; }
    /// Packed MSB-first, last byte zero-padded.
    std::vector<std::uint8_t> bytes() const;

private:
    BitString bits_;
};

/// MSB-first bit source. Reads past the end throw MalformedEncoding.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    int get();
    BitString get_bits(std::size_t count);
    /// Rejects codes whose value would not fit in 64 bits.
    std::uint64_t get_gamma();

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() * 8 - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace nbpc
