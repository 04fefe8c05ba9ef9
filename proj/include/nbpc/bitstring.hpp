#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nbpc {

/// Finite sequence of bits. Indexing is 0-based; the i-th bit in the usual
/// 1-based notation x_i is `x[i - 1]`, and the prefix x_[i] is `x.prefix(i)`.
class BitString {
public:
    BitString() = default;
    /// Each element must be 0 or 1.
    explicit BitString(std::vector<std::uint8_t> bits);

    /// Parses a string of '0'/'1' characters. Throws InvalidArgument otherwise.
    static BitString parse(std::string_view text);
    /// The `width` low bits of `value`, most significant first.
    static BitString from_integer(std::uint64_t value, std::size_t width);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    int operator[](std::size_t i) const noexcept { return bits_[i]; }

    /// First `len` bits; len <= size().
    BitString prefix(std::size_t len) const;
    /// Bits in [from, to), 0-based.
    BitString slice(std::size_t from, std::size_t to) const;

    void push_back(int bit);
    void append(const BitString& other);

    std::string str() const;
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    auto begin() const noexcept { return bits_.begin(); }
    auto end() const noexcept { return bits_.end(); }

    friend bool operator==(const BitString&, const BitString&) = default;
    friend auto operator<=>(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace nbpc
