#include "nbpc/bitstring.hpp"

#include "nbpc/errors.hpp"

namespace nbpc {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    for (auto b : bits_) {
        if (b > 1) {
            throw InvalidArgument("bit value must be 0 or 1");
        }
    }
}

BitString BitString::parse(std::string_view text)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw InvalidArgument("not a bit string: '" + std::string(text) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
}

BitString BitString::from_integer(std::uint64_t value, std::size_t width)
{
    std::vector<std::uint8_t> bits(width);
    for (std::size_t i = 0; i < width; ++i) {
        const std::size_t shift = width - 1 - i;
        bits[i] = shift < 64 ? static_cast<std::uint8_t>((value >> shift) & 1U) : 0;
    }
    return BitString(std::move(bits));
}

BitString BitString::prefix(std::size_t len) const
{
    return slice(0, len);
}

BitString BitString::slice(std::size_t from, std::size_t to) const
{
    if (from > to || to > bits_.size()) {
        throw InvalidLength("slice [" + std::to_string(from) + "," + std::to_string(to) +
                            ") out of range for length " + std::to_string(bits_.size()));
    }
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(from),
                     bits_.begin() + static_cast<std::ptrdiff_t>(to));
    return out;
}

void BitString::push_back(int bit)
{
    if (bit != 0 && bit != 1) {
        throw InvalidArgument("bit value must be 0 or 1");
    }
    bits_.push_back(static_cast<std::uint8_t>(bit));
}

void BitString::append(const BitString& other)
{
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::string BitString::str() const
{
    std::string out;
    out.reserve(bits_.size());
    for (auto b : bits_) {
        out.push_back(static_cast<char>('0' + b));
    }
    return out;
}

}  // namespace nbpc
