#include "nbpc/container.hpp"

#include "nbpc/errors.hpp"

#include <bit>

namespace nbpc {

std::size_t gamma_length(std::uint64_t m)
{
    if (m == 0) {
        throw InvalidArgument("gamma code needs m >= 1");
    }
    return 2 * static_cast<std::size_t>(std::bit_width(m) - 1) + 1;
}

void BitWriter::put(int bit)
{
    bits_.push_back(bit);
}

void BitWriter::put_bits(const BitString& bits)
{
    bits_.append(bits);
}

void BitWriter::put_gamma(std::uint64_t m)
{
    if (m == 0) {
        throw InvalidArgument("gamma code needs m >= 1");
    }
    const int width = std::bit_width(m);
    for (int i = 1; i < width; ++i) {
        put(0);
    }
    for (int i = width - 1; i >= 0; --i) {
        put(static_cast<int>((m >> i) & 1U));
    }
}

std::vector<std::uint8_t> BitWriter::bytes() const
{
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
        }
    }
    return out;
}

int BitReader::get()
{
    if (pos_ >= bytes_.size() * 8) {
        throw MalformedEncoding("truncated container at bit " + std::to_string(pos_));
    }
    const int bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
    ++pos_;
    return bit;
}

BitString BitReader::get_bits(std::size_t count)
{
    if (count > remaining()) {
        throw MalformedEncoding("truncated container: need " + std::to_string(count) +
                                " bits, have " + std::to_string(remaining()));
    }
    BitString out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(get());
    }
    return out;
}

std::uint64_t BitReader::get_gamma()
{
    int zeros = 0;
    while (get() == 0) {
        if (++zeros > 63) {
            throw MalformedEncoding("gamma code too long at bit " + std::to_string(pos_));
        }
    }
    std::uint64_t value = 1;
    for (int i = 0; i < zeros; ++i) {
        value = (value << 1) | static_cast<std::uint64_t>(get());
    }
    return value;
}

namespace {

std::uint64_t plus_one(std::uint64_t v, const char* what)
{
    if (v == UINT64_MAX) {
        throw InvalidArgument(std::string(what) + " too large to serialize");
    }
    return v + 1;
}

}  // namespace

void write_encoding(BitWriter& out, const Encoding& enc)
{
    if (const auto* raw = std::get_if<RawCode>(&enc)) {
        out.put(1);
        out.put_gamma(plus_one(raw->raw.size(), "raw length"));
        out.put_bits(raw->raw);
        return;
    }
    const auto& code = std::get<ArithmeticCode>(enc);
    out.put(0);
    out.put_gamma(plus_one(code.n, "n"));
    out.put_gamma(code.k);
    out.put_gamma(code.q);
    out.put_gamma(plus_one(code.alpha, "alpha"));
    out.put_gamma(plus_one(code.light.size(), "light list size"));
    for (const auto& lb : code.light) {
        out.put_gamma(lb.index);
        out.put(lb.bit);
    }
    out.put_gamma(plus_one(code.v.size(), "v length"));
    out.put_bits(code.v);
}

Encoding read_encoding(BitReader& in)
{
    if (in.get() == 1) {
        const std::uint64_t len = in.get_gamma() - 1;
        if (len > in.remaining()) {
            throw MalformedEncoding("raw payload longer than the container");
        }
        return RawCode{in.get_bits(static_cast<std::size_t>(len))};
    }
    ArithmeticCode code;
    code.n = in.get_gamma() - 1;
    code.k = in.get_gamma();
    code.q = in.get_gamma();
    code.alpha = in.get_gamma() - 1;
    const std::uint64_t count = in.get_gamma() - 1;
    // Every entry takes at least two bits.
    if (count > in.remaining() / 2) {
        throw MalformedEncoding("light-bit list longer than the container");
    }
    std::uint64_t last = 0;
    for (std::uint64_t j = 0; j < count; ++j) {
        LightBit lb;
        lb.index = in.get_gamma();
        lb.bit = in.get();
        if (lb.index < code.k || lb.index <= last) {
            throw MalformedEncoding("light-bit indices must be increasing and >= k");
        }
        last = lb.index;
        code.light.push_back(lb);
    }
    const std::uint64_t v_len = in.get_gamma() - 1;
    if (v_len == 0) {
        throw MalformedEncoding("empty v");
    }
    if (v_len > in.remaining()) {
        throw MalformedEncoding("v longer than the container");
    }
    code.v = in.get_bits(static_cast<std::size_t>(v_len));
    return code;
}

std::vector<std::uint8_t> serialize(const Encoding& enc)
{
    BitWriter out;
    write_encoding(out, enc);
    return out.bytes();
}

Encoding deserialize(std::span<const std::uint8_t> bytes)
{
    BitReader in(bytes);
    Encoding enc = read_encoding(in);
    if (in.remaining() >= 8) {
        throw MalformedEncoding("trailing bytes after container");
    }
    while (in.remaining() > 0) {
        if (in.get() != 0) {
            throw MalformedEncoding("non-zero padding");
        }
    }
    return enc;
}

std::size_t bit_length(const Encoding& enc)
{
    BitWriter out;
    write_encoding(out, enc);
    return out.bit_count();
}

}  // namespace nbpc
