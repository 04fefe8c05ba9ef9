#include "nbpc/bitstring.hpp"
#include "nbpc/errors.hpp"

#include <doctest.h>

using nbpc::BitString;

TEST_CASE("parse and print")
{
    CHECK(BitString::parse("0110").str() == "0110");
    CHECK(BitString::parse("").empty());
    CHECK_THROWS_AS(BitString::parse("012"), nbpc::InvalidArgument);
    CHECK_THROWS_AS(BitString(std::vector<std::uint8_t>{0, 2}), nbpc::InvalidArgument);
}

TEST_CASE("from_integer is most significant bit first")
{
    CHECK(BitString::from_integer(5, 4).str() == "0101");
    CHECK(BitString::from_integer(0, 0).empty());
    CHECK(BitString::from_integer(0xFF, 3).str() == "111");
}

TEST_CASE("prefix extraction is total")
{
    const auto x = BitString::parse("1011");
    for (std::size_t i = 0; i <= x.size(); ++i) {
        const auto p = x.prefix(i);
        CHECK(p.size() == i);
        CHECK(p.str() == x.str().substr(0, i));
    }
    CHECK(x.prefix(0).empty());
    CHECK_THROWS_AS(x.prefix(5), nbpc::InvalidLength);
}

TEST_CASE("slice bounds")
{
    const auto x = BitString::parse("110010");
    CHECK(x.slice(2, 5).str() == "001");
    CHECK(x.slice(6, 6).empty());
    CHECK_THROWS_AS(x.slice(4, 3), nbpc::InvalidLength);
    CHECK_THROWS_AS(x.slice(0, 7), nbpc::InvalidLength);
}

TEST_CASE("append, push_back and ordering")
{
    BitString a = BitString::parse("10");
    a.push_back(1);
    a.append(BitString::parse("00"));
    CHECK(a.str() == "10100");
    CHECK_THROWS_AS(a.push_back(3), nbpc::InvalidArgument);
    CHECK(BitString::parse("01") < BitString::parse("10"));
    CHECK(BitString::parse("0") < BitString::parse("00"));
}
