#include "nbpc/container.hpp"
#include "nbpc/errors.hpp"
#include "nbpc/vectors.hpp"

#include <doctest.h>

#include <algorithm>

using nbpc::BitString;
using nbpc::GoldenVector;

namespace {

const std::string kVectors = std::string(NBPC_TEST_DATA) + "/golden_vectors.jsonl";

GoldenVector find(const std::vector<GoldenVector>& all, const std::string& description)
{
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& v) { return v.description == description; });
    REQUIRE(it != all.end());
    return *it;
}

}  // namespace

TEST_CASE("hex helpers")
{
    CHECK(nbpc::to_hex({0x38, 0x8c, 0x94}) == "388c94");
    CHECK(nbpc::from_hex("388C94") == std::vector<std::uint8_t>{0x38, 0x8c, 0x94});
    CHECK(nbpc::from_hex("").empty());
    CHECK_THROWS_AS(nbpc::from_hex("abc"), nbpc::ConfigError);
    CHECK_THROWS_AS(nbpc::from_hex("zz"), nbpc::ConfigError);
}

TEST_CASE("every golden vector verifies")
{
    const auto results = nbpc::verify_vectors(kVectors);
    CHECK(results.size() >= 8);
    for (const auto& r : results) {
        CAPTURE(r.description);
        CAPTURE(r.message);
        CHECK(r.passed);
    }
}

TEST_CASE("the suite pins the hand-traced and edge cases")
{
    const auto all = nbpc::load_vectors(kVectors);
    const auto hand = find(all, "uniform ell=2 x=10 hand trace");
    CHECK(nbpc::to_hex(hand.bytes) == "388c94");
    CHECK(hand.decoded == BitString::parse("10"));

    const auto empty = find(all, "empty suffix");
    CHECK(empty.decoded.empty());
    const auto e = nbpc::deserialize(empty.bytes);
    CHECK(std::get<nbpc::ArithmeticCode>(e).v == BitString::parse("1"));

    const auto light = find(all, "light bit escaped");
    const auto& code = std::get<nbpc::ArithmeticCode>(nbpc::deserialize(light.bytes));
    CHECK(code.light == std::vector<nbpc::LightBit>{{2, 0}});

    CHECK(nbpc::is_fallback(nbpc::deserialize(find(all, "raw fallback").bytes)));
    CHECK_FALSE(find(all, "markov sampled advice").alpha.has_value());
}

TEST_CASE("lines round-trip through vector_line")
{
    for (const auto& v : nbpc::load_vectors(kVectors)) {
        const auto back = nbpc::parse_vectors(nbpc::vector_line(v));
        REQUIRE(back.size() == 1);
        CHECK(nbpc::vector_line(back[0]) == nbpc::vector_line(v));
    }
}

TEST_CASE("corrupted vectors raise VectorMismatch naming the bit")
{
    const auto all = nbpc::load_vectors(kVectors);
    GoldenVector v = find(all, "uniform ell=2 x=10 hand trace");

    GoldenVector flipped = v;
    flipped.bytes[1] ^= 0x04;  // bit 13
    CHECK_THROWS_WITH_AS(nbpc::verify_vector(flipped), doctest::Contains("bit 13"), nbpc::VectorMismatch);

    GoldenVector wrong_output = v;
    wrong_output.decoded = BitString::parse("11");
    CHECK_THROWS_WITH_AS(nbpc::verify_vector(wrong_output), doctest::Contains("bit 1"), nbpc::VectorMismatch);

    GoldenVector wrong_alpha = v;
    wrong_alpha.alpha = 1;
    CHECK_THROWS_AS(nbpc::verify_vector(wrong_alpha), nbpc::VectorMismatch);

    GoldenVector longer = v;
    longer.bytes.push_back(0);
    CHECK_THROWS_AS(nbpc::verify_vector(longer), nbpc::VectorMismatch);

    GoldenVector built = v;
    built.bytes.clear();
    built.decoded = BitString();
    const auto remade = nbpc::make_vector(built);
    CHECK(remade.bytes == v.bytes);
    CHECK(remade.decoded == v.decoded);
}

TEST_CASE("malformed vector files")
{
    CHECK_THROWS_AS(nbpc::parse_vectors("{\"description\": \"x\"}\n"), nbpc::ConfigError);
    CHECK_THROWS_AS(nbpc::parse_vectors("not json\n"), nbpc::ConfigError);
    CHECK_THROWS_AS(nbpc::load_vectors("/nonexistent/vectors.jsonl"), nbpc::ConfigError);
    CHECK(nbpc::parse_vectors("\n").empty());
}
