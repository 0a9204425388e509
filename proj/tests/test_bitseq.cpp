#include <random>
#include <stdexcept>

#include <catch2/catch_amalgamated.hpp>

#include "seqpred/bitseq.hpp"

using namespace seqpred;

namespace {

BitSeq random_bits(std::mt19937_64& rng, std::size_t n) {
    BitSeq a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(rng() & 1);
    return a;
}

} // namespace

TEST_CASE("extract_p follows the offset table") {
    BitSeq a = BitSeq::from_string("011010");
    CHECK(extract_p(a, 0).to_string() == "00"); // a0 a3
    CHECK(extract_p(a, 2).to_string() == "11"); // a1 a4
    CHECK(extract_p(a, 1).to_string() == "10"); // a2 a5

    SECTION("P^1 takes offset 2: a2 a5 a8 ...") {
        BitSeq b = BitSeq::from_string("001000001");
        CHECK(extract_p(b, 1).to_string() == "101");
    }

    SECTION("incomplete trailing triples are discarded") {
        CHECK(extract_p(BitSeq::from_string("0110100"), 0).size() == 2);
        CHECK(extract_p(BitSeq::from_string("01"), 0).empty());
    }

    CHECK_THROWS_AS(extract_p(a, 3), std::invalid_argument);
    CHECK_THROWS_AS(extract_p(a, -1), std::invalid_argument);
}

TEST_CASE("sum_s XORs within triples") {
    BitSeq a = BitSeq::from_string("011010");
    CHECK(sum_s(a, 1).to_string() == "10"); // a0^a2, a3^a5
    CHECK(sum_s(a, 2).to_string() == "01"); // a1^a2, a4^a5
    CHECK_THROWS_AS(sum_s(a, 0), std::invalid_argument);
    CHECK_THROWS_AS(sum_s(a, 3), std::invalid_argument);
}

TEST_CASE("interleave is the inverse of extract_p") {
    CHECK(interleave(BitSeq::from_string("00"), BitSeq::from_string("11"),
                     BitSeq::from_string("00"))
              .to_string() == "001001");
    CHECK(interleave(BitSeq{}, BitSeq{}, BitSeq{}).empty());
    CHECK_THROWS_AS(interleave(BitSeq::from_string("0"), BitSeq{}, BitSeq{}),
                    std::invalid_argument);

    SECTION("round trip on random triples") {
        std::mt19937_64 rng(41);
        for (int rep = 0; rep < 50; ++rep) {
            BitSeq x = random_bits(rng, 64);
            BitSeq y = random_bits(rng, 64);
            BitSeq z = random_bits(rng, 64);
            BitSeq r = interleave(x, y, z);
            CHECK(extract_p(r, 0) == x);
            CHECK(extract_p(r, 1) == y);
            CHECK(extract_p(r, 2) == z);
        }
    }
}

TEST_CASE("sum_s equals XOR of extractions") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        BitSeq a = random_bits(rng, 3 * (rng() % 40) + 3);
        CHECK(sum_s(a, 1) == xor_seq(extract_p(a, 0), extract_p(a, 1)));
        CHECK(sum_s(a, 2) == xor_seq(extract_p(a, 2), extract_p(a, 1)));
    }
}

TEST_CASE("fraction_ones is an exact rational") {
    CHECK(fraction_ones(BitSeq::from_string("0110"), 4) == Rat(1, 2));
    CHECK(fraction_ones(BitSeq::ones(37), 37) == Rat(1));
    CHECK(fraction_ones(BitSeq::from_string("000"), 3) == Rat(0));
    CHECK(fraction_ones(BitSeq::from_string("0110"), 3) == Rat(2, 3));
    CHECK_THROWS_AS(fraction_ones(BitSeq::from_string("01"), 0), std::invalid_argument);
    CHECK_THROWS_AS(fraction_ones(BitSeq::from_string("01"), 3), std::invalid_argument);
}

TEST_CASE("xor_seq") {
    CHECK(xor_seq(BitSeq::from_string("0101"), BitSeq::zeros(4)).to_string() == "0101");
    CHECK(xor_seq(BitSeq::from_string("0110"), BitSeq::from_string("1011")).to_string() ==
          "1101");
    std::mt19937_64 rng(43);
    BitSeq a = random_bits(rng, 100);
    CHECK(xor_seq(a, a) == BitSeq::zeros(100));
    CHECK(fraction_ones(xor_seq(a, a), 100) == Rat(0));
    CHECK_THROWS_AS(xor_seq(a, BitSeq::zeros(99)), std::invalid_argument);
}

TEST_CASE("bit file parsing") {
    CHECK(parse_bits("0 1\n1\t0\r\n") == BitSeq::from_string("0110"));
    CHECK(parse_bits("").empty());

    SECTION("invalid byte reports its offset") {
        try {
            parse_bits("0101x01");
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.where() == 4);
        }
    }

    SECTION("format/parse round trip") {
        std::mt19937_64 rng(44);
        BitSeq a = random_bits(rng, 1000);
        CHECK(parse_bits(format_bits(a)) == a);
    }
}
