#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hst/bits.hpp"

using namespace hst;

static std::string gamma_str(uint64_t n) {
    BitBuf b;
    gamma_encode(b, n);
    return b.to_string();
}

TEST_CASE("gamma small codewords") {
    CHECK(gamma_str(1) == "1");
    CHECK(gamma_str(2) == "010");
    CHECK(gamma_str(5) == "00101");
    CHECK_THROWS_AS(gamma_str(0), std::invalid_argument);
}

TEST_CASE("gamma truncated stream") {
    BitBuf b = BitBuf::from_string("001");
    BitReader r(b);
    CHECK_THROWS_AS(gamma_decode(r), MalformedStream);
    BitBuf z = BitBuf::from_string("0000");
    BitReader rz(z);
    CHECK_THROWS_AS(gamma_decode(rz), MalformedStream);
}

TEST_CASE("gamma roundtrip and length") {
    BitBuf b;
    for (uint64_t n = 1; n <= (1u << 16); ++n) gamma_encode(b, n);
    BitReader r(b);
    for (uint64_t n = 1; n <= (1u << 16); ++n) {
        size_t before = r.pos();
        REQUIRE(gamma_decode(r) == n);
        // oracle: floor(lg n) by repeated halving
        size_t lg = 0;
        for (uint64_t x = n; x > 1; x >>= 1) ++lg;
        REQUIRE(r.pos() - before == 2 * lg + 1);
    }
    CHECK(r.remaining() == 0);

    std::mt19937_64 rng(7);
    BitBuf c;
    std::vector<uint64_t> vals;
    for (int i = 0; i < 20000; ++i) {
        uint64_t v = 1 + (rng() & ((uint64_t(1) << 40) - 1));
        vals.push_back(v);
        gamma_encode(c, v);
    }
    BitReader rc(c);
    for (uint64_t v : vals) REQUIRE(gamma_decode(rc) == v);
}

TEST_CASE("bitbuf bytes are msb first") {
    BitBuf b = BitBuf::from_string("1010000011");
    REQUIRE(b.bytes().size() == 2);
    CHECK(b.bytes()[0] == 0xA0);
    CHECK(b.bytes()[1] == 0xC0);
    BitBuf c = BitBuf::from_bytes(b.bytes(), 10);
    CHECK(c == b);
    CHECK(b.get_bits(0, 4) == 0xA);
    BitBuf d = BitBuf::from_string("1");
    d.append(b);
    CHECK(d.to_string() == "11010000011");
}

TEST_CASE("var cell array") {
    VarCellArray a({BitBuf::from_string("1"), BitBuf::from_string("00"), BitBuf::from_string("111")});
    CHECK(a.access(0).offset == 0);
    CHECK(a.access(1).offset == 1);
    CHECK(a.access(2).offset == 3);
    CHECK(a.access(2).length == 3);
    CHECK(a.total_bits() == 6);
    CHECK(a.cell(1).to_string() == "00");
    CHECK_THROWS_AS(a.access(3), std::out_of_range);

    std::mt19937_64 rng(3);
    std::vector<BitBuf> cells;
    for (int i = 0; i < 1000; ++i) {
        BitBuf b;
        size_t len = rng() % 40;
        for (size_t k = 0; k < len; ++k) b.push_bit(rng() & 1);
        cells.push_back(b);
    }
    VarCellArray big(cells);
    size_t off = 0;
    for (size_t i = 0; i < cells.size(); ++i) {
        REQUIRE(big.access(i).offset == off);
        REQUIRE(big.cell(i) == cells[i]);
        off += cells[i].size();
    }
}
