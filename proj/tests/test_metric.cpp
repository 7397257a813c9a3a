#include <doctest.h>

#include <random>

#include "profin/metric.hpp"

using namespace profin;

TEST_CASE("words must be nonempty") {
    CHECK_THROWS_AS(Word(""), Error);
    CHECK_THROWS_AS(Word(std::vector<uint8_t>{}), Error);
    CHECK_THROWS_AS(Word("01x"), Error);
}

TEST_CASE("cantor distance examples") {
    Word a("0110"), b("0100");
    CHECK(cantor_distance(a, a) == Rational(0));
    CHECK(cantor_distance(a, b) == Rational(1, 8));   // first difference at k=3
    CHECK(cantor_distance(Word("1000"), Word("0000")) == Rational(1, 2));
    CHECK_THROWS_AS(cantor_distance(Word("01"), Word("011")), Error);
}

TEST_CASE("hamming distance examples and metric axioms") {
    Word w("0101"), v("0110");
    CHECK(hamming(w, w) == 0);
    CHECK(hamming(w, v) == 2);
    CHECK(hamming(Word("0000"), Word("1111")) == 4);
    CHECK_THROWS_AS(hamming(Word("0"), Word("00")), Error);

    // symmetry + triangle inequality on all length-4 triples
    for (int x = 0; x < 16; ++x)
        for (int y = 0; y < 16; ++y) {
            auto word = [](int v) {
                std::string s(4, '0');
                for (int i = 0; i < 4; ++i)
                    if (v & (1 << (3 - i))) s[i] = '1';
                return Word(s);
            };
            CHECK(hamming(word(x), word(y)) == hamming(word(y), word(x)));
            CHECK((hamming(word(x), word(y)) == 0) == (x == y));
            for (int z = 0; z < 16; ++z)
                CHECK(hamming(word(x), word(z)) <=
                      hamming(word(x), word(y)) + hamming(word(y), word(z)));
        }
}

TEST_CASE("strong triangle inequality, exhaustive for short words") {
    for (int n = 1; n <= 5; ++n) {
        int total = 1 << n;
        auto word = [n](int v) {
            std::vector<uint8_t> bits(n);
            for (int i = 0; i < n; ++i) bits[i] = (v >> (n - 1 - i)) & 1;
            return Word(bits);
        };
        for (int x = 0; x < total; ++x)
            for (int y = 0; y < total; ++y)
                for (int z = 0; z < total; ++z) {
                    Rational dxz = cantor_distance(word(x), word(z));
                    Rational dxy = cantor_distance(word(x), word(y));
                    Rational dyz = cantor_distance(word(y), word(z));
                    CHECK(dxz <= std::max(dxy, dyz));
                }
    }
}

TEST_CASE("strong triangle inequality on random length-64 triples") {
    std::mt19937_64 rng(0xC0FFEE);
    auto random_word = [&rng]() {
        std::vector<uint8_t> bits(64);
        for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
        return Word(bits);
    };
    for (int t = 0; t < 2000; ++t) {
        Word x = random_word(), y = random_word(), z = random_word();
        CHECK(cantor_distance(x, z) <=
              std::max(cantor_distance(x, y), cantor_distance(y, z)));
    }
}

TEST_CASE("subcube descriptor") {
    SubcubeDescriptor single = subcube({Word("0101")});
    CHECK(single.n == 4);
    CHECK(single.free_dims == 0);
    CHECK(single.prefix_string() == "0101");

    SubcubeDescriptor two = subcube({Word("0101"), Word("0110")});
    CHECK(two.free_dims == 2);
    CHECK(two.prefix_string() == "01");
    CHECK(two.contains(Word("0101")));
    CHECK(two.contains(Word("0110")));
    CHECK(two.contains(Word("0111")));
    CHECK_FALSE(two.contains(Word("1101")));

    SubcubeDescriptor full = subcube({Word("0000"), Word("1000")});
    CHECK(full.free_dims == 4);
    CHECK(full.prefix_string().empty());

    CHECK_THROWS_AS(subcube({}), Error);
    CHECK_THROWS_AS(subcube({Word("01"), Word("011")}), Error);
}

TEST_CASE("subcube soundness: members agree on the prefix, differ just after") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Word> words;
        int m = 2 + static_cast<int>(rng() % 5);
        for (int i = 0; i < m; ++i) {
            std::vector<uint8_t> bits(10);
            for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
            words.emplace_back(bits);
        }
        SubcubeDescriptor d = subcube(words);
        for (const Word& w : words) CHECK(d.contains(w));
        if (d.free_dims > 0) {
            size_t p = 10 - d.free_dims;
            bool differ = false;
            for (size_t j = 1; j < words.size() && !differ; ++j)
                differ = words[j].bit(p) != words[0].bit(p);
            CHECK(differ);
        }
    }
}

TEST_CASE("recursive hypercube structure") {
    // the (n+1)-cube is two n-cubes joined by the last bit, so every vertex
    // has exactly n+1 neighbors and exactly one of them flips the last bit
    for (int n = 1; n <= 6; ++n) {
        for (int v = 0; v < (1 << n); ++v) {
            std::vector<uint8_t> bits(n);
            for (int i = 0; i < n; ++i) bits[i] = (v >> (n - 1 - i)) & 1;
            Word w(bits);
            auto nb = hypercube_neighbors(w);
            CHECK(nb.size() == static_cast<size_t>(n));
            int last_bit_flips = 0;
            for (const Word& u : nb) {
                CHECK(hamming(w, u) == 1);
                if (u.bit(n - 1) != w.bit(n - 1)) ++last_bit_flips;
            }
            CHECK(last_bit_flips == 1);
        }
    }
}
