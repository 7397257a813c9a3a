#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "profin/matrioshka.hpp"
#include "profin/rational.hpp"

namespace profin {

/// A fixed-length binary word: a vertex of the |w|-dimensional hypercube.
class Word {
public:
    explicit Word(const std::string& bitstr);
    explicit Word(std::vector<uint8_t> bits);
    static Word from_sequence(const BitSequence& seq) { return Word(seq.bits); }

    size_t length() const { return bits_.size(); }
    int bit(size_t i) const { return bits_[i]; }  // 0-based
    const std::vector<uint8_t>& bits() const { return bits_; }
    std::string to_string() const;

    bool operator==(const Word& o) const = default;

private:
    std::vector<uint8_t> bits_;
};

/// d(x,y) = 1/2^k with k the first differing 1-based index; 0 when equal.
/// Exact rational, so the strong triangle inequality can be checked without
/// floating error. Lengths must agree; nothing is truncated implicitly.
Rational cantor_distance(const Word& x, const Word& y);
Rational cantor_distance(const BitSequence& x, const BitSequence& y);

/// Number of differing coordinates; two words are hypercube-adjacent iff 1.
size_t hamming(const Word& w, const Word& v);

/// The subcube of all words sharing a fixed prefix: 2^(n-p) vertices.
struct SubcubeDescriptor {
    size_t n;
    std::vector<uint8_t> fixed_prefix;  // length p
    size_t free_dims;                   // n - p

    bool contains(const Word& w) const;
    std::string prefix_string() const;
};

/// Descriptor of the smallest prefix-subcube containing all input words:
/// p is the longest common prefix over the whole set.
SubcubeDescriptor subcube(const std::vector<Word>& words);

/// All n words at Hamming distance exactly 1.
std::vector<Word> hypercube_neighbors(const Word& w);

}  // namespace profin
