#include "profin/metric.hpp"

#include <algorithm>

namespace profin {

Word::Word(const std::string& bitstr) : bits_(BitSequence::parse_bits(bitstr)) {
    if (bits_.empty()) throw Error(ErrorKind::EmptyInput, "word must have length >= 1");
}

Word::Word(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw Error(ErrorKind::EmptyInput, "word must have length >= 1");
    for (uint8_t b : bits_)
        if (b > 1) throw Error(ErrorKind::Usage, "word bits must be 0 or 1");
}

std::string Word::to_string() const {
    std::string s(bits_.size(), '0');
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s[i] = '1';
    return s;
}

namespace {

Rational cantor_on(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::LengthMismatch,
                    "cantor distance needs equal lengths (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return pow2_inverse(static_cast<unsigned>(i) + 1);
    return Rational(0);
}

}  // namespace

Rational cantor_distance(const Word& x, const Word& y) {
    return cantor_on(x.bits(), y.bits());
}

Rational cantor_distance(const BitSequence& x, const BitSequence& y) {
    return cantor_on(x.bits, y.bits);
}

size_t hamming(const Word& w, const Word& v) {
    if (w.length() != v.length())
        throw Error(ErrorKind::LengthMismatch,
                    "hamming distance needs equal lengths (" +
                        std::to_string(w.length()) + " vs " + std::to_string(v.length()) +
                        ")");
    size_t d = 0;
    for (size_t i = 0; i < w.length(); ++i)
        if (w.bit(i) != v.bit(i)) ++d;
    return d;
}

bool SubcubeDescriptor::contains(const Word& w) const {
    if (w.length() != n) return false;
    for (size_t i = 0; i < fixed_prefix.size(); ++i)
        if (w.bit(i) != fixed_prefix[i]) return false;
    return true;
}

std::string SubcubeDescriptor::prefix_string() const {
    std::string s(fixed_prefix.size(), '0');
    for (size_t i = 0; i < fixed_prefix.size(); ++i)
        if (fixed_prefix[i]) s[i] = '1';
    return s;
}

SubcubeDescriptor subcube(const std::vector<Word>& words) {
    if (words.empty()) throw Error(ErrorKind::EmptyInput, "subcube of no words");
    size_t n = words[0].length();
    for (const Word& w : words)
        if (w.length() != n)
            throw Error(ErrorKind::LengthMismatch, "subcube needs equal-length words");
    size_t p = n;
    for (size_t i = 0; i < n && p == n; ++i)
        for (size_t j = 1; j < words.size(); ++j)
            if (words[j].bit(i) != words[0].bit(i)) {
                p = i;
                break;
            }
    SubcubeDescriptor d;
    d.n = n;
    d.fixed_prefix.assign(words[0].bits().begin(), words[0].bits().begin() + p);
    d.free_dims = n - p;
    return d;
}

std::vector<Word> hypercube_neighbors(const Word& w) {
    std::vector<Word> out;
    out.reserve(w.length());
    for (size_t i = 0; i < w.length(); ++i) {
        std::vector<uint8_t> b = w.bits();
        b[i] ^= 1;
        out.emplace_back(std::move(b));
    }
    return out;
}

}  // namespace profin
