#include "profin/matrioshka.hpp"

#include <algorithm>

namespace profin {

namespace {

constexpr long long kTreeBudget = 4096;

int bits_for(long long count) {  // ceil(log2 count), 0 for count == 1
    int b = 0;
    long long c = 1;
    while (c < count) {
        c <<= 1;
        ++b;
    }
    return b;
}

std::string index_bits(long long value, int width) {
    std::string s(width, '0');
    for (int i = 0; i < width; ++i)
        if (value & (1LL << (width - 1 - i))) s[i] = '1';
    return s;
}

}  // namespace

std::string BitSequence::to_string() const {
    std::string s(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

std::vector<uint8_t> BitSequence::parse_bits(const std::string& s) {
    std::vector<uint8_t> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw Error(ErrorKind::Usage, std::string("bad bit '") + c + "' in code");
        out.push_back(c == '1');
    }
    return out;
}

int BlockCode::min_bits(int k) const {
    if (k < 1 || k > static_cast<int>(m_values.size()))
        throw Error(ErrorKind::LevelOrder, "block level out of range");
    return bits_for(m_values[k - 1]);
}

std::string BlockCode::serialize() const {
    std::string out;
    for (size_t k = 0; k < blocks.size(); ++k) {
        if (k) out += "|";
        out += "b" + std::to_string(k + 1) + ":" + blocks[k];
    }
    return out;
}

Cylinder DecodeResult::as_cylinder(const Tower& t) const {
    if (!is_cylinder())
        throw Error(ErrorKind::InvalidCode, "cell is not a single cylinder");
    return Cylinder{&t, level, members[0]};
}

PartitionTree::PartitionTree(const Tower& t, EncodingConvention conv)
    : tower_(&t), conv_(std::move(conv)) {
    if (t.level(t.depth()).order() > kTreeBudget)
        throw Error(ErrorKind::SizeLimit, "partition tree budget is order 4096");
}

BitSequence PartitionTree::encode_chain(const std::vector<int>& chain) const {
    BitSequence out;
    out.convention_version = conv_.version;
    std::vector<int> cell = fiber_over(*tower_, 1, -1);
    for (size_t kz = 0; kz < chain.size(); ++kz) {
        int k = static_cast<int>(kz) + 1;
        int target = chain[kz];
        size_t lo = 0, hi = cell.size();
        size_t at = std::lower_bound(cell.begin(), cell.end(), target) - cell.begin();
        while (hi - lo > 1) {
            size_t half = (hi - lo + 1) / 2;  // ceil
            if (at < lo + half) {
                hi = lo + half;
                out.bits.push_back(0);
            } else {
                lo = lo + half;
                out.bits.push_back(1);
            }
        }
        out.depth_reached = k;
        if (kz + 1 < chain.size()) cell = fiber_over(*tower_, k + 1, target);
    }
    return out;
}

BitSequence PartitionTree::encode(const CoherentElement& x) const {
    return encode_to_level(x, tower_->depth());
}

BitSequence PartitionTree::encode_to_level(const CoherentElement& x, int k) const {
    if (&x.tower() != tower_)
        throw Error(ErrorKind::TowerMismatch, "element from a different tower");
    if (k < 1 || k > tower_->depth())
        throw Error(ErrorKind::LevelOrder, "encode level out of range");
    std::vector<int> chain(x.components().begin(), x.components().begin() + k);
    return encode_chain(chain);
}

DecodeResult PartitionTree::decode(const std::string& bits) const {
    BitSequence seq;
    seq.bits = BitSequence::parse_bits(bits);
    seq.convention_version = conv_.version;
    return decode(seq);
}

DecodeResult PartitionTree::decode(const BitSequence& code) const {
    if (!code.convention_version.empty() && code.convention_version != conv_.version)
        throw Error(ErrorKind::InvalidCode,
                    "code convention '" + code.convention_version +
                        "' does not match tree convention '" + conv_.version + "'");

    const int d = tower_->depth();
    std::vector<int> resolved;  // singleton components fixed so far
    std::vector<int> cell = fiber_over(*tower_, 1, -1);
    size_t lo = 0, hi = cell.size();
    size_t i = 0;
    int k = 1;
    while (true) {
        while (hi - lo > 1 && i < code.bits.size()) {
            size_t half = (hi - lo + 1) / 2;
            if (code.bits[i] == 0)
                hi = lo + half;
            else
                lo = lo + half;
            ++i;
        }
        if (hi - lo > 1) {
            // bits exhausted mid-split: the cell is this clopen chunk
            DecodeResult r;
            r.level = k;
            r.members.assign(cell.begin() + lo, cell.begin() + hi);
            return r;
        }
        int g = cell[lo];
        if (k == d) {
            if (i < code.bits.size())
                throw Error(ErrorKind::InvalidCode,
                            "code leaves the tree at index " + std::to_string(i),
                            static_cast<long long>(i));
            resolved.push_back(g);
            DecodeResult r;
            r.level = k;
            r.members = {g};
            r.element = CoherentElement(*tower_, resolved);
            return r;
        }
        if (i == code.bits.size()) {
            // Proper prefix ending on a singleton: one cylinder. Fibers of
            // size one below it cost no bits, so descend through them first.
            int kk = k, gg = g;
            std::vector<int> chain = resolved;
            chain.push_back(gg);
            while (kk < d) {
                auto f = fiber_over(*tower_, kk + 1, gg);
                if (f.size() != 1) break;
                gg = f[0];
                ++kk;
                chain.push_back(gg);
            }
            DecodeResult r;
            r.level = kk;
            r.members = {gg};
            if (kk == d) r.element = CoherentElement(*tower_, chain);
            return r;
        }
        resolved.push_back(g);
        cell = fiber_over(*tower_, k + 1, g);
        lo = 0;
        hi = cell.size();
        ++k;
    }
}

long long PartitionTree::frontier_leaf_count() const {
    return tower_->level(tower_->depth()).order();
}

BlockCode block_encode(const Tower& t, const CoherentElement& x, EncodingConvention conv) {
    if (&x.tower() != &t)
        throw Error(ErrorKind::TowerMismatch, "element from a different tower");
    for (int k = 1; k <= t.depth(); ++k)
        if (t.level(k).order() > kTreeBudget)
            throw Error(ErrorKind::SizeLimit, "block encoding budget is order 4096");

    BlockCode out;
    out.convention_version = conv.version;
    std::string raw;
    for (int k = 1; k <= t.depth(); ++k) {
        std::vector<int> fiber =
            fiber_over(t, k, k == 1 ? -1 : x.component_index(k - 1));
        size_t at = std::lower_bound(fiber.begin(), fiber.end(), x.component_index(k)) -
                    fiber.begin();
        raw += index_bits(static_cast<long long>(at),
                          bits_for(static_cast<long long>(fiber.size())));
        out.blocks.push_back(raw);
        out.widths.push_back(static_cast<int>(raw.size()));
        out.m_values.push_back(t.level(k).order());
    }
    return out;
}

std::string block_truncate(const BlockCode& code, int k) {
    if (k < 1 || k > static_cast<int>(code.blocks.size()))
        throw Error(ErrorKind::LevelOrder, "block index out of range");
    const std::string& blk = code.blocks[k - 1];
    int unpadded_prev = k == 1 ? 0 : code.widths[k - 2];
    return blk.substr(0, static_cast<size_t>(unpadded_prev));
}

}  // namespace profin
