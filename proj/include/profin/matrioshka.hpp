#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "profin/tower.hpp"

namespace profin {

/// The convention that makes the encoding total and reproducible. Both rules
/// are frozen; the version string travels with every serialized artifact, and
/// codes from different versions never compare equal.
///   ordering_rule: cells list elements in the canonical label order.
///   split_rule:    an ordered cell of size m splits into its first
///                  ceil(m/2) elements (bit 0) and last floor(m/2) (bit 1).
struct EncodingConvention {
    std::string version = "cm-1";
    bool operator==(const EncodingConvention& o) const = default;
};

/// A root-to-node path in the partition tree of some tower.
struct BitSequence {
    std::vector<uint8_t> bits;
    int depth_reached = 0;  // deepest tower level fully resolved by the path
    std::string convention_version;

    std::string to_string() const;
    static std::vector<uint8_t> parse_bits(const std::string& s);
};

/// Per-level fixed-width words. Block k lists, level by level, the
/// within-fiber index of the element's component, each fiber index in
/// ceil(log2(fiber size)) bits; the width therefore never falls below
/// ceil(log2 |G_k|) and equals it whenever every fiber is a power of two.
/// Truncating block k to the width of block k-1 recovers block k-1 exactly.
struct BlockCode {
    std::vector<std::string> blocks;     // '0'/'1' strings, one per level
    std::vector<int> widths;             // widths[k-1] = blocks[k-1].size()
    std::vector<long long> m_values;     // |G_k|
    std::string convention_version;

    /// Minimal bits for level k's order: ceil(log2 m_k).
    int min_bits(int k) const;
    std::string serialize() const;  // "b1:...|b2:...|..."
};

/// Result of walking a code through the partition tree: either the unique
/// coherent element (all bits consumed at a frontier leaf) or the clopen cell
/// the proper prefix denotes - a set of level-`level` elements, i.e. a union
/// of same-level cylinders (a single cylinder when the cell is a singleton).
struct DecodeResult {
    std::optional<CoherentElement> element;
    int level = 0;
    std::vector<int> members;  // cell member indices at `level`

    bool is_element() const { return element.has_value(); }
    bool is_cylinder() const { return !is_element() && members.size() == 1; }
    Cylinder as_cylinder(const Tower& t) const;
};

/// The recursive clopen bipartition of a tower's element space. Within level
/// k, cells are canonically ordered element lists split by the convention's
/// halving rule until singletons; each singleton then expands to its ordered
/// fiber in level k+1 and splitting resumes. The tree is a pure function of
/// (tower, convention) and is walked on demand rather than materialized.
class PartitionTree {
public:
    explicit PartitionTree(const Tower& t, EncodingConvention conv = {});

    const Tower& tower() const { return *tower_; }
    const EncodingConvention& convention() const { return conv_; }

    BitSequence encode(const CoherentElement& x) const;
    /// The path resolving x only down to tower level k (a prefix of encode).
    BitSequence encode_to_level(const CoherentElement& x, int k) const;
    /// Path for an explicit component chain covering levels 1..chain.size().
    BitSequence encode_chain(const std::vector<int>& chain) const;

    DecodeResult decode(const BitSequence& code) const;
    DecodeResult decode(const std::string& bits) const;

    /// Number of frontier leaves = number of depth-d elements.
    long long frontier_leaf_count() const;

private:
    const Tower* tower_;
    EncodingConvention conv_;
};

/// The fixed-width per-level encoding with built-in truncation coherence.
BlockCode block_encode(const Tower& t, const CoherentElement& x,
                       EncodingConvention conv = {});

/// Block k with the leading pad removed and cut to the unpadded width of
/// level k-1; equals block k-1 (pad stripped) for every element.
std::string block_truncate(const BlockCode& code, int k);

}  // namespace profin
