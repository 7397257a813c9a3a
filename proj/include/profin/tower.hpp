#pragma once

#include <memory>
#include <string>
#include <vector>

#include "profin/finite_group.hpp"

namespace profin {

enum class TowerKind { binary, padic, cyclotomic, f2ab, aut_f2ab, custom };

const char* tower_kind_name(TowerKind k);

/// An inverse system of finite groups G_1 <- G_2 <- ... <- G_d with
/// surjective bonding homomorphisms. Levels are 1-based; level 0 is reserved
/// for "the whole space". A tower is the finite, desk-scale stand-in for a
/// profinite group: only truncations up to `depth` are ever represented.
///
/// Built-in families (make_tower):
///   binary       G_k = k-bit words under XOR, bond drops the last bit
///   padic p      G_k = Z/p^k, bond reduces mod p^(k-1)
///   cyclotomic p G_k = (Z/p^k)^x, bond reduces mod p^(k-1)
///   f2ab         G_k = (Z/2^k)^2, componentwise reduction
///   aut_f2ab     G_k = GL(2, Z/2^k), entrywise reduction
///
/// The construction budget caps the top level at order 4096.
class Tower {
public:
    TowerKind kind() const { return kind_; }
    long long param() const { return param_; }  // the prime p, when applicable
    int depth() const { return static_cast<int>(levels_.size()); }
    const FiniteGroup& level(int k) const;  // 1-based
    const Homomorphism& bond(int k) const;  // G_{k+1} -> G_k, k in 1..depth-1
    /// Canonical one-line spec, e.g. "tower cyclotomic p=3 depth=2".
    std::string spec_line() const;

    /// The first d_prime levels as a tower of their own (groups are shared).
    Tower truncate(int d_prime) const;

    friend Tower make_tower(TowerKind kind, long long p, int depth);
    friend Tower make_custom_tower(std::vector<std::shared_ptr<const FiniteGroup>> groups,
                                   std::vector<std::vector<int>> bond_images,
                                   bool enforce_surjective);

private:
    Tower() = default;
    TowerKind kind_ = TowerKind::custom;
    long long param_ = 0;
    std::vector<std::shared_ptr<const FiniteGroup>> levels_;
    std::vector<Homomorphism> bonds_;
};

Tower make_tower(TowerKind kind, long long p, int depth);

/// Custom towers from explicit groups and bond image lists. With
/// enforce_surjective (the public default) a non-surjective bond is refused;
/// tests may disable it to exercise validate_tower on broken input.
Tower make_custom_tower(std::vector<std::shared_ptr<const FiniteGroup>> groups,
                        std::vector<std::vector<int>> bond_images,
                        bool enforce_surjective = true);

/// Parses either "tower <kind> [p=<p>] depth=<d>" (the leading "tower" is
/// optional) or, for custom towers, group-spec lines followed by
/// "bond <k>: i0 i1 ..." lines.
Tower parse_tower_spec(const std::string& text);

struct TowerValidation {
    struct BondCheck {
        int k;
        bool surjective;
        bool hom_law;
        bool strict_growth;
    };
    std::vector<BondCheck> bonds;
    bool all_ok() const;
};

/// Report-valued: never throws, lists per bond surjectivity, the
/// homomorphism law, and strict order growth.
TowerValidation validate_tower(const Tower& t);

/// Composite bond: sends a level-j element to its level-i shadow (i <= j).
GroupElement project(const Tower& t, const GroupElement& g, int to_level);

/// Level index of the group an element belongs to; TowerMismatch if foreign.
int level_of(const Tower& t, const FiniteGroup& g);

/// A depth-long component chain compatible under the bonds: the finite
/// truncation of a profinite element.
class CoherentElement {
public:
    CoherentElement(const Tower& t, std::vector<int> component_indices);
    static CoherentElement from_labels(const Tower& t,
                                       const std::vector<std::string>& labels);
    static CoherentElement identity(const Tower& t);
    /// Lift a level-n element to the depth-n chain of its projections.
    static CoherentElement from_top(const Tower& t, int top_index);

    const Tower& tower() const { return *tower_; }
    int component_index(int k) const;          // 1-based level
    GroupElement component(int k) const;
    const std::vector<int>& components() const { return comp_; }
    std::string to_string() const;             // comma-joined labels

    bool operator==(const CoherentElement& o) const {
        return tower_ == o.tower_ && comp_ == o.comp_;
    }

private:
    const Tower* tower_;
    std::vector<int> comp_;
};

/// The clopen set of coherent elements whose level-k component equals `base`;
/// level 0 denotes the whole space.
struct Cylinder {
    const Tower* tower = nullptr;
    int level = 0;
    int base_index = -1;  // -1 iff level == 0

    bool contains(const CoherentElement& x) const;
    bool operator==(const Cylinder& o) const = default;
};

Cylinder coset_cylinder(const Tower& t, const CoherentElement& x, int k);

/// Ascending indices of the level-k elements that bond down to `base_lower`
/// at level k-1; k = 1 returns all of G_1.
std::vector<int> fiber_over(const Tower& t, int k, int base_lower);

}  // namespace profin
