#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "profin/errors.hpp"

namespace profin {

enum class GroupKind { cyclic, units_mod, product, gl2_mod, from_table };

const char* group_kind_name(GroupKind k);

/// A finite group given by its full Cayley table over canonically ordered,
/// canonically labelled elements. The label ordering fixed here is the
/// tie-breaking convention inherited by every encoding downstream, so it is
/// part of the public contract:
///   cyclic n    - residues "0".."n-1" ascending
///   units n     - residues coprime to n, ascending
///   product     - lexicographic on (left index, right index); label "a:b"
///   gl2 2^k     - row-major entries as a 4-digit label "abcd", lexicographic
///   from_table  - the given order
///
/// Construction validates the group axioms: identity, Latin-square rows and
/// columns, and associativity (exhaustive for order <= 64, 10^5 deterministic
/// random triples above). Instances are immutable after construction.
class FiniteGroup {
public:
    static FiniteGroup cyclic(long long n);
    static FiniteGroup units_mod(long long n);
    static FiniteGroup product(const FiniteGroup& g, const FiniteGroup& h);
    static FiniteGroup gl2_mod(long long modulus);  // modulus = 2^k, k <= 3
    static FiniteGroup from_table(std::vector<std::string> labels,
                                  std::vector<std::vector<int>> table);

    int order() const { return order_; }
    GroupKind kind() const { return kind_; }
    /// Structural parameter: n for cyclic/units, matrix modulus for gl2, 0 otherwise.
    long long modulus() const { return modulus_; }
    int identity() const { return identity_; }

    int op(int a, int b) const { return table_[static_cast<size_t>(a) * order_ + b]; }
    int inverse(int a) const { return inverse_[a]; }
    int element_order(int a) const;
    bool is_abelian() const;

    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Throws UnknownLabel when no element carries the label.
    int index_of(const std::string& label) const;

private:
    FiniteGroup(GroupKind kind, long long modulus, std::vector<std::string> labels,
                std::vector<int> flat_table);
    void validate() const;

    GroupKind kind_;
    long long modulus_;
    int order_;
    int identity_;
    std::vector<std::string> labels_;
    std::vector<int> table_;  // row-major order_ x order_
    std::vector<int> inverse_;
    std::map<std::string, int> label_index_;
};

/// An element is a (group, index) pair; indices follow the canonical order.
struct GroupElement {
    const FiniteGroup* group = nullptr;
    int index = 0;

    const std::string& label() const { return group->label(index); }
    bool operator==(const GroupElement& o) const = default;
};

GroupElement multiply(const GroupElement& g, const GroupElement& h);

/// A map between groups given by the image of every source element.
/// Construction checks image(e) = e and the homomorphism law on all pairs.
class Homomorphism {
public:
    Homomorphism(const FiniteGroup& source, const FiniteGroup& target,
                 std::vector<int> image);

    const FiniteGroup& source() const { return *source_; }
    const FiniteGroup& target() const { return *target_; }
    int apply(int source_index) const { return image_[source_index]; }
    GroupElement apply(const GroupElement& g) const;
    bool surjective() const { return surjective_; }
    const std::vector<int>& image() const { return image_; }

private:
    const FiniteGroup* source_;
    const FiniteGroup* target_;
    std::vector<int> image_;
    bool surjective_;
};

/// A bijective endomorphism, stored as the permutation it induces.
class Automorphism {
public:
    Automorphism(const FiniteGroup& group, std::vector<int> image);

    const FiniteGroup& group() const { return *group_; }
    int apply(int i) const { return image_[i]; }
    const std::vector<int>& image() const { return image_; }

private:
    const FiniteGroup* group_;
    std::vector<int> image_;
};

/// Complete list of automorphisms by brute force over generator images with
/// early order pruning; result sorted lexicographically on the image list.
/// Orders above 4096 are refused (SizeLimit).
std::vector<Automorphism> enumerate_automorphisms(const FiniteGroup& g);

/// The image of the prime q in the units group modulo p^n: the element whose
/// label is q mod p^n. `units_pn` must be a units_mod group; q = p is
/// ramified and refused.
GroupElement frobenius_element(const FiniteGroup& units_pn, long long p, long long q);

/// One-line group spec grammar:
///   cyclic N | units N | product <spec> <spec> | gl2 2^K | table <file>
FiniteGroup make_group(const std::string& spec);

}  // namespace profin
