#include "profin/tower.hpp"

#include <algorithm>
#include <sstream>

namespace profin {

namespace {

constexpr long long kTopOrderBudget = 4096;

// Saturates above the budget so oversized requests fail the budget check
// instead of overflowing.
long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) {
        if (r > 2 * kTopOrderBudget) return 2 * kTopOrderBudget + 1;
        r *= b;
    }
    return r;
}

long long euler_phi_prime_power(long long p, int k) {
    return ipow(p, k - 1) * (p - 1);
}

long long gl2_order(long long p, int k) {
    // |GL(2, Z/p^k)| = p^(4(k-1)) (p^2-1)(p^2-p)
    return ipow(p, 4 * (k - 1)) * (p * p - 1) * (p * p - p);
}

// k-bit words under XOR; labels are the words themselves, ascending, so the
// element index equals the word's value read MSB-first.
FiniteGroup binary_words(int k) {
    int n = 1 << k;
    std::vector<std::string> labels(n);
    for (int v = 0; v < n; ++v) {
        std::string s(k, '0');
        for (int b = 0; b < k; ++b)
            if (v & (1 << (k - 1 - b))) s[b] = '1';
        labels[v] = s;
    }
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table[a][b] = a ^ b;
    return FiniteGroup::from_table(std::move(labels), std::move(table));
}

std::vector<int> reduction_images(const FiniteGroup& upper, const FiniteGroup& lower,
                                  TowerKind kind, int upper_level) {
    std::vector<int> img(upper.order());
    switch (kind) {
        case TowerKind::binary:
            for (int i = 0; i < upper.order(); ++i) img[i] = i >> 1;
            break;
        case TowerKind::padic:
            for (int i = 0; i < upper.order(); ++i)
                img[i] = static_cast<int>(i % lower.modulus());
            break;
        case TowerKind::cyclotomic:
            for (int i = 0; i < upper.order(); ++i) {
                long long r = std::stoll(upper.label(i)) % lower.modulus();
                img[i] = lower.index_of(std::to_string(r));
            }
            break;
        case TowerKind::f2ab: {
            long long mu = 1LL << upper_level;        // component modulus above
            long long ml = mu / 2;                    // and below
            for (int i = 0; i < upper.order(); ++i) {
                long long a = i / mu, b = i % mu;
                img[i] = static_cast<int>((a % ml) * ml + (b % ml));
            }
            break;
        }
        case TowerKind::aut_f2ab: {
            long long ml = lower.modulus();
            for (int i = 0; i < upper.order(); ++i) {
                const std::string& lab = upper.label(i);
                std::string down;
                for (char c : lab) down += std::to_string((c - '0') % ml);
                img[i] = lower.index_of(down);
            }
            break;
        }
        case TowerKind::custom:
            throw Error(ErrorKind::KindMismatch, "custom towers carry explicit bonds");
    }
    return img;
}

}  // namespace

const char* tower_kind_name(TowerKind k) {
    switch (k) {
        case TowerKind::binary: return "binary";
        case TowerKind::padic: return "padic";
        case TowerKind::cyclotomic: return "cyclotomic";
        case TowerKind::f2ab: return "f2ab";
        case TowerKind::aut_f2ab: return "aut_f2ab";
        case TowerKind::custom: return "custom";
    }
    return "?";
}

const FiniteGroup& Tower::level(int k) const {
    if (k < 1 || k > depth())
        throw Error(ErrorKind::LevelOrder, "level " + std::to_string(k) + " out of range");
    return *levels_[k - 1];
}

const Homomorphism& Tower::bond(int k) const {
    if (k < 1 || k > depth() - 1)
        throw Error(ErrorKind::LevelOrder, "bond " + std::to_string(k) + " out of range");
    return bonds_[k - 1];
}

std::string Tower::spec_line() const {
    std::ostringstream out;
    out << "tower " << tower_kind_name(kind_);
    if (kind_ == TowerKind::padic || kind_ == TowerKind::cyclotomic)
        out << " p=" << param_;
    out << " depth=" << depth();
    return out.str();
}

Tower Tower::truncate(int d_prime) const {
    if (d_prime < 1 || d_prime > depth())
        throw Error(ErrorKind::LevelOrder, "truncation depth out of range");
    Tower t;
    t.kind_ = kind_;
    t.param_ = param_;
    t.levels_.assign(levels_.begin(), levels_.begin() + d_prime);
    t.bonds_.assign(bonds_.begin(), bonds_.begin() + (d_prime - 1));
    return t;
}

Tower make_tower(TowerKind kind, long long p, int depth) {
    if (depth < 1) throw Error(ErrorKind::Usage, "tower depth must be >= 1");
    if ((kind == TowerKind::padic || kind == TowerKind::cyclotomic) &&
        (p < 2 || p > kTopOrderBudget + 1))
        throw Error(ErrorKind::Usage, "p must be a prime in [2, 4097]");
    long long top = 0;
    switch (kind) {
        case TowerKind::binary: top = ipow(2, depth); break;
        case TowerKind::padic: top = ipow(p, depth); break;
        case TowerKind::cyclotomic: top = euler_phi_prime_power(p, depth); break;
        case TowerKind::f2ab: top = ipow(4, depth); break;
        case TowerKind::aut_f2ab: top = gl2_order(2, depth); break;
        case TowerKind::custom:
            throw Error(ErrorKind::Usage, "use make_custom_tower for custom towers");
    }
    if (top > kTopOrderBudget)
        throw Error(ErrorKind::SizeLimit, "top level order " + std::to_string(top) +
                                              " exceeds budget 4096");

    Tower t;
    t.kind_ = kind;
    t.param_ = (kind == TowerKind::padic || kind == TowerKind::cyclotomic) ? p : 0;
    for (int k = 1; k <= depth; ++k) {
        switch (kind) {
            case TowerKind::binary:
                t.levels_.push_back(std::make_shared<FiniteGroup>(binary_words(k)));
                break;
            case TowerKind::padic:
                t.levels_.push_back(
                    std::make_shared<FiniteGroup>(FiniteGroup::cyclic(ipow(p, k))));
                break;
            case TowerKind::cyclotomic:
                t.levels_.push_back(
                    std::make_shared<FiniteGroup>(FiniteGroup::units_mod(ipow(p, k))));
                break;
            case TowerKind::f2ab: {
                FiniteGroup c = FiniteGroup::cyclic(ipow(2, k));
                t.levels_.push_back(
                    std::make_shared<FiniteGroup>(FiniteGroup::product(c, c)));
                break;
            }
            case TowerKind::aut_f2ab:
                t.levels_.push_back(
                    std::make_shared<FiniteGroup>(FiniteGroup::gl2_mod(ipow(2, k))));
                break;
            case TowerKind::custom: break;
        }
    }
    for (int k = 1; k < depth; ++k) {
        auto img = reduction_images(*t.levels_[k], *t.levels_[k - 1], kind, k + 1);
        t.bonds_.emplace_back(*t.levels_[k], *t.levels_[k - 1], std::move(img));
        if (!t.bonds_.back().surjective())
            throw Error(ErrorKind::BondNotSurjective,
                        "bond " + std::to_string(k) + " is not onto");
    }
    return t;
}

Tower make_custom_tower(std::vector<std::shared_ptr<const FiniteGroup>> groups,
                        std::vector<std::vector<int>> bond_images,
                        bool enforce_surjective) {
    if (groups.empty()) throw Error(ErrorKind::Usage, "custom tower needs >= 1 level");
    if (bond_images.size() + 1 != groups.size())
        throw Error(ErrorKind::Usage, "need exactly depth-1 bonds");
    Tower t;
    t.kind_ = TowerKind::custom;
    t.levels_ = std::move(groups);
    for (size_t k = 0; k + 1 < t.levels_.size(); ++k) {
        t.bonds_.emplace_back(*t.levels_[k + 1], *t.levels_[k], std::move(bond_images[k]));
        if (enforce_surjective && !t.bonds_.back().surjective())
            throw Error(ErrorKind::BondNotSurjective,
                        "bond " + std::to_string(k + 1) + " is not onto");
    }
    return t;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

Tower parse_tower_line(std::vector<std::string> toks) {
    if (!toks.empty() && toks[0] == "tower") toks.erase(toks.begin());
    if (toks.empty()) throw Error(ErrorKind::Usage, "empty tower spec");
    std::string kind_name = toks[0];
    long long p = 0;
    int depth = -1;
    for (size_t i = 1; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if (t.rfind("p=", 0) == 0)
            p = std::stoll(t.substr(2));
        else if (t.rfind("depth=", 0) == 0)
            depth = static_cast<int>(std::stoll(t.substr(6)));
        else
            throw Error(ErrorKind::Usage, "unknown tower spec token '" + t + "'");
    }
    TowerKind kind;
    if (kind_name == "binary") kind = TowerKind::binary;
    else if (kind_name == "padic") kind = TowerKind::padic;
    else if (kind_name == "cyclotomic") kind = TowerKind::cyclotomic;
    else if (kind_name == "f2ab") kind = TowerKind::f2ab;
    else if (kind_name == "aut_f2ab") kind = TowerKind::aut_f2ab;
    else throw Error(ErrorKind::Usage, "unknown tower kind '" + kind_name + "'");
    if ((kind == TowerKind::padic || kind == TowerKind::cyclotomic) && p == 0)
        throw Error(ErrorKind::Usage, kind_name + " tower needs p=<prime>");
    if (depth < 0) throw Error(ErrorKind::Usage, "tower spec needs depth=<d>");
    return make_tower(kind, p, depth);
}

}  // namespace

Tower parse_tower_spec(const std::string& text) {
    // Collect non-empty lines; a single "tower ..." line is a built-in family,
    // anything else is the custom grammar.
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto toks = split_ws(line);
            if (!toks.empty()) lines.push_back(line);
        }
    }
    if (lines.empty()) throw Error(ErrorKind::Usage, "empty tower spec");
    auto first = split_ws(lines[0]);
    if (first[0] == "tower" || lines.size() == 1) {
        if (lines.size() != 1)
            throw Error(ErrorKind::Usage, "built-in tower spec must be one line");
        return parse_tower_line(first);
    }

    std::vector<std::shared_ptr<const FiniteGroup>> groups;
    std::vector<std::vector<int>> bonds;
    for (const auto& line : lines) {
        auto toks = split_ws(line);
        if (toks[0] == "bond") {
            // "bond <k>: i0 i1 ..."
            if (toks.size() < 2) throw Error(ErrorKind::Usage, "bad bond line");
            std::string kt = toks[1];
            if (!kt.empty() && kt.back() == ':') kt.pop_back();
            size_t k = static_cast<size_t>(std::stoll(kt));
            if (k < 1 || k >= groups.size())
                throw Error(ErrorKind::Usage, "bond index out of range");
            std::vector<int> img;
            for (size_t i = 2; i < toks.size(); ++i)
                img.push_back(static_cast<int>(std::stoll(toks[i])));
            bonds.resize(std::max(bonds.size(), k));
            bonds[k - 1] = std::move(img);
        } else {
            groups.push_back(std::make_shared<FiniteGroup>(make_group(line)));
        }
    }
    long long top = groups.empty() ? 0 : groups.back()->order();
    if (top > kTopOrderBudget)
        throw Error(ErrorKind::SizeLimit, "top level order exceeds budget 4096");
    return make_custom_tower(std::move(groups), std::move(bonds));
}

bool TowerValidation::all_ok() const {
    for (const auto& b : bonds)
        if (!b.surjective || !b.hom_law || !b.strict_growth) return false;
    return true;
}

TowerValidation validate_tower(const Tower& t) {
    TowerValidation v;
    for (int k = 1; k < t.depth(); ++k) {
        const Homomorphism& b = t.bond(k);
        const FiniteGroup& up = t.level(k + 1);
        bool hom = true;
        if (b.apply(up.identity()) != t.level(k).identity()) hom = false;
        for (int a = 0; a < up.order() && hom; ++a)
            for (int c = 0; c < up.order() && hom; ++c)
                if (b.apply(up.op(a, c)) != t.level(k).op(b.apply(a), b.apply(c)))
                    hom = false;
        v.bonds.push_back({k, b.surjective(), hom,
                           t.level(k + 1).order() > t.level(k).order()});
    }
    return v;
}

int level_of(const Tower& t, const FiniteGroup& g) {
    for (int k = 1; k <= t.depth(); ++k)
        if (&t.level(k) == &g) return k;
    throw Error(ErrorKind::TowerMismatch, "group is not a level of this tower");
}

GroupElement project(const Tower& t, const GroupElement& g, int to_level) {
    int j = level_of(t, *g.group);
    if (to_level > j)
        throw Error(ErrorKind::LevelOrder, "cannot project level " + std::to_string(j) +
                                               " up to " + std::to_string(to_level));
    if (to_level < 1)
        throw Error(ErrorKind::LevelOrder, "projection target below level 1");
    int idx = g.index;
    for (int k = j; k > to_level; --k) idx = t.bond(k - 1).apply(idx);
    return {&t.level(to_level), idx};
}

CoherentElement::CoherentElement(const Tower& t, std::vector<int> component_indices)
    : tower_(&t), comp_(std::move(component_indices)) {
    if (comp_.size() != static_cast<size_t>(t.depth()))
        throw Error(ErrorKind::LengthMismatch, "need one component per level");
    for (int k = 1; k <= t.depth(); ++k)
        if (comp_[k - 1] < 0 || comp_[k - 1] >= t.level(k).order())
            throw Error(ErrorKind::UnknownLabel,
                        "component index out of range at level " + std::to_string(k));
    for (int k = 1; k < t.depth(); ++k)
        if (t.bond(k).apply(comp_[k]) != comp_[k - 1])
            throw Error(ErrorKind::IncoherentAtLevel,
                        "components incompatible at level " + std::to_string(k), k);
}

CoherentElement CoherentElement::from_labels(const Tower& t,
                                             const std::vector<std::string>& labels) {
    if (labels.size() != static_cast<size_t>(t.depth()))
        throw Error(ErrorKind::LengthMismatch, "need one label per level");
    std::vector<int> comp(labels.size());
    for (size_t i = 0; i < labels.size(); ++i)
        comp[i] = t.level(static_cast<int>(i) + 1).index_of(labels[i]);
    return CoherentElement(t, std::move(comp));
}

CoherentElement CoherentElement::identity(const Tower& t) {
    std::vector<int> comp(t.depth());
    for (int k = 1; k <= t.depth(); ++k) comp[k - 1] = t.level(k).identity();
    return CoherentElement(t, std::move(comp));
}

CoherentElement CoherentElement::from_top(const Tower& t, int top_index) {
    std::vector<int> comp(t.depth());
    int idx = top_index;
    for (int k = t.depth(); k >= 1; --k) {
        comp[k - 1] = idx;
        if (k > 1) idx = t.bond(k - 1).apply(idx);
    }
    return CoherentElement(t, std::move(comp));
}

int CoherentElement::component_index(int k) const {
    if (k < 1 || k > tower_->depth())
        throw Error(ErrorKind::LevelOrder, "component level out of range");
    return comp_[k - 1];
}

GroupElement CoherentElement::component(int k) const {
    return {&tower_->level(k), component_index(k)};
}

std::string CoherentElement::to_string() const {
    std::string out;
    for (int k = 1; k <= tower_->depth(); ++k) {
        if (k > 1) out += ",";
        out += tower_->level(k).label(comp_[k - 1]);
    }
    return out;
}

bool Cylinder::contains(const CoherentElement& x) const {
    if (&x.tower() != tower)
        throw Error(ErrorKind::TowerMismatch, "element from a different tower");
    if (level == 0) return true;
    return x.component_index(level) == base_index;
}

Cylinder coset_cylinder(const Tower& t, const CoherentElement& x, int k) {
    if (&x.tower() != &t)
        throw Error(ErrorKind::TowerMismatch, "element from a different tower");
    if (k < 0 || k > t.depth())
        throw Error(ErrorKind::LevelOrder, "cylinder level out of range");
    if (k == 0) return Cylinder{&t, 0, -1};
    return Cylinder{&t, k, x.component_index(k)};
}

std::vector<int> fiber_over(const Tower& t, int k, int base_lower) {
    if (k < 1 || k > t.depth())
        throw Error(ErrorKind::LevelOrder, "fiber level out of range");
    std::vector<int> out;
    if (k == 1) {
        out.resize(t.level(1).order());
        for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
        return out;
    }
    const Homomorphism& b = t.bond(k - 1);
    for (int i = 0; i < t.level(k).order(); ++i)
        if (b.apply(i) == base_lower) out.push_back(i);
    return out;
}

}  // namespace profin
