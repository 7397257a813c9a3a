#include "profin/finite_group.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>

namespace profin {

namespace {

constexpr int kMaxOrder = 4096;

// Deterministic 64-bit stream for sampled associativity checks.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

long long parse_ll(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Usage, std::string("expected ") + what + ", got '" + tok + "'");
    }
}

}  // namespace

const char* group_kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::cyclic: return "cyclic";
        case GroupKind::units_mod: return "units_mod";
        case GroupKind::product: return "product";
        case GroupKind::gl2_mod: return "gl2_mod";
        case GroupKind::from_table: return "from_table";
    }
    return "?";
}

FiniteGroup::FiniteGroup(GroupKind kind, long long modulus,
                         std::vector<std::string> labels, std::vector<int> flat_table)
    : kind_(kind), modulus_(modulus), order_(static_cast<int>(labels.size())),
      labels_(std::move(labels)), table_(std::move(flat_table)) {
    if (order_ < 1) throw Error(ErrorKind::AxiomViolation, "empty element set");
    if (order_ > kMaxOrder)
        throw Error(ErrorKind::SizeLimit,
                    "group order " + std::to_string(order_) + " exceeds 4096");
    if (table_.size() != static_cast<size_t>(order_) * order_)
        throw Error(ErrorKind::AxiomViolation, "op table is not order x order");

    for (int i = 0; i < order_; ++i) {
        if (!label_index_.emplace(labels_[i], i).second)
            throw Error(ErrorKind::AxiomViolation, "duplicate label '" + labels_[i] + "'");
    }

    // Locate the two-sided identity.
    identity_ = -1;
    for (int e = 0; e < order_; ++e) {
        bool ok = true;
        for (int j = 0; j < order_ && ok; ++j)
            ok = op(e, j) == j && op(j, e) == j;
        if (ok) {
            identity_ = e;
            break;
        }
    }
    if (identity_ < 0) throw Error(ErrorKind::AxiomViolation, "no identity element");

    validate();

    inverse_.assign(order_, -1);
    for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
            if (op(a, b) == identity_) {
                inverse_[a] = b;
                break;
            }
    for (int a = 0; a < order_; ++a)
        if (inverse_[a] < 0 || op(inverse_[a], a) != identity_)
            throw Error(ErrorKind::AxiomViolation,
                        "element '" + labels_[a] + "' has no inverse");
}

void FiniteGroup::validate() const {
    for (size_t idx = 0; idx < table_.size(); ++idx)
        if (table_[idx] < 0 || table_[idx] >= order_)
            throw Error(ErrorKind::AxiomViolation, "op table entry out of range");

    // Latin square: every row and every column is a permutation.
    std::vector<char> seen(order_);
    for (int r = 0; r < order_; ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int c = 0; c < order_; ++c) seen[op(r, c)] = 1;
        if (std::find(seen.begin(), seen.end(), 0) != seen.end())
            throw Error(ErrorKind::AxiomViolation,
                        "row " + labels_[r] + " is not a permutation");
        std::fill(seen.begin(), seen.end(), 0);
        for (int c = 0; c < order_; ++c) seen[op(c, r)] = 1;
        if (std::find(seen.begin(), seen.end(), 0) != seen.end())
            throw Error(ErrorKind::AxiomViolation,
                        "column " + labels_[r] + " is not a permutation");
    }

    auto check_triple = [&](int a, int b, int c) {
        if (op(op(a, b), c) != op(a, op(b, c)))
            throw Error(ErrorKind::AxiomViolation,
                        "associativity fails at (" + labels_[a] + "," + labels_[b] + "," +
                            labels_[c] + ")");
    };
    if (order_ <= 64) {
        for (int a = 0; a < order_; ++a)
            for (int b = 0; b < order_; ++b)
                for (int c = 0; c < order_; ++c) check_triple(a, b, c);
    } else {
        SplitMix64 rng(0x70726f66696e6741ULL ^ static_cast<uint64_t>(order_));
        for (int t = 0; t < 100000; ++t) {
            int a = static_cast<int>(rng.next() % order_);
            int b = static_cast<int>(rng.next() % order_);
            int c = static_cast<int>(rng.next() % order_);
            check_triple(a, b, c);
        }
    }
}

int FiniteGroup::element_order(int a) const {
    int x = a, n = 1;
    while (x != identity_) {
        x = op(x, a);
        ++n;
    }
    return n;
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < order_; ++a)
        for (int b = a + 1; b < order_; ++b)
            if (op(a, b) != op(b, a)) return false;
    return true;
}

int FiniteGroup::index_of(const std::string& label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end())
        throw Error(ErrorKind::UnknownLabel, "no element labelled '" + label + "'");
    return it->second;
}

FiniteGroup FiniteGroup::cyclic(long long n) {
    if (n < 1) throw Error(ErrorKind::Usage, "cyclic order must be >= 1");
    if (n > kMaxOrder) throw Error(ErrorKind::SizeLimit, "cyclic order exceeds 4096");
    int m = static_cast<int>(n);
    std::vector<std::string> labels(m);
    for (int i = 0; i < m; ++i) labels[i] = std::to_string(i);
    std::vector<int> table(static_cast<size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) table[static_cast<size_t>(a) * m + b] = (a + b) % m;
    return FiniteGroup(GroupKind::cyclic, n, std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::units_mod(long long n) {
    if (n < 2) throw Error(ErrorKind::Usage, "units modulus must be >= 2");
    std::vector<long long> residues;
    for (long long r = 1; r < n; ++r)
        if (std::gcd(r, n) == 1) residues.push_back(r);
    if (static_cast<long long>(residues.size()) > kMaxOrder)
        throw Error(ErrorKind::SizeLimit, "units group order exceeds 4096");
    int m = static_cast<int>(residues.size());
    std::map<long long, int> idx;
    std::vector<std::string> labels(m);
    for (int i = 0; i < m; ++i) {
        idx[residues[i]] = i;
        labels[i] = std::to_string(residues[i]);
    }
    std::vector<int> table(static_cast<size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            table[static_cast<size_t>(a) * m + b] = idx[(residues[a] * residues[b]) % n];
    return FiniteGroup(GroupKind::units_mod, n, std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& g, const FiniteGroup& h) {
    long long m = static_cast<long long>(g.order()) * h.order();
    if (m > kMaxOrder) throw Error(ErrorKind::SizeLimit, "product order exceeds 4096");
    int gm = g.order(), hm = h.order(), n = static_cast<int>(m);
    std::vector<std::string> labels(n);
    for (int a = 0; a < gm; ++a)
        for (int b = 0; b < hm; ++b) labels[a * hm + b] = g.label(a) + ":" + h.label(b);
    std::vector<int> table(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int gi = i / hm, hi = i % hm, gj = j / hm, hj = j % hm;
            table[static_cast<size_t>(i) * n + j] = g.op(gi, gj) * hm + h.op(hi, hj);
        }
    return FiniteGroup(GroupKind::product, 0, std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::gl2_mod(long long modulus) {
    if (modulus != 2 && modulus != 4 && modulus != 8)
        throw Error(ErrorKind::SizeLimit, "gl2 modulus must be 2^k with k <= 3");
    int m = static_cast<int>(modulus);
    // Invertible over Z/2^k iff the determinant is odd.
    std::vector<std::array<int, 4>> mats;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    int det = ((a * d - b * c) % m + m) % m;
                    if (det % 2 == 1) mats.push_back({a, b, c, d});
                }
    int n = static_cast<int>(mats.size());
    std::vector<std::string> labels(n);
    std::map<std::string, int> idx;
    for (int i = 0; i < n; ++i) {
        const auto& e = mats[i];
        labels[i] = std::to_string(e[0]) + std::to_string(e[1]) + std::to_string(e[2]) +
                    std::to_string(e[3]);
        idx[labels[i]] = i;
    }
    std::vector<int> table(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& x = mats[i];
            const auto& y = mats[j];
            std::array<int, 4> p = {(x[0] * y[0] + x[1] * y[2]) % m,
                                    (x[0] * y[1] + x[1] * y[3]) % m,
                                    (x[2] * y[0] + x[3] * y[2]) % m,
                                    (x[2] * y[1] + x[3] * y[3]) % m};
            std::string lab = std::to_string(p[0]) + std::to_string(p[1]) +
                              std::to_string(p[2]) + std::to_string(p[3]);
            table[static_cast<size_t>(i) * n + j] = idx.at(lab);
        }
    return FiniteGroup(GroupKind::gl2_mod, modulus, std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::from_table(std::vector<std::string> labels,
                                    std::vector<std::vector<int>> table) {
    size_t n = labels.size();
    if (table.size() != n)
        throw Error(ErrorKind::AxiomViolation, "table row count != label count");
    std::vector<int> flat;
    flat.reserve(n * n);
    for (const auto& row : table) {
        if (row.size() != n)
            throw Error(ErrorKind::AxiomViolation, "table row width != label count");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return FiniteGroup(GroupKind::from_table, 0, std::move(labels), std::move(flat));
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    if (g.group != h.group)
        throw Error(ErrorKind::GroupMismatch, "elements belong to different groups");
    return {g.group, g.group->op(g.index, h.index)};
}

Homomorphism::Homomorphism(const FiniteGroup& source, const FiniteGroup& target,
                           std::vector<int> image)
    : source_(&source), target_(&target), image_(std::move(image)) {
    if (image_.size() != static_cast<size_t>(source.order()))
        throw Error(ErrorKind::AxiomViolation, "image list length != source order");
    for (int v : image_)
        if (v < 0 || v >= target.order())
            throw Error(ErrorKind::AxiomViolation, "image index out of range");
    if (image_[source.identity()] != target.identity())
        throw Error(ErrorKind::AxiomViolation, "identity is not preserved");
    for (int a = 0; a < source.order(); ++a)
        for (int b = 0; b < source.order(); ++b)
            if (image_[source.op(a, b)] != target.op(image_[a], image_[b]))
                throw Error(ErrorKind::AxiomViolation,
                            "homomorphism law fails at (" + source.label(a) + "," +
                                source.label(b) + ")");
    std::vector<char> hit(target.order(), 0);
    for (int v : image_) hit[v] = 1;
    surjective_ = std::find(hit.begin(), hit.end(), 0) == hit.end();
}

GroupElement Homomorphism::apply(const GroupElement& g) const {
    if (g.group != source_)
        throw Error(ErrorKind::GroupMismatch, "element is not in the source group");
    return {target_, image_[g.index]};
}

Automorphism::Automorphism(const FiniteGroup& group, std::vector<int> image)
    : group_(&group), image_(std::move(image)) {
    Homomorphism check(group, group, image_);  // validates the law
    std::vector<char> hit(group.order(), 0);
    for (int v : image_) {
        if (hit[v]) throw Error(ErrorKind::AxiomViolation, "image is not a bijection");
        hit[v] = 1;
    }
}

namespace {

// Greedy generating set: repeatedly adjoin the first element outside the
// closure of what has been picked so far.
std::vector<int> generating_set(const FiniteGroup& g) {
    std::vector<char> in_closure(g.order(), 0);
    in_closure[g.identity()] = 1;
    int covered = 1;
    std::vector<int> gens;
    std::vector<int> frontier;
    while (covered < g.order()) {
        int pick = -1;
        for (int i = 0; i < g.order(); ++i)
            if (!in_closure[i]) {
                pick = i;
                break;
            }
        gens.push_back(pick);
        // close under multiplication by all current members
        frontier.assign(1, pick);
        in_closure[pick] = 1;
        ++covered;
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int x : frontier) {
                for (int y = 0; y < g.order(); ++y) {
                    if (!in_closure[y]) continue;
                    for (int z : {g.op(x, y), g.op(y, x)}) {
                        if (!in_closure[z]) {
                            in_closure[z] = 1;
                            ++covered;
                            next.push_back(z);
                        }
                    }
                }
            }
            frontier = std::move(next);
        }
    }
    return gens;
}

}  // namespace

std::vector<Automorphism> enumerate_automorphisms(const FiniteGroup& g) {
    if (g.order() > kMaxOrder)
        throw Error(ErrorKind::SizeLimit, "automorphism enumeration limited to order 4096");

    const int n = g.order();
    std::vector<int> gens = generating_set(g);

    // Express every element as a word in the generators: BFS spanning tree
    // rooted at the identity. from/via record x = from[x] * gens[via[x]].
    std::vector<int> from(n, -1), via(n, -1), bfs;
    {
        std::vector<char> seen(n, 0);
        bfs.push_back(g.identity());
        seen[g.identity()] = 1;
        for (size_t head = 0; head < bfs.size(); ++head) {
            int x = bfs[head];
            for (size_t gi = 0; gi < gens.size(); ++gi) {
                int y = g.op(x, gens[gi]);
                if (!seen[y]) {
                    seen[y] = 1;
                    from[y] = x;
                    via[y] = static_cast<int>(gi);
                    bfs.push_back(y);
                }
            }
        }
    }

    // Candidate images per generator: elements of the same order.
    std::vector<std::vector<int>> candidates(gens.size());
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        int want = g.element_order(gens[gi]);
        for (int x = 0; x < n; ++x)
            if (g.element_order(x) == want) candidates[gi].push_back(x);
    }

    std::vector<Automorphism> result;
    std::vector<int> image(n);
    std::vector<char> hit(n);

    if (gens.empty()) {  // trivial group
        result.emplace_back(g, std::vector<int>{g.identity()});
        return result;
    }

    // Iterate over all tuples of candidate images; propagate each tuple along
    // the BFS tree, then verify bijectivity and the full homomorphism law.
    std::vector<size_t> pos(gens.size(), 0);
    bool done = false;
    while (!done) {
        std::vector<int> gen_img(gens.size());
        for (size_t gi = 0; gi < gens.size(); ++gi) gen_img[gi] = candidates[gi][pos[gi]];

        image[g.identity()] = g.identity();
        for (size_t head = 1; head < bfs.size(); ++head) {
            int x = bfs[head];
            image[x] = g.op(image[from[x]], gen_img[via[x]]);
        }

        // Bijectivity, then the full homomorphism law.
        std::fill(hit.begin(), hit.end(), 0);
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) {
            if (hit[image[x]]) ok = false;
            hit[image[x]] = 1;
        }
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b)
                if (image[g.op(a, b)] != g.op(image[a], image[b])) ok = false;
        if (ok) result.emplace_back(g, image);

        // next tuple
        size_t gi = 0;
        while (gi < gens.size() && ++pos[gi] == candidates[gi].size()) {
            pos[gi] = 0;
            ++gi;
        }
        done = gi == gens.size();
    }

    std::sort(result.begin(), result.end(),
              [](const Automorphism& a, const Automorphism& b) {
                  return a.image() < b.image();
              });
    return result;
}

GroupElement frobenius_element(const FiniteGroup& units_pn, long long p, long long q) {
    if (units_pn.kind() != GroupKind::units_mod)
        throw Error(ErrorKind::KindMismatch, "frobenius element needs a units_mod group");
    if (q == p || q % p == 0)
        throw Error(ErrorKind::Ramified,
                    "no unramified frobenius at q = " + std::to_string(q));
    long long n = units_pn.modulus();
    long long r = ((q % n) + n) % n;
    return {&units_pn, units_pn.index_of(std::to_string(r))};
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

FiniteGroup parse_group_tokens(const std::vector<std::string>& toks, size_t& i) {
    if (i >= toks.size()) throw Error(ErrorKind::Usage, "missing group spec");
    const std::string& head = toks[i++];
    if (head == "cyclic") {
        if (i >= toks.size()) throw Error(ErrorKind::Usage, "cyclic needs an order");
        return FiniteGroup::cyclic(parse_ll(toks[i++], "an integer"));
    }
    if (head == "units") {
        if (i >= toks.size()) throw Error(ErrorKind::Usage, "units needs a modulus");
        return FiniteGroup::units_mod(parse_ll(toks[i++], "an integer"));
    }
    if (head == "product") {
        FiniteGroup a = parse_group_tokens(toks, i);
        FiniteGroup b = parse_group_tokens(toks, i);
        return FiniteGroup::product(a, b);
    }
    if (head == "gl2") {
        if (i >= toks.size()) throw Error(ErrorKind::Usage, "gl2 needs a modulus 2^K");
        const std::string& m = toks[i++];
        long long modulus;
        if (m.rfind("2^", 0) == 0) {
            long long k = parse_ll(m.substr(2), "an exponent");
            if (k < 1 || k > 12) throw Error(ErrorKind::SizeLimit, "gl2 exponent out of range");
            modulus = 1LL << k;
        } else {
            modulus = parse_ll(m, "a modulus");
        }
        return FiniteGroup::gl2_mod(modulus);
    }
    if (head == "table") {
        if (i >= toks.size()) throw Error(ErrorKind::Usage, "table needs a file path");
        std::ifstream in(toks[i]);
        if (!in) throw Error(ErrorKind::Usage, "cannot open table file '" + toks[i] + "'");
        ++i;
        std::string line;
        if (!std::getline(in, line))
            throw Error(ErrorKind::Usage, "empty table file");
        std::vector<std::string> labels = tokenize(line);
        std::vector<std::vector<int>> rows;
        while (std::getline(in, line)) {
            auto toks2 = tokenize(line);
            if (toks2.empty()) continue;
            std::vector<int> row;
            row.reserve(toks2.size());
            for (const auto& t : toks2)
                row.push_back(static_cast<int>(parse_ll(t, "a table index")));
            rows.push_back(std::move(row));
        }
        return FiniteGroup::from_table(std::move(labels), std::move(rows));
    }
    throw Error(ErrorKind::Usage, "unknown group kind '" + head + "'");
}

}  // namespace

FiniteGroup make_group(const std::string& spec) {
    auto toks = tokenize(spec);
    size_t i = 0;
    FiniteGroup g = parse_group_tokens(toks, i);
    if (i != toks.size())
        throw Error(ErrorKind::Usage, "trailing tokens after group spec: '" + toks[i] + "'");
    return g;
}

}  // namespace profin
