#include "profin/integral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <numeric>
#include <random>
#include <sstream>

namespace profin {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int env_workers() {
    const char* v = std::getenv("PROFIN_WORKERS");
    if (!v) return 1;
    int w = std::atoi(v);
    return w < 1 ? 1 : (w > 64 ? 64 : w);
}

}  // namespace

Rational CylinderMeasure::level_mass(int k) const {
    if (k == 0) return Rational(1);
    return Rational(1, tower_->level(k).order());
}

Rational CylinderMeasure::mass(const Cylinder& z) const {
    if (z.tower != tower_)
        throw Error(ErrorKind::TowerMismatch, "cylinder from a different tower");
    return level_mass(z.level);
}

CylinderMeasure haar_measure(const Tower& t) { return CylinderMeasure(t); }

Rational cylinder_mass(const CylinderMeasure& mu, const Cylinder& z) {
    return mu.mass(z);
}

ActionFunctional::ActionFunctional(std::vector<std::vector<Rational>> q,
                                   std::vector<Rational> w, double hbar)
    : q_(std::move(q)), w_(std::move(w)), hbar_(hbar) {
    if (!(hbar_ > 0)) throw Error(ErrorKind::Usage, "hbar must be positive");
    if (!q_.empty()) {
        if (q_.size() != w_.size())
            throw Error(ErrorKind::LengthMismatch, "Q must be n x n for n = |w|");
        for (const auto& row : q_)
            if (row.size() != w_.size())
                throw Error(ErrorKind::LengthMismatch, "Q must be n x n for n = |w|");
        for (size_t i = 0; i < q_.size(); ++i)
            for (size_t j = i + 1; j < q_.size(); ++j)
                if (q_[i][j] != q_[j][i])
                    throw Error(ErrorKind::AxiomViolation, "Q must be symmetric");
    }
}

Rational ActionFunctional::eval_exact(const std::vector<uint8_t>& gamma) const {
    if (gamma.size() != w_.size())
        throw Error(ErrorKind::LengthMismatch,
                    "gamma has length " + std::to_string(gamma.size()) +
                        ", action dimension is " + std::to_string(w_.size()));
    Rational s(0);
    for (size_t i = 0; i < gamma.size(); ++i) {
        if (!gamma[i]) continue;
        s += w_[i];
        if (!q_.empty())
            for (size_t j = 0; j < gamma.size(); ++j)
                if (gamma[j]) s += q_[i][j];
    }
    return s;
}

double ActionFunctional::eval(const std::vector<uint8_t>& gamma) const {
    return to_double(eval_exact(gamma));
}

ActionFunctional parse_action(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    double hbar = 1.0;
    std::vector<Rational> w;
    std::vector<std::vector<Rational>> q;
    bool expect_q_rows = false;
    size_t q_rows_needed = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (expect_q_rows) {
            std::vector<Rational> row;
            row.push_back(parse_rational(head));
            std::string t;
            while (ls >> t) row.push_back(parse_rational(t));
            q.push_back(std::move(row));
            if (q.size() == q_rows_needed) expect_q_rows = false;
            continue;
        }
        if (head == "hbar") {
            if (!(ls >> hbar)) throw Error(ErrorKind::Usage, "hbar needs a value");
        } else if (head == "w") {
            double x;
            while (ls >> x) w.push_back(rational_from_double(x));
            if (w.empty()) throw Error(ErrorKind::Usage, "w needs at least one entry");
        } else if (head == "Q") {
            if (w.empty())
                throw Error(ErrorKind::Usage, "Q must come after w (dimension)");
            expect_q_rows = true;
            q_rows_needed = w.size();
        } else {
            throw Error(ErrorKind::Usage, "unknown action line '" + head + "'");
        }
    }
    if (expect_q_rows && q.size() != q_rows_needed)
        throw Error(ErrorKind::Usage, "Q rows missing");
    if (w.empty()) throw Error(ErrorKind::Usage, "action spec needs a w line");
    return ActionFunctional(std::move(q), std::move(w), hbar);
}

namespace {

// The action with everything over a common denominator: S = (integer
// form)/den, so the per-cylinder evaluation is integer-only. The int64 fast
// path is used when the worst-case absolute sum provably fits.
struct ScaledAction {
    BigInt den;
    std::vector<std::vector<BigInt>> q;
    std::vector<BigInt> w;
    std::vector<std::vector<long long>> q64;
    std::vector<long long> w64;
    bool fits64 = false;
    double hbar = 1.0;
    int dim = 0;

    explicit ScaledAction(const ActionFunctional& s) {
        hbar = s.hbar();
        dim = s.dimension();
        den = 1;
        auto fold = [&](const Rational& r) {
            den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(r));
        };
        for (const auto& r : s.w()) fold(r);
        for (const auto& row : s.q())
            for (const auto& r : row) fold(r);
        BigInt bound = 0;
        w.reserve(s.w().size());
        for (const auto& r : s.w()) {
            w.push_back(boost::multiprecision::numerator(r) *
                        (den / boost::multiprecision::denominator(r)));
            bound += abs(w.back());
        }
        for (const auto& row : s.q()) {
            q.emplace_back();
            for (const auto& r : row) {
                q.back().push_back(boost::multiprecision::numerator(r) *
                                   (den / boost::multiprecision::denominator(r)));
                bound += abs(q.back().back());
            }
        }
        if (bound < (BigInt(1) << 62) && den < (BigInt(1) << 62)) {
            fits64 = true;
            for (const auto& v : w) w64.push_back(v.convert_to<long long>());
            for (const auto& row : q) {
                q64.emplace_back();
                for (const auto& v : row) q64.back().push_back(v.convert_to<long long>());
            }
        }
    }

    double action_value(const std::vector<int>& support) const {
        if (fits64) {
            long long num = 0;
            for (int i : support) {
                num += w64[i];
                if (!q64.empty())
                    for (int j : support) num += q64[i][j];
            }
            if (num == 0) return 0.0;
            return to_double(Rational(BigInt(num), den));
        }
        BigInt num = 0;
        for (int i : support) {
            num += w[i];
            if (!q.empty())
                for (int j : support) num += q[i][j];
        }
        if (num == 0) return 0.0;
        return to_double(Rational(num, den));
    }
};

std::complex<double> phase_of(double action, double hbar) {
    if (action == 0.0) return {1.0, 0.0};
    double theta = action / hbar;
    return {std::cos(theta), std::sin(theta)};
}

// Balanced pairwise reduction over [lo, hi); the split point is fixed, so the
// association tree (and hence the floating result) is identical no matter how
// many workers take subtrees.
std::complex<double> pairwise_sum(long long lo, long long hi,
                                  const std::function<std::complex<double>(long long)>& term,
                                  int spawn_depth) {
    if (hi - lo == 1) return term(lo);
    long long mid = lo + (hi - lo + 1) / 2;
    if (spawn_depth > 0 && hi - lo >= 2048) {
        auto left = std::async(std::launch::async, [&] {
            return pairwise_sum(lo, mid, term, spawn_depth - 1);
        });
        std::complex<double> right = pairwise_sum(mid, hi, term, spawn_depth - 1);
        return left.get() + right;
    }
    return pairwise_sum(lo, mid, term, 0) + pairwise_sum(mid, hi, term, 0);
}

// Per-cylinder support sets (indices of 1-bits of the padded code).
struct CylinderCodes {
    long long count = 0;
    bool binary = false;
    int level = 0;
    std::vector<std::vector<int>> supports;  // non-binary only

    std::vector<int> support_of(long long idx) const {
        if (!binary) return supports[static_cast<size_t>(idx)];
        std::vector<int> s;
        for (int b = 0; b < level; ++b)
            if (idx & (1LL << (level - 1 - b))) s.push_back(b);
        return s;
    }
};

CylinderCodes cylinder_codes(const Tower& t, int n, int dim) {
    if (n < 0) throw Error(ErrorKind::LevelOrder, "level must be >= 0");
    if (n > 24) throw Error(ErrorKind::SizeLimit, "exact summation limited to n <= 24");
    CylinderCodes cc;
    cc.level = n;
    if (t.kind() == TowerKind::binary) {
        // Level-n cylinders of the binary system are the words {0,1}^n and
        // the code of a word is the word itself; no materialized levels are
        // needed beyond what the tower already carries.
        if (n > dim)
            throw Error(ErrorKind::LengthMismatch,
                        "action dimension " + std::to_string(dim) +
                            " < code length " + std::to_string(n));
        cc.binary = true;
        cc.count = 1LL << n;
        return cc;
    }
    if (n > t.depth())
        throw Error(ErrorKind::LevelOrder,
                    "level " + std::to_string(n) + " exceeds tower depth");
    PartitionTree tree(t);
    cc.count = n == 0 ? 1 : t.level(n).order();
    cc.supports.resize(static_cast<size_t>(cc.count));
    for (long long i = 0; i < cc.count; ++i) {
        std::vector<int> chain;
        if (n > 0) {
            chain.resize(n);
            int idx = static_cast<int>(i);
            for (int k = n; k >= 1; --k) {
                chain[k - 1] = idx;
                if (k > 1) idx = t.bond(k - 1).apply(idx);
            }
        }
        BitSequence code = tree.encode_chain(chain);
        if (static_cast<int>(code.bits.size()) > dim)
            throw Error(ErrorKind::LengthMismatch,
                        "action dimension " + std::to_string(dim) + " < code length " +
                            std::to_string(code.bits.size()));
        std::vector<int>& sup = cc.supports[static_cast<size_t>(i)];
        for (size_t b = 0; b < code.bits.size(); ++b)
            if (code.bits[b]) sup.push_back(static_cast<int>(b));
    }
    return cc;
}

std::complex<double> exact_level_sum(const Tower& t, const ScaledAction& sa, int n) {
    CylinderCodes cc = cylinder_codes(t, n, sa.dim);
    double mass = 1.0;
    if (cc.binary)
        mass = std::ldexp(1.0, -n);
    else if (n > 0)
        mass = to_double(Rational(1, t.level(n).order()));
    int workers = env_workers();
    int spawn_depth = 0;
    while ((1 << spawn_depth) < workers) ++spawn_depth;
    std::function<std::complex<double>(long long)> term = [&](long long i) {
        return phase_of(sa.action_value(cc.support_of(i)), sa.hbar) * mass;
    };
    return pairwise_sum(0, cc.count, term, spawn_depth);
}

}  // namespace

PathIntegralResult path_integral_exact(const CylinderMeasure& mu,
                                       const ActionFunctional& s, int n) {
    ScaledAction sa(s);
    PathIntegralResult r;
    r.mode = PathIntegralResult::Mode::exact;
    r.level = n;
    r.value = exact_level_sum(mu.tower(), sa, n);
    if (n >= 1) {
        std::complex<double> prev = exact_level_sum(mu.tower(), sa, n - 1);
        r.delta_prev = std::abs(r.value - prev);
    }
    return r;
}

namespace {

class UniformIndex {
public:
    explicit UniformIndex(uint64_t seed) : eng_(seed) {}
    long long draw(long long bound) {
        uint64_t b = static_cast<uint64_t>(bound);
        uint64_t limit = UINT64_MAX - UINT64_MAX % b;
        uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return static_cast<long long>(r % b);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace

PathIntegralResult path_integral_mc(const CylinderMeasure& mu, const ActionFunctional& s,
                                    int n, long long samples, uint64_t seed) {
    if (samples < 2) throw Error(ErrorKind::Usage, "need at least 2 samples");
    ScaledAction sa(s);
    const Tower& t = mu.tower();

    long long count;
    CylinderCodes cc;
    if (t.kind() == TowerKind::binary) {
        if (n > 62) throw Error(ErrorKind::SizeLimit, "binary sampling limited to n <= 62");
        if (n > sa.dim)
            throw Error(ErrorKind::LengthMismatch, "action dimension < code length");
        cc.binary = true;
        cc.level = n;
        count = 1LL << n;
    } else {
        cc = cylinder_codes(t, n, sa.dim);
        count = cc.count;
    }

    // With few enough cylinders, tabulate every phase once and sample by
    // lookup; the estimator is unchanged.
    std::vector<std::complex<double>> table;
    if (count <= (1LL << 16)) {
        table.resize(static_cast<size_t>(count));
        for (long long i = 0; i < count; ++i)
            table[static_cast<size_t>(i)] =
                phase_of(sa.action_value(cc.support_of(i)), sa.hbar);
    }

    UniformIndex rng(seed);
    std::complex<double> sum{0.0, 0.0};
    double sum_sq = 0.0;  // sum of |z|^2
    for (long long k = 0; k < samples; ++k) {
        long long i = rng.draw(count);
        std::complex<double> z = table.empty()
                                     ? phase_of(sa.action_value(cc.support_of(i)), sa.hbar)
                                     : table[static_cast<size_t>(i)];
        sum += z;
        sum_sq += std::norm(z);
    }
    std::complex<double> mean = sum / static_cast<double>(samples);
    double ss = sum_sq - static_cast<double>(samples) * std::norm(mean);
    if (ss < 0) ss = 0;  // rounding guard
    double variance = ss / static_cast<double>(samples - 1);

    PathIntegralResult r;
    r.mode = PathIntegralResult::Mode::monte_carlo;
    r.level = n;
    r.value = mean;
    r.samples = samples;
    r.seed = seed;
    r.stderr_est = std::sqrt(variance / static_cast<double>(samples));
    return r;
}

PathIntegralResult merge_mc(const std::vector<PathIntegralResult>& parts) {
    if (parts.empty()) throw Error(ErrorKind::EmptyInput, "nothing to merge");
    long long total = 0;
    std::complex<double> weighted{0.0, 0.0};
    for (const auto& p : parts) {
        if (p.mode != PathIntegralResult::Mode::monte_carlo)
            throw Error(ErrorKind::KindMismatch, "can only merge monte carlo results");
        total += p.samples;
        weighted += p.value * static_cast<double>(p.samples);
    }
    std::complex<double> mean = weighted / static_cast<double>(total);
    double ss = 0.0;
    for (const auto& p : parts) {
        double n = static_cast<double>(p.samples);
        ss += p.stderr_est * p.stderr_est * n * (n - 1.0);
        ss += n * std::norm(p.value - mean);
    }
    PathIntegralResult r;
    r.mode = PathIntegralResult::Mode::monte_carlo;
    r.level = parts[0].level;
    r.value = mean;
    r.samples = total;
    r.seed = parts[0].seed;
    r.stderr_est = std::sqrt(ss / static_cast<double>(total - 1) / static_cast<double>(total));
    return r;
}

Character::Character(const FiniteGroup& g, std::vector<Rational> turns,
                     std::vector<int> exponents)
    : group_(&g), turns_(std::move(turns)), exponents_(std::move(exponents)) {
    if (turns_.size() != static_cast<size_t>(g.order()))
        throw Error(ErrorKind::LengthMismatch, "one turn per element required");
    if (turns_[g.identity()] != 0)
        throw Error(ErrorKind::AxiomViolation, "character must send identity to 1");
}

std::complex<double> Character::value(int element) const {
    const Rational& t = turns_[element];
    if (t == 0) return {1.0, 0.0};
    double theta = kTwoPi * to_double(t);
    return {std::cos(theta), std::sin(theta)};
}

bool Character::is_trivial() const {
    for (const auto& t : turns_)
        if (t != 0) return false;
    return true;
}

namespace {

// Internal direct-sum decomposition of an abelian group read off its Cayley
// table: generators of cyclic factors plus the exponent tuple of every
// element. Factors are found by splitting off a maximal-order element and
// recursing on the quotient; quotient generators are lifted to genuine
// complements (r^m lands in <g1>, so divide it back out).
struct CyclicDecomposition {
    std::vector<int> gens;
    std::vector<int> orders;
    std::vector<std::vector<int>> exponents;  // per element
};

std::vector<std::pair<int, int>> basis_of(const FiniteGroup& g) {
    if (g.order() == 1) return {};

    int g1 = 0, m1 = 1;
    for (int x = 0; x < g.order(); ++x) {
        int o = g.element_order(x);
        if (o > m1) {
            m1 = o;
            g1 = x;
        }
    }

    // cyclic subgroup <g1> and discrete logs within it
    std::vector<int> h(m1);
    std::vector<int> dlog(g.order(), -1);
    {
        int x = g.identity();
        for (int t = 0; t < m1; ++t) {
            h[t] = x;
            dlog[x] = t;
            x = g.op(x, g1);
        }
    }
    if (m1 == g.order()) return {{g1, m1}};

    // quotient by <g1>: cosets keyed by their minimal member
    std::vector<int> coset_rep(g.order(), -1);
    std::vector<int> reps;
    for (int x = 0; x < g.order(); ++x) {
        if (coset_rep[x] >= 0) continue;
        int rep = x;
        for (int t = 0; t < m1; ++t) rep = std::min(rep, g.op(x, h[t]));
        for (int t = 0; t < m1; ++t) coset_rep[g.op(x, h[t])] = rep;
        reps.push_back(rep);
    }
    std::sort(reps.begin(), reps.end());
    std::vector<int> rep_index(g.order(), -1);
    for (size_t i = 0; i < reps.size(); ++i) rep_index[reps[i]] = static_cast<int>(i);

    std::vector<std::string> qlabels(reps.size());
    std::vector<std::vector<int>> qtable(reps.size(), std::vector<int>(reps.size()));
    for (size_t a = 0; a < reps.size(); ++a) {
        qlabels[a] = g.label(reps[a]);
        for (size_t b = 0; b < reps.size(); ++b)
            qtable[a][b] = rep_index[coset_rep[g.op(reps[a], reps[b])]];
    }
    FiniteGroup q = FiniteGroup::from_table(std::move(qlabels), std::move(qtable));

    std::vector<std::pair<int, int>> out = {{g1, m1}};
    for (auto [qgen, m] : basis_of(q)) {
        int r = reps[qgen];
        // r^m lies in <g1>; replace r by r * g1^{-t/m} to kill it.
        int rm = g.identity();
        for (int t = 0; t < m; ++t) rm = g.op(rm, r);
        int t = dlog[rm];
        int s = (t / m) % m1;
        int b = g.op(r, h[(m1 - s) % m1]);
        out.emplace_back(b, m);
    }
    return out;
}

CyclicDecomposition decompose_abelian(const FiniteGroup& g) {
    CyclicDecomposition d;
    for (auto [gen, order] : basis_of(g)) {
        d.gens.push_back(gen);
        d.orders.push_back(order);
    }
    // exponent tuple of every element, by enumerating all products
    d.exponents.assign(g.order(), {});
    std::vector<char> seen(g.order(), 0);
    std::vector<int> tuple(d.gens.size(), 0);
    long long total = 1;
    for (int m : d.orders) total *= m;
    if (total != g.order())
        throw Error(ErrorKind::AxiomViolation, "cyclic decomposition does not span");
    for (long long it = 0; it < total; ++it) {
        int x = g.identity();
        for (size_t i = 0; i < d.gens.size(); ++i)
            for (int e = 0; e < tuple[i]; ++e) x = g.op(x, d.gens[i]);
        if (seen[x])
            throw Error(ErrorKind::AxiomViolation, "cyclic decomposition overlaps");
        seen[x] = 1;
        d.exponents[x] = tuple;
        // odometer, last index fastest
        for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i) {
            if (++tuple[i] < d.orders[i]) break;
            tuple[i] = 0;
        }
    }
    return d;
}

}  // namespace

std::vector<Character> characters(const FiniteGroup& g) {
    if (!g.is_abelian())
        throw Error(ErrorKind::NotAbelian, "character enumeration needs an abelian group");
    CyclicDecomposition d = decompose_abelian(g);

    std::vector<Character> out;
    out.reserve(static_cast<size_t>(g.order()));
    std::vector<int> j(d.orders.size(), 0);
    long long total = g.order();
    for (long long it = 0; it < total; ++it) {
        std::vector<Rational> turns(g.order());
        for (int x = 0; x < g.order(); ++x) {
            Rational t(0);
            for (size_t i = 0; i < d.orders.size(); ++i) {
                if (j[i] == 0 || d.exponents[x][i] == 0) continue;
                t += Rational(static_cast<long long>(j[i]) * d.exponents[x][i],
                              d.orders[i]);
            }
            // reduce into [0,1)
            BigInt num = boost::multiprecision::numerator(t);
            BigInt den = boost::multiprecision::denominator(t);
            BigInt whole = num / den;
            if (num < 0 && num % den != 0) whole -= 1;
            turns[x] = t - Rational(whole);
        }
        out.emplace_back(g, std::move(turns), j);
        for (int i = static_cast<int>(j.size()) - 1; i >= 0; --i) {
            if (++j[i] < d.orders[i]) break;
            j[i] = 0;
        }
        if (d.orders.empty()) break;  // trivial group: single character
    }
    if (out.empty()) {
        std::vector<Rational> turns(g.order(), Rational(0));
        out.emplace_back(g, std::move(turns), std::vector<int>{});
    }
    return out;
}

int conductor_level(const Character& chi, const Tower& t) {
    if (&chi.group() != &t.level(t.depth()))
        throw Error(ErrorKind::GroupMismatch, "character is not on the tower's top level");
    if (chi.is_trivial()) return 0;
    const FiniteGroup& top = t.level(t.depth());
    // chi is constant on fibers of G_d -> G_k iff it kills the kernel
    for (int k = 1; k <= t.depth(); ++k) {
        bool kills = true;
        for (int i = 0; i < top.order() && kills; ++i) {
            GroupElement shadow = project(t, GroupElement{&top, i}, k);
            if (shadow.index == t.level(k).identity() && chi.turn(i) != 0) kills = false;
        }
        if (kills) return k;
    }
    return t.depth();
}

double partition_function(const Tower& t, double lambda) {
    std::vector<Character> chars = characters(t.level(t.depth()));
    double z = 0.0;
    for (const Character& chi : chars)
        z += std::exp(-lambda * conductor_level(chi, t));
    return z;
}

std::complex<double> frobenius_correlation(const Tower& t,
                                           const std::vector<long long>& primes,
                                           double lambda) {
    if (t.kind() != TowerKind::cyclotomic)
        throw Error(ErrorKind::KindMismatch, "correlation needs a cyclotomic tower");
    const FiniteGroup& top = t.level(t.depth());
    long long p = t.param();
    std::vector<int> frob;
    for (long long q : primes)
        frob.push_back(frobenius_element(top, p, q).index);

    std::vector<Character> chars = characters(top);
    double z = 0.0;
    std::complex<double> num{0.0, 0.0};
    for (const Character& chi : chars) {
        double weight = std::exp(-lambda * conductor_level(chi, t));
        Rational turn(0);
        for (int f : frob) turn += chi.turn(f);
        double theta = kTwoPi * to_double(turn);
        num += std::complex<double>(std::cos(theta), std::sin(theta)) * weight;
        z += weight;
    }
    return num / z;
}

}  // namespace profin
