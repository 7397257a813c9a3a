#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "profin/matrioshka.hpp"
#include "profin/rational.hpp"
#include "profin/tower.hpp"

namespace profin {

/// The uniform (Haar) cylinder measure of a tower: every level-k element
/// carries exact mass 1/|G_k|, so total mass is 1 at every level and fiber
/// sums push forward exactly along the bonds.
class CylinderMeasure {
public:
    explicit CylinderMeasure(const Tower& t) : tower_(&t) {}

    const Tower& tower() const { return *tower_; }
    Rational level_mass(int k) const;        // k = 0 -> 1
    Rational mass(const Cylinder& z) const;  // TowerMismatch if foreign

private:
    const Tower* tower_;
};

CylinderMeasure haar_measure(const Tower& t);
Rational cylinder_mass(const CylinderMeasure& mu, const Cylinder& z);

/// S[gamma] = gamma^T Q gamma + w . gamma on bit vectors, evaluated exactly
/// in rationals. Q is symmetric; an empty Q means the zero matrix. hbar is
/// the deformation parameter dividing S in the phase exp(i S / hbar).
class ActionFunctional {
public:
    ActionFunctional(std::vector<std::vector<Rational>> q, std::vector<Rational> w,
                     double hbar = 1.0);

    int dimension() const { return static_cast<int>(w_.size()); }
    double hbar() const { return hbar_; }
    const std::vector<std::vector<Rational>>& q() const { return q_; }
    const std::vector<Rational>& w() const { return w_; }

    Rational eval_exact(const std::vector<uint8_t>& gamma) const;
    double eval(const std::vector<uint8_t>& gamma) const;

private:
    std::vector<std::vector<Rational>> q_;  // empty or n x n
    std::vector<Rational> w_;
    double hbar_;
};

/// Textual action spec:
///   hbar <float>
///   w <f1> <f2> ...
///   Q            (optional; followed by n rows of n rationals "p/q")
ActionFunctional parse_action(const std::string& text);

struct PathIntegralResult {
    enum class Mode { exact, monte_carlo };

    std::complex<double> value;
    int level = 0;
    Mode mode = Mode::exact;
    std::optional<double> delta_prev;  // |I_n - I_{n-1}|, exact mode only
    long long samples = 0;
    uint64_t seed = 0;
    double stderr_est = 0.0;
};

/// I_n = sum over level-n cylinders of exp(i S[gamma]/hbar) mu([gamma]),
/// summed by a balanced pairwise reduction (deterministic; the env var
/// PROFIN_WORKERS >= 2 parallelizes subtrees of the same reduction tree, so
/// the result is bit-identical for every worker count). gamma is the
/// cylinder's partition-tree code right-padded with zeros to S's dimension;
/// on the binary tower the codes are exactly {0,1}^n. n <= 24; for
/// non-binary towers n must not exceed the tower depth.
PathIntegralResult path_integral_exact(const CylinderMeasure& mu,
                                       const ActionFunctional& s, int n);

/// Mass-weighted Monte Carlo: cylinders are sampled uniformly (Haar), the
/// estimate is the sample mean of the phase and stderr pools the real and
/// imaginary component variances.
PathIntegralResult path_integral_mc(const CylinderMeasure& mu, const ActionFunctional& s,
                                    int n, long long samples, uint64_t seed);

/// Mean/variance pooling of independent Monte Carlo runs (disjoint seeds).
PathIntegralResult merge_mc(const std::vector<PathIntegralResult>& parts);

/// A one-dimensional representation of an abelian group, stored exactly:
/// value(g) = exp(2 pi i turn(g)) with turn a rational in [0,1).
class Character {
public:
    Character(const FiniteGroup& g, std::vector<Rational> turns,
              std::vector<int> exponents);

    const FiniteGroup& group() const { return *group_; }
    const Rational& turn(int element) const { return turns_[element]; }
    std::complex<double> value(int element) const;
    bool is_trivial() const;
    /// Index tuple against the group's cyclic decomposition (ordering key).
    const std::vector<int>& exponents() const { return exponents_; }

private:
    const FiniteGroup* group_;
    std::vector<Rational> turns_;
    std::vector<int> exponents_;
};

/// All |G| characters of an abelian group via decomposition into cyclic
/// factors, ordered lexicographically on exponent tuples (trivial first).
std::vector<Character> characters(const FiniteGroup& g);

/// Smallest k such that chi is constant on the fibers of G_d -> G_k;
/// 0 iff chi is trivial. chi must live on the tower's top level.
int conductor_level(const Character& chi, const Tower& t);

/// Z = sum over characters of exp(-lambda * conductor_level).
double partition_function(const Tower& t, double lambda);

/// (1/Z) sum over characters of prod_j chi(Frob_{q_j}) exp(-lambda * level).
/// Cyclotomic towers only; each q must be coprime to p.
std::complex<double> frobenius_correlation(const Tower& t,
                                           const std::vector<long long>& primes,
                                           double lambda);

}  // namespace profin
