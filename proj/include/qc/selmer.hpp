#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qc/coleman.hpp"
#include "qc/ec.hpp"

namespace qc {

// W_l = { n(N_l - n)/(2 N_l) log l : 0 <= n < N_l }, distinct rationals only.
struct WSet {
    std::uint64_t l = 0;
    long N = 0;
    ReductionType type = ReductionType::good;
    bool overridden = false;
    std::vector<mpq_class> values;  // coefficients of log l, ascending in n
    std::vector<Padic> evaluated;
};

// custom coefficient lists per prime, replacing the formula
using WOverrides = std::map<std::uint64_t, std::vector<mpq_class>>;

// Additive primes default to {0} unless overridden.
std::vector<WSet> w_sets(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p, long N = 20,
                         const WOverrides& overrides = {});
WSet w_set(std::uint64_t l, long Nl, std::uint64_t p, long N = 20);

// ||w|| = sum_l w_l, keyed by the exact coefficient vector l -> q
struct WNorm {
    std::map<std::uint64_t, mpq_class> coeffs;
    Padic value;
    std::string key() const;
};
std::vector<WNorm> w_norms(const std::vector<WSet>& sets);

struct SelmerOptions {
    long N = 20;
    int match_digits = 5;
    int reject_below = 2;
    int max_reruns = 2;  // precision doubles on each
    Engine engine = Engine::automatic;
    WOverrides overrides;
    std::vector<std::string> assumptions;  // echoed, never checked
};

struct WeaklyGlobalPoint {
    Point<Padic> P;
    std::uint64_t residue_x = 0, residue_y = 0;
    Padic log, D2;
    int known = -1;  // index into the known integral points
};

struct PsiSet {
    WNorm norm;
    std::vector<WeaklyGlobalPoint> points;
};

struct Level1Report {
    std::uint64_t p = 0;
    long precision = 0;
    long reduction_order = 0;  // #E(F_p)
    std::vector<WeaklyGlobalPoint> points;
};

struct Level2Report {
    std::uint64_t p = 0;
    long precision = 0;  // after any reruns
    int reruns = 0;
    std::size_t norm_count = 0;
    std::vector<PsiSet> psi;                  // every norm, most empty
    std::vector<WeaklyGlobalPoint> points;    // the union
    std::vector<WeaklyGlobalPoint> unmatched; // level 1 points in no Psi(w)
    std::optional<Padic> c;                   // rank one only
    std::vector<std::string> assumptions;
};

// Integral points with log z = 0.
Level1Report level1_set(const Coleman& C, const std::vector<Point<mpq_class>>& known = {});

Level2Report level2_set_rank0(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p,
                              const std::vector<Point<mpq_class>>& known = {}, const SelmerOptions& opt = {});

// Zeros of D2(z) - c log^2(z) - ||w||; c = D2(y)/log^2(y) unless given.
Level2Report level2_set_rank1(const CurveModel& E, const std::vector<std::uint64_t>& S, std::uint64_t p,
                              const Point<mpq_class>& y, const std::optional<Padic>& c_override = {},
                              const std::vector<Point<mpq_class>>& known = {}, const SelmerOptions& opt = {});

}  // namespace qc
