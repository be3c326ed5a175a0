#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "qc/ec.hpp"
#include "qc/frobenius.hpp"
#include "qc/series.hpp"

namespace qc {

// I_alpha = int_b^P alpha, I_beta = int_b^P beta, D2 = int_b^P alpha beta.
struct ColemanValues {
    Padic I_alpha, I_beta, D2;
};

enum class Engine { automatic, frobenius, multiplication };
const char* to_string(Engine e);

/*
 * A residue disk with a local parameter t, v(t) >= 1:
 *   ordinary disk     t = x - x_c
 *   Weierstrass disk  t = u - u_c,  u = 2y + a1 x + a3
 *   disk of O         t = z (tangential base, center is O)
 * fa, fb, fab are the tiny antiderivatives from the center with zero
 * constants; fab' = alpha * fb.
 */
struct LocalDisk {
    enum Kind { origin, ordinary, weierstrass } kind = ordinary;
    Point<Padic> center;
    DiskSeries x, y;
    DiskSeries fa, fb, fab;
    Padic fab_log;  // coefficient of log t in fab (disk of O only)
    mpz_class a1, a3;

    Padic param(const Point<Padic>& P) const;
    Point<Padic> point(const Padic& t) const;
    bool contains(const Point<Padic>& P) const;
};

class Coleman {
public:
    Coleman(const CurveModel& E, std::uint64_t p, long N, Engine engine = Engine::automatic);
    ~Coleman();
    Coleman(Coleman&&) noexcept;

    std::uint64_t prime() const { return p_; }
    long precision() const { return N_; }
    // input points should carry at least this much precision
    long working_precision() const { return W_; }
    Engine engine() const { return engine_; }
    const CurveModel& curve() const { return E_; }
    const FormalExpansions& formal() const { return F_; }
    const FrobeniusData* frobenius() const;
    // constant term of int beta in z = -x/y; integrals here use z_b = -2x/(2y + a1 x + a3)
    const Padic& z_constant() const { return C0_; }

    ColemanValues at(const Point<Padic>& P) const;
    ColemanValues at_multiplication(const Point<Padic>& P) const;
    ColemanValues at_frobenius(const Point<Padic>& P) const;

    LocalDisk disk(const Point<Padic>& center) const;
    // from, to in one disk
    ColemanValues tiny(const Point<Padic>& from, const Point<Padic>& to) const;
    ColemanValues tiny_from_base(const Point<Padic>& to) const;

    // D2 and log on the disk of center, as series in the disk parameter
    DiskSeries d2_series(const LocalDisk& D, const ColemanValues& at_center) const;
    DiskSeries log_series(const LocalDisk& D, const ColemanValues& at_center) const;

private:
    CurveModel E_;
    std::uint64_t p_;
    long N_, W_;
    Engine engine_;
    long T_;  // terms of local series
    FormalExpansions F_;
    Padic C0_;
    struct FrobEngine;
    std::unique_ptr<FrobEngine> fe_;

    ColemanValues compose(const ColemanValues& to_q, const ColemanValues& q_to_p) const;
    ColemanValues finish(ColemanValues v) const;
};

// The operations under their contract names.
ColemanValues tiny_integrals(const Coleman& C, const std::optional<Point<Padic>>& from, const Point<Padic>& to);
std::pair<Padic, Padic> single_integrals_at(const Coleman& C, const Point<Padic>& P);
Padic d2_at(const Coleman& C, const Point<Padic>& P);
DiskSeries d2_disk_series(const Coleman& C, const Point<Padic>& center);
DiskSeries log_disk_series(const Coleman& C, const Point<Padic>& center);

}  // namespace qc
