#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "qc/ec.hpp"
#include "qc/fixed.hpp"

namespace qc {

/*
 * y'^2 = x'^3 + A x' + B with x' = s x + t, y' = v (2y + a1 x + a3).
 * In terms of w0 = dx'/2y', w1 = x' dx'/2y':
 *   alpha = calpha[0] w0,  beta = cbeta[0] w0 + cbeta[1] w1.
 */
struct ShortModel {
    mpz_class A, B;
    mpq_class s, t, v;
    bool identity = false;
    std::array<mpq_class, 2> calpha, cbeta;
};

ShortModel short_model(const CurveModel& E, std::uint64_t p);
Point<Padic> to_short(const CurveModel& E, const ShortModel& S, const Point<Padic>& P);
Point<Padic> from_short(const CurveModel& E, const ShortModel& S, const Point<Padic>& P);

/*
 * phi^* w_i = d h_i + sum_j M[j][i] w_j for the lift x -> x^p.
 * h_i = y * sum_j H[i][j](x) Q(x)^-j, with j = 0 the polynomial part.
 */
struct FrobeniusData {
    std::uint64_t p = 0;
    long N = 0;  // certified precision of M
    long W = 0;  // working precision of the Fx data
    ShortModel sm;
    std::array<std::array<Padic, 2>, 2> M;
    std::array<std::array<Fx, 2>, 2> Mw;
    std::array<std::map<long, FxPoly>, 2> H;
    FxPoly Q;  // x^3 + A x + B

    Padic det() const { return M[0][0] * M[1][1] - M[0][1] * M[1][0]; }
    Padic trace() const { return M[0][0] + M[1][1]; }
    // h_i at an affine point of the short model
    Fx h_value(int i, const Fx& x, const Fx& y) const;
};

// extra_guard widens W beyond what M itself needs (Coleman evaluates h far out).
FrobeniusData frobenius_matrix(const CurveModel& E, std::uint64_t p, long N, long extra_guard = 0);

}  // namespace qc
