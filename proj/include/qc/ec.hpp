#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qc/errors.hpp"
#include "qc/fp.hpp"
#include "qc/padic.hpp"
#include "qc/series.hpp"

namespace qc {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct CurveModel {
    std::string label;
    std::array<mpz_class, 5> a;  // a1 a2 a3 a4 a6
    mpz_class b2, b4, b6, b8, c4, c6, disc;

    static CurveModel make(const std::array<mpz_class, 5>& ainvs, std::string label = {});
    const mpz_class& a1() const { return a[0]; }
    const mpz_class& a2() const { return a[1]; }
    const mpz_class& a3() const { return a[2]; }
    const mpz_class& a4() const { return a[3]; }
    const mpz_class& a6() const { return a[4]; }
};

enum class ReductionType { good, multiplicative, additive };

struct ReductionData {
    std::uint64_t l = 0;
    long N = 0;  // ord_l(disc)
    ReductionType type = ReductionType::good;
};

ReductionData classify_reduction(const CurveModel& E, std::uint64_t l);
// Primes dividing the discriminant, ascending.
std::vector<std::uint64_t> bad_primes(const CurveModel& E);
const char* to_string(ReductionType t);

template <class F>
struct Point {
    F x, y;
    bool inf = false;
    static Point infinity() {
        Point P;
        P.inf = true;
        return P;
    }
};

// Field adapters: exact constants embedded next to a sample element.
inline bool field_zero(const mpq_class& a) { return a == 0; }
inline bool field_zero(const Padic& a) { return a.is_zero(); }
inline bool field_zero(const Fp& a) { return a.is_zero(); }
inline mpq_class field_const(const mpq_class&, const mpz_class& n) { return mpq_class(n); }
inline Fp field_const(const Fp& like, const mpz_class& n) {
    return Fp(static_cast<std::uint64_t>(mpz_fdiv_ui(n.get_mpz_t(), like.p)), like.p);
}
inline Padic field_const(const Padic& like, const mpz_class& n) {
    long v = like.is_zero() ? 0 : like.valuation();
    return Padic::from_int(like.prime(), n, like.precision() + (v < 0 ? -2 * v : 0) + 64);
}

template <class F>
F weierstrass_residual(const CurveModel& E, const F& x, const F& y) {
    auto c = [&](const mpz_class& n) { return field_const(x, n); };
    return y * y + c(E.a1()) * x * y + c(E.a3()) * y - (x * x * x + c(E.a2()) * x * x + c(E.a4()) * x + c(E.a6()));
}

template <class F>
bool on_curve(const CurveModel& E, const Point<F>& P) {
    return P.inf || field_zero(weierstrass_residual(E, P.x, P.y));
}

template <class F>
Point<F> negate(const CurveModel& E, const Point<F>& P) {
    if (P.inf) return P;
    Point<F> R = P;
    R.y = -P.y - field_const(P.x, E.a1()) * P.x - field_const(P.x, E.a3());
    return R;
}

template <class F>
Point<F> add(const CurveModel& E, const Point<F>& P, const Point<F>& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    auto c = [&](const mpz_class& n) { return field_const(P.x, n); };
    F lambda;
    if (field_zero(P.x - Q.x)) {
        if (field_zero(P.y + Q.y + c(E.a1()) * Q.x + c(E.a3()))) return Point<F>::infinity();
        F three = c(3), two = c(2);
        lambda = (three * P.x * P.x + two * c(E.a2()) * P.x + c(E.a4()) - c(E.a1()) * P.y) /
                 (two * P.y + c(E.a1()) * P.x + c(E.a3()));
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    F nu = P.y - lambda * P.x;
    Point<F> R;
    R.x = lambda * lambda + c(E.a1()) * lambda - c(E.a2()) - P.x - Q.x;
    R.y = -(lambda + c(E.a1())) * R.x - nu - c(E.a3());
    return R;
}

template <class F>
Point<F> scalar_mul(const CurveModel& E, long m, const Point<F>& P) {
    if (m < 0) return scalar_mul(E, -m, negate(E, P));
    Point<F> R = Point<F>::infinity(), B = P;
    while (m) {
        if (m & 1) R = add(E, R, B);
        m >>= 1;
        if (m) B = add(E, B, B);
    }
    return R;
}

// psi_n evaluated at an affine point, by the standard recurrences.
template <class F>
F division_value(const CurveModel& E, long n, const Point<F>& P) {
    const F& x = P.x;
    const F& y = P.y;
    auto c = [&](const mpz_class& k) { return field_const(x, k); };
    std::map<long, F> memo;
    memo[0] = c(0);
    memo[1] = c(1);
    memo[2] = c(2) * y + c(E.a1()) * x + c(E.a3());
    F x2 = x * x, x3 = x2 * x, x4 = x3 * x;
    memo[3] = c(3) * x4 + c(E.b2) * x3 + c(3) * c(E.b4) * x2 + c(3) * c(E.b6) * x + c(E.b8);
    F x5 = x4 * x, x6 = x5 * x;
    memo[4] = memo[2] * (c(2) * x6 + c(E.b2) * x5 + c(5) * c(E.b4) * x4 + c(10) * c(E.b6) * x3 +
                         c(10) * c(E.b8) * x2 + c(E.b2 * E.b8 - E.b4 * E.b6) * x + c(E.b4 * E.b8 - E.b6 * E.b6));
    auto rec = [&](auto&& self, long k) -> F {
        if (k < 0) return -self(self, -k);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        F r;
        if (k % 2) {
            long m = (k - 1) / 2;
            F a = self(self, m + 2), b = self(self, m), d = self(self, m - 1), e = self(self, m + 1);
            r = a * b * b * b - d * e * e * e;
        } else {
            long m = k / 2;
            F a = self(self, m - 1), b = self(self, m), d = self(self, m + 2), e = self(self, m - 2),
              f = self(self, m + 1);
            r = (a * a * b * d - e * b * f * f) / memo[2];
        }
        memo[k] = r;
        return r;
    };
    return rec(rec, n);
}

// #E(F_p) and a_p by a quadratic-character sweep.
std::pair<long, long> count_points_Fp(const CurveModel& E, std::uint64_t p);
// All affine points of the reduction mod p, x then y ascending.
std::vector<Point<Fp>> affine_points_Fp(const CurveModel& E, std::uint64_t p);

// Laurent series with exact rational coefficients: sum c[i] z^(val+i).
struct Laurent {
    long val = 0;
    std::vector<mpq_class> c;
    mpq_class at(long k) const {
        long i = k - val;
        return i >= 0 && i < static_cast<long>(c.size()) ? c[static_cast<std::size_t>(i)] : mpq_class(0);
    }
    // exponent one past the last known term
    long end() const { return val + static_cast<long>(c.size()); }
};

Laurent laurent_mul(const Laurent& a, const Laurent& b, long end);
Laurent laurent_add(const Laurent& a, const Laurent& b);
Laurent laurent_scale(const Laurent& a, const mpq_class& s);
Laurent laurent_deriv(const Laurent& a);
// Antiderivative with zero constant; a z^-1 term goes to log_coeff.
Laurent laurent_integrate(const Laurent& a, mpq_class* log_coeff = nullptr);
Laurent laurent_inverse(const Laurent& a, long end);

/*
 * Expansions at O in z = -x/y, known through z^(T-1) for power series
 * (the same number of terms for Laurent ones).
 *   alpha = dx/(2y + a1 x + a3) = omega(z) dz,  beta = x alpha.
 */
struct FormalExpansions {
    long T = 0;
    Laurent w, x, y;
    Laurent omega;   // alpha / dz
    Laurent beta;    // beta / dz
    Laurent lambda;  // int alpha, zero constant
    Laurent ibeta;   // int beta, zero constant (no residue)
    Laurent d2;      // int alpha * ibeta without the log term
    mpq_class d2_log;  // coefficient of log z in D2 near O
    std::vector<mpq_class> exp;  // formal_exp: inverse of lambda, exp[k] is t^k
};

FormalExpansions formal_expansions(const CurveModel& E, long T);
// omega recomputed as dy / (3x^2 + 2 a2 x + a4 - a1 y) from the same x(z), y(z).
Laurent omega_via_dy(const CurveModel& E, const FormalExpansions& F);

// Laurent -> DiskSeries over Q_p with absolute precision N.
DiskSeries to_disk(const Laurent& f, std::uint64_t p, long N);
// Evaluate at z with v(z) >= 1 (terms beyond the expansion are dropped).
Padic eval_laurent(const Laurent& f, const Padic& z);

// z = -x/y; P must be affine with y invertible.
Padic z_param(const Point<Padic>& P);
Point<Padic> point_from_z(const FormalExpansions& F, const Padic& z);

// Reduction mod p of a point with integral coordinates (O otherwise).
Point<Fp> reduce_point(const Point<Padic>& P);
Point<Padic> to_padic_point(const Point<mpq_class>& P, std::uint64_t p, long N);
// A point with x in Z_p drawn uniformly mod p^N; skips Weierstrass disks unless allowed.
Point<Padic> random_integral_point(const CurveModel& E, std::uint64_t p, long N, std::mt19937_64& rng,
                                   bool allow_weierstrass = false);
// A point of the residue disk of an affine point of the reduction; in a
// Weierstrass disk the 2-torsion point.
Point<Padic> lift_residue_point(const CurveModel& E, const Point<Fp>& Pbar, long N);

/*
 * log(P) = lambda(z(mP))/m with m = #E(F_p).  Torsion gives an exact zero
 * at precision N.
 */
Padic elliptic_log(const CurveModel& E, std::uint64_t p, const Point<Padic>& P, long N);

}  // namespace qc
