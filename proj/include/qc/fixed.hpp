#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "qc/padic.hpp"

namespace qc {

/*
 * Working-precision arithmetic for the Frobenius and Coleman engines.
 *
 * A value is n * p^e with n reduced mod p^(W-e): everything is known
 * modulo p^W and no per-operation bookkeeping is done.  The engines add
 * guard digits to W and certify what they return (det/trace identities,
 * comparisons across two working precisions).
 */
class Fx {
public:
    Fx() = default;
    Fx(std::uint64_t p, long W) : p_(p), W_(W) {}
    static Fx from_int(std::uint64_t p, long W, const mpz_class& n);
    static Fx from_rational(std::uint64_t p, long W, const mpq_class& q);
    static Fx from_padic(const Padic& a, long W);

    std::uint64_t prime() const { return p_; }
    long work() const { return W_; }
    bool is_zero() const { return n_ == 0; }
    // W for zero
    long valuation() const;

    Fx operator-() const;
    Fx& operator+=(const Fx& o);
    Fx& operator-=(const Fx& o);
    Fx& operator*=(const Fx& o);
    Fx& operator/=(const Fx& o) { return *this *= o.inverse(); }
    Fx inverse() const;
    Fx pow(long e) const;
    Fx mul_int(long k) const;
    Fx div_int(long k) const;

    // As a Padic claiming absolute precision N (N <= W expected).
    Padic to_padic(long N) const;
    // value * p^s as an integer mod p^(W+s); needs valuation >= -s
    mpz_class scaled(long s) const;
    // m * p^-s
    static Fx from_scaled(std::uint64_t p, long W, const mpz_class& m, long s);

private:
    std::uint64_t p_ = 0;
    long W_ = 0;
    long e_ = 0;
    mpz_class n_;
    void reduce();
};

inline Fx operator+(Fx a, const Fx& b) { return a += b; }
inline Fx operator-(Fx a, const Fx& b) { return a -= b; }
inline Fx operator*(Fx a, const Fx& b) { return a *= b; }
inline Fx operator/(Fx a, const Fx& b) { return a /= b; }

using FxPoly = std::vector<Fx>;  // coefficient k is x^k

FxPoly poly_add(const FxPoly& a, const FxPoly& b);
FxPoly poly_sub(const FxPoly& a, const FxPoly& b);
FxPoly poly_mul(const FxPoly& a, const FxPoly& b);
FxPoly poly_scale(const FxPoly& a, const Fx& c);
FxPoly poly_deriv(const FxPoly& a);
Fx poly_eval(const FxPoly& a, const Fx& x);
// Division by a monic polynomial: a = q*m + r with deg r < deg m.
void poly_divmod_monic(const FxPoly& a, const FxPoly& m, FxPoly& q, FxPoly& r);

// Gaussian elimination with minimum-valuation pivots; A is row-major n x n.
std::vector<Fx> fx_solve(std::vector<std::vector<Fx>> A, std::vector<Fx> b);

}  // namespace qc
