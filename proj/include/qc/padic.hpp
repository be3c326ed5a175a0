#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qc {

constexpr long kDefaultPrecision = 20;
constexpr long kDefaultMatchDigits = 5;

// p^k, memoised per thread.
const mpz_class& ppow(std::uint64_t p, long k);

// Valuation of a nonzero integer / rational.
long vp(const mpz_class& n, std::uint64_t p);
long vp(const mpq_class& q, std::uint64_t p);

/*
 * Element of Q_p known modulo p^N:  u * p^v + O(p^N).
 *
 * Nonzero values keep u coprime to p and reduced mod p^(N-v).  A value
 * that is zero at its precision is the distinct state "0 + O(p^N)"; its
 * valuation() reports N.
 */
class Padic {
public:
    Padic() = default;

    static Padic zero(std::uint64_t p, long N);
    static Padic one(std::uint64_t p, long N) { return from_int(p, 1, N); }
    static Padic from_int(std::uint64_t p, const mpz_class& n, long N);
    static Padic from_int(std::uint64_t p, long n, long N) { return from_int(p, mpz_class(n), N); }
    static Padic from_rational(std::uint64_t p, const mpq_class& q, long N);
    // Normalises: pulls p out of u and reduces.
    static Padic from_parts(std::uint64_t p, long v, mpz_class u, long N);
    // Inverse of str(); throws DomainError on malformed text.
    static Padic parse(std::string_view text);

    std::uint64_t prime() const { return p_; }
    long valuation() const { return zero_ ? N_ : v_; }
    long precision() const { return N_; }
    long relative_precision() const { return zero_ ? 0 : N_ - v_; }
    const mpz_class& unit() const { return u_; }
    bool is_zero() const { return zero_; }
    bool is_unit() const { return !zero_ && v_ == 0; }
    bool is_integral() const { return valuation() >= 0; }

    Padic operator-() const;
    Padic& operator+=(const Padic& o);
    Padic& operator-=(const Padic& o);
    Padic& operator*=(const Padic& o);
    Padic& operator/=(const Padic& o);

    Padic inverse() const;
    Padic pow(long e) const;

    // Drop digits beyond N (no-op if N >= precision()).
    Padic reduce(long N) const;
    // Claim digits up to N by padding with zeros; only for values known exactly.
    Padic lift(long N) const;

    // u*p^v as an exact rational (v may be negative).
    mpq_class to_rational() const;
    // Requires valuation() >= 0.
    mpz_class to_integer() const;
    // Residue mod p; requires valuation() >= 0.
    std::uint64_t residue() const;

    std::string str() const;

private:
    std::uint64_t p_ = 0;
    long v_ = 0;
    long N_ = 0;
    mpz_class u_;
    bool zero_ = true;
};

Padic operator+(Padic a, const Padic& b);
Padic operator-(Padic a, const Padic& b);
Padic operator*(Padic a, const Padic& b);
Padic operator/(Padic a, const Padic& b);
Padic operator*(const Padic& a, long k);
Padic operator*(long k, const Padic& a);
Padic operator/(const Padic& a, long k);
Padic operator+(const Padic& a, long k);
Padic operator-(const Padic& a, long k);

// v(a - b), capped at the common precision.
long agreement(const Padic& a, const Padic& b);
// a == b at the common precision.
bool same(const Padic& a, const Padic& b);

// Iwasawa branch: log p = 0.
Padic padic_log(const Padic& x);
// Requires v(x) >= 1.
Padic padic_exp(const Padic& x);
// omega(a) for a unit a.
Padic teichmuller(const Padic& a);
Padic teichmuller(std::uint64_t p, std::uint64_t residue, long N);
// Square root with residue of the unit part equal to hint (0 = any).
Padic padic_sqrt(const Padic& x, std::uint64_t hint = 0);
bool is_square(const Padic& x);

}  // namespace qc
