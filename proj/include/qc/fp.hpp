#pragma once

#include <cstdint>
#include <vector>

namespace qc {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);
bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

// Element of F_p.
struct Fp {
    std::uint64_t v = 0;
    std::uint64_t p = 0;

    Fp() = default;
    Fp(std::uint64_t value, std::uint64_t prime) : v(value % prime), p(prime) {}
    static Fp from_signed(long long a, std::uint64_t prime);

    bool is_zero() const { return v == 0; }
    Fp operator-() const { return Fp(v ? p - v : 0, p); }
    Fp operator+(const Fp& o) const { return Fp(v + o.v >= p ? v + o.v - p : v + o.v, p); }
    Fp operator-(const Fp& o) const { return *this + (-o); }
    Fp operator*(const Fp& o) const { return Fp(mulmod(v, o.v, p), p); }
    Fp inverse() const;
    Fp operator/(const Fp& o) const { return *this * o.inverse(); }
    bool operator==(const Fp& o) const { return v == o.v && p == o.p; }
};

/*
 * Dense polynomial over F_p, coefficient k of x^k.  Trailing zeros are
 * trimmed so degree() is exact; the zero polynomial has degree -1.
 */
class PrimeFieldPoly {
public:
    PrimeFieldPoly() = default;
    PrimeFieldPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);
    static PrimeFieldPoly monomial(std::uint64_t p, std::uint64_t c, std::size_t k);

    std::uint64_t prime() const { return p_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    std::uint64_t coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    PrimeFieldPoly operator+(const PrimeFieldPoly& o) const;
    PrimeFieldPoly operator-(const PrimeFieldPoly& o) const;
    PrimeFieldPoly operator*(const PrimeFieldPoly& o) const;
    PrimeFieldPoly scale(std::uint64_t c) const;
    PrimeFieldPoly derivative() const;
    // Antiderivative with zero constant; needs degree < p - 1.
    PrimeFieldPoly integral() const;
    // this = q*d + r
    void divmod(const PrimeFieldPoly& d, PrimeFieldPoly& q, PrimeFieldPoly& r) const;

    std::uint64_t eval(std::uint64_t x) const;
    bool operator==(const PrimeFieldPoly& o) const { return p_ == o.p_ && c_ == o.c_; }

private:
    std::uint64_t p_ = 0;
    std::vector<std::uint64_t> c_;
    void trim();
};

}  // namespace qc
