#include "qc/fp.hpp"

#include "qc/errors.hpp"

namespace qc {

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) throw DomainError("inverse of 0 in F_p");
    return powmod(a, p - 2, p);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) d /= 2, ++s;
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s && comp; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) comp = false;
        }
        if (comp) return false;
    }
    return true;
}

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound <= 2) return out;
    std::vector<bool> sieve(bound, true);
    sieve[0] = sieve[1] = false;
    for (std::uint64_t i = 2; i * i < bound; ++i)
        if (sieve[i])
            for (std::uint64_t j = i * i; j < bound; j += i) sieve[j] = false;
    for (std::uint64_t i = 2; i < bound; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

Fp Fp::from_signed(long long a, std::uint64_t prime) {
    long long m = a % static_cast<long long>(prime);
    if (m < 0) m += static_cast<long long>(prime);
    return Fp(static_cast<std::uint64_t>(m), prime);
}

Fp Fp::inverse() const { return Fp(invmod(v, p), p); }

PrimeFieldPoly::PrimeFieldPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
    for (auto& x : c_) x %= p_;
    trim();
}

PrimeFieldPoly PrimeFieldPoly::monomial(std::uint64_t p, std::uint64_t c, std::size_t k) {
    std::vector<std::uint64_t> v(k + 1, 0);
    v[k] = c;
    return PrimeFieldPoly(p, v);
}

void PrimeFieldPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PrimeFieldPoly PrimeFieldPoly::operator+(const PrimeFieldPoly& o) const {
    std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (coeff(i) + o.coeff(i)) % p_;
    return PrimeFieldPoly(p_, r);
}

PrimeFieldPoly PrimeFieldPoly::operator-(const PrimeFieldPoly& o) const {
    std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (coeff(i) + p_ - o.coeff(i)) % p_;
    return PrimeFieldPoly(p_, r);
}

PrimeFieldPoly PrimeFieldPoly::operator*(const PrimeFieldPoly& o) const {
    if (c_.empty() || o.c_.empty()) return PrimeFieldPoly(p_, {});
    std::vector<std::uint64_t> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = (r[i + j] + mulmod(c_[i], o.c_[j], p_)) % p_;
    return PrimeFieldPoly(p_, r);
}

PrimeFieldPoly PrimeFieldPoly::scale(std::uint64_t c) const {
    std::vector<std::uint64_t> r = c_;
    for (auto& x : r) x = mulmod(x, c % p_, p_);
    return PrimeFieldPoly(p_, r);
}

PrimeFieldPoly PrimeFieldPoly::derivative() const {
    std::vector<std::uint64_t> r;
    for (std::size_t k = 1; k < c_.size(); ++k) r.push_back(mulmod(c_[k], k % p_, p_));
    return PrimeFieldPoly(p_, r);
}

PrimeFieldPoly PrimeFieldPoly::integral() const {
    if (degree() >= static_cast<long>(p_) - 1) throw DomainError("integral needs degree < p - 1 over F_p");
    std::vector<std::uint64_t> r(c_.size() + 1, 0);
    for (std::size_t k = 0; k < c_.size(); ++k) r[k + 1] = mulmod(c_[k], invmod(k + 1, p_), p_);
    return PrimeFieldPoly(p_, r);
}

void PrimeFieldPoly::divmod(const PrimeFieldPoly& d, PrimeFieldPoly& q, PrimeFieldPoly& r) const {
    if (d.c_.empty()) throw DomainError("division by the zero polynomial");
    std::vector<std::uint64_t> rem = c_;
    const std::size_t dd = d.c_.size() - 1;
    std::vector<std::uint64_t> quo(rem.size() > dd ? rem.size() - dd : 0, 0);
    const std::uint64_t li = invmod(d.c_.back(), p_);
    for (std::size_t i = rem.size(); i-- > dd;) {
        std::uint64_t c = mulmod(rem[i], li, p_);
        quo[i - dd] = c;
        if (!c) continue;
        for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] = (rem[i - dd + j] + p_ - mulmod(c, d.c_[j], p_)) % p_;
    }
    q = PrimeFieldPoly(p_, quo);
    rem.resize(std::min(rem.size(), dd));
    r = PrimeFieldPoly(p_, rem);
}

std::uint64_t PrimeFieldPoly::eval(std::uint64_t x) const {
    std::uint64_t r = 0;
    x %= p_;
    for (std::size_t i = c_.size(); i-- > 0;) r = (mulmod(r, x, p_) + c_[i]) % p_;
    return r;
}

}  // namespace qc
