#include "qc/padic.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <unordered_map>
#include <vector>

#include "qc/errors.hpp"
#include "qc/fp.hpp"

namespace qc {

const mpz_class& ppow(std::uint64_t p, long k) {
    if (k < 0) throw ConsistencyError("negative exponent in ppow");
    thread_local std::unordered_map<std::uint64_t, std::vector<mpz_class>> cache;
    auto& tab = cache[p];
    if (tab.empty()) tab.emplace_back(1);
    while (static_cast<long>(tab.size()) <= k) tab.push_back(tab.back() * static_cast<unsigned long>(p));
    return tab[static_cast<std::size_t>(k)];
}

long vp(const mpz_class& n, std::uint64_t p) {
    if (n == 0) throw DomainError("valuation of zero");
    mpz_class t;
    mpz_class pp(static_cast<unsigned long>(p));
    return static_cast<long>(mpz_remove(t.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long vp(const mpq_class& q, std::uint64_t p) {
    return vp(mpz_class(q.get_num()), p) - vp(mpz_class(q.get_den()), p);
}

namespace {

void check_prime(std::uint64_t a, std::uint64_t b) {
    if (a != b) throw DomainError("mixed primes in p-adic arithmetic");
}

mpz_class invmod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw ConsistencyError("non-invertible unit");
    return r;
}

// Tonelli-Shanks; a must be a nonzero square mod p.
std::uint64_t sqrt_mod_p(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    std::uint64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) q /= 2, ++s;
    std::uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    std::uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) tt = mulmod(tt, tt, p), ++i;
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

}  // namespace

Padic Padic::zero(std::uint64_t p, long N) {
    Padic z;
    z.p_ = p;
    z.v_ = N;
    z.N_ = N;
    z.zero_ = true;
    return z;
}

Padic Padic::from_parts(std::uint64_t p, long v, mpz_class u, long N) {
    if (u == 0 || v >= N) return zero(p, N);
    mpz_class pp(static_cast<unsigned long>(p));
    v += static_cast<long>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), pp.get_mpz_t()));
    if (v >= N) return zero(p, N);
    Padic r;
    r.p_ = p;
    r.v_ = v;
    r.N_ = N;
    r.zero_ = false;
    mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), ppow(p, N - v).get_mpz_t());
    r.u_ = std::move(u);
    return r;
}

Padic Padic::from_int(std::uint64_t p, const mpz_class& n, long N) {
    return from_parts(p, 0, n, N);
}

Padic Padic::from_rational(std::uint64_t p, const mpq_class& q, long N) {
    if (q == 0) return zero(p, N);
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class pp(static_cast<unsigned long>(p));
    long v = static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
    v -= static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
    if (v >= N) return zero(p, N);
    const mpz_class& m = ppow(p, N - v);
    mpz_class u = num * invmod(den, m);
    return from_parts(p, v, u, N);
}

Padic Padic::parse(std::string_view text) {
    static const std::regex re(R"(^\s*(\d+)\*(\d+)\^(-?\d+)\s*\+\s*O\((\d+)\^(-?\d+)\)\s*$)");
    std::string s(text);
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw DomainError("malformed p-adic text: " + s);
    mpz_class u(m[1].str());
    unsigned long p1 = std::stoul(m[2].str()), p2 = std::stoul(m[4].str());
    long v = std::stol(m[3].str()), N = std::stol(m[5].str());
    if (p1 != p2 || p1 < 3 || mpz_probab_prime_p(mpz_class(p1).get_mpz_t(), 25) == 0)
        throw DomainError("bad prime in p-adic text: " + s);
    if (u == 0) return zero(p1, N);
    if (v >= N || u >= ppow(p1, N - v) || u % p1 == 0) throw DomainError("non-canonical p-adic text: " + s);
    return from_parts(p1, v, u, N);
}

Padic Padic::operator-() const {
    if (zero_) return *this;
    return from_parts(p_, v_, -u_, N_);
}

Padic& Padic::operator+=(const Padic& o) {
    check_prime(p_, o.p_);
    long N = std::min(N_, o.N_);
    if (o.zero_) return *this = reduce(N);
    if (zero_) return *this = o.reduce(N);
    long v = std::min(v_, o.v_);
    if (v >= N) return *this = zero(p_, N);
    mpz_class u = v_ == v ? u_ : u_ * ppow(p_, v_ - v);
    if (o.v_ == v) u += o.u_;
    else u += o.u_ * ppow(p_, o.v_ - v);
    return *this = from_parts(p_, v, std::move(u), N);
}

Padic& Padic::operator-=(const Padic& o) { return *this += -o; }

Padic& Padic::operator*=(const Padic& o) {
    check_prime(p_, o.p_);
    if (zero_ || o.zero_) {
        long N = std::min(N_ + o.valuation(), o.N_ + valuation());
        return *this = zero(p_, N);
    }
    long v = v_ + o.v_;
    long N = std::min(N_ + o.v_, o.N_ + v_);
    mpz_class u = u_ * o.u_;
    mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), ppow(p_, N - v).get_mpz_t());
    Padic r;
    r.p_ = p_;
    r.v_ = v;
    r.N_ = N;
    r.zero_ = false;
    r.u_ = std::move(u);
    return *this = std::move(r);
}

Padic& Padic::operator/=(const Padic& o) { return *this *= o.inverse(); }

Padic Padic::inverse() const {
    if (zero_) throw PrecisionError("division by a value indistinguishable from 0");
    long r = N_ - v_;
    Padic q;
    q.p_ = p_;
    q.v_ = -v_;
    q.N_ = -v_ + r;
    q.zero_ = false;
    q.u_ = invmod(u_, ppow(p_, r));
    return q;
}

Padic Padic::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return one(p_, std::max(N_, relative_precision()));
    Padic r, b = *this;
    bool first = true;
    while (e) {
        if (e & 1) {
            r = first ? b : r * b;
            first = false;
        }
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

Padic Padic::reduce(long N) const {
    if (N >= N_) return *this;
    if (zero_ || v_ >= N) return zero(p_, N);
    return from_parts(p_, v_, u_, N);
}

Padic Padic::lift(long N) const {
    if (N <= N_) return reduce(N);
    Padic r = *this;
    r.N_ = N;
    if (zero_) r.v_ = N;
    return r;
}

mpq_class Padic::to_rational() const {
    if (zero_) return 0;
    mpq_class r(u_);
    if (v_ >= 0) r *= ppow(p_, v_);
    else r /= ppow(p_, -v_);
    return r;
}

mpz_class Padic::to_integer() const {
    if (zero_) return 0;
    if (v_ < 0) throw DomainError("non-integral p-adic value");
    return u_ * ppow(p_, v_);
}

std::uint64_t Padic::residue() const {
    if (valuation() < 0) throw DomainError("residue of non-integral value");
    if (zero_ || v_ > 0) return 0;
    return mpz_fdiv_ui(u_.get_mpz_t(), p_);
}

std::string Padic::str() const {
    std::string ps = std::to_string(p_);
    if (zero_) return "0*" + ps + "^" + std::to_string(N_) + " + O(" + ps + "^" + std::to_string(N_) + ")";
    return u_.get_str() + "*" + ps + "^" + std::to_string(v_) + " + O(" + ps + "^" + std::to_string(N_) + ")";
}

Padic operator+(Padic a, const Padic& b) { return a += b; }
Padic operator-(Padic a, const Padic& b) { return a -= b; }
Padic operator*(Padic a, const Padic& b) { return a *= b; }
Padic operator/(Padic a, const Padic& b) { return a /= b; }

// Integers are exact, so they borrow enough precision not to limit the result.
Padic operator*(const Padic& a, long k) {
    return a * Padic::from_int(a.prime(), k, a.precision() - a.valuation() + 64);
}
Padic operator*(long k, const Padic& a) { return a * k; }
Padic operator/(const Padic& a, long k) {
    return a * Padic::from_rational(a.prime(), mpq_class(1, k), a.precision() - a.valuation() + 64);
}
Padic operator+(const Padic& a, long k) { return a + Padic::from_int(a.prime(), k, a.precision()); }
Padic operator-(const Padic& a, long k) { return a + (-k); }

long agreement(const Padic& a, const Padic& b) { return (a - b).valuation(); }
bool same(const Padic& a, const Padic& b) { return (a - b).is_zero(); }

Padic padic_log(const Padic& x) {
    if (x.is_zero()) throw DomainError("log of a value indistinguishable from 0");
    const std::uint64_t p = x.prime();
    const long r = x.relative_precision();
    const long k = static_cast<long>(std::sqrt(static_cast<double>(r))) + 1;
    // w = u^((p-1) p^k) is 1 mod p^(k+1); its log is known to r + k digits.
    long amax = 0;
    const long W = r + k;
    // terms t^n/n with n(k+1) - v(n) < W
    long nmax = (W + 8) / (k + 1) + 2;
    for (long n = nmax; n > 1; n /= static_cast<long>(p)) ++amax;
    const mpz_class& M = ppow(p, W + amax);
    mpz_class w;
    mpz_powm_ui(w.get_mpz_t(), x.unit().get_mpz_t(), p - 1, M.get_mpz_t());
    for (long i = 0; i < k; ++i) mpz_powm_ui(w.get_mpz_t(), w.get_mpz_t(), p, M.get_mpz_t());
    mpz_class t = w - 1, tn = 1, sum = 0;
    for (long n = 1; n <= nmax; ++n) {
        tn = tn * t % M;
        long a = 0;
        long m = n;
        while (m % static_cast<long>(p) == 0) m /= static_cast<long>(p), ++a;
        mpz_class term;
        mpz_divexact(term.get_mpz_t(), tn.get_mpz_t(), ppow(p, a).get_mpz_t());
        term = term * invmod(mpz_class(m), M) % M;
        if (n % 2) sum += term;
        else sum -= term;
    }
    mpz_fdiv_r(sum.get_mpz_t(), sum.get_mpz_t(), ppow(p, W).get_mpz_t());
    if (sum == 0) return Padic::zero(p, r);
    mpz_divexact(sum.get_mpz_t(), sum.get_mpz_t(), ppow(p, k).get_mpz_t());
    sum *= invmod(mpz_class(static_cast<unsigned long>(p - 1)), ppow(p, r));
    return Padic::from_parts(p, 0, sum, r);
}

Padic padic_exp(const Padic& x) {
    const std::uint64_t p = x.prime();
    const long N = x.precision();
    if (x.valuation() < 1) throw ConvergenceError("exp needs v(x) >= 1");
    if (x.is_zero()) return Padic::one(p, N);
    const long v = x.valuation();
    // v(x^n/n!) >= n*v - (n-1)/(p-1)
    long nmax = 1;
    while (nmax * v - (nmax - 1) / static_cast<long>(p - 1) < N) ++nmax;
    long loss = nmax / static_cast<long>(p - 1) + 2;
    const mpz_class& M = ppow(p, N + loss);
    mpz_class X = x.unit() * ppow(p, v) % M, term = 1, sum = 1;
    for (long n = 1; n <= nmax; ++n) {
        term = term * X;
        long m = n;
        while (m % static_cast<long>(p) == 0) {
            m /= static_cast<long>(p);
            mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), p);
        }
        term = term * invmod(mpz_class(m), M) % M;
        sum += term;
    }
    return Padic::from_parts(p, 0, sum, N);
}

Padic teichmuller(std::uint64_t p, std::uint64_t residue, long N) {
    residue %= p;
    if (residue == 0) throw DomainError("teichmuller of a non-unit");
    if (N <= 1) return Padic::from_int(p, static_cast<long>(residue), std::max(N, 1L));
    // Newton on x^(p-1) = 1
    const mpz_class& M = ppow(p, N);
    mpz_class x(static_cast<unsigned long>(residue));
    long prec = 1;
    while (prec < N) {
        prec = std::min(2 * prec, N);
        const mpz_class& Mp = ppow(p, prec);
        mpz_class xp;
        mpz_powm_ui(xp.get_mpz_t(), x.get_mpz_t(), p - 2, Mp.get_mpz_t());
        mpz_class f = xp * x % Mp - 1;
        mpz_class d = xp * static_cast<unsigned long>(p - 1) % Mp;
        x = (x - f * invmod(d, Mp)) % Mp;
    }
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t());
    return Padic::from_parts(p, 0, x, N);
}

Padic teichmuller(const Padic& a) {
    if (!a.is_unit()) throw DomainError("teichmuller of a non-unit");
    return teichmuller(a.prime(), a.residue(), a.precision());
}

bool is_square(const Padic& x) {
    if (x.is_zero()) return true;
    if (x.valuation() % 2) return false;
    mpz_class pp(static_cast<unsigned long>(x.prime()));
    return mpz_legendre(x.unit().get_mpz_t(), pp.get_mpz_t()) == 1;
}

Padic padic_sqrt(const Padic& x, std::uint64_t hint) {
    const std::uint64_t p = x.prime();
    if (x.is_zero()) return Padic::zero(p, (x.precision() + 1) / 2);
    if (!is_square(x)) throw DomainError("square root of a non-square");
    const long v = x.valuation() / 2;
    const long r = x.relative_precision();
    std::uint64_t r0 = sqrt_mod_p(mpz_fdiv_ui(x.unit().get_mpz_t(), p), p);
    if (hint % p != 0 && r0 != hint % p) r0 = p - r0;
    mpz_class s(static_cast<unsigned long>(r0));
    long prec = 1;
    while (prec < r) {
        prec = std::min(2 * prec, r);
        const mpz_class& Mp = ppow(p, prec);
        // s <- (s + u/s)/2
        s = (s + x.unit() * invmod(s, Mp)) * invmod(mpz_class(2), Mp) % Mp;
    }
    return Padic::from_parts(p, v, s, v + r);
}

}  // namespace qc
