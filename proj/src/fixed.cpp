#include "qc/fixed.hpp"

#include <algorithm>

#include "qc/errors.hpp"

namespace qc {

void Fx::reduce() {
    if (W_ - e_ <= 0) {
        n_ = 0;
        e_ = 0;
        return;
    }
    mpz_fdiv_r(n_.get_mpz_t(), n_.get_mpz_t(), ppow(p_, W_ - e_).get_mpz_t());
    if (n_ == 0) e_ = 0;
}

Fx Fx::from_int(std::uint64_t p, long W, const mpz_class& n) {
    Fx r(p, W);
    r.n_ = n;
    r.reduce();
    return r;
}

Fx Fx::from_rational(std::uint64_t p, long W, const mpq_class& q) {
    if (q == 0) return Fx(p, W);
    Padic a = Padic::from_rational(p, q, W);
    return from_padic(a, W);
}

Fx Fx::from_padic(const Padic& a, long W) {
    Fx r(a.prime(), W);
    if (a.is_zero()) return r;
    r.e_ = a.valuation();
    r.n_ = a.unit();
    r.reduce();
    return r;
}

mpz_class Fx::scaled(long s) const {
    if (n_ == 0) return 0;
    if (e_ + s >= 0) return n_ * ppow(p_, e_ + s);
    const mpz_class& d = ppow(p_, -(e_ + s));
    if (!mpz_divisible_p(n_.get_mpz_t(), d.get_mpz_t())) throw PrecisionError("scaled value is not integral");
    return n_ / d;
}

Fx Fx::from_scaled(std::uint64_t p, long W, const mpz_class& m, long s) {
    Fx r(p, W);
    r.e_ = -s;
    r.n_ = m;
    r.reduce();
    return r;
}

long Fx::valuation() const {
    if (n_ == 0) return W_;
    return e_ + vp(n_, p_);
}

Fx Fx::operator-() const {
    Fx r = *this;
    r.n_ = -r.n_;
    r.reduce();
    return r;
}

Fx& Fx::operator+=(const Fx& o) {
    if (o.n_ == 0) return *this;
    if (n_ == 0) {
        long W = W_ ? W_ : o.W_;
        *this = o;
        W_ = W;
        reduce();
        return *this;
    }
    if (e_ <= o.e_) {
        n_ += o.n_ * ppow(p_, o.e_ - e_);
    } else {
        n_ = n_ * ppow(p_, e_ - o.e_) + o.n_;
        e_ = o.e_;
    }
    reduce();
    return *this;
}

Fx& Fx::operator-=(const Fx& o) { return *this += -o; }

Fx& Fx::operator*=(const Fx& o) {
    if (n_ == 0) return *this;
    if (o.n_ == 0) {
        n_ = 0;
        e_ = 0;
        return *this;
    }
    n_ *= o.n_;
    e_ += o.e_;
    reduce();
    return *this;
}

Fx Fx::inverse() const {
    if (n_ == 0) throw PrecisionError("division by zero at working precision");
    mpz_class m = n_;
    mpz_class pp(static_cast<unsigned long>(p_));
    long a = static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t()));
    long val = e_ + a;
    Fx r(p_, W_);
    r.e_ = -val;
    if (W_ + val <= 0) return Fx(p_, W_);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), m.get_mpz_t(), ppow(p_, W_ + val).get_mpz_t());
    r.n_ = inv;
    r.reduce();
    return r;
}

Fx Fx::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Fx r = from_int(p_, W_, 1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

Fx Fx::mul_int(long k) const {
    Fx r = *this;
    r.n_ *= k;
    r.reduce();
    return r;
}

Fx Fx::div_int(long k) const { return *this * from_rational(p_, W_, mpq_class(1, k)); }

Padic Fx::to_padic(long N) const {
    if (n_ == 0) return Padic::zero(p_, N);
    return Padic::from_parts(p_, e_, n_, N);
}

FxPoly poly_add(const FxPoly& a, const FxPoly& b) {
    FxPoly r = a.size() >= b.size() ? a : b;
    const FxPoly& s = a.size() >= b.size() ? b : a;
    for (std::size_t i = 0; i < s.size(); ++i) r[i] += s[i];
    return r;
}

FxPoly poly_sub(const FxPoly& a, const FxPoly& b) {
    FxPoly r = a;
    if (r.size() < b.size()) r.resize(b.size(), b.empty() ? Fx() : Fx(b[0].prime(), b[0].work()));
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

FxPoly poly_mul(const FxPoly& a, const FxPoly& b) {
    if (a.empty() || b.empty()) return {};
    const Fx z(a[0].prime(), a[0].work());
    FxPoly r(a.size() + b.size() - 1, z);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    return r;
}

FxPoly poly_scale(const FxPoly& a, const Fx& c) {
    FxPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

FxPoly poly_deriv(const FxPoly& a) {
    FxPoly r;
    for (std::size_t k = 1; k < a.size(); ++k) r.push_back(a[k].mul_int(static_cast<long>(k)));
    return r;
}

Fx poly_eval(const FxPoly& a, const Fx& x) {
    Fx r(x.prime(), x.work());
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

void poly_divmod_monic(const FxPoly& a, const FxPoly& m, FxPoly& q, FxPoly& r) {
    const std::size_t dm = m.size() - 1;
    r = a;
    q.clear();
    if (a.size() <= dm) {
        return;
    }
    q.assign(a.size() - dm, Fx(m[0].prime(), m[0].work()));
    for (std::size_t i = a.size(); i-- > dm;) {
        Fx c = r[i];
        q[i - dm] = c;
        if (c.is_zero()) continue;
        for (std::size_t j = 0; j <= dm; ++j) r[i - dm + j] -= c * m[j];
    }
    r.resize(dm);
}

std::vector<Fx> fx_solve(std::vector<std::vector<Fx>> A, std::vector<Fx> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (A[r][c].valuation() < A[piv][c].valuation()) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        if (A[c][c].is_zero()) throw PrecisionError("singular system at working precision");
        Fx inv = A[c][c].inverse();
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || A[r][c].is_zero()) continue;
            Fx f = A[r][c] * inv;
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Fx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return x;
}

}  // namespace qc
