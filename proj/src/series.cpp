#include "qc/series.hpp"

#include <algorithm>

#include "qc/errors.hpp"

namespace qc {

namespace {

constexpr long kHuge = 1L << 40;

// precision of a coefficient, ignoring the exact-zero filler
long known(const Padic& x) { return x.precision() >= kHuge / 2 ? 0 : x.precision(); }

long sat_add(long a, long b) {
    if (a == kExact || b == kExact) return kExact;
    return a + b;
}

}  // namespace

DiskSeries::DiskSeries(std::vector<Padic> coeffs, long T) : T_(T), c_(std::move(coeffs)) {
    if (c_.empty()) throw DomainError("DiskSeries needs at least one coefficient to fix p");
    p_ = c_.front().prime();
    if (T_ != kExact && static_cast<long>(c_.size()) > T_) c_.resize(static_cast<std::size_t>(T_));
}

DiskSeries DiskSeries::polynomial(std::vector<Padic> coeffs) { return DiskSeries(std::move(coeffs), kExact); }

Padic DiskSeries::coeff(long k) const {
    if (k < 0) {
        std::size_t j = static_cast<std::size_t>(-k - 1);
        return j < pp_.size() ? pp_[j] : Padic::zero(p_, kHuge);
    }
    if (T_ != kExact && k >= T_) throw TruncationError("coefficient beyond truncation order");
    return k < size() ? c_[static_cast<std::size_t>(k)] : Padic::zero(p_, kHuge);
}

void DiskSeries::set_coeff(long k, const Padic& a) {
    if (k < 0) {
        std::size_t j = static_cast<std::size_t>(-k - 1);
        if (pp_.size() <= j) pp_.resize(j + 1, Padic::zero(p_, kHuge));
        pp_[j] = a;
        return;
    }
    if (T_ != kExact && k >= T_) return;
    if (size() <= k) c_.resize(static_cast<std::size_t>(k + 1), Padic::zero(p_, kHuge));
    c_[static_cast<std::size_t>(k)] = a;
}

DiskSeries DiskSeries::operator-() const {
    DiskSeries r = *this;
    for (auto& x : r.c_) x = -x;
    for (auto& x : r.pp_) x = -x;
    return r;
}

DiskSeries DiskSeries::operator+(const DiskSeries& o) const {
    DiskSeries r(p_ ? p_ : o.p_, std::min(T_, o.T_));
    long lo = -std::max(pole_order(), o.pole_order());
    long hi = std::max(size(), o.size());
    if (r.T_ != kExact) hi = std::min(hi, r.T_);
    for (long k = lo; k < hi; ++k) {
        Padic a = (k < size() || k < 0) ? coeff(k) : Padic::zero(r.p_, kHuge);
        Padic b = (k < o.size() || k < 0) ? o.coeff(k) : Padic::zero(r.p_, kHuge);
        r.set_coeff(k, a + b);
    }
    return r;
}

DiskSeries DiskSeries::operator-(const DiskSeries& o) const { return *this + (-o); }

DiskSeries DiskSeries::operator*(const DiskSeries& o) const {
    const std::uint64_t p = p_ ? p_ : o.p_;
    long a = pole_order(), b = o.pole_order();
    long T = std::min(T_ == kExact ? kExact : T_ - b, o.T_ == kExact ? kExact : o.T_ - a);
    DiskSeries r(p, T);
    long hi = size() + o.size() - 1;
    if (T != kExact) hi = std::min(hi, T);
    for (long k = -(a + b); k < hi; ++k) {
        Padic s = Padic::zero(p, kHuge);
        bool any = false;
        for (long i = -a; i < size(); ++i) {
            long j = k - i;
            if (j < -b || j >= o.size()) continue;
            const Padic& x = i < 0 ? pp_[static_cast<std::size_t>(-i - 1)] : c_[static_cast<std::size_t>(i)];
            const Padic& y = j < 0 ? o.pp_[static_cast<std::size_t>(-j - 1)] : o.c_[static_cast<std::size_t>(j)];
            if (x.is_zero() && x.precision() >= kHuge) continue;
            if (y.is_zero() && y.precision() >= kHuge) continue;
            s += x * y;
            any = true;
        }
        if (any) r.set_coeff(k, s);
    }
    return r;
}

DiskSeries DiskSeries::operator*(const Padic& a) const {
    DiskSeries r = *this;
    for (auto& x : r.c_) x *= a;
    for (auto& x : r.pp_) x *= a;
    return r;
}

DiskSeries DiskSeries::derivative() const {
    DiskSeries r(p_, T_ == kExact ? kExact : T_ - 1);
    for (long k = 1; k < size(); ++k) r.set_coeff(k - 1, c_[static_cast<std::size_t>(k)] * k);
    for (long j = 1; j <= pole_order(); ++j) r.set_coeff(-j - 1, pp_[static_cast<std::size_t>(j - 1)] * (-j));
    return r;
}

DiskSeries DiskSeries::integrate(Padic* log_coeff) const {
    DiskSeries r(p_, sat_add(T_, 1));
    for (long k = 0; k < size(); ++k)
        r.set_coeff(k + 1, c_[static_cast<std::size_t>(k)] / (k + 1));
    Padic res = coeff(-1);
    if (log_coeff) *log_coeff = res;
    else if (!res.is_zero()) throw ConsistencyError("nonzero residue in integrand");
    for (long j = 2; j <= pole_order(); ++j)
        r.set_coeff(-j + 1, pp_[static_cast<std::size_t>(j - 1)] / (-j + 1));
    return r;
}

DiskSeries DiskSeries::compose_affine(const Padic& a, const Padic& b) const {
    if (pole_order() > 0) throw DomainError("compose_affine on a Laurent series");
    const long n = size();
    // Taylor shift then scale: h_k = b^k sum_{m>=k} C(m,k) a^(m-k) c_m
    std::vector<Padic> c = c_;
    for (long i = 0; i < n; ++i)
        for (long j = n - 2; j >= i; --j) c[static_cast<std::size_t>(j)] += a * c[static_cast<std::size_t>(j + 1)];
    long prec = 0;
    for (const auto& x : c_) prec = std::max(prec, known(x));
    Padic bk = Padic::one(p_, prec + n * std::max(0L, b.valuation()) + 1);
    for (long k = 0; k < n; ++k) {
        c[static_cast<std::size_t>(k)] *= bk;
        bk *= b;
    }
    return DiskSeries(std::move(c), T_);
}

long DiskSeries::min_valuation() const {
    long m = kHuge;
    for (const auto& x : c_) m = std::min(m, x.valuation());
    for (const auto& x : pp_) m = std::min(m, x.valuation());
    return m;
}

long DiskSeries::min_precision() const {
    long m = kHuge;
    for (const auto& x : c_) m = std::min(m, x.precision());
    return m;
}

Padic DiskSeries::evaluate(const Padic& t) const {
    Padic r = Padic::zero(p_, kHuge);
    for (long k = size() - 1; k >= 0; --k) r = r * t + c_[static_cast<std::size_t>(k)];
    if (pole_order() > 0) {
        Padic ti = t.inverse(), q = Padic::zero(p_, kHuge);
        for (long j = pole_order(); j >= 1; --j) q = (q + pp_[static_cast<std::size_t>(j - 1)]) * ti;
        r += q;
    }
    if (T_ != kExact && t.valuation() > 0) {
        long tail = T_ * t.valuation() + std::min(0L, min_valuation());
        r = r.reduce(tail);
    }
    return r;
}

namespace {

std::uint64_t eval_mod(const std::vector<std::uint64_t>& f, std::uint64_t x, std::uint64_t p) {
    unsigned __int128 r = 0;
    for (std::size_t i = f.size(); i-- > 0;) r = (r * x + f[i]) % p;
    return static_cast<std::uint64_t>(r);
}

Padic newton_root(const DiskSeries& g, std::uint64_t r0, long prec) {
    const std::uint64_t p = g.prime();
    DiskSeries dg = g.derivative();
    Padic s = Padic::from_int(p, static_cast<long>(r0), prec);
    for (int it = 0; it < 200; ++it) {
        Padic step = g.evaluate(s) / dg.evaluate(s);
        Padic s2 = s - step;
        bool done = step.valuation() >= s2.precision();
        s = s2;
        if (done) break;
    }
    return s;
}

void solve_unit_disk(const DiskSeries& g, int depth, std::vector<Padic>& out) {
    const std::uint64_t p = g.prime();
    long m = g.min_valuation();
    long prec = 0;
    for (long k = 0; k < g.size(); ++k) prec = std::max(prec, known(g.coeff(k)));
    if (m >= kHuge || m >= prec) throw PrecisionError("series indistinguishable from 0 at working precision");
    if (depth > prec) throw PrecisionError("root cluster not separated at working precision");
    long idx = 0;
    for (long k = 0; k < g.size(); ++k)
        if (g.coeff(k).valuation() == m) idx = k;
    if (g.truncation() != kExact && idx >= g.truncation() - 1)
        throw TruncationError("Strassman index reaches the truncation order");
    std::vector<std::uint64_t> red(static_cast<std::size_t>(idx + 1));
    for (long k = 0; k <= idx; ++k) {
        Padic c = g.coeff(k);
        if (c.is_zero()) {
            if (c.precision() <= m) throw PrecisionError("coefficient unknown at the content level");
            continue;
        }
        if (c.valuation() == m) red[static_cast<std::size_t>(k)] = mpz_fdiv_ui(c.unit().get_mpz_t(), p);
    }
    std::vector<std::uint64_t> dred;
    for (std::size_t k = 1; k < red.size(); ++k) dred.push_back(static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(red[k]) * (k % p) % p));
    for (std::uint64_t r = 0; r < p; ++r) {
        if (eval_mod(red, r, p) != 0) continue;
        if (eval_mod(dred, r, p) != 0) {
            out.push_back(newton_root(g, r, prec));
            continue;
        }
        Padic a = Padic::from_int(p, static_cast<long>(r), prec + 1);
        Padic b = Padic::from_int(p, static_cast<long>(p), prec + 2);
        DiskSeries h = g.compose_affine(a, b);
        std::vector<Padic> sub;
        solve_unit_disk(h, depth + 1, sub);
        for (auto& s : sub) out.push_back(a + b * s);
    }
}

}  // namespace

std::vector<Padic> series_zeros_in_disk(const DiskSeries& f, long radius) {
    if (f.pole_order() > 0) throw DomainError("zeros of a Laurent series");
    const std::uint64_t p = f.prime();
    DiskSeries g = f;
    long prec = 0;
    for (long k = 0; k < f.size(); ++k) prec = std::max(prec, known(f.coeff(k)));
    const long big = prec + radius * f.size() + 1;
    if (radius != 0) {
        Padic scale = Padic::from_parts(p, radius, 1, big), sk = Padic::one(p, big);
        for (long k = 0; k < g.size(); ++k) {
            g.set_coeff(k, g.coeff(k) * sk);
            sk *= scale;
        }
    }
    std::vector<Padic> s;
    solve_unit_disk(g, 0, s);
    std::vector<Padic> out;
    Padic scale = Padic::from_parts(p, radius, 1, big);
    for (auto& x : s) out.push_back(radius ? x * scale : x);
    std::sort(out.begin(), out.end(), [](const Padic& a, const Padic& b) {
        return a.to_rational() < b.to_rational();
    });
    return out;
}

}  // namespace qc
