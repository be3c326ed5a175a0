#include "qc/coleman.hpp"

#include <cmath>

#include "coleman_internal.hpp"

namespace qc {

const char* to_string(Engine e) {
    switch (e) {
        case Engine::frobenius: return "frobenius";
        case Engine::multiplication: return "multiplication";
        default: return "automatic";
    }
}

namespace {

// Route A is cheap enough up to here; beyond it the multiplication route wins.
constexpr std::uint64_t kFrobeniusMaxPrime = 13;

// first-order jets a + b eps along alpha; drives psi_m and D psi_m together
struct Dual {
    Padic v, d;
    Dual operator-() const { return {-v, -d}; }
    Dual operator+(const Dual& o) const { return {v + o.v, d + o.d}; }
    Dual operator-(const Dual& o) const { return {v - o.v, d - o.d}; }
    Dual operator*(const Dual& o) const { return {v * o.v, v * o.d + d * o.v}; }
    Dual operator/(const Dual& o) const {
        Padic i = o.v.inverse();
        return {v * i, (d * o.v - v * o.d) * i * i};
    }
};

Dual field_const(const Dual& like, const mpz_class& n) {
    Padic c = qc::field_const(like.v, n);
    return {c, Padic::zero(c.prime(), c.precision())};
}

long log_slack(std::uint64_t p, long n) {
    return static_cast<long>(std::floor(std::log(static_cast<double>(std::max(2L, n))) / std::log(double(p))));
}

bool in_origin_disk(const Point<Padic>& P) { return P.inf || (!P.x.is_zero() && P.x.valuation() < 0); }

DiskSeries series_inverse(const DiskSeries& a) {
    const long T = a.truncation();
    Padic i0 = a.coeff(0).inverse();
    std::vector<Padic> b{i0};
    for (long n = 1; n < T; ++n) {
        Padic s = Padic::zero(a.prime(), i0.precision() + 64);
        for (long i = 1; i <= n && i < a.size(); ++i) s += a.coeff(i) * b[static_cast<std::size_t>(n - i)];
        b.push_back(-(s * i0));
    }
    return DiskSeries(b, T);
}

DiskSeries series_sqrt(const DiskSeries& f, const Padic& s0) {
    const long T = f.truncation();
    Padic i2 = (s0 * 2).inverse();
    std::vector<Padic> s{s0};
    for (long n = 1; n < T; ++n) {
        Padic acc = n < f.size() ? f.coeff(n) : Padic::zero(f.prime(), s0.precision() + 64);
        for (long i = 1; i < n; ++i) acc -= s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(n - i)];
        s.push_back(acc * i2);
    }
    return DiskSeries(s, T);
}

DiskSeries constant_series(const Padic& c, long T) { return DiskSeries({c}, T); }

Padic cap(const Padic& a, long N) { return a.precision() > N ? a.reduce(N) : a; }

}  // namespace

// ---- LocalDisk

Padic LocalDisk::param(const Point<Padic>& P) const {
    switch (kind) {
        case origin: return z_param(P);
        case ordinary: return P.x - center.x;
        case weierstrass: {
            const std::uint64_t p = P.x.prime();
            auto c = [&](const mpz_class& n) { return Padic::from_int(p, n, P.x.precision() + 64); };
            Padic uP = P.y * 2 + c(a1) * P.x + c(a3);
            Padic uc = center.y * 2 + c(a1) * center.x + c(a3);
            return uP - uc;
        }
    }
    throw ConsistencyError("unknown disk kind");
}

Point<Padic> LocalDisk::point(const Padic& t) const { return Point<Padic>{x.evaluate(t), y.evaluate(t), false}; }

bool LocalDisk::contains(const Point<Padic>& P) const {
    if (kind == origin) return in_origin_disk(P);
    if (in_origin_disk(P)) return false;
    return P.x.residue() == center.x.residue() && P.y.residue() == center.y.residue();
}

// ---- Coleman

Coleman::Coleman(const CurveModel& E, std::uint64_t p, long N, Engine engine)
    : E_(E), p_(p), N_(N), engine_(engine) {
    if (p < 3 || !is_prime(p)) throw DomainError("Coleman integration needs an odd prime");
    if (mpz_divisible_ui_p(E.disc.get_mpz_t(), p)) throw DomainError("Coleman integration needs good reduction at p");
    if (N < 2) throw DomainError("precision too small");
    W_ = N + 8 + 2 * log_slack(p, N + 8);
    T_ = W_ + 2 * log_slack(p, 3 * W_) + 4;
    F_ = formal_expansions(E, T_ + 2 * log_slack(p, 3 * T_) + 4);

    // F_beta + 1/lambda = C0 - (b2/12) lambda + O(lambda^3)
    Laurent il = laurent_inverse(F_.lambda, F_.lambda.end());
    Laurent s = laurent_add(F_.ibeta, il);
    mpq_class want(-E.b2, 12);
    want.canonicalize();
    if (s.at(1) != want) throw ConsistencyError("beta expansion disagrees with the zeta relation");
    // Constants of integration are fixed in z_b = -2x/(2y + a1 x + a3), which is odd under [-1].
    // In z = -x/y the constant term of int beta is -a1/2 instead; remove it.
    const mpq_class c0 = s.at(0);
    F_.ibeta.c[static_cast<std::size_t>(-F_.ibeta.val)] -= c0;
    for (long k = std::max(F_.d2.val, F_.lambda.val); k < std::min(F_.d2.end(), F_.lambda.end()); ++k)
        F_.d2.c[static_cast<std::size_t>(k - F_.d2.val)] -= c0 * F_.lambda.at(k);
    C0_ = Padic::from_rational(p, c0, W_ + 64);

    if (engine_ == Engine::automatic)
        engine_ = (p >= 5 && p <= kFrobeniusMaxPrime) ? Engine::frobenius : Engine::multiplication;
    if (engine_ == Engine::frobenius) fe_ = std::make_unique<FrobEngine>(*this);
}

Coleman::~Coleman() = default;
Coleman::Coleman(Coleman&&) noexcept = default;

const FrobeniusData* Coleman::frobenius() const { return fe_ ? &fe_->fd : nullptr; }

ColemanValues Coleman::finish(ColemanValues v) const {
    v.I_alpha = cap(v.I_alpha, N_);
    v.I_beta = cap(v.I_beta, N_);
    v.D2 = cap(v.D2, N_);
    return v;
}

ColemanValues Coleman::compose(const ColemanValues& q, const ColemanValues& t) const {
    return {q.I_alpha + t.I_alpha, q.I_beta + t.I_beta, q.D2 + t.D2 + t.I_alpha * q.I_beta};
}

ColemanValues Coleman::tiny_from_base(const Point<Padic>& to) const {
    if (!in_origin_disk(to)) throw DomainError("tiny integral from b needs a point of the disk of O");
    if (to.inf) throw DomainError("O is the tangential base itself");
    Padic z = z_param(to);
    Padic d2 = eval_laurent(F_.d2, z);
    if (F_.d2_log != 0) d2 += Padic::from_rational(p_, F_.d2_log, W_ + 64) * padic_log(z);
    return {eval_laurent(F_.lambda, z), eval_laurent(F_.ibeta, z), d2};
}

ColemanValues Coleman::tiny(const Point<Padic>& from, const Point<Padic>& to) const {
    if (from.inf) return tiny_from_base(to);
    if (in_origin_disk(from)) {
        if (!in_origin_disk(to)) throw DomainError("tiny integral between different disks");
        ColemanValues a = tiny_from_base(from), b = tiny_from_base(to);
        Padic da = b.I_alpha - a.I_alpha;
        return {da, b.I_beta - a.I_beta, b.D2 - a.D2 - da * a.I_beta};
    }
    LocalDisk D = disk(from);
    if (!D.contains(to)) throw DomainError("tiny integral between different disks");
    Padic t = D.param(to);
    if (t.is_zero()) {
        Padic z = Padic::zero(p_, N_);
        return {z, z, z};
    }
    return {D.fa.evaluate(t), D.fb.evaluate(t), D.fab.evaluate(t)};
}

LocalDisk Coleman::disk(const Point<Padic>& c) const {
    LocalDisk D;
    D.a1 = E_.a1();
    D.a3 = E_.a3();
    if (in_origin_disk(c)) {
        D.kind = LocalDisk::origin;
        D.center = Point<Padic>::infinity();
        D.x = to_disk(F_.x, p_, W_);
        D.y = to_disk(F_.y, p_, W_);
        D.fa = to_disk(F_.lambda, p_, W_);
        D.fb = to_disk(F_.ibeta, p_, W_);
        D.fab = to_disk(F_.d2, p_, W_);
        D.fab_log = Padic::from_rational(p_, F_.d2_log, W_);
        return D;
    }
    D.center = c;
    const long T = T_;
    const long prec = c.x.precision() + 64;
    auto K = [&](const mpz_class& n) { return Padic::from_int(p_, n, prec); };
    Padic uc = c.y * 2 + K(E_.a1()) * c.x + K(E_.a3());
    DiskSeries alpha;
    if (uc.is_zero() || uc.valuation() >= 1) {
        D.kind = LocalDisk::weierstrass;
        // f(x_c + X) - f(x_c) = 2 u_c t + t^2 with f = 4x^3 + b2 x^2 + 2 b4 x + b6
        Padic f1 = K(12) * c.x * c.x + K(2 * E_.b2) * c.x + K(2 * E_.b4);
        Padic f2 = K(12) * c.x + K(E_.b2);
        Padic f3 = K(4);
        Padic if1 = f1.inverse();
        DiskSeries rhs({Padic::zero(p_, prec), uc * 2, K(1)}, T);
        DiskSeries X({Padic::zero(p_, prec)}, T);
        for (long it = 0; it < T; ++it) {
            DiskSeries X2 = X * X;
            X = (rhs - X2 * f2 - X2 * X * f3) * if1;
        }
        D.x = constant_series(c.x, T) + X;
        DiskSeries uu({uc, K(1)}, T);
        D.y = (uu - D.x * K(E_.a1()) - constant_series(K(E_.a3()), T)) * Padic::from_rational(p_, mpq_class(1, 2), prec);
        DiskSeries fp = constant_series(f1, T) + X * (f2 * 2) + X * X * (f3 * 3);
        alpha = series_inverse(fp) * K(2);
    } else {
        D.kind = LocalDisk::ordinary;
        D.x = DiskSeries({c.x, K(1)}, T);
        DiskSeries f = D.x * D.x * D.x * K(4) + D.x * D.x * K(E_.b2) + D.x * K(2 * E_.b4) + constant_series(K(E_.b6), T);
        DiskSeries uu = series_sqrt(f, uc);
        D.y = (uu - D.x * K(E_.a1()) - constant_series(K(E_.a3()), T)) * Padic::from_rational(p_, mpq_class(1, 2), prec);
        alpha = series_inverse(uu);
    }
    DiskSeries beta = D.x * alpha;
    D.fa = alpha.integrate();
    D.fb = beta.integrate();
    D.fab = (alpha * D.fb).integrate();
    D.fab_log = Padic::zero(p_, prec);
    return D;
}

DiskSeries Coleman::d2_series(const LocalDisk& D, const ColemanValues& vc) const {
    if (D.kind == LocalDisk::origin) throw DomainError("D2 is not a power series on the disk of O");
    return constant_series(vc.D2, T_) + D.fab + D.fa * vc.I_beta;
}

DiskSeries Coleman::log_series(const LocalDisk& D, const ColemanValues& vc) const {
    if (D.kind == LocalDisk::origin) return D.fa;
    return constant_series(vc.I_alpha, T_) + D.fa;
}

namespace {

Point<Dual> jet(const CurveModel& E, const Point<Padic>& P) {
    const std::uint64_t p = P.x.prime();
    auto c = [&](const mpz_class& n) { return Padic::from_int(p, n, P.x.precision() + 64); };
    Padic u = P.y * 2 + c(E.a1()) * P.x + c(E.a3());
    Padic dy = c(3) * P.x * P.x + c(2 * E.a2()) * P.x + c(E.a4()) - c(E.a1()) * P.y;
    return Point<Dual>{{P.x, u}, {P.y, dy}, false};
}

}  // namespace

// values at P from the formal disk through [m]
ColemanValues pull_back(const Coleman& C, const Point<Padic>& P, long m);

ColemanValues pull_back(const Coleman& C, const Point<Padic>& P, long m) {
    const CurveModel& E = C.curve();
    const std::uint64_t p = C.prime();
    Point<Padic> Q = scalar_mul(E, m, P);
    if (Q.inf) {
        // torsion: use [m+1], which fixes P
        const long n = m + 1;
        Dual psi = division_value(E, n, jet(E, P));
        Padic lp = padic_log(psi.v), dl = psi.d / psi.v;
        Padic D2 = lp / (n * n - 1);
        Padic Ib = dl / (n * m);
        return {Padic::zero(p, D2.precision()), Ib, D2};
    }
    if (!in_origin_disk(Q)) throw ConsistencyError("[m]P left the formal group");
    ColemanValues at_q = C.tiny_from_base(Q);
    Dual psi = division_value(E, m, jet(E, P));
    Padic lp = padic_log(psi.v), dl = psi.d / psi.v;
    Padic Ia = at_q.I_alpha / m;
    Padic Ib = (at_q.I_beta + dl / m) / m;
    Padic D2 = (at_q.D2 + lp) / (m * m);
    return {Ia, Ib, D2};
}

ColemanValues Coleman::at_multiplication(const Point<Padic>& P) const {
    if (P.inf) throw DomainError("O is the tangential base itself");
    if (in_origin_disk(P)) return finish(tiny_from_base(P));
    // exact 2-torsion: the even division values through [#E(F_p)] vanish
    Padic u = P.y * 2 + Padic::from_int(p_, E_.a1(), P.x.precision()) * P.x + Padic::from_int(p_, E_.a3(), P.x.precision());
    if (u.is_zero()) return finish(pull_back(*this, P, 2));
    return finish(pull_back(*this, P, count_points_Fp(E_, p_).first));
}

ColemanValues Coleman::at(const Point<Padic>& P) const {
    if (P.inf) throw DomainError("O is the tangential base itself");
    if (in_origin_disk(P)) return finish(tiny_from_base(P));
    return engine_ == Engine::frobenius ? at_frobenius(P) : at_multiplication(P);
}

// ---- contract names

ColemanValues tiny_integrals(const Coleman& C, const std::optional<Point<Padic>>& from, const Point<Padic>& to) {
    if (!from) return C.tiny_from_base(to);
    return C.tiny(*from, to);
}

std::pair<Padic, Padic> single_integrals_at(const Coleman& C, const Point<Padic>& P) {
    ColemanValues v = C.at(P);
    return {v.I_alpha, v.I_beta};
}

Padic d2_at(const Coleman& C, const Point<Padic>& P) { return C.at(P).D2; }

DiskSeries d2_disk_series(const Coleman& C, const Point<Padic>& center) {
    LocalDisk D = C.disk(center);
    return C.d2_series(D, C.at(center));
}

DiskSeries log_disk_series(const Coleman& C, const Point<Padic>& center) {
    LocalDisk D = C.disk(center);
    if (D.kind == LocalDisk::origin) return D.fa;
    return C.log_series(D, C.at(center));
}

}  // namespace qc
