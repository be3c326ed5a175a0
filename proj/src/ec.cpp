#include "qc/ec.hpp"

#include <algorithm>
#include <cmath>

namespace qc {

CurveModel CurveModel::make(const std::array<mpz_class, 5>& ainvs, std::string label) {
    CurveModel E;
    E.label = std::move(label);
    E.a = ainvs;
    const auto& [a1, a2, a3, a4, a6] = ainvs;
    E.b2 = a1 * a1 + 4 * a2;
    E.b4 = 2 * a4 + a1 * a3;
    E.b6 = a3 * a3 + 4 * a6;
    E.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    E.c4 = E.b2 * E.b2 - 24 * E.b4;
    E.c6 = -E.b2 * E.b2 * E.b2 + 36 * E.b2 * E.b4 - 216 * E.b6;
    E.disc = -E.b2 * E.b2 * E.b8 - 8 * E.b4 * E.b4 * E.b4 - 27 * E.b6 * E.b6 + 9 * E.b2 * E.b4 * E.b6;
    if (E.disc == 0) throw DomainError("singular Weierstrass equation");
    return E;
}

const char* to_string(ReductionType t) {
    switch (t) {
        case ReductionType::good: return "good";
        case ReductionType::multiplicative: return "multiplicative";
        case ReductionType::additive: return "additive";
    }
    return "?";
}

ReductionData classify_reduction(const CurveModel& E, std::uint64_t l) {
    if (!is_prime(l)) throw DomainError("reduction type needs a prime");
    ReductionData r;
    r.l = l;
    r.N = vp(E.disc, l);
    if (r.N == 0) return r;
    // the model is taken as minimal at l
    r.type = mpz_divisible_ui_p(E.c4.get_mpz_t(), l) ? ReductionType::additive : ReductionType::multiplicative;
    return r;
}

std::vector<std::uint64_t> bad_primes(const CurveModel& E) {
    mpz_class n = abs(E.disc);
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q < 1000000 && n > 1; ++q) {
        if (q * q > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            out.push_back(q);
            while (mpz_divisible_ui_p(n.get_mpz_t(), q)) n /= static_cast<unsigned long>(q);
        }
    }
    if (n > 1) {
        if (!n.fits_ulong_p() || !is_prime(n.get_ui()))
            throw DomainError("discriminant has a factor beyond trial division");
        out.push_back(n.get_ui());
    }
    return out;
}

std::pair<long, long> count_points_Fp(const CurveModel& E, std::uint64_t p) {
    if (mpz_divisible_ui_p(E.disc.get_mpz_t(), p)) throw DomainError("point count needs good reduction");
    if (p == 2) {
        long n = static_cast<long>(affine_points_Fp(E, p).size()) + 1;
        return {n, 3 - n};
    }
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t y = 1; y < p; ++y) chi[mulmod(y, y, p)] = 1;
    auto m = [&](const mpz_class& a) { return static_cast<std::uint64_t>(mpz_fdiv_ui(a.get_mpz_t(), p)); };
    const std::uint64_t b2 = m(E.b2), b4 = m(2 * E.b4), b6 = m(E.b6);
    long s = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t x2 = mulmod(x, x, p);
        std::uint64_t f = (mulmod(4 % p, mulmod(x2, x, p), p) + mulmod(b2, x2, p) + mulmod(b4, x, p) + b6) % p;
        s += chi[f];
    }
    return {static_cast<long>(p) + 1 + s, -s};
}

std::vector<Point<Fp>> affine_points_Fp(const CurveModel& E, std::uint64_t p) {
    std::vector<std::vector<std::uint64_t>> roots(p);
    for (std::uint64_t y = 0; y < p; ++y) roots[mulmod(y, y, p)].push_back(y);
    std::vector<Point<Fp>> out;
    Fp proto(0, p);
    auto c = [&](const mpz_class& n) { return field_const(proto, n); };
    for (std::uint64_t xv = 0; xv < p; ++xv) {
        Fp x(xv, p);
        std::vector<std::uint64_t> ys;
        if (p == 2) {
            for (std::uint64_t yv = 0; yv < 2; ++yv)
                if (field_zero(weierstrass_residual(E, x, Fp(yv, p)))) ys.push_back(yv);
        } else {
            // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
            Fp rhs = c(4) * x * x * x + c(E.b2) * x * x + c(2 * E.b4) * x + c(E.b6);
            Fp half = c(2).inverse();
            for (std::uint64_t s : roots[rhs.v]) ys.push_back(((Fp(s, p) - c(E.a1()) * x - c(E.a3())) * half).v);
        }
        std::sort(ys.begin(), ys.end());
        for (auto yv : ys) out.push_back(Point<Fp>{x, Fp(yv, p), false});
    }
    return out;
}

// ---- Laurent series over Q

namespace {

Laurent truncate(Laurent f, long end) {
    if (f.end() > end) f.c.resize(static_cast<std::size_t>(std::max(0L, end - f.val)));
    return f;
}

}  // namespace

Laurent laurent_mul(const Laurent& a, const Laurent& b, long end) {
    Laurent r;
    r.val = a.val + b.val;
    end = std::min({end, a.end() + b.val, b.end() + a.val});
    long n = std::max(0L, end - r.val);
    r.c.assign(static_cast<std::size_t>(n), mpq_class(0));
    for (std::size_t i = 0; i < a.c.size() && static_cast<long>(i) < n; ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size() && static_cast<long>(i + j) < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

Laurent laurent_add(const Laurent& a, const Laurent& b) {
    Laurent r;
    r.val = std::min(a.val, b.val);
    long end = std::min(a.end(), b.end());
    for (long k = r.val; k < end; ++k) r.c.push_back(a.at(k) + b.at(k));
    return r;
}

Laurent laurent_scale(const Laurent& a, const mpq_class& s) {
    Laurent r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

Laurent laurent_deriv(const Laurent& a) {
    Laurent r;
    r.val = a.val - 1;
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c.push_back(a.c[i] * (a.val + static_cast<long>(i)));
    return r;
}

Laurent laurent_integrate(const Laurent& a, mpq_class* log_coeff) {
    Laurent r;
    r.val = a.val + 1;
    if (log_coeff) *log_coeff = 0;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        long k = a.val + static_cast<long>(i);
        if (k == -1) {
            if (a.c[i] != 0 && !log_coeff) throw ConsistencyError("residue in a Laurent antiderivative");
            if (log_coeff) *log_coeff = a.c[i];
            r.c.push_back(0);  // constant term: zero convention
        } else {
            r.c.push_back(a.c[i] / (k + 1));
        }
    }
    return r;
}

Laurent laurent_inverse(const Laurent& a, long end) {
    if (a.c.empty() || a.c[0] == 0) throw ConsistencyError("Laurent inverse needs a known leading term");
    Laurent r;
    r.val = -a.val;
    end = std::min(end, r.val + static_cast<long>(a.c.size()));
    long n = std::max(0L, end - r.val);
    mpq_class inv = 1 / a.c[0];
    r.c.assign(static_cast<std::size_t>(n), mpq_class(0));
    for (long k = 0; k < n; ++k) {
        mpq_class s = k == 0 ? mpq_class(1) : mpq_class(0);
        for (long j = 1; j <= k; ++j) s -= a.c[static_cast<std::size_t>(j)] * r.c[static_cast<std::size_t>(k - j)];
        r.c[static_cast<std::size_t>(k)] = s * inv;
    }
    return r;
}

FormalExpansions formal_expansions(const CurveModel& E, long T) {
    if (T < 4) T = 4;
    const long M = T + 8;
    // w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3, coefficient by coefficient
    std::vector<mpz_class> w(static_cast<std::size_t>(M)), w2(static_cast<std::size_t>(M)),
        w3(static_cast<std::size_t>(M));
    auto at = [](std::vector<mpz_class>& v, long k) -> mpz_class& { return v[static_cast<std::size_t>(k)]; };
    for (long n = 3; n < M; ++n) {
        mpz_class s2 = 0, s3 = 0;
        for (long i = 3; i <= n - 3; ++i) s2 += at(w, i) * at(w, n - i);
        at(w2, n) = s2;
        for (long i = 3; i <= n - 6; ++i) s3 += at(w, i) * at(w2, n - i);
        at(w3, n) = s3;
        mpz_class v = n == 3 ? mpz_class(1) : mpz_class(0);
        v += E.a1() * at(w, n - 1) + E.a2() * at(w, n - 2) + E.a3() * s2 + E.a4() * at(w2, n - 1) + E.a6() * s3;
        at(w, n) = v;
    }
    FormalExpansions F;
    F.T = T;
    F.w.val = 3;
    for (long n = 3; n < M; ++n) F.w.c.emplace_back(at(w, n));
    Laurent inv = laurent_inverse(F.w, M);
    F.x = inv;
    F.x.val += 1;
    F.y = laurent_scale(inv, -1);
    Laurent den = laurent_add(laurent_scale(F.y, 2), laurent_scale(F.x, mpq_class(E.a1())));
    {
        long i = -den.val;
        if (i >= 0 && i < static_cast<long>(den.c.size())) den.c[static_cast<std::size_t>(i)] += E.a3();
    }
    F.omega = laurent_mul(laurent_deriv(F.x), laurent_inverse(den, M), M);
    F.beta = laurent_mul(F.x, F.omega, M);
    F.lambda = laurent_integrate(F.omega);
    F.ibeta = laurent_integrate(F.beta);
    F.d2 = laurent_integrate(laurent_mul(F.omega, F.ibeta, M), &F.d2_log);

    F.omega = truncate(F.omega, T);
    F.beta = truncate(F.beta, T);
    F.lambda = truncate(F.lambda, T + 1);
    F.ibeta = truncate(F.ibeta, T);
    F.d2 = truncate(F.d2, T + 1);
    F.x = truncate(F.x, T);
    F.y = truncate(F.y, T);
    F.w = truncate(F.w, T + 3);

    // reversion of lambda: e(t) with lambda(e(t)) = t
    const long R = F.lambda.end();
    std::vector<mpq_class> e(static_cast<std::size_t>(R), 0);
    e[1] = 1;
    for (long n = 2; n < R; ++n) {
        // [t^n] sum_{k>=2} l_k e^k using e known through t^(n-1)
        std::vector<mpq_class> pw(static_cast<std::size_t>(n + 1), 0);
        for (long i = 1; i < n; ++i) pw[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
        mpq_class s = 0;
        for (long k = 2; k <= n; ++k) {
            std::vector<mpq_class> nx(static_cast<std::size_t>(n + 1), 0);
            for (long i = 1; i <= n; ++i) {
                if (pw[static_cast<std::size_t>(i)] == 0) continue;
                for (long j = 1; i + j <= n && j < n; ++j)
                    nx[static_cast<std::size_t>(i + j)] += pw[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(j)];
            }
            pw.swap(nx);
            s += F.lambda.at(k) * pw[static_cast<std::size_t>(n)];
        }
        e[static_cast<std::size_t>(n)] = -s;
    }
    F.exp = std::move(e);
    return F;
}

Laurent omega_via_dy(const CurveModel& E, const FormalExpansions& F) {
    const long M = F.T + 8;
    Laurent x2 = laurent_mul(F.x, F.x, M);
    Laurent den = laurent_add(laurent_scale(x2, 3), laurent_scale(F.x, mpq_class(2 * E.a2())));
    den = laurent_add(den, laurent_scale(F.y, mpq_class(-E.a1())));
    long i = -den.val;
    if (i >= 0 && i < static_cast<long>(den.c.size())) den.c[static_cast<std::size_t>(i)] += E.a4();
    return truncate(laurent_mul(laurent_deriv(F.y), laurent_inverse(den, M), M), F.T);
}

DiskSeries to_disk(const Laurent& f, std::uint64_t p, long N) {
    DiskSeries s(p, f.end());
    for (long k = f.val; k < f.end(); ++k) {
        mpq_class c = f.at(k);
        if (c != 0) s.set_coeff(k, Padic::from_rational(p, c, N));
    }
    return s;
}

Padic eval_laurent(const Laurent& f, const Padic& z) {
    const std::uint64_t p = z.prime();
    if (z.is_zero() || z.valuation() < 1) throw DomainError("Laurent evaluation needs v(z) >= 1");
    const long vz = z.valuation();
    // tail bound: coefficients of the expansions carry denominators of size ~ index^2
    long slack = 2 * static_cast<long>(std::floor(std::log(static_cast<double>(f.end() + 1)) / std::log(double(p))));
    long cap = f.end() * vz - slack;
    long work = std::max(cap, z.precision()) + 8;
    Padic r = Padic::zero(p, work);
    Padic zp = z.pow(f.val);
    for (long k = f.val; k < f.end(); ++k) {
        mpq_class c = f.at(k);
        if (c != 0) r += Padic::from_rational(p, c, work + slack - std::min(0L, k * vz)) * zp;
        zp *= z;
    }
    return r.precision() > cap ? r.reduce(cap) : r;
}

Padic z_param(const Point<Padic>& P) {
    if (P.inf) throw DomainError("z parameter of O");
    return -(P.x / P.y);
}

Point<Padic> point_from_z(const FormalExpansions& F, const Padic& z) {
    return Point<Padic>{eval_laurent(F.x, z), eval_laurent(F.y, z), false};
}

Point<Fp> reduce_point(const Point<Padic>& P) {
    if (P.inf || (!P.x.is_zero() && P.x.valuation() < 0)) return Point<Fp>::infinity();
    const std::uint64_t p = P.x.prime();
    return Point<Fp>{Fp(P.x.residue(), p), Fp(P.y.residue(), p), false};
}

Point<Padic> to_padic_point(const Point<mpq_class>& P, std::uint64_t p, long N) {
    if (P.inf) return Point<Padic>::infinity();
    return Point<Padic>{Padic::from_rational(p, P.x, N), Padic::from_rational(p, P.y, N), false};
}

Padic elliptic_log(const CurveModel& E, std::uint64_t p, const Point<Padic>& P, long N) {
    if (P.inf) return Padic::zero(p, N);
    if (mpz_divisible_ui_p(E.disc.get_mpz_t(), p)) throw DomainError("elliptic_log needs good reduction");
    const long m = count_points_Fp(E, p).first;
    Point<Padic> Q = scalar_mul(E, m, P);
    if (Q.inf) return Padic::zero(p, N);
    Padic z = z_param(Q);
    if (z.is_zero()) return Padic::zero(p, N);
    if (z.valuation() < 1) throw ConsistencyError("m P left the formal group");
    const long vz = z.valuation();
    long T = (N + vp(mpz_class(m), p) + 4) / vz + 6;
    T += 2 * static_cast<long>(std::log(static_cast<double>(T)) / std::log(double(p))) + 2;
    FormalExpansions F = formal_expansions(E, T);
    Padic l = eval_laurent(F.lambda, z) / m;
    return l.precision() > N ? l.reduce(N) : l;
}

Point<Padic> random_integral_point(const CurveModel& E, std::uint64_t p, long N, std::mt19937_64& rng,
                                   bool allow_weierstrass) {
    const mpz_class m = ppow(p, N);
    gmp_randclass gen(gmp_randinit_default);
    gen.seed(static_cast<unsigned long>(rng()));
    auto c = [&](const mpz_class& n) { return Padic::from_int(p, n, N); };
    for (int tries = 0; tries < 10000; ++tries) {
        Padic x = c(gen.get_z_range(m));
        // u = 2y + a1 x + a3, u^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        Padic f = c(4) * x * x * x + c(E.b2) * x * x + c(2 * E.b4) * x + c(E.b6);
        if (f.is_zero()) continue;
        if (f.valuation() > 0 && !allow_weierstrass) continue;
        if (f.valuation() % 2 != 0 || !is_square(f)) continue;
        if (f.valuation() > 0 && f.valuation() + 2 > N) continue;
        Padic u = padic_sqrt(f);
        if (rng() & 1) u = -u;
        Padic y = (u - c(E.a1()) * x - c(E.a3())) / 2;
        return {x, y, false};
    }
    throw DomainError("no integral point found");
}

}  // namespace qc

namespace qc {

Point<Padic> lift_residue_point(const CurveModel& E, const Point<Fp>& Pbar, long N) {
    const std::uint64_t p = Pbar.x.p;
    auto c = [&](const mpz_class& n) { return Padic::from_int(p, n, N); };
    auto f = [&](const Padic& x) { return c(4) * x * x * x + c(E.b2) * x * x + c(2 * E.b4) * x + c(E.b6); };
    Fp ubar = Pbar.y * Fp(2, p) + Fp::from_signed(mpz_class(E.a1() % p).get_si(), p) * Pbar.x +
              Fp::from_signed(mpz_class(E.a3() % p).get_si(), p);
    Padic x = c(Pbar.x.v), u;
    if (!ubar.is_zero()) {
        u = padic_sqrt(f(x), ubar.v);
    } else {
        // simple root of f, by Newton
        for (long it = 0; it < 2 * N + 8; ++it) {
            Padic fx = f(x);
            if (fx.is_zero() || fx.valuation() >= N) break;
            Padic d = c(12) * x * x + c(2 * E.b2) * x + c(2 * E.b4);
            if (d.valuation() != 0) throw DomainError("lift_residue_point: singular reduction");
            x = x - fx / d;
        }
        u = Padic::zero(p, N);
    }
    Padic y = (u - c(E.a1()) * x - c(E.a3())) / 2;
    return {x, y, false};
}

}  // namespace qc
