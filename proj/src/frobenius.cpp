#include "qc/frobenius.hpp"

#include <cmath>

namespace qc {

ShortModel short_model(const CurveModel& E, std::uint64_t p) {
    if (p < 5) throw DomainError("unsupported prime: the short model needs p >= 5");
    if (mpz_divisible_ui_p(E.disc.get_mpz_t(), p)) throw DomainError("short model needs good reduction at p");
    ShortModel S;
    if (E.a1() == 0 && E.a2() == 0 && E.a3() == 0) {
        S.identity = true;
        S.A = E.a4();
        S.B = E.a6();
        S.s = 1;
        S.t = 0;
        S.v = mpq_class(1, 2);
    } else {
        S.A = -27 * E.c4;
        S.B = -54 * E.c6;
        S.s = 36;
        S.t = 3 * E.b2;
        S.v = 108;
    }
    mpq_class mu = S.s / (2 * S.v);  // w0 = mu * alpha
    S.calpha = {1 / mu, mpq_class(0)};
    S.cbeta = {-S.t / (S.s * mu), 1 / (S.s * mu)};
    return S;
}

Point<Padic> to_short(const CurveModel& E, const ShortModel& S, const Point<Padic>& P) {
    if (P.inf) return P;
    const std::uint64_t p = P.x.prime();
    auto c = [&](const mpq_class& q) { return Padic::from_rational(p, q, P.x.precision() + 64); };
    Padic u = P.y * 2 + c(E.a1()) * P.x + c(E.a3());
    return Point<Padic>{c(S.s) * P.x + c(S.t), c(S.v) * u, false};
}

Point<Padic> from_short(const CurveModel& E, const ShortModel& S, const Point<Padic>& P) {
    if (P.inf) return P;
    const std::uint64_t p = P.x.prime();
    auto c = [&](const mpq_class& q) { return Padic::from_rational(p, q, P.x.precision() + 64); };
    Padic x = (P.x - c(S.t)) / c(S.s);
    Padic y = (P.y / c(S.v) - c(E.a1()) * x - c(E.a3())) / 2;
    return Point<Padic>{x, y, false};
}

namespace {

using ZPoly = std::vector<mpz_class>;

ZPoly zmul(const ZPoly& a, const ZPoly& b, const mpz_class& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    for (auto& x : r) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Q-adic digits of f (Q = x^3 + A x + B monic), lowest first; f is consumed.
std::vector<std::array<mpz_class, 3>> qadic_digits(ZPoly f, const mpz_class& A, const mpz_class& B,
                                                   const mpz_class& m) {
    std::vector<std::array<mpz_class, 3>> out;
    while (!f.empty()) {
        ZPoly q(f.size() > 3 ? f.size() - 3 : 0);
        for (std::size_t i = f.size(); i-- > 3;) {
            mpz_fdiv_r(f[i].get_mpz_t(), f[i].get_mpz_t(), m.get_mpz_t());
            if (f[i] == 0) continue;
            q[i - 3] = f[i];
            mpz_submul(f[i - 2].get_mpz_t(), f[i].get_mpz_t(), A.get_mpz_t());
            mpz_submul(f[i - 3].get_mpz_t(), f[i].get_mpz_t(), B.get_mpz_t());
        }
        std::array<mpz_class, 3> d;
        for (std::size_t i = 0; i < 3 && i < f.size(); ++i) mpz_fdiv_r(d[i].get_mpz_t(), f[i].get_mpz_t(), m.get_mpz_t());
        out.push_back(d);
        f.swap(q);
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    return out;
}

FxPoly resize3(FxPoly a, std::uint64_t p, long W) {
    a.resize(std::max<std::size_t>(a.size(), 3), Fx(p, W));
    return a;
}

}  // namespace

Fx FrobeniusData::h_value(int i, const Fx& x, const Fx& y) const {
    Fx q = poly_eval(Q, x), qi = q.inverse();
    Fx r(p, W), qp = Fx::from_int(p, W, 1);
    for (long j = 0; !H[i].empty() && j <= H[i].rbegin()->first; ++j) {
        auto it = H[i].find(j);
        if (it != H[i].end()) r += poly_eval(it->second, x) * qp;
        qp *= qi;
    }
    return y * r;
}

FrobeniusData frobenius_matrix(const CurveModel& E, std::uint64_t p, long N, long extra_guard) {
    const ShortModel sm = short_model(E, p);
    const double lp = std::log(static_cast<double>(p));
    const long kest = N + extra_guard + 12;
    const long loss = static_cast<long>(std::floor(std::log(2.0 * p * (kest + 2)) / lp)) + 2;
    const long W = N + loss + extra_guard + 1;
    const long K = W + loss;
    const mpz_class m = ppow(p, W);
    mpz_class A = sm.A % m, B = sm.B % m;
    if (A < 0) A += m;
    if (B < 0) B += m;

    FrobeniusData fd;
    fd.p = p;
    fd.W = W;
    fd.sm = sm;
    auto fx = [&](const mpz_class& n) { return Fx::from_int(p, W, n); };
    fd.Q = {fx(B), fx(A), Fx(p, W), fx(1)};
    const FxPoly dQ = {fx(A), Fx(p, W), fx(3)};

    // U = 1/Q' mod Q from the 3x3 system on x^k Q' mod Q
    FxPoly U;
    {
        std::vector<std::vector<Fx>> Mx(3, std::vector<Fx>(3, Fx(p, W)));
        for (std::size_t k = 0; k < 3; ++k) {
            FxPoly g(k, Fx(p, W));
            g.insert(g.end(), dQ.begin(), dQ.end());
            FxPoly q, r;
            poly_divmod_monic(g, fd.Q, q, r);
            r = resize3(r, p, W);
            for (std::size_t row = 0; row < 3; ++row) Mx[row][k] = r[row];
        }
        U = fx_solve(Mx, {fx(1), Fx(p, W), Fx(p, W)});
    }

    // E = Q(x^p) - Q(x)^p
    ZPoly Qz = {B, A, 0, 1};
    ZPoly Ep(3 * p + 1);
    {
        ZPoly Qp = {1};
        for (std::uint64_t k = 0; k < p; ++k) Qp = zmul(Qp, Qz, m);
        Ep[0] = B;
        Ep[p] = A;
        Ep[3 * p] = 1;
        for (std::size_t i = 0; i < Qp.size(); ++i) Ep[i] -= Qp[i];
        for (auto& x : Ep) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        while (!Ep.empty() && Ep.back() == 0) Ep.pop_back();
    }
    mpz_class inv2;
    mpz_invert(inv2.get_mpz_t(), mpz_class(2).get_mpz_t(), m.get_mpz_t());

    const long half = static_cast<long>((p - 1) / 2);
    std::array<std::array<Fx, 2>, 2> Mw;
    for (int i = 0; i < 2; ++i) {
        std::map<long, FxPoly> terms;  // j -> coefficient of dx/(y Q^j)
        const std::size_t shift = p * static_cast<std::size_t>(i + 1) - 1;
        const mpz_class lead = mpz_class(static_cast<unsigned long>(p)) * inv2 % m;
        ZPoly Ek = {1};
        mpz_class bk = 1, i4 = 1;  // binom(-1/2, k), 4^-k
        for (long k = 0; k < K; ++k) {
            ZPoly F(shift + Ek.size());
            mpz_class c = lead * bk % m;
            for (std::size_t t = 0; t < Ek.size(); ++t) F[shift + t] = Ek[t] * c;
            auto digs = qadic_digits(std::move(F), A, B, m);
            for (std::size_t d = 0; d < digs.size(); ++d) {
                long j = static_cast<long>(p) * k + half - static_cast<long>(d);
                FxPoly dg = {fx(digs[d][0]), fx(digs[d][1]), fx(digs[d][2])};
                auto it = terms.find(j);
                if (it == terms.end()) terms.emplace(j, dg);
                else it->second = poly_add(it->second, dg);
            }
            Ek = zmul(Ek, Ep, m);
            // binom(-1/2, k+1) = (-1)^(k+1) C(2k+2, k+1) / 4^(k+1)
            mpz_class cb;
            mpz_bin_uiui(cb.get_mpz_t(), static_cast<unsigned long>(2 * k + 2), static_cast<unsigned long>(k + 1));
            i4 = i4 * inv2 % m * inv2 % m;
            bk = cb * i4 % m;
            if (k % 2 == 0) bk = (m - bk) % m;
        }

        std::map<long, FxPoly>& H = fd.H[i];
        const long jmax = terms.rbegin()->first;
        for (long j = jmax; j >= 1; --j) {
            auto it = terms.find(j);
            if (it == terms.end()) continue;
            FxPoly c = resize3(it->second, p, W);
            FxPoly q, S, R, rem;
            poly_divmod_monic(poly_mul(c, U), fd.Q, q, S);
            S = resize3(S, p, W);
            poly_divmod_monic(poly_sub(c, poly_mul(S, dQ)), fd.Q, R, rem);
            Fx k2 = fx(2).div_int(2 * j - 1);
            FxPoly add = poly_add(R, poly_scale(poly_deriv(S), k2));
            auto& dst = terms[j - 1];
            dst = poly_add(dst, add);
            H[j] = poly_scale(S, -k2);
        }
        FxPoly P;
        {
            FxPoly Qpow = {fx(1)};
            for (long j = 0; j >= terms.begin()->first; --j) {
                auto it = terms.find(j);
                if (it != terms.end()) P = poly_add(P, poly_mul(it->second, Qpow));
                Qpow = poly_mul(Qpow, fd.Q);
            }
        }
        // P dx/y minus d(x^k y) = (k x^(k-1) Q + x^k Q'/2) dx/y
        FxPoly poly;
        while (P.size() > 2) {
            const std::size_t mdeg = P.size() - 1;
            const long k = static_cast<long>(mdeg) - 2;
            Fx c = P[mdeg] * fx(2).div_int(2 * k + 3);
            FxPoly num(static_cast<std::size_t>(k) + 3, Fx(p, W));
            for (std::size_t t = 0; t < 4; ++t)
                if (k >= 1) num[static_cast<std::size_t>(k) - 1 + t] += fd.Q[t].mul_int(k);
            for (std::size_t t = 0; t < 3; ++t) num[static_cast<std::size_t>(k) + t] += dQ[t].div_int(2);
            P = poly_sub(P, poly_scale(num, c));
            P.resize(mdeg);
            if (poly.size() <= static_cast<std::size_t>(k)) poly.resize(static_cast<std::size_t>(k) + 1, Fx(p, W));
            poly[static_cast<std::size_t>(k)] += c;
        }
        P.resize(2, Fx(p, W));
        H[0] = poly;
        Mw[0][i] = P[0].mul_int(2);
        Mw[1][i] = P[1].mul_int(2);
    }

    fd.Mw = Mw;
    fd.N = N;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) fd.M[r][c] = Mw[r][c].to_padic(N);

    // certify: trace = a_p, det = p
    const long ap = count_points_Fp(E, p).second;
    if (!same(fd.trace(), Padic::from_int(p, ap, N + 4)) || !same(fd.det(), Padic::from_int(p, long(p), N + 4)))
        throw ConsistencyError("Frobenius matrix failed the trace/determinant check");
    return fd;
}

}  // namespace qc
