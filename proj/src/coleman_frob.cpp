#include <cmath>

#include "coleman_internal.hpp"

namespace qc {

ColemanValues pull_back(const Coleman& C, const Point<Padic>& P, long m);

namespace {

long log_slack(std::uint64_t p, long n) {
    return static_cast<long>(std::floor(std::log(static_cast<double>(std::max(2L, n))) / std::log(double(p))));
}

long poly_min_val(const FxPoly& a) {
    long v = LONG_MAX;
    for (const auto& c : a)
        if (!c.is_zero()) v = std::min(v, c.valuation());
    return v;
}

FxPoly trimmed(FxPoly a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    return a;
}

void accumulate(std::map<long, FxPoly>& m, long k, const FxPoly& a) {
    if (a.empty()) return;
    auto it = m.find(k);
    if (it == m.end()) m.emplace(k, a);
    else it->second = poly_add(it->second, a);
}

// Arithmetic in L = Q_p[t]/(Q(t)), elements as coefficient triples.
struct Etale {
    FxPoly Q, U;  // U = 1/Q' mod Q
    Fx trace_t2;  // Tr(t^2) = -2A
    std::uint64_t p;
    long W;

    FxPoly mul(const FxPoly& a, const FxPoly& b) const {
        FxPoly q, r;
        poly_divmod_monic(poly_mul(a, b), Q, q, r);
        r.resize(3, Fx(p, W));
        return r;
    }
    long val(const FxPoly& a) const { return poly_min_val(a); }
    Fx trace(const FxPoly& a) const {
        FxPoly b = a;
        b.resize(3, Fx(p, W));
        return b[0].mul_int(3) + b[2] * trace_t2;
    }
    FxPoly pow(FxPoly a, std::uint64_t e) const {
        FxPoly r = {Fx::from_int(p, W, 1), Fx(p, W), Fx(p, W)};
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }
    // log(1 + w) for v(w) >= 1
    FxPoly log1p(const FxPoly& w) const {
        long v = val(w);
        FxPoly r(3, Fx(p, W));
        if (v == LONG_MAX) return r;
        FxPoly pw = w;
        for (long n = 1;; ++n) {
            if (n * v - log_slack(p, n) > W + 2) break;
            FxPoly term = poly_scale(pw, Fx::from_int(p, W, n % 2 ? 1 : -1).div_int(n));
            r = poly_add(r, term);
            pw = mul(pw, w);
        }
        return r;
    }
    // Iwasawa log(x - t)
    FxPoly log_x_minus_t(const Fx& x) const {
        const Fx one = Fx::from_int(p, W, 1);
        if (x.is_zero() || x.valuation() >= 0) {
            FxPoly u = {x, -one, Fx(p, W)};
            std::uint64_t e = 1;
            for (int i = 0; i < 6; ++i) e *= p;
            --e;
            FxPoly w = pow(u, e);
            w[0] -= one;
            FxPoly l = log1p(w);
            Fx inv = Fx::from_rational(p, W, mpq_class(1, mpz_class(static_cast<unsigned long>(e))));
            return poly_scale(l, inv);
        }
        Fx lx = Fx::from_padic(padic_log(x.to_padic(W)), W);
        FxPoly l = log1p({Fx(p, W), -(x.inverse()), Fx(p, W)});
        l[0] += lx;
        return l;
    }
};

}  // namespace

namespace {

// Reduce sum_m num[m] Q^-m dx to exact part + polynomial + trace-log.
EvenIntegral reduce_even(std::map<long, FxPoly> num, const FxPoly& Q, const FxPoly& dQ, const FxPoly& U,
                         std::uint64_t p, long W) {
    EvenIntegral out;
    FxPoly polypart;
    while (!num.empty()) {
        auto it = std::prev(num.end());
        const long m = it->first;
        FxPoly c = trimmed(it->second);
        num.erase(it);
        if (c.empty()) continue;
        if (m <= 0) {
            FxPoly qp = {Fx::from_int(p, W, 1)};
            for (long j = 0; j < -m; ++j) qp = poly_mul(qp, Q);
            polypart = poly_add(polypart, poly_mul(c, qp));
            continue;
        }
        FxPoly q, r;
        if (c.size() > 3) {
            poly_divmod_monic(c, Q, q, r);
            accumulate(num, m - 1, trimmed(q));
        } else {
            r = c;
        }
        r.resize(3, Fx(p, W));
        FxPoly S, qq;
        poly_divmod_monic(poly_mul(r, U), Q, qq, S);
        S.resize(3, Fx(p, W));
        if (m == 1) {
            out.logc = S;
            continue;
        }
        FxPoly R, rem;
        poly_divmod_monic(poly_sub(r, poly_mul(S, dQ)), Q, R, rem);
        Fx inv = Fx::from_int(p, W, 1).div_int(m - 1);
        accumulate(num, m - 1, trimmed(poly_add(R, poly_scale(poly_deriv(S), inv))));
        accumulate(out.exact, m - 1, poly_scale(S, -inv));
    }
    polypart = trimmed(polypart);
    out.poly.assign(polypart.size() + 1, Fx(p, W));
    for (std::size_t k = 0; k < polypart.size(); ++k) out.poly[k + 1] = polypart[k].div_int(static_cast<long>(k + 1));
    if (out.logc.empty()) out.logc.assign(3, Fx(p, W));
    return out;
}

}  // namespace

Fx Coleman::FrobEngine::even_value(const EvenIntegral& g, const Fx& x) const {
    const std::uint64_t p = fd.p;
    Fx q = poly_eval(fd.Q, x), qi = q.inverse();
    Fx r = poly_eval(g.poly, x);
    Fx qp = Fx::from_int(p, W, 1);
    long j = 0;
    for (const auto& [m, S] : g.exact) {
        while (j < m) qp *= qi, ++j;
        r += poly_eval(S, x) * qp;
    }
    bool any = false;
    for (const auto& c : g.logc) any = any || !c.is_zero();
    if (any) {
        Etale L{fd.Q, {}, Fx::from_padic(Padic::from_int(p, -2 * fd.sm.A, W), W), p, W};
        r += L.trace(L.mul(g.logc, L.log_x_minus_t(x)));
    }
    return r;
}

Coleman::FrobEngine::FrobEngine(const Coleman& C) {
    const std::uint64_t p = C.p_;
    const CurveModel& E = C.E_;
    // h has a pole on the disk of O; a cheap pass measures h(R) to size the guard
    long guard;
    {
        FrobeniusData probe = frobenius_matrix(E, p, 6, 0);
        FormalExpansions F0 = formal_expansions(E, 24);
        Point<Padic> R0 = to_short(E, probe.sm, point_from_z(F0, Padic::from_int(p, static_cast<long>(p), 20)));
        long vh = 0;
        for (int i = 0; i < 2; ++i)
            vh = std::min(vh, probe.h_value(i, Fx::from_padic(R0.x, probe.W), Fx::from_padic(R0.y, probe.W)).valuation());
        guard = -vh + 2 * log_slack(p, C.W_ * static_cast<long>(p)) + 2;
    }
    fd = frobenius_matrix(E, p, C.W_, guard);
    W = fd.W;
    const ShortModel& sm = fd.sm;
    auto fx = [&](const Padic& a) { return Fx::from_padic(a, W); };
    auto fq = [&](const mpq_class& q) { return Fx::from_rational(p, W, q); };

    // waypoint R: z = p in the original model
    FormalExpansions FR = formal_expansions(E, W + 2 * log_slack(p, W) + 12);
    Padic zR = Padic::from_int(p, static_cast<long>(p), W + 8);
    R = point_from_z(FR, zR);
    {
        Padic d2 = eval_laurent(FR.d2, zR);  // log p = 0
        Padic la = eval_laurent(FR.lambda, zR);
        const Padic& c0 = C.z_constant();
        atR = {la, eval_laurent(FR.ibeta, zR) - c0, d2 - c0 * la};
    }
    Point<Padic> Rs = to_short(E, sm, R);
    xR = fx(Rs.x);
    yR = fx(Rs.y);

    // phi(R) in the short model
    const Padic A = Padic::from_int(p, sm.A, W + 8), B = Padic::from_int(p, sm.B, W + 8);
    Padic xs = Rs.x, ys = Rs.y;
    Padic xp = xs.pow(static_cast<long>(p));
    Padic ratio = (xp * xp * xp + A * xp + B) / (xs * xs * xs + A * xs + B).pow(static_cast<long>(p));
    Padic yp = ys.pow(static_cast<long>(p)) * padic_sqrt(ratio, 1);
    Padic zs = -(xs / ys), zps = -(xp / yp);

    // tiny integrals in the short model's formal group
    CurveModel Es = CurveModel::make({0, 0, 0, sm.A, sm.B});
    FormalExpansions FS = formal_expansions(Es, W + 2 * log_slack(p, W) + 12);
    const long M = FS.T + 8;
    std::array<Laurent, 2> w = {FS.omega, FS.beta}, G = {FS.lambda, FS.ibeta};
    std::array<Padic, 2> GR, Gphi;
    for (int i = 0; i < 2; ++i) {
        GR[i] = eval_laurent(G[i], zs);
        Gphi[i] = eval_laurent(G[i], zps);
        tau[i] = fx(GR[i] - Gphi[i]);
    }
    Padic lz = padic_log(zs / zps);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            mpq_class lg;
            Laurent gg = laurent_integrate(laurent_mul(w[i], G[k], M), &lg);
            Padic val = eval_laurent(gg, zs) - eval_laurent(gg, zps);
            if (lg != 0) val += Padic::from_rational(p, lg, W + 8) * lz;
            tau2[i][k] = fx(val - Gphi[k] * (GR[i] - Gphi[i]));
        }
    for (int i = 0; i < 2; ++i) hR[i] = fd.h_value(i, xR, yR);

    // even forms h_1 dh_0 (the others follow by parts) and h_i w_b
    const FxPoly& Q = fd.Q;
    const FxPoly dQ = poly_deriv(Q);
    FxPoly U;
    {
        std::vector<std::vector<Fx>> Mx(3, std::vector<Fx>(3, Fx(p, W)));
        for (std::size_t k = 0; k < 3; ++k) {
            FxPoly g(k, Fx(p, W));
            g.insert(g.end(), dQ.begin(), dQ.end());
            FxPoly q, r;
            poly_divmod_monic(g, Q, q, r);
            r.resize(3, Fx(p, W));
            for (std::size_t row = 0; row < 3; ++row) Mx[row][k] = r[row];
        }
        U = fx_solve(Mx, {Fx::from_int(p, W, 1), Fx(p, W), Fx(p, W)});
    }
    const long skip = W + 2 * log_slack(p, 4 * W * static_cast<long>(p)) + 4;
    {
        // h_k dh_i = sum Q^-(j+l) H_kl [(1/2 - j) Q' H_ij] + Q^-(j+l-1) H_kl H_ij'
        // pair products on integers scaled by p^e0, reduced once at the end
        const int i = 0, k = 1;
        struct Raw {
            long key, val;
            std::vector<mpz_class> c;
        };
        auto minval = [](long a, const FxPoly& f) { return std::min(a, poly_min_val(f)); };
        std::vector<std::pair<long, std::array<FxPoly, 2>>> left;
        long e0 = 0;
        for (const auto& [j, Hij] : fd.H[i]) {
            if (poly_min_val(Hij) == LONG_MAX) continue;
            FxPoly a = poly_scale(poly_mul(dQ, Hij), fq(mpq_class(1, 2) - j));
            FxPoly b = poly_deriv(Hij);
            e0 = std::max(e0, -minval(minval(LONG_MAX, a), b));
            left.push_back({j, {a, b}});
        }
        for (const auto& [l, Hkl] : fd.H[k]) e0 = std::max(e0, -poly_min_val(Hkl));
        auto raw = [&](long key, const FxPoly& f) {
            Raw r{key, poly_min_val(f), {}};
            for (const auto& c : f) r.c.push_back(c.scaled(e0));
            return r;
        };
        std::vector<Raw> A, B, Hk;
        for (const auto& [j, ab] : left) {
            A.push_back(raw(j, ab[0]));
            B.push_back(raw(j - 1, ab[1]));
        }
        for (const auto& [l, Hkl] : fd.H[k])
            if (poly_min_val(Hkl) != LONG_MAX) Hk.push_back(raw(l, Hkl));
        std::map<long, std::vector<mpz_class>> acc;
        auto mac = [&](const Raw& f, const Raw& g) {
            if (f.val == LONG_MAX || f.val + g.val > skip) return;
            auto& dst = acc[f.key + g.key];
            if (dst.size() < f.c.size() + g.c.size() - 1) dst.resize(f.c.size() + g.c.size() - 1);
            for (std::size_t u = 0; u < f.c.size(); ++u)
                for (std::size_t w = 0; w < g.c.size(); ++w)
                    mpz_addmul(dst[u + w].get_mpz_t(), f.c[u].get_mpz_t(), g.c[w].get_mpz_t());
        };
        for (std::size_t t = 0; t < A.size(); ++t)
            for (const auto& h : Hk) {
                mac(A[t], h);
                mac(B[t], h);
            }
        std::map<long, FxPoly> num;
        for (auto& [key, cs] : acc) {
            FxPoly f;
            for (auto& c : cs) f.push_back(Fx::from_scaled(p, W, c, 2 * e0));
            num.emplace(key, std::move(f));
        }
        hdh[0][1] = reduce_even(std::move(num), Q, dQ, U, p, W);
    }
    for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 2; ++b) {
            // h_i w_b = (x^b / 2) H_i dx
            std::map<long, FxPoly> num;
            FxPoly xb(static_cast<std::size_t>(b) + 1, Fx(p, W));
            xb[static_cast<std::size_t>(b)] = fq(mpq_class(1, 2));
            for (const auto& [j, Hij] : fd.H[i]) accumulate(num, j, poly_mul(Hij, xb));
            hw[i][b] = reduce_even(std::move(num), Q, dQ, U, p, W);
        }
    hdhR[0][1] = even_value(hdh[0][1], xR);
    for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 2; ++b) hwR[i][b] = even_value(hw[i][b], xR);
}

void Coleman::FrobEngine::solve_at(const Fx& xT, const Fx& yT, std::array<Fx, 2>& v,
                                   std::array<std::array<Fx, 2>, 2>& J) const {
    const std::uint64_t p = fd.p;
    const auto& Mw = fd.Mw;
    const Fx zero(p, W), one = Fx::from_int(p, W, 1);
    std::array<Fx, 2> hT = {fd.h_value(0, xT, yT), fd.h_value(1, xT, yT)};

    // (M^T - I) v = tau + h(R) - h(T)
    {
        std::vector<std::vector<Fx>> A(2, std::vector<Fx>(2, zero));
        std::vector<Fx> rhs(2, zero);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) A[i][j] = Mw[j][i] - (i == j ? one : zero);
            rhs[i] = tau[i] + hR[i] - hT[i];
        }
        auto s = fx_solve(A, rhs);
        v = {s[0], s[1]};
    }

    // int_R^T h_k dh_i for all i, k
    std::array<std::array<Fx, 2>, 2> Ihdh;
    for (int i = 0; i < 2; ++i) Ihdh[i][i] = (hT[i] * hT[i] - hR[i] * hR[i]).div_int(2);
    Ihdh[0][1] = even_value(hdh[0][1], xT) - hdhR[0][1];
    Ihdh[1][0] = hT[0] * hT[1] - hR[0] * hR[1] - Ihdh[0][1];
    std::array<std::array<Fx, 2>, 2> Ihw;
    for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 2; ++b) Ihw[i][b] = even_value(hw[i][b], xT) - hwR[i][b];

    // J_ik - sum_ab M_ai M_bk J_ab = rhs_ik
    std::vector<std::vector<Fx>> A(4, std::vector<Fx>(4, zero));
    std::vector<Fx> rhs(4, zero);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            const int r = 2 * i + k;
            Fx s = Ihdh[i][k] - hR[k] * (hT[i] - hR[i]);
            for (int b = 0; b < 2; ++b) s += Mw[b][k] * (v[b] * hT[i] - Ihw[i][b]);
            for (int a = 0; a < 2; ++a) s += Mw[a][i] * (Ihw[k][a] - hR[k] * v[a]);
            s -= tau2[i][k] + v[i] * tau[k];
            rhs[r] = s;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) A[r][2 * a + b] -= Mw[a][i] * Mw[b][k];
            A[r][r] += one;
        }
    auto s = fx_solve(A, rhs);
    J = {{{s[0], s[1]}, {s[2], s[3]}}};
}

ColemanValues Coleman::at_frobenius(const Point<Padic>& P) const {
    if (!fe_) throw DomainError("no Frobenius data for this prime");
    if (P.inf) throw DomainError("O is the tangential base itself");
    if (!P.x.is_zero() && P.x.valuation() < 0) return finish(tiny_from_base(P));
    const std::uint64_t p = p_;
    auto K = [&](const mpz_class& n) { return Padic::from_int(p, n, P.x.precision() + 64); };
    Padic u = P.y * 2 + K(E_.a1()) * P.x + K(E_.a3());
    if (u.is_zero() || u.valuation() >= 1) return finish(pull_back(*this, P, 2));

    const FrobEngine& fe = *fe_;
    const ShortModel& sm = fe.fd.sm;
    const long W = fe.W;
    // Teichmueller point of the disk, short model
    Fp xb(P.x.residue(), p), ub(u.residue(), p);
    auto modp = [&](const mpq_class& q) {
        return Fp(static_cast<std::uint64_t>(mpz_fdiv_ui(mpz_class(q.get_num()).get_mpz_t(), p)), p) /
               Fp(static_cast<std::uint64_t>(mpz_fdiv_ui(mpz_class(q.get_den()).get_mpz_t(), p)), p);
    };
    Fp xsb = modp(sm.s) * xb + modp(sm.t), ysb = modp(sm.v) * ub;
    Padic xT = xsb.v == 0 ? Padic::zero(p, W) : teichmuller(p, xsb.v, W);
    Padic A = Padic::from_int(p, sm.A, W), B = Padic::from_int(p, sm.B, W);
    Padic yT = padic_sqrt(xT * xT * xT + A * xT + B, ysb.v);
    std::array<Fx, 2> v;
    std::array<std::array<Fx, 2>, 2> J;
    fe.solve_at(Fx::from_padic(xT, W), Fx::from_padic(yT, W), v, J);

    const long Nw = W_;
    auto pd = [&](const Fx& a) { return a.to_padic(Nw); };
    auto cq = [&](const mpq_class& q) { return Padic::from_rational(p, q, Nw + 64); };
    Padic va = cq(sm.calpha[0]) * pd(v[0]) + cq(sm.calpha[1]) * pd(v[1]);
    Padic vb = cq(sm.cbeta[0]) * pd(v[0]) + cq(sm.cbeta[1]) * pd(v[1]);
    Padic jab = Padic::zero(p, Nw);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) jab += cq(sm.calpha[i]) * cq(sm.cbeta[k]) * pd(J[i][k]);
    ColemanValues atT{fe.atR.I_alpha + va, fe.atR.I_beta + vb, fe.atR.D2 + jab + va * fe.atR.I_beta};

    Point<Padic> T = from_short(E_, sm, Point<Padic>{xT, yT, false});
    return finish(compose(atT, tiny(T, P)));
}

}  // namespace qc
