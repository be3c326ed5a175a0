#include <doctest.h>

#include <chrono>

#include "fixtures.hpp"
#include "qc/frobenius.hpp"

using namespace qc;

TEST_CASE("short model") {
    auto S = short_model(fixtures::c_sec6(), 5);
    CHECK(S.identity);
    CHECK(S.A == -891);
    CHECK(S.B == 4374);
    CHECK(S.calpha[0] == 1);
    CHECK(S.cbeta[1] == 1);

    auto E = fixtures::c1122m2();
    auto T = short_model(E, 5);
    CHECK(!T.identity);
    mpz_class d = -16 * (4 * T.A * T.A * T.A + 27 * T.B * T.B);
    CHECK(!mpz_divisible_ui_p(d.get_mpz_t(), 5));
    auto P = to_padic_point(fixtures::qpt(752, -17800), 5, 20);
    auto Ps = to_short(E, T, P);
    CHECK(same(Ps.y * Ps.y, Ps.x * Ps.x * Ps.x + Padic::from_int(5, T.A, 40) * Ps.x + Padic::from_int(5, T.B, 40)));
    auto back = from_short(E, T, Ps);
    CHECK(same(back.x, P.x));
    CHECK(same(back.y, P.y));
    CHECK_THROWS_AS(short_model(E, 3), DomainError);
}

TEST_CASE("trace and determinant") {
    auto fd = frobenius_matrix(fixtures::c32a(), 5, 20);
    CHECK(same(fd.trace(), Padic::from_int(5, -2, 20)));
    CHECK(same(fd.det(), Padic::from_int(5, 5, 20)));
    for (auto E : {fixtures::c378b3(), fixtures::c1122m2(), fixtures::c_sec6(), fixtures::c37a()}) {
        for (std::uint64_t p : {5UL, 7UL, 11UL, 13UL}) {
            if (mpz_divisible_ui_p(E.disc.get_mpz_t(), p)) continue;
            CAPTURE(E.label);
            CAPTURE(p);
            auto f = frobenius_matrix(E, p, 20);
            CHECK(same(f.trace(), Padic::from_int(p, count_points_Fp(E, p).second, 20)));
            CHECK(same(f.det(), Padic::from_int(p, long(p), 20)));
        }
    }
}

TEST_CASE("precision doubling keeps digits") {
    auto E = fixtures::c1122m2();
    auto a = frobenius_matrix(E, 7, 12), b = frobenius_matrix(E, 7, 24);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(agreement(a.M[r][c], b.M[r][c]) >= 12);
}

TEST_CASE("p = 13 at N = 20 is fast") {
    auto t0 = std::chrono::steady_clock::now();
    frobenius_matrix(fixtures::c378b3(), 13, 20);
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(s < 5.0);
}

TEST_CASE("Frobenius equivariance at a point") {
    // phi^* w_i against dh_i + sum_j M_ji w_j, as coefficients of dx
    auto E = fixtures::c378b3();
    const std::uint64_t p = 11;
    const long N = 15;
    auto fd = frobenius_matrix(E, p, N);
    const long W = fd.W;
    auto fx = [&](const Padic& a) { return Fx::from_padic(a, W); };
    Padic A = Padic::from_int(p, fd.sm.A, W), B = Padic::from_int(p, fd.sm.B, W);
    int tried = 0;
    for (long xv = 0; xv < 40 && tried < 5; ++xv) {
        Padic x = Padic::from_int(p, xv * 3 + 1, W);
        Padic q = x * x * x + A * x + B;
        if (q.valuation() != 0 || !is_square(q)) continue;
        ++tried;
        Padic y = padic_sqrt(q);
        Padic xp = x.pow(long(p));
        Padic ratio = (xp * xp * xp + A * xp + B) / q.pow(long(p));
        Padic phiy = y.pow(long(p)) * padic_sqrt(ratio, 1);
        Fx X = fx(x), Y = fx(y), Qx = fx(q);
        FxPoly dQ = poly_deriv(fd.Q);
        for (int i = 0; i < 2; ++i) {
            Fx lhs = fx(Padic::from_int(p, long(p), W) * x.pow(long(p) - 1 + long(p) * i) / (phiy * 2));
            Fx G(p, W), dG(p, W);
            Fx qi = Qx.inverse(), qpow = Fx::from_int(p, W, 1);
            for (long j = 0; j <= fd.H[i].rbegin()->first; ++j) {
                auto it = fd.H[i].find(j);
                if (it != fd.H[i].end()) {
                    G += poly_eval(it->second, X) * qpow;
                    dG += poly_eval(poly_deriv(it->second), X) * qpow -
                          poly_eval(it->second, X) * poly_eval(dQ, X) * qpow * qi * Fx::from_int(p, W, j);
                }
                qpow *= qi;
            }
            Fx rhs = poly_eval(dQ, X) * G / (Y + Y) + Y * dG;
            rhs += (fd.Mw[0][i] + fd.Mw[1][i] * X) / (Y + Y);
            CHECK(agreement(lhs.to_padic(N), rhs.to_padic(N)) >= N - 2);
        }
    }
    CHECK(tried == 5);
}
