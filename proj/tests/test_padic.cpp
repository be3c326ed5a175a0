#include <doctest.h>

#include <random>

#include "qc/errors.hpp"
#include "qc/padic.hpp"

using namespace qc;

namespace {

Padic random_unit(std::mt19937_64& rng, std::uint64_t p, long N) {
    mpz_class u;
    do {
        u = mpz_class(static_cast<unsigned long>(rng() >> 1)) * mpz_class(static_cast<unsigned long>(rng() >> 1)) %
            ppow(p, N);
    } while (u % p == 0);
    return Padic::from_parts(p, 0, u, N);
}

Padic random_nonzero(std::mt19937_64& rng, std::uint64_t p, long N) {
    long v = static_cast<long>(rng() % 7) - 3;
    return random_unit(rng, p, N) * Padic::from_parts(p, v, 1, N + 10);
}

}  // namespace

TEST_CASE("canonical text round trip") {
    Padic a = Padic::from_rational(5, mpq_class(7, 25), 20);
    CHECK(a.valuation() == -2);
    CHECK(Padic::parse(a.str()).str() == a.str());
    Padic z = Padic::zero(7, 12);
    CHECK(z.str() == "0*7^12 + O(7^12)");
    CHECK(Padic::parse(z.str()).is_zero());
    CHECK(Padic::parse(z.str()).precision() == 12);
    CHECK_THROWS_AS(Padic::parse("5*5^0 + O(5^3)"), DomainError);
    CHECK_THROWS_AS(Padic::parse("1*5^0 + O(7^3)"), DomainError);
    CHECK_THROWS_AS(Padic::parse("garbage"), DomainError);
}

TEST_CASE("precision bookkeeping") {
    Padic a = Padic::from_int(5, 3, 10), b = Padic::from_int(5, 3, 6);
    CHECK((a + b).precision() == 6);
    Padic c = Padic::from_parts(5, 2, 1, 10);  // 25 + O(5^10)
    CHECK((c * a).precision() == 10);
    CHECK((c * c).precision() == 12);
    CHECK((a / c).valuation() == -2);
    CHECK((a / c).precision() == 6);
    CHECK((a - a).is_zero());
    CHECK((a - a).precision() == 10);
    CHECK_THROWS_AS(Padic::zero(5, 4).inverse(), PrecisionError);
}

TEST_CASE("log examples") {
    CHECK(padic_log(Padic::one(5, 20)).is_zero());
    CHECK(padic_log(Padic::from_int(5, 5, 20)).is_zero());
    CHECK(padic_log(Padic::from_int(5, 125, 20)).is_zero());
    CHECK_THROWS_AS(padic_log(Padic::zero(5, 20)), DomainError);

    // (1/4) sum (-1)^(k+1) 2400^k / k as an exact rational, then reduced
    const long N = 20;
    mpq_class s = 0;
    mpz_class t = 1;
    for (long k = 1; k <= 60; ++k) {
        t *= 2400;
        mpq_class term(t, k);
        if (k % 2) s += term;
        else s -= term;
    }
    s /= 4;
    s.canonicalize();
    Padic oracle = Padic::from_rational(5, s, N);
    Padic got = padic_log(Padic::from_int(5, 7, N));
    CHECK(agreement(got, oracle) >= N);
    CHECK(got.precision() == N);
}

TEST_CASE("log is a homomorphism") {
    std::mt19937_64 rng(12345);
    for (std::uint64_t p : {3, 5, 7, 11, 97}) {
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            Padic x = random_nonzero(rng, p, 20), y = random_nonzero(rng, p, 20);
            Padic lhs = padic_log(x * y), rhs = padic_log(x) + padic_log(y);
            if (!same(lhs, rhs)) ++bad;
        }
        CHECK_MESSAGE(bad == 0, "p = " << p);
    }
}

TEST_CASE("exp and log invert each other") {
    std::mt19937_64 rng(777);
    CHECK(same(padic_exp(Padic::zero(5, 20)), Padic::one(5, 20)));
    CHECK(same(padic_exp(padic_log(Padic::from_int(5, 6, 15))), Padic::from_int(5, 6, 15)));
    Padic x = Padic::from_int(7, 21, 20);
    CHECK(same(padic_log(padic_exp(x)), x));
    CHECK_THROWS_AS(padic_exp(Padic::from_int(5, 2, 10)), ConvergenceError);
    for (std::uint64_t p : {3, 5, 7, 11, 97}) {
        int bad = 0;
        for (int i = 0; i < 200; ++i) {
            Padic t = random_unit(rng, p, 20) * Padic::from_parts(p, 1 + static_cast<long>(rng() % 3), 1, 30);
            if (!same(padic_log(padic_exp(t)), t)) ++bad;
            Padic one_t = Padic::one(p, t.precision()) + t;
            if (!same(padic_exp(padic_log(one_t)), one_t)) ++bad;
        }
        CHECK_MESSAGE(bad == 0, "p = " << p);
    }
}

TEST_CASE("teichmuller") {
    CHECK(same(teichmuller(7, 1, 20), Padic::one(7, 20)));
    for (std::uint64_t a = 1; a < 7; ++a) {
        Padic w = teichmuller(7, a, 20);
        CHECK(same(w.pow(6), Padic::one(7, 20)));
        CHECK(w.residue() == a);
    }
    // iterate t -> t^7 from 2 to stationarity
    Padic t = Padic::from_int(7, 2, 20);
    for (int i = 0; i < 25; ++i) t = t.pow(7);
    CHECK(same(t, teichmuller(7, 2, 20)));
    CHECK(padic_log(teichmuller(11, 3, 20)).is_zero());
    CHECK_THROWS_AS(teichmuller(Padic::from_int(5, 10, 20)), DomainError);
}

TEST_CASE("square roots") {
    Padic x = Padic::from_int(7, 2, 20);
    Padic r = padic_sqrt(x, 3);
    CHECK(r.residue() == 3);
    CHECK(same(r * r, x));
    CHECK(padic_sqrt(x, 4).residue() == 4);
    Padic y = Padic::from_parts(5, 2, 6, 20);
    CHECK(same(padic_sqrt(y) * padic_sqrt(y), y));
    CHECK_THROWS_AS(padic_sqrt(Padic::from_int(5, 2, 10)), DomainError);
}

TEST_CASE("precision soundness") {
    std::mt19937_64 rng(99);
    for (std::uint64_t p : {3, 5, 7}) {
        for (int i = 0; i < 100; ++i) {
            Padic hi = random_nonzero(rng, p, 40);
            Padic lo = hi.reduce(20);
            CHECK(same(padic_log(hi), padic_log(lo)));
            CHECK(same(hi.inverse(), lo.inverse()));
            CHECK(same(hi * hi + hi, lo * lo + lo));
        }
    }
}
