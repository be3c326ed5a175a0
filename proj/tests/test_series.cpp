#include <doctest.h>

#include <random>

#include "qc/errors.hpp"
#include "qc/series.hpp"

using namespace qc;

namespace {

DiskSeries poly(std::uint64_t p, std::initializer_list<long> cs, long N = 20) {
    std::vector<Padic> v;
    for (long c : cs) v.push_back(Padic::from_int(p, c, N));
    return DiskSeries::polynomial(v);
}

}  // namespace

TEST_CASE("series zeros: small examples") {
    auto z = series_zeros_in_disk(poly(5, {0, 1}), 1);
    REQUIRE(z.size() == 1);
    CHECK(z[0].is_zero());

    auto r = series_zeros_in_disk(poly(11, {-1, 1, 1}), 0);
    REQUIRE(r.size() == 2);
    std::vector<std::uint64_t> res{r[0].residue(), r[1].residue()};
    std::sort(res.begin(), res.end());
    CHECK(res == std::vector<std::uint64_t>{3, 7});
    for (auto& t : r) CHECK(same(t * t + t - 1, Padic::zero(11, 20)));

    CHECK(series_zeros_in_disk(poly(5, {1, 1}), 1).empty());
    CHECK_THROWS_AS(series_zeros_in_disk(poly(5, {0, 0}), 0), PrecisionError);
}

TEST_CASE("series zeros: clustered roots need subdivision") {
    // (t - 1)(t - 6) over Z_5: both roots reduce to 1
    auto r = series_zeros_in_disk(poly(5, {6, -7, 1}, 30), 0);
    REQUIRE(r.size() == 2);
    CHECK(same(r[0], Padic::from_int(5, 1, 30)));
    CHECK(same(r[1], Padic::from_int(5, 6, 30)));
}

TEST_CASE("series zeros: truncated series") {
    // log(1+t) on pZ_p has the single zero 0
    const std::uint64_t p = 7;
    std::vector<Padic> c{Padic::zero(p, 30)};
    for (long k = 1; k < 40; ++k) c.push_back(Padic::from_rational(p, mpq_class(k % 2 ? 1 : -1, k), 30));
    DiskSeries f(c, 40);
    auto z = series_zeros_in_disk(f, 1);
    REQUIRE(z.size() == 1);
    CHECK(z[0].is_zero());
    DiskSeries bad(std::vector<Padic>{Padic::one(p, 20), Padic::one(p, 20)}, 2);
    CHECK_THROWS_AS(series_zeros_in_disk(bad, 0), TruncationError);
}

TEST_CASE("series zeros: invariant under unit scaling") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t p = 7;
        DiskSeries f = poly(p, {static_cast<long>(rng() % 49) - 24, static_cast<long>(rng() % 49) - 24,
                                static_cast<long>(rng() % 49) - 24, 1});
        Padic u = Padic::from_int(p, static_cast<long>(rng() % 6) + 1 + 7 * static_cast<long>(rng() % 50), 40);
        std::vector<Padic> a, b;
        try {
            a = series_zeros_in_disk(f, 0);
            b = series_zeros_in_disk(f * u, 0);
        } catch (const PrecisionError&) {
            continue;
        }
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(same(a[k], b[k]));
    }
}

TEST_CASE("integration records precision loss") {
    const std::uint64_t p = 5;
    std::vector<Padic> c;
    for (long k = 0; k < 10; ++k) c.push_back(Padic::one(p, 20));
    DiskSeries f(c, 10);
    DiskSeries F = f.integrate();
    CHECK(F.coeff(5).valuation() == -1);
    CHECK(F.coeff(5).precision() == 19);
    CHECK(F.coeff(1).precision() == 20);
    DiskSeries g(std::vector<Padic>{Padic::one(p, 20)}, 5);
    g.set_coeff(-1, Padic::one(p, 20));
    CHECK_THROWS_AS(g.integrate(), ConsistencyError);
    Padic lg;
    g.integrate(&lg);
    CHECK(same(lg, Padic::one(p, 20)));
}
