// One line per acceptance criterion.  --long adds the 10^5 scan, the 10^6
// product and 378b3 at p = 97; --strict turns FAIL lines into the exit code.
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "qc/coleman.hpp"
#include "qc/frobenius.hpp"
#include "qc/harness.hpp"
#include "qc/polylog.hpp"
#include "qc/selmer.hpp"

using namespace qc;
using fixtures::qpt;

namespace {

// pinned tolerances
constexpr double kProductTol = 5e-4;
constexpr long kPrec = 20;
constexpr long kMatch = 5;
constexpr long kFrobDigits = 10;
constexpr double kFrobSeconds = 5.0;
constexpr long kDoublingDigits = 8;
constexpr int kDoublingPoints = 20;
constexpr long kS2Digits = 15;
constexpr double kScanSeconds = 120.0;

using clock_type = std::chrono::steady_clock;
double since(clock_type::time_point t) { return std::chrono::duration<double>(clock_type::now() - t).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void report(int n, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << n << ". " << name << ":" << o.detail.str() << std::endl;
}

std::vector<std::uint64_t> sixth_roots(std::uint64_t p) {
    std::vector<std::uint64_t> r;
    for (std::uint64_t v = 2; v < p; ++v)
        if ((v * v + p - v + 1) % p == 0) r.push_back(v);
    return r;
}

bool has(const std::vector<Padic>& pts, const Padic& z, long digits) {
    for (const auto& x : pts)
        if (agreement(x, z) >= digits) return true;
    return false;
}

std::vector<CurveModel> fixture_curves() {
    return {fixtures::c378b3(), fixtures::c1122m2(), fixtures::c_sec6(), fixtures::c32a(), fixtures::c37a()};
}

std::vector<int> sorted_known(const std::vector<WeaklyGlobalPoint>& v) {
    std::vector<int> k;
    for (const auto& z : v) k.push_back(z.known);
    std::sort(k.begin(), k.end());
    return k;
}

}  // namespace

int main(int argc, char** argv) {
    bool long_run = false, strict = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--long")) long_run = true;
        if (!std::strcmp(argv[i], "--strict")) strict = true;
    }
    std::cout << std::setprecision(7);

    report(1, "dilog scan", [&](Outcome& o) {
        auto t = clock_type::now();
        ScanResult R = dilog_scan(10000);
        double s = since(t);
        o.detail << " p < 10^4: " << R.verdicts.size() << " primes, " << R.vanishing.size() << " vanishing, " << s << " s";
        o.require(R.vanishing.empty(), "vanishing prime below 10^4");
        o.require(s < kScanSeconds, "desk scan over 2 minutes");
        if (long_run) {
            t = clock_type::now();
            ScanResult L = dilog_scan(100000);
            o.detail << "; p < 10^5: " << L.verdicts.size() << " primes, " << L.vanishing.size() << " vanishing, "
                     << since(t) << " s";
            o.require(L.vanishing.empty(), "vanishing prime below 10^5");
        }
    });

    report(2, "randomness product", [&](Outcome& o) {
        double a = randomness_product(100000);
        o.detail << " 10^5: " << a;
        o.require(std::fabs(a - 0.413) <= kProductTol, "10^5 value off 0.413");
        if (long_run) {
            double b = randomness_product(1000000);
            o.detail << "; 10^6: " << b;
            o.require(std::fabs(b - 0.3775) <= kProductTol, "10^6 value off 0.3775");
        }
    });

    report(3, "P^1 level 1", [&](Outcome& o) {
        for (std::uint64_t p : {3, 5, 11, 17, 23}) {
            auto R = p1_weakly_global(p, 1, kPrec);
            o.require(R.points.empty(), "nonempty at p = " + std::to_string(p));
        }
        for (std::uint64_t p : {7, 13, 31}) {
            auto R = p1_weakly_global(p, 1, kPrec);
            auto r = sixth_roots(p);
            bool ok = R.points.size() == 2 && r.size() == 2;
            for (auto a : r) ok = ok && has(R.points, teichmuller(p, a, kPrec), kPrec);
            o.require(ok, "p = " + std::to_string(p) + " is not the two lifted sixth roots");
        }
        o.detail << " empty for 3, 5, 11, 17, 23; two Teichmuller sixth roots for 7, 13, 31";
    });

    report(4, "P^1 level 2", [&](Outcome& o) {
        for (std::uint64_t p : {7, 13, 31, 61, 97}) {
            auto R = p1_weakly_global(p, 2, kPrec);
            o.require(R.points.empty(), "nonempty at p = " + std::to_string(p));
        }
        o.detail << " empty for 7, 13, 31, 61, 97";
    });

    report(5, "S = {2} zero set", [&](Outcome& o) {
        const std::vector<mpq_class> S = {2, mpq_class(1, 2), -1};
        for (std::uint64_t p : {3, 5, 7}) {
            auto R = p1_s2_weakly_global(p, kPrec);
            bool ok = R.points.size() == 3;
            for (const auto& q : S) ok = ok && has(R.points, Padic::from_rational(p, q, kPrec), kMatch);
            o.detail << " p=" << p << ": " << R.points.size() << " points;";
            o.require(ok, "p = " + std::to_string(p) + " is not {2, 1/2, -1}");
        }
        auto R = p1_s2_weakly_global(11, kPrec);
        int s_int = 0, golden = 0, other = 0;
        for (const auto& z : R.points) {
            bool in_s = false;
            for (const auto& q : S) in_s |= agreement(z, Padic::from_rational(11, q, kPrec)) >= kMatch;
            bool g = (z * z + z - 1).valuation() >= kMatch;
            s_int += in_s;
            golden += g;
            other += !in_s && !g;
        }
        o.detail << " p=11: " << R.points.size() << " points (" << s_int << " in {2, 1/2, -1}, " << golden
                 << " roots of z^2+z-1, " << other << " others);";
        o.require(s_int == 3 && golden == 2 && other == 0, "p = 11 set is not {2, 1/2, -1} plus the two roots of z^2+z-1");
        long worst = 1000;
        for (std::uint64_t p : {3, 5, 7, 11, 13}) {
            for (const auto& q : S) {
                Padic z = Padic::from_rational(p, q, 40);
                if (z.residue() < 2) continue;
                Padic zeta = teichmuller(z);
                Padic F = s2_disk_series(zeta, kPrec + 5).evaluate(z - zeta);
                worst = std::min(worst, F.valuation());
            }
        }
        o.detail << " min v(F) at 2, 1/2, -1 over p <= 13: " << worst;
        o.require(worst >= kS2Digits, "F(2), F(1/2), F(-1) below 15 digits");
    });

    report(6, "Frobenius oracle", [&](Outcome& o) {
        double slowest = 0;
        int runs = 0;
        for (const auto& E : fixture_curves()) {
            for (std::uint64_t p : {5, 7, 11, 13}) {
                if (classify_reduction(E, p).type != ReductionType::good) continue;
                auto t = clock_type::now();
                FrobeniusData F = frobenius_matrix(E, p, kPrec);
                double s = since(t);
                slowest = std::max(slowest, s);
                long ap = count_points_Fp(E, p).second;
                std::string tag = E.label + " p=" + std::to_string(p);
                o.require(agreement(F.trace(), Padic::from_int(p, ap, kPrec)) >= kFrobDigits, tag + " trace");
                o.require(agreement(F.det(), Padic::from_int(p, static_cast<long>(p), kPrec)) >= kFrobDigits, tag + " det");
                o.require(s < kFrobSeconds, tag + " over 5 s");
                ++runs;
            }
        }
        o.detail << " " << runs << " (curve, p) pairs, slowest " << slowest << " s";
    });

    report(7, "doubling law", [&](Outcome& o) {
        std::mt19937_64 rng(2024);
        long worst = 1000;
        int pairs = 0;
        for (const auto& E : fixture_curves()) {
            for (std::uint64_t p : {5, 7, 11}) {
                if (classify_reduction(E, p).type != ReductionType::good) continue;
                Coleman C(E, p, kPrec);
                int done = 0;
                while (done < kDoublingPoints) {
                    auto P = random_integral_point(E, p, C.working_precision() + 10, rng);
                    auto v = C.at(P);
                    if (v.I_alpha.valuation() >= kPrec) continue;  // torsion
                    auto v2 = C.at(add(E, P, P));
                    // s = -1
                    Padic r = v2.D2 - v.D2 * 4 + padic_log(division_value(E, 2, P));
                    worst = std::min(worst, r.valuation());
                    ++done;
                }
                ++pairs;
            }
        }
        o.detail << " s = -1, " << kDoublingPoints << " points on each of " << pairs
                 << " (curve, p), min residual valuation " << worst;
        o.require(worst >= kDoublingDigits, "residual below 8 digits");
    });

    report(8, "weakly global sets of elliptic curves", [&](Outcome& o) {
        auto A = fixtures::c378b3();
        std::vector<Point<mpq_class>> k378 = {qpt(19, -9), qpt(19, -10)};
        for (std::uint64_t p : {5, 7, 11}) {
            if (classify_reduction(A, p).type != ReductionType::good) {
                o.detail << " 378b3 p=" << p << ": bad reduction;";
                o.require(false, "378b3 at p = " + std::to_string(p) + " (bad prime)");
                continue;
            }
            auto R = level2_set_rank0(A, bad_primes(A), p, k378);
            bool ok = sorted_known(R.points) == std::vector<int>{0, 1};
            o.detail << " 378b3 p=" << p << ": " << R.points.size() << " points;";
            o.require(ok, "378b3 at p = " + std::to_string(p));
        }
        if (long_run) {
            Coleman C(A, 97, kPrec);
            auto L1 = level1_set(C, k378);
            auto R = level2_set_rank0(A, bad_primes(A), 97, k378);
            o.detail << " 378b3 p=97: |X_1| = " << L1.points.size() << ", |X_2| = " << R.points.size() << ";";
            o.require(L1.points.size() == 89, "|X(Z_97)_1| != 89");
            o.require(sorted_known(R.points) == std::vector<int>{0, 1}, "X(Z_97)_2");
        }
        auto B = fixtures::c1122m2();
        auto R = level2_set_rank0(B, bad_primes(B), 5,
                                  {qpt(752, -17800), qpt(752, 17048), qpt(2864, -154024), qpt(2864, 151160)});
        std::size_t nonempty = 0;
        for (const auto& s : R.psi) nonempty += !s.points.empty();
        o.detail << " 1122m2 p=5: " << R.norm_count << " norms, " << nonempty << " nonempty Psi(w), " << R.points.size()
                 << " points;";
        o.require(R.norm_count == 384, "1122m2 norm count");
        o.require(nonempty == 4, "1122m2 nonempty Psi(w) != 4");
        o.require(sorted_known(R.points) == std::vector<int>{0, 1, 2, 3}, "1122m2 points");
        auto F = fixtures::c_sec6();
        SelmerOptions so;
        so.overrides = {{2, {0, 1}}, {3, {0, 1}}};
        auto T = level2_set_rank0(F, bad_primes(F), 5, {qpt(-9, 108), qpt(-9, -108), qpt(27, 0)}, so);
        o.detail << " sec6 p=5 (override W_2 = W_3 = {0, 1}): " << T.points.size() << " points";
        o.require(sorted_known(T.points) == std::vector<int>{0, 1, 2}, "sec6 torsion points");
    });

    report(9, "property suites", [&](Outcome& o) {
        std::mt19937_64 rng(9);
        int checks = 0;
        for (std::uint64_t p : {3, 5, 7, 11, 13}) {
            for (int i = 0; i < 20; ++i) {
                long a = static_cast<long>(rng() % 100000) * static_cast<long>(p) + 1 + static_cast<long>(rng() % (p - 1));
                long b = static_cast<long>(rng() % 100000) * static_cast<long>(p) + 1 + static_cast<long>(rng() % (p - 1));
                Padic x = Padic::from_int(p, a, kPrec), y = Padic::from_int(p, b, kPrec);
                o.require(agreement(padic_log(x * y), padic_log(x) + padic_log(y)) >= kPrec - 1, "log homomorphism");
                Padic t = Padic::from_int(p, static_cast<long>(p) * static_cast<long>(rng() % 1000), kPrec);
                o.require(agreement(padic_log(padic_exp(t)), t) >= kPrec - 1, "log(exp)");
                Padic w = teichmuller(x);
                o.require(agreement(w.pow(static_cast<long>(p - 1)), Padic::one(p, kPrec)) >= kPrec, "teichmuller^(p-1)");
                o.require((w - x).valuation() >= 1, "teichmuller residue");
                checks += 4;
            }
        }
        for (long N = 1; N <= 50; ++N) {
            WSet W = w_set(2, N, 5);
            o.require(static_cast<long>(W.values.size()) == N / 2 + 1, "WSet count");
            ++checks;
        }
        // Psi(w) disjoint, union = matched level 1 points
        auto B = fixtures::c1122m2();
        auto R = level2_set_rank0(B, bad_primes(B), 5);
        std::size_t total = 0;
        for (const auto& s : R.psi) total += s.points.size();
        o.require(total == R.points.size(), "Psi(w) not disjoint");
        // path independence and I_alpha = elliptic log
        Coleman C(fixtures::c37a(), 7, kPrec);
        for (int i = 0; i < 5; ++i) {
            auto P = random_integral_point(C.curve(), 7, C.working_precision() + 10, rng);
            LocalDisk D = C.disk(P);
            auto Q = D.point(D.param(P) + Padic::from_int(7, 7 * (i + 1), C.working_precision()));
            auto vP = C.at(P), vQ = C.at(Q), pq = C.tiny(P, Q);
            o.require(agreement(vP.D2 + pq.D2 + pq.I_alpha * vP.I_beta, vQ.D2) >= kPrec - 2, "D2 path independence");
            o.require(agreement(vP.I_alpha, elliptic_log(C.curve(), 7, P, kPrec)) >= kPrec - 2, "I_alpha = elliptic_log");
            checks += 2;
        }
        // determinism under parallelism
        auto s1 = dilog_scan(5000, {1, ""}), s4 = dilog_scan(5000, {4, ""});
        bool same = s1.verdicts.size() == s4.verdicts.size();
        for (std::size_t i = 0; same && i < s1.verdicts.size(); ++i)
            same = s1.verdicts[i].p == s4.verdicts[i].p && s1.verdicts[i].values[0] == s4.verdicts[i].values[0];
        o.require(same, "scan differs across job counts");
        auto recs = ingest(std::string(QC_DATA_DIR) + "/curves.jsonl");
        RunOptions ro;
        ro.jobs = 1;
        auto b1 = run_batch(recs.records, 5, ro, "");
        ro.jobs = 3;
        auto b3 = run_batch(recs.records, 5, ro, "");
        bool same_b = b1.reports.size() == b3.reports.size();
        for (std::size_t i = 0; same_b && i < b1.reports.size(); ++i)
            same_b = to_json(b1.reports[i], false).dump() == to_json(b3.reports[i], false).dump();
        o.require(same_b, "batch reports differ across job counts");
        checks += 2;
        o.detail << " " << checks << " checks";
    });

    std::cout << failures << " of 9 criteria failed" << std::endl;
    return strict ? failures : 0;
}
