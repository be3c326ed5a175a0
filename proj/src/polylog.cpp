#include "qc/polylog.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qc/errors.hpp"

namespace qc {

namespace {

long log_slack(std::uint64_t p, long n) {
    return static_cast<long>(std::ceil(std::log(static_cast<double>(std::max(2L, n))) / std::log(double(p))));
}

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// g_{n+1} from g_n: -integral of g_n / (v (1 - v)).
std::vector<Padic> next_g(const std::vector<Padic>& g, std::uint64_t p, long Nw) {
    const std::size_t T = g.size();
    if (!g.empty() && !g[0].is_zero()) throw ConsistencyError("g_n(0) must vanish");
    std::vector<Padic> out(T, Padic::zero(p, Nw));
    Padic run = Padic::zero(p, Nw);
    for (std::size_t m = 1; m < T; ++m) {
        run += g[m];  // partial sums of g/v give g/(v(1-v))
        out[m] = -run / static_cast<long>(m);
    }
    return out;
}

}  // namespace

long g_truncation(std::uint64_t p, long N) {
    long Nw = N + 6;
    Nw += 2 * log_slack(p, (static_cast<long>(p) - 1) * Nw);
    return (static_cast<long>(p) - 1) * (Nw + 1) + 1;
}

GSeries g_series(std::uint64_t p, int n, GMode mode, long truncation, long N) {
    if (p < 3 || !is_prime(p)) throw DomainError("g-series need an odd prime");
    if (n < 0 || n > 2) throw DomainError("g-series are defined here for n = 0, 1, 2");
    GSeries G;
    G.p = p;
    G.n = n;
    G.mode = mode;
    if (mode == GMode::modp) {
        // v - v^p
        std::vector<std::uint64_t> c(p + 1, 0);
        c[1] = 1;
        c[p] = p - 1;
        PrimeFieldPoly g(p, c), one_minus_v(p, {1, p - 1});
        for (int k = 0; k < n; ++k) {
            // divide by v, then by 1 - v exactly
            std::vector<std::uint64_t> sh(g.coeffs().begin() + (g.degree() >= 0 ? 1 : 0), g.coeffs().end());
            if (g.coeff(0) != 0) throw ConsistencyError("g_n(0) must vanish mod p");
            PrimeFieldPoly q, r;
            PrimeFieldPoly(p, sh).divmod(one_minus_v, q, r);
            if (r.degree() >= 0) throw ConsistencyError("g_n(1) must vanish mod p");
            g = q.integral().scale(p - 1);
        }
        G.modp = g;
        return G;
    }

    const long T = truncation > 0 ? truncation : g_truncation(p, N);
    const long Nw = N + 4 + 2 * log_slack(p, T);
    const mpz_class& m = ppow(p, Nw);
    const auto P = static_cast<unsigned long>(p);
    // 1/D with D = v^p - (v-1)^p = sum_{k<p} d_k v^k, d_0 = 1
    std::vector<mpz_class> d(p), inv(static_cast<std::size_t>(T));
    for (unsigned long k = 0; k < P; ++k) {
        d[k] = binom(P, k);
        if ((P - k) % 2 == 0) d[k] = -d[k];
    }
    inv[0] = 1;
    for (long t = 1; t < T; ++t) {
        mpz_class s = 0;
        for (long k = 1; k <= std::min<long>(t, static_cast<long>(p) - 1); ++k)
            mpz_submul(s.get_mpz_t(), d[static_cast<std::size_t>(k)].get_mpz_t(), inv[static_cast<std::size_t>(t - k)].get_mpz_t());
        mpz_fdiv_r(inv[static_cast<std::size_t>(t)].get_mpz_t(), s.get_mpz_t(), m.get_mpz_t());
    }
    // E = (v-1)^(p-1) / D, g_0 = (v - 1)(1 - E)
    std::vector<mpz_class> e(static_cast<std::size_t>(T));
    for (unsigned long k = 0; k < P; ++k) {
        mpz_class b = binom(P - 1, k);
        if ((P - 1 - k) % 2 == 1) b = -b;
        for (long t = static_cast<long>(k); t < T; ++t)
            mpz_addmul(e[static_cast<std::size_t>(t)].get_mpz_t(), b.get_mpz_t(), inv[static_cast<std::size_t>(t) - k].get_mpz_t());
    }
    std::vector<mpz_class> h(static_cast<std::size_t>(T));
    for (long t = 0; t < T; ++t) h[static_cast<std::size_t>(t)] = (t == 0 ? 1 : 0) - e[static_cast<std::size_t>(t)];
    std::vector<Padic> g(static_cast<std::size_t>(T), Padic::zero(p, Nw));
    for (long t = 0; t < T; ++t) {
        mpz_class c = -h[static_cast<std::size_t>(t)];
        if (t > 0) c += h[static_cast<std::size_t>(t - 1)];
        g[static_cast<std::size_t>(t)] = Padic::from_int(p, c, Nw);
    }
    for (int k = 0; k < n; ++k) g = next_g(g, p, Nw);
    G.padic = DiskSeries(g, T);
    return G;
}

Padic li2_at_root_of_unity(const Padic& zeta, long N) {
    const std::uint64_t p = zeta.prime();
    if (zeta.is_zero() || zeta.valuation() != 0) throw DomainError("li2 needs a root of unity");
    Padic one = Padic::one(p, zeta.precision());
    if (same(zeta, one)) throw DomainError("li2_at_root_of_unity: zeta = 1");
    if (!same(zeta.pow(static_cast<long>(p) - 1), one)) throw DomainError("li2_at_root_of_unity: zeta^(p-1) != 1");
    if (zeta.residue() == 1) throw DomainError("li2_at_root_of_unity: zeta = 1 mod p");
    if (zeta.precision() < N) throw PrecisionError("zeta carries less than the requested precision");
    GSeries G = g_series(p, 2, GMode::padic, 0, N);
    const long Nw = G.padic.coeff(0).precision();
    Padic w = (Padic::one(p, Nw) - zeta.reduce(Nw)).inverse();
    Padic s = Padic::zero(p, Nw), pw = Padic::one(p, Nw);
    for (long k = 0; k < G.padic.size(); ++k) {
        s += G.padic.coeff(k) * pw;
        pw *= w;
    }
    mpz_class pp = mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
    Padic r = s * Padic::from_rational(p, mpq_class(pp, pp - 1), Nw);
    return r.reduce(N);
}

// ---- mod p scan

DilogVerdict dilog_mod_p(std::uint64_t p) {
    if (p % 3 != 1 || !is_prime(p)) throw DomainError("dilog_mod_p needs a prime p = 1 mod 3");
    DilogVerdict V;
    V.p = p;
    std::uint64_t w = 1;
    for (std::uint64_t a = 2; w == 1; ++a) w = powmod(a, (p - 1) / 3, p);
    V.roots[0] = p - w;
    V.roots[1] = p - mulmod(w, w, p);
    // g_2(v) = sum_{m=1}^{p-2} H_m v^m / m
    std::vector<std::uint64_t> inv(p);
    inv[1] = 1;
    for (std::uint64_t i = 2; i < p; ++i) inv[i] = (p - mulmod(p / i, inv[p % i], p)) % p;
    for (int r = 0; r < 2; ++r) {
        std::uint64_t H = 0, vm = 1, s = 0;
        for (std::uint64_t k = 1; k + 1 < p; ++k) {
            H += inv[k];
            if (H >= p) H -= p;
            vm = mulmod(vm, V.roots[r], p);
            s = (s + mulmod(mulmod(H, inv[k], p), vm, p)) % p;
        }
        V.values[r] = s;
    }
    V.nonzero = V.values[0] != 0 && V.values[1] != 0;
    return V;
}

unsigned default_jobs() {
    if (const char* e = std::getenv("QC_JOBS")) {
        long j = std::strtol(e, nullptr, 10);
        if (j > 0) return static_cast<unsigned>(j);
    }
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

ScanResult dilog_scan(std::uint64_t bound, const ScanConfig& cfg) {
    if (bound < 7) throw DomainError("dilog_scan needs bound >= 7");
    std::vector<std::uint64_t> primes;
    for (auto p : primes_below(bound))
        if (p % 3 == 1) primes.push_back(p);

    std::map<std::uint64_t, bool> done;
    if (!cfg.checkpoint.empty()) {
        std::ifstream in(cfg.checkpoint);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::uint64_t p;
            std::string verdict;
            if (!(ls >> p >> verdict)) continue;  // a torn last line is recomputed
            if (verdict != "nonzero" && verdict != "zero") continue;
            done[p] = verdict == "nonzero";
        }
    }

    std::vector<DilogVerdict> out(primes.size());
    std::vector<std::size_t> todo;
    ScanResult R;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        auto it = done.find(primes[i]);
        if (it == done.end()) {
            todo.push_back(i);
            continue;
        }
        out[i].p = primes[i];
        out[i].nonzero = it->second;
        out[i].resumed = true;
        ++R.resumed;
    }

    std::ofstream ck;
    if (!cfg.checkpoint.empty()) {
        bool torn = false;
        {
            std::ifstream in(cfg.checkpoint, std::ios::binary);
            if (in && in.seekg(0, std::ios::end) && in.tellg() > 0) {
                in.seekg(-1, std::ios::end);
                torn = in.get() != '\n';
            }
        }
        ck.open(cfg.checkpoint, std::ios::app);
        if (!ck) throw std::runtime_error("cannot open checkpoint " + cfg.checkpoint);
        if (torn) ck << '\n';
    }
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= todo.size()) return;
            DilogVerdict V = dilog_mod_p(primes[todo[k]]);
            out[todo[k]] = V;
            if (ck.is_open()) {
                std::lock_guard<std::mutex> lock(mu);
                ck << V.p << ' ' << (V.nonzero ? "nonzero" : "zero") << '\n';
                ck.flush();
            }
        }
    };
    unsigned jobs = cfg.jobs ? cfg.jobs : default_jobs();
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(todo.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    R.verdicts = std::move(out);
    for (const auto& V : R.verdicts)
        if (!V.nonzero) R.vanishing.push_back(V.p);
    return R;
}

double randomness_product(std::uint64_t bound) {
    if (bound < 7) throw DomainError("randomness_product needs bound >= 7");
    long double r = 1;
    for (auto p : primes_below(bound))
        if (p % 3 == 1) r *= 1.0L - 1.0L / static_cast<long double>(p);
    return static_cast<double>(r);
}

// ---- P^1 minus three points

namespace {

struct S2Disk {
    DiskSeries log_z, log_1mz, li2, F;
};

S2Disk s2_disk(const Padic& zeta, long N) {
    const std::uint64_t p = zeta.prime();
    const long T = N + 4 + 2 * log_slack(p, N + 8);
    const long Nw = N + 4 + 2 * log_slack(p, T);
    // zeta is a Teichmuller point, so it can be recomputed at any precision
    Padic z = teichmuller(p, zeta.residue(), Nw + 4), one = Padic::one(p, Nw);
    Padic c = one - z, iz = z.inverse(), ic = c.inverse();
    std::vector<Padic> lz(static_cast<std::size_t>(T), Padic::zero(p, Nw)), l1(lz), a(lz), b(lz);
    Padic pz = one, pc = one;
    for (long k = 0; k < T; ++k) {
        const auto K = static_cast<std::size_t>(k);
        a[K] = (k % 2 ? -pz : pz) * iz;  // 1/z
        b[K] = pc * ic;                  // 1/(1-z)
        pz *= iz;
        pc *= ic;
        if (k >= 1) {
            lz[K] = (k % 2 ? pz : -pz) / k * z;  // log(1 + t/zeta): (-1)^(k+1) zeta^-k / k
            l1[K] = -(pc * c) / k;               // log(1 - t/c)
        }
    }
    l1[0] = padic_log(c);
    lz[0] = padic_log(z);
    S2Disk D;
    D.log_z = DiskSeries(lz, T);
    D.log_1mz = DiskSeries(l1, T);
    DiskSeries dli2 = -(D.log_1mz * DiskSeries(a, T));
    Padic L = li2_at_root_of_unity(z, Nw);
    D.li2 = DiskSeries({L}, T) + dli2.integrate();
    DiskSeries dF = dli2 - D.log_z * DiskSeries(b, T);
    Padic F0 = L * 2 + lz[0] * l1[0];
    D.F = DiskSeries({F0}, T) + dF.integrate();
    return D;
}

}  // namespace

DiskSeries s2_disk_series(const Padic& zeta, long N) { return s2_disk(zeta, N).F; }

P1WeaklyGlobalReport p1_weakly_global(std::uint64_t p, int level, long N) {
    if (p < 3 || !is_prime(p)) throw DomainError("p1_weakly_global needs an odd prime");
    if (level != 1 && level != 2) throw DomainError("level must be 1 or 2");
    P1WeaklyGlobalReport R;
    R.p = p;
    R.level = level;
    R.precision = N;
    const long Nw = N + 4;
    // log z = log(1 - z) = 0: z and 1 - z are roots of unity, so z^2 - z + 1 = 0,
    // which has roots in Q_p only for p = 1 mod 3
    if (p % 3 != 1) return R;
    for (std::uint64_t a = 2; a < p; ++a) {
        if ((mulmod(a, a, p) + p - a + 1) % p != 0) continue;
        Padic z = teichmuller(p, a, Nw);
        P1Evidence ev{z.reduce(N), padic_log(z).reduce(N), padic_log(Padic::one(p, Nw) - z).reduce(N),
                      li2_at_root_of_unity(z, N)};
        if (level == 2 && ev.li2.valuation() < N) continue;
        R.points.push_back(ev.z);
        R.evidence.push_back(ev);
    }
    return R;
}

P1WeaklyGlobalReport p1_s2_weakly_global(std::uint64_t p, long N) {
    if (p < 3 || !is_prime(p)) throw DomainError("p1_s2_weakly_global needs an odd prime");
    P1WeaklyGlobalReport R;
    R.p = p;
    R.level = 2;
    R.s2 = true;
    R.precision = N;
    const long Nw = N + 6;
    for (std::uint64_t a = 2; a < p; ++a) {
        Padic zeta = teichmuller(p, a, Nw + 4);
        S2Disk D = s2_disk(zeta, Nw);
        for (const Padic& t : series_zeros_in_disk(D.F, 1)) {
            P1Evidence ev{(zeta + t).reduce(N), D.log_z.evaluate(t).reduce(N),
                          D.log_1mz.evaluate(t).reduce(N), D.li2.evaluate(t).reduce(N)};
            R.points.push_back(ev.z);
            R.evidence.push_back(ev);
        }
    }
    return R;
}

}  // namespace qc
