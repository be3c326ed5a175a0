#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qc/fp.hpp"
#include "qc/padic.hpp"
#include "qc/series.hpp"

namespace qc {

/*
 * g_0 = v - 1 - (v-1)^p / (v^p - (v-1)^p),
 * g_{n+1}' = -g_n / (v (1 - v)),  g_{n+1}(0) = 0.
 * Mod p this collapses to g_0 = v - v^p, g_1 = -sum_{k<p} v^k/k and
 * g_2 = sum_{m<=p-2} H_m v^m / m.
 */
enum class GMode { modp, padic };

struct GSeries {
    std::uint64_t p = 0;
    int n = 0;
    GMode mode = GMode::padic;
    PrimeFieldPoly modp;  // mode == modp
    DiskSeries padic;     // mode == padic, truncated at v^T
};

// truncation and precision only matter in p-adic mode
GSeries g_series(std::uint64_t p, int n, GMode mode, long truncation = 0, long N = 20);
// Truncation for which the tail of g_n at a unit is below p^N.
long g_truncation(std::uint64_t p, long N);

// Li_2(zeta) = p^2/(p^2-1) g_2(1/(1-zeta)) for zeta^(p-1) = 1, zeta != 1.
Padic li2_at_root_of_unity(const Padic& zeta, long N);

// g_2(zeta_6) mod p at both primitive sixth roots; p = 1 mod 3.
struct DilogVerdict {
    std::uint64_t p = 0;
    bool nonzero = false;
    bool resumed = false;                  // read back from a checkpoint
    std::uint64_t roots[2] = {0, 0};       // the two sixth roots mod p
    std::uint64_t values[2] = {0, 0};      // g_2 there, unless resumed
};
DilogVerdict dilog_mod_p(std::uint64_t p);

struct ScanConfig {
    unsigned jobs = 0;            // 0: QC_JOBS or the hardware count
    std::string checkpoint;       // "p verdict" lines; resumed if present
};
struct ScanResult {
    std::vector<DilogVerdict> verdicts;  // ascending p
    std::vector<std::uint64_t> vanishing;
    std::size_t resumed = 0;             // primes taken from the checkpoint
};
ScanResult dilog_scan(std::uint64_t bound, const ScanConfig& cfg = {});
unsigned default_jobs();

// prod over primes p = 1 mod 3, p < bound, of (1 - 1/p)
double randomness_product(std::uint64_t bound);

struct P1Evidence {
    Padic z, log_z, log_1mz, li2;
};
struct P1WeaklyGlobalReport {
    std::uint64_t p = 0;
    int level = 1;
    bool s2 = false;
    long precision = 0;
    std::vector<Padic> points;
    std::vector<P1Evidence> evidence;
};

P1WeaklyGlobalReport p1_weakly_global(std::uint64_t p, int level, long N = 20);
// Zero set of F(z) = 2 Li_2(z) + log z log(1-z) on |z| = |1-z| = 1.
P1WeaklyGlobalReport p1_s2_weakly_global(std::uint64_t p, long N = 20);

// F on the disk of the Teichmuller point zeta, as a series in t = z - zeta.
DiskSeries s2_disk_series(const Padic& zeta, long N);

}  // namespace qc
