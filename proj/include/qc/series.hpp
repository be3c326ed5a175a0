#pragma once

#include <climits>
#include <cstdint>
#include <vector>

#include "qc/padic.hpp"

namespace qc {

// Truncation order of a series whose tail is known to vanish.
constexpr long kExact = LONG_MAX;

/*
 * sum_{k} c_k t^k + O(t^T) with an optional finite principal part
 * (coefficients of t^-1, t^-2, ...).  A polynomial has T == kExact.
 */
class DiskSeries {
public:
    DiskSeries() = default;
    DiskSeries(std::uint64_t p, long T) : p_(p), T_(T) {}
    DiskSeries(std::vector<Padic> coeffs, long T);
    static DiskSeries polynomial(std::vector<Padic> coeffs);

    std::uint64_t prime() const { return p_; }
    long truncation() const { return T_; }
    // number of stored nonnegative-index coefficients
    long size() const { return static_cast<long>(c_.size()); }
    long pole_order() const { return static_cast<long>(pp_.size()); }

    // k may be negative (principal part); missing entries read as exact 0.
    Padic coeff(long k) const;
    void set_coeff(long k, const Padic& a);
    const std::vector<Padic>& coeffs() const { return c_; }

    DiskSeries operator-() const;
    DiskSeries operator+(const DiskSeries& o) const;
    DiskSeries operator-(const DiskSeries& o) const;
    DiskSeries operator*(const DiskSeries& o) const;
    DiskSeries operator*(const Padic& a) const;

    DiskSeries derivative() const;
    // Antiderivative with zero constant term.  A t^-1 term is returned through
    // log_coeff; if log_coeff is null it must vanish (ConsistencyError otherwise).
    DiskSeries integrate(Padic* log_coeff = nullptr) const;

    // Series in s of f(a + b*s); requires v(a) >= 0 and v(b) >= 1 for truncated f.
    DiskSeries compose_affine(const Padic& a, const Padic& b) const;

    // f(t); the precision is capped by the truncation tail when T is finite.
    Padic evaluate(const Padic& t) const;

    // Lowest valuation among stored coefficients (principal part included).
    long min_valuation() const;

private:
    std::uint64_t p_ = 0;
    long T_ = kExact;
    std::vector<Padic> c_;
    std::vector<Padic> pp_;  // pp_[j] is the coefficient of t^-(j+1)
    long min_precision() const;
};

// Zeros t of f with v(t) >= radius, found by content stripping, root
// enumeration mod p and Hensel/Newton with subdisk recursion.
std::vector<Padic> series_zeros_in_disk(const DiskSeries& f, long radius);

}  // namespace qc
