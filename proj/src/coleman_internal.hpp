#pragma once

#include <array>

#include "qc/coleman.hpp"

namespace qc {

// x-line data for int g(x) dx with g = sum_m n_m(x) Q^-m:
//   exact part sum_m S_m Q^-m + poly, and Tr(c(t)/Q'(t) log(x - t)).
struct EvenIntegral {
    std::map<long, FxPoly> exact;  // m >= 1
    FxPoly poly;                   // antiderivative of the polynomial part
    FxPoly logc;                   // c(t) U(t) mod Q
};

struct Coleman::FrobEngine {
    FrobeniusData fd;
    long W = 0;
    // waypoint R (z = p in the original model) and its image in the short model
    Point<Padic> R;
    Fx xR, yR;
    ColemanValues atR;  // from b, in alpha/beta
    std::array<Fx, 2> tau;                  // int_{phi R}^R w_i
    std::array<std::array<Fx, 2>, 2> tau2;  // int_{phi R}^R w_i w_k
    std::array<Fx, 2> hR;
    // hdh[i][k] integrates h_k dh_i; hw[i][b] integrates h_i w_b
    std::array<std::array<EvenIntegral, 2>, 2> hdh, hw;
    std::array<std::array<Fx, 2>, 2> hdhR, hwR;

    FrobEngine(const Coleman& C);
    // single and double integrals from R to the Teichmueller point T (short model)
    void solve_at(const Fx& xT, const Fx& yT, std::array<Fx, 2>& v, std::array<std::array<Fx, 2>, 2>& J) const;
    Fx even_value(const EvenIntegral& g, const Fx& x) const;
};

}  // namespace qc
