#pragma once

#include "qc/ec.hpp"

namespace fixtures {

inline qc::CurveModel c378b3() { return qc::CurveModel::make({1, -1, 0, -1062, 13590}, "378b3"); }
inline qc::CurveModel c1122m2() { return qc::CurveModel::make({1, 0, 0, -41608, -90515392}, "1122m2"); }
// y^2 = x^3 - 891x + 4374
inline qc::CurveModel c_sec6() { return qc::CurveModel::make({0, 0, 0, -891, 4374}, "sec6"); }
inline qc::CurveModel c32a() { return qc::CurveModel::make({0, 0, 0, -1, 0}, "32a2"); }
// rank one, generator (0,0)
inline qc::CurveModel c37a() { return qc::CurveModel::make({0, 0, 1, -1, 0}, "37a1"); }

inline qc::Point<mpq_class> qpt(long x, long y) { return {mpq_class(x), mpq_class(y), false}; }

}  // namespace fixtures
