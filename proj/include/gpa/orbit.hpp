#pragma once

#include <string>
#include <vector>

#include "gpa/symbolic.hpp"

namespace gpa {

// All index vectors are 1-based (slot 0 unused) to match junction labels.
struct CriticalOrbit {
    BinarySeq s;
    int N = 0;
    bool periodic = false;
    int k = 0;  // preperiod length
    int l = 0;  // period length
    std::vector<BinarySeq> points;  // points[1..N], increasing
    std::vector<int> succ;          // succ[1..N]
    int c_point = 0;                // periodic: c = points[c_point]
    int c_gap = 0;                  // preperiodic: c inside strip [p_c_gap, p_c_gap+1]

    int symbol(int j) const { return points[static_cast<std::size_t>(j)][0]; }
    int index_of(const BinarySeq& t) const;  // 0 if absent
    // Junction reached after r steps from junction N: succ^r(N).
    int iterate_from_top(int r) const;
};

struct StripCover {
    int strips = 0;                        // N - 1
    std::vector<std::vector<int>> cover;   // cover[1..strips], strips crossed in image-path order
    std::vector<std::vector<int>> A;       // 0-based (strips x strips)
    int fold_strip = 0;                    // preperiodic fold strip, 0 if none
};

CriticalOrbit critical_orbit(const BinarySeq& s);
StripCover strip_cover(const CriticalOrbit& orbit);
bool mia_check(const std::vector<std::vector<int>>& A);
inline bool mia_check(const StripCover& cover) { return mia_check(cover.A); }

}  // namespace gpa
