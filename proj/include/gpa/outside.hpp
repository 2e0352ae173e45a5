#pragma once

#include <string>
#include <vector>

#include "gpa/height.hpp"
#include "gpa/symbolic.hpp"

namespace gpa {

// A point of the circle made of two copies of the interval, named by the
// itinerary of its projection.
struct OutsidePoint {
    enum class Half { upper, lower, a_hat, b_hat };
    Half half = Half::lower;
    BinarySeq itinerary;

    friend bool operator==(const OutsidePoint& a, const OutsidePoint& b) {
        return a.half == b.half && a.itinerary == b.itinerary;
    }
};

std::string half_name(OutsidePoint::Half h);
std::string point_str(const OutsidePoint& p);

struct OutsideStepResult {
    bool inside = false;  // true: folded into the interval; point.itinerary is the image itinerary
    OutsidePoint point;
};

enum class OutsideCase { i, ii, iii, iv, v };
std::string case_name(OutsideCase c);

struct OutsideOrbit {
    std::vector<OutsidePoint> steps;         // a_hat, theta(a_hat), ..., theta^n(a_hat)
    int n = 0;                               // escape time
    OutsideCase kase = OutsideCase::i;
    std::vector<OutsidePoint> lambda_orbit;  // periodic orbit in circle order
    Rational rotation;                       // combinatorial rotation number
    std::vector<OutsidePoint> extras;        // backward tree of a_hat (rhe) or p_u (lhe)
};

OutsidePoint a_hat(const BinarySeq& s);
OutsidePoint b_hat(const BinarySeq& s);
// Upper point with itinerary 1 sigma^2(s): the point above c with the same image as a.
OutsidePoint p_upper(const BinarySeq& s);

// Throws DomainError when the itinerary is not realized in [a, b].
void check_point(const OutsidePoint& x, const BinarySeq& s);
OutsideStepResult outside_step(const OutsidePoint& x, const BinarySeq& s);
std::vector<OutsidePoint> outside_preimages(const OutsidePoint& y, const BinarySeq& s);

// extra_depth bounds the backward tree listed in endpoint cases.
OutsideOrbit outside_orbit(const BinarySeq& s, int extra_depth = 3);

}  // namespace gpa
