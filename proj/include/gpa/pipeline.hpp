#pragma once

#include <optional>

#include "gpa/geometry.hpp"
#include "gpa/height.hpp"
#include "gpa/orbit.hpp"
#include "gpa/spectral.hpp"
#include "gpa/traintrack.hpp"

namespace gpa {

// Everything derived from one kneading sequence, in dependency order.
struct Pipeline {
    BinarySeq s;
    KneadingClass cls;
    CriticalOrbit orbit;
    StripCover cover;
    PerronData perron;
    int depth = 0;
    TrainTrack track;
    SpectralData spectral;
};

// Depth precedence: explicit value, then GPA_DEPTH, then default_depth(lambda).
int resolve_depth(std::optional<int> requested, double lambda);

// Runs classification through the spectral data.
Pipeline run_pipeline(const BinarySeq& s, std::optional<int> depth = std::nullopt, double tol = 1e-12);

RectangleComplex complex_of(const Pipeline& p);

}  // namespace gpa
