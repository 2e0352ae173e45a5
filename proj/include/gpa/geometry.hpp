#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpa/errors.hpp"
#include "gpa/height.hpp"
#include "gpa/orbit.hpp"
#include "gpa/outside.hpp"
#include "gpa/spectral.hpp"
#include "gpa/traintrack.hpp"

namespace gpa {

struct Rectangle {
    int strip = 0;
    double width = 0;   // x_i
    double height = 0;  // y_i
    double offset = 0;  // sum of widths to the left
};

// One end of a vertical band: a segment [lo, hi] on a rectangle side.
struct Attachment {
    int strip = 0;
    Side side = Side::L;  // side of the rectangle (L = left edge)
    double lo = 0, hi = 0;
};

struct VerticalBand {
    int edge = 0;
    int junction = 0;
    bool semicircle = false;  // bubbles
    double size = 0;          // Yp
    std::vector<Attachment> ends;
};

struct Puncture {
    int junction = 0;
    Side side = Side::L;  // switch whose end list carries the marker
    double level = 0;     // height on that rectangle side
};

enum class HorizontalCase { endpoint, nbt, generic, none };
std::string horizontal_case_name(HorizontalCase c);

// Level-j arc-band family eta_j (j <= 0).
struct HorizontalFamily {
    int level = 0;
    double semicircle = 0;  // half-length folded about the centre
    double rectangle = 0;   // size of the paired rectangular band
    std::optional<double> centre;  // boundary coordinate of c_j when it is determined
};

// Endpoint-case identification intervals u^i_j (vertical) and v^i_j (horizontal).
struct IdentificationInterval {
    bool vertical = true;
    int i = 0, j = 0;
    double length = 0;
};

struct BoundaryVertex {
    OutsidePoint point;
    double param = 0;  // boundary coordinate: b_hat 0, upper edge to a_hat at T, lower edge back to 2T
};

// Piece of the image of strip `source` lying in strip `target`.
struct Pass {
    int target = 0;
    bool reversed = false;  // right branch: horizontal and vertical orientation flip
    double u0 = 0, u1 = 0;  // source horizontal range
    double v_offset = 0;    // bottom of the sub-band in the target
};

struct Branch {
    int strip = 0;
    std::vector<Pass> passes;  // in image-path order
};

struct RectangleComplex {
    BinarySeq s;
    KneadingClass cls;
    CriticalOrbit orbit;
    TrackDescription description;
    int N = 0;
    int n = 0;  // height denominator, 0 at height zero
    int depth = 0;
    double lambda = 0;
    double tail_bound = 0;
    double total_width = 0;  // T
    double c_position = 0;   // horizontal coordinate of the critical point
    double fa_position = 0;  // horizontal coordinate of f(a)
    std::vector<Rectangle> rectangles;  // rectangles[0..N-2] for strips 1..N-1
    std::vector<VerticalBand> vertical_bands;  // sorted by edge id
    std::vector<Puncture> punctures;
    HorizontalCase hcase = HorizontalCase::none;
    double gamma_length = 0;  // |gamma|
    std::vector<HorizontalFamily> horizontal_families;  // levels 0, -1, ..., -depth
    std::vector<IdentificationInterval> intervals;      // endpoint case only
    std::vector<BoundaryVertex> boundary_polygon;       // theta^j(a_hat), j = 1..n
    std::vector<Branch> phi_model;                      // phi_model[0..N-2]
    double max_switch_error = 0;
    double max_tiling_error = 0;
    double max_covering_error = 0;
    std::vector<std::string> notes;

    const Rectangle& rect(int strip) const;
    double left_of_junction(int t) const;  // horizontal coordinate of junction t
};

// Endpoint-case interval levels recorded per index i.
constexpr int kIntervalLevels = 8;

RectangleComplex build_complex(const TrainTrack& track, const SpectralData& spectral, const CriticalOrbit& orbit,
                               const KneadingClass& cls);

// Horizontal coordinate in [0, T] of the point with the given itinerary.
double itinerary_position(const RectangleComplex& cx, const BinarySeq& itinerary);
// Boundary coordinate of a point of the outside circle.
double boundary_param(const RectangleComplex& cx, const OutsidePoint& p);

struct ComplexPoint {
    int strip = 0;
    double x = 0;
    double y = 0;
};

struct OrbitEscape : DomainError {
    OrbitEscape(const std::string& what, std::vector<ComplexPoint> partial)
        : DomainError(what), partial(std::move(partial)) {}
    std::vector<ComplexPoint> partial;
};

constexpr double kBoundaryTolerance = 1e-9;

ComplexPoint step_point(const RectangleComplex& cx, const ComplexPoint& p);
// Returns p and its first `steps` images; throws OrbitEscape near a boundary.
std::vector<ComplexPoint> iterate(const RectangleComplex& cx, const ComplexPoint& p, int steps);

enum class OneProngAsymptotics { homoclinic, finite, backward_infinity_forward_periodic };
std::string asymptotics_name(OneProngAsymptotics a);

struct OneProng {
    bool vertical = true;  // bubble centre (vertical side) or horizontal arc-band centre
    int edge = 0;          // bubble id when vertical
    int junction = 0;
    int level = 0;         // horizontal level j when not vertical
};

struct SpecialPoint {
    std::string kind;      // "essential" or "n_prong"
    std::string location;  // "infinity" or "junction <t>"
    int prongs = 0;        // 0 for essential
};

struct SingularityCensus {
    std::vector<OneProng> one_prong_orbit;  // ordered along the orbit
    bool single_orbit = false;
    bool finite = false;
    OneProngAsymptotics asymptotics = OneProngAsymptotics::finite;
    int three_prongs = 0;
    std::vector<SpecialPoint> special_points;
    std::vector<std::string> notes;
};

SingularityCensus singularity_census(const RectangleComplex& cx, const TrainTrack& track);

// Width^2 / Area.
double standard_modulus_estimate(double width, double area);

struct EndpointModulus {
    int k = 0;
    double r_k = 0, width = 0, area_bound = 0, bound = 0, partial_sum = 0;
};

struct JunctionModulus {
    int junction = 0;
    std::string config;
    double mu = 0, w = 0, c = 0, C = 0, bound = 0;
    double max_k_deviation = 0;  // max over k of |Width(A_k)^2/Area(A_k) - w/C|, relative
};

struct ModuliReport {
    HorizontalCase hcase = HorizontalCase::none;
    double w = 0, W = 0, w_v = 0, w_h = 0;
    double C1 = 0, C2 = 0, C3 = 0;
    std::vector<EndpointModulus> endpoint;
    std::vector<JunctionModulus> junctions;
    std::optional<long long> target_k;  // first k with partial sum > target
    double target = 1.0;
    std::vector<std::string> notes;
};

ModuliReport moduli_bounds(const RectangleComplex& cx, const TrainTrack& track, int count, double target = 1.0,
                           long long max_k = 2000000000LL);

struct RenderOptions {
    double scale = 400;  // pixels per unit length
    double margin = 20;
};

std::string render_svg(const RectangleComplex& cx, const RenderOptions& options = {});
// Number of band elements an SVG of this complex contains.
std::size_t band_element_count(const RectangleComplex& cx);

}  // namespace gpa
