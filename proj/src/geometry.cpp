#include "gpa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace gpa {

namespace {

constexpr double kInvariantTolerance = 1e-9;
constexpr int kCentreLevels = 40;

bool accumulating(Config c) {
    switch (c) {
        case Config::Sp: case Config::Sm: case Config::Wp: case Config::Wm: case Config::V3p: case Config::V3m:
        case Config::V1p: case Config::V1m: case Config::V1pB: case Config::V1mB: case Config::V2p: case Config::V2m:
        case Config::V2pB2: case Config::V2mB2:
            return true;
        default:
            return false;
    }
}

bool s_type(Config c) { return c == Config::Sp || c == Config::Sm; }

// A cap around the puncture alone is a genuine bubble in a finite junction but
// only a truncated enclosing loop where loops accumulate on the puncture.
bool is_bubble(const InfEdge& e, const TrackDescription& d) {
    if (e.kind != EdgeKind::bubble) return false;
    return !e.encloses_puncture || !accumulating(d.junctions[static_cast<std::size_t>(e.junction)].config);
}

double edge_weight(const std::map<int, double>& Yp, int id) {
    auto it = Yp.find(id);
    if (it == Yp.end()) throw DomainError("missing weight for edge " + std::to_string(id));
    return it->second;
}

// Faces of a junction's chord diagram. Ends are placed on a circle: L switch
// bottom to top, then R switch top to bottom; gap g lies between ends g and g+1.
struct Face {
    int gaps = 0;
    bool outer = false;
    bool punctured = false;
    bool bubble_inside = false;
};

std::vector<Face> junction_faces(const JunctionDiagram& d) {
    std::vector<int> C;
    int marker_after = -2;
    for (int x : d.side[0]) {
        if (x == kPuncture)
            marker_after = static_cast<int>(C.size()) - 1;
        else
            C.push_back(x);
    }
    const int nl = static_cast<int>(C.size());
    for (auto it = d.side[1].rbegin(); it != d.side[1].rend(); ++it) {
        if (*it == kPuncture)
            marker_after = static_cast<int>(C.size()) - 1;
        else
            C.push_back(*it);
    }
    const int n = static_cast<int>(C.size());
    if (n == 0) return {};
    if (marker_after == -1) marker_after = n - 1;
    std::vector<int> partner(static_cast<std::size_t>(n), -1);
    std::map<int, int> first;
    for (int i = 0; i < n; ++i) {
        auto [it, fresh] = first.emplace(C[static_cast<std::size_t>(i)], i);
        if (!fresh) {
            partner[static_cast<std::size_t>(i)] = it->second;
            partner[static_cast<std::size_t>(it->second)] = i;
        }
    }
    for (int i = 0; i < n; ++i)
        if (partner[static_cast<std::size_t>(i)] < 0) throw InternalError("junction end without partner");
    std::vector<int> face_of(static_cast<std::size_t>(n), -1);
    std::vector<Face> faces;
    for (int g0 = 0; g0 < n; ++g0) {
        if (face_of[static_cast<std::size_t>(g0)] >= 0) continue;
        Face f;
        const int id = static_cast<int>(faces.size());
        int g = g0;
        do {
            face_of[static_cast<std::size_t>(g)] = id;
            ++f.gaps;
            if (g == n - 1 || (nl > 0 && nl < n && g == nl - 1)) f.outer = true;
            if (g == marker_after) f.punctured = true;
            g = partner[static_cast<std::size_t>((g + 1) % n)];
        } while (g != g0);
        f.bubble_inside = f.gaps == 1 && !f.outer && !f.punctured;
        faces.push_back(f);
    }
    return faces;
}

std::string fmt(double v) {
    if (std::fabs(v) < 5e-7) v = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string horizontal_case_name(HorizontalCase c) {
    switch (c) {
        case HorizontalCase::endpoint: return "endpoint";
        case HorizontalCase::nbt: return "nbt";
        case HorizontalCase::generic: return "generic";
        case HorizontalCase::none: return "none";
    }
    return "?";
}

std::string asymptotics_name(OneProngAsymptotics a) {
    switch (a) {
        case OneProngAsymptotics::homoclinic: return "homoclinic";
        case OneProngAsymptotics::finite: return "finite";
        case OneProngAsymptotics::backward_infinity_forward_periodic: return "backward_infinity_forward_periodic";
    }
    return "?";
}

const Rectangle& RectangleComplex::rect(int strip) const {
    if (strip < 1 || strip > static_cast<int>(rectangles.size())) throw DomainError("no strip " + std::to_string(strip));
    return rectangles[static_cast<std::size_t>(strip - 1)];
}

double RectangleComplex::left_of_junction(int t) const {
    if (t < 1 || t > N) throw DomainError("no junction " + std::to_string(t));
    return t == N ? total_width : rect(t).offset;
}

double itinerary_position(const RectangleComplex& cx, const BinarySeq& it) {
    // Inverse branches of the horizontal map F: F(H) = F(0) + lambda H left of c, T - lambda (H - c) right of c.
    const double lam = cx.lambda, T = cx.total_width;
    const auto depth = static_cast<std::size_t>(std::min(5000.0, std::ceil(40.0 / std::log(lam)) + it.orbit_size()));
    double y = T / 2;
    for (std::size_t k = depth + 1; k-- > 0;) {
        y = it[k] == 0 ? (y - cx.fa_position) / lam : cx.c_position + (T - y) / lam;
        y = std::clamp(y, 0.0, T);
    }
    return y;
}

double boundary_param(const RectangleComplex& cx, const OutsidePoint& p) {
    switch (p.half) {
        case OutsidePoint::Half::b_hat: return 0;
        case OutsidePoint::Half::a_hat: return cx.total_width;
        case OutsidePoint::Half::upper: return cx.total_width - itinerary_position(cx, p.itinerary);
        case OutsidePoint::Half::lower: return cx.total_width + itinerary_position(cx, p.itinerary);
    }
    return 0;
}

RectangleComplex build_complex(const TrainTrack& track, const SpectralData& sp, const CriticalOrbit& orbit,
                               const KneadingClass& cls) {
    const int N = orbit.N;
    if (track.orbit.N != N || !(track.orbit.s == orbit.s)) throw DomainError("track and orbit describe different sequences");
    if (static_cast<int>(sp.X.size()) != N - 1 || static_cast<int>(sp.Y.size()) != N - 1)
        throw DomainError("spectral data size does not match the orbit");
    RectangleComplex cx;
    cx.s = orbit.s;
    cx.cls = cls;
    cx.orbit = orbit;
    cx.description = describe_sequence(orbit, cls);
    cx.N = N;
    cx.depth = track.depth;
    cx.lambda = sp.lambda;
    cx.tail_bound = sp.tail_bound;
    const double lam = sp.lambda;

    double off = 0;
    for (int i = 1; i < N; ++i) {
        Rectangle r;
        r.strip = i;
        r.width = sp.X[static_cast<std::size_t>(i - 1)];
        r.height = sp.Y[static_cast<std::size_t>(i - 1)];
        r.offset = off;
        off += r.width;
        cx.rectangles.push_back(r);
    }
    cx.total_width = off;

    // Eigen-equations realized as covering and tiling.
    const StripCover cover = strip_cover(orbit);
    for (int j = 1; j < N; ++j) {
        double sum = 0;
        for (int i : cover.cover[static_cast<std::size_t>(j)]) sum += cx.rect(i).width;
        cx.max_covering_error = std::max(cx.max_covering_error, std::fabs(lam * cx.rect(j).width - sum));
    }
    for (int i = 1; i < N; ++i) {
        double sum = 0;
        for (int j = 1; j < N; ++j)
            sum += cover.A[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] * cx.rect(j).height / lam;
        cx.max_tiling_error = std::max(cx.max_tiling_error, std::fabs(sum - cx.rect(i).height));
    }
    if (cx.max_covering_error > kInvariantTolerance || cx.max_tiling_error > kInvariantTolerance)
        throw InternalError("rectangle widths or heights violate the eigen-equations");

    // Critical point and the image of the left end.
    if (orbit.periodic) {
        cx.c_position = cx.left_of_junction(orbit.c_point);
    } else {
        double run = 0;
        for (int i = orbit.succ[static_cast<std::size_t>(orbit.c_gap)]; i < N; ++i) run += cx.rect(i).width;
        cx.c_position = cx.rect(orbit.c_gap).offset + run / lam;
    }
    cx.fa_position = cx.left_of_junction(orbit.succ[1]);
    if (std::fabs(cx.fa_position - (cx.total_width - lam * cx.c_position)) > kInvariantTolerance)
        throw InternalError("fold position inconsistent with the image of the left end");
    for (int k = 1; k <= N; ++k) {
        double h = itinerary_position(cx, orbit.points[static_cast<std::size_t>(k)]);
        if (std::fabs(h - cx.left_of_junction(k)) > kInvariantTolerance)
            throw InternalError("itinerary coordinate of orbit point " + std::to_string(k) + " is off");
    }

    // Affine branches. Left of c the image runs left to right and sits at the
    // bottom of its target; right of c it runs back and sits on top, flipped.
    auto left_branch = [&](int j, bool first_run) {
        if (orbit.periodic) return j < orbit.c_point;
        return j < orbit.c_gap || (j == orbit.c_gap && first_run);
    };
    std::vector<int> left_hits(static_cast<std::size_t>(N), 0), right_hits(static_cast<std::size_t>(N), 0);
    for (int j = 1; j < N; ++j) {
        Branch br;
        br.strip = j;
        const auto& path = cover.cover[static_cast<std::size_t>(j)];
        int from = orbit.succ[static_cast<std::size_t>(j)];
        double along = 0;
        bool first_run = true;
        for (int i : path) {
            bool ascending = i == from;  // strip i lies to the right of the current junction
            if (!ascending && i != from - 1) throw InternalError("image path of strip " + std::to_string(j) + " jumps");
            from = ascending ? i + 1 : i;
            if (!ascending && j == orbit.c_gap && !orbit.periodic) first_run = false;
            const bool left = left_branch(j, first_run);
            if (left != ascending) throw InternalError("branch orientation mismatch on strip " + std::to_string(j));
            Pass p;
            p.target = i;
            p.reversed = !left;
            p.u0 = along / lam;
            along += cx.rect(i).width;
            p.u1 = along / lam;
            p.v_offset = left ? 0 : cx.rect(i).height - cx.rect(j).height / lam;
            ++(left ? left_hits : right_hits)[static_cast<std::size_t>(i)];
            br.passes.push_back(p);
        }
        cx.phi_model.push_back(br);
    }
    for (int i = 1; i < N; ++i)
        if (left_hits[static_cast<std::size_t>(i)] > 1 || right_hits[static_cast<std::size_t>(i)] > 1)
            throw InternalError("a branch crosses strip " + std::to_string(i) + " twice");

    // Vertical bands stacked bottom to top along each switch.
    std::map<int, VerticalBand> bands;
    for (const InfEdge& e : track.inf_edges) {
        VerticalBand b;
        b.edge = e.id;
        b.junction = e.junction;
        b.semicircle = is_bubble(e, cx.description);
        b.size = edge_weight(sp.Yp, e.id);
        bands.emplace(e.id, b);
    }
    const double tol = 2 * sp.tail_bound + kInvariantTolerance;
    for (int t = 1; t <= N; ++t) {
        const JunctionDiagram& jd = track.junctions[static_cast<std::size_t>(t)];
        for (int s = 0; s < 2; ++s) {
            const int strip = s == 0 ? t - 1 : t;
            const bool has_rect = strip >= 1 && strip <= N - 1;
            double level = 0;
            for (int x : jd.side[s]) {
                if (x == kPuncture) {
                    cx.punctures.push_back({t, static_cast<Side>(s), level});
                    continue;
                }
                if (!has_rect) throw InternalError("edge end on a switch without a rectangle");
                VerticalBand& b = bands.at(x);
                // The L switch meets the right edge of strip t-1, the R switch the left edge of strip t.
                b.ends.push_back({strip, s == 0 ? Side::R : Side::L, level, level + b.size});
                level += b.size;
            }
            if (has_rect) {
                double err = std::fabs(level - cx.rect(strip).height);
                cx.max_switch_error = std::max(cx.max_switch_error, err);
                if (err > tol)
                    throw DomainError("switch sum at junction " + std::to_string(t) + (s == 0 ? " L" : " R") +
                                      " misses the rectangle height by " + std::to_string(err));
            }
        }
    }
    for (auto& [id, b] : bands) cx.vertical_bands.push_back(b);

    // Horizontal identifications.
    if (cls.tag == ClassTag::height_zero) {
        cx.notes.push_back("height zero: no horizontal identification data");
        return cx;
    }
    const OutsideOrbit oo = outside_orbit(orbit.s, 0);
    cx.n = oo.n;
    switch (oo.kase) {
        case OutsideCase::i: case OutsideCase::iii: cx.hcase = HorizontalCase::endpoint; break;
        case OutsideCase::ii: cx.hcase = HorizontalCase::nbt; break;
        default: cx.hcase = HorizontalCase::generic; break;
    }
    cx.gamma_length = 2 * cx.c_position;
    for (int j = 1; j <= oo.n; ++j) {
        const OutsidePoint& p = oo.steps[static_cast<std::size_t>(j)];
        cx.boundary_polygon.push_back({p, boundary_param(cx, p)});
    }
    const OutsidePoint& v = oo.steps.back();
    const double hv = v.half == OutsidePoint::Half::a_hat ? 0 : itinerary_position(cx, v.itinerary);
    const double dist = std::fabs(cx.c_position - hv);  // from c to v along gamma
    const double half = cx.gamma_length / 2;
    if (dist > half + kInvariantTolerance) throw InternalError("landing point lies outside gamma");

    std::optional<OutsidePoint> centre = OutsidePoint{OutsidePoint::Half::upper, prepend(1, orbit.s)};
    for (int j = 0; j >= -track.depth; --j) {
        HorizontalFamily f;
        f.level = j;
        const double scale = std::pow(lam, j);
        if (j > -oo.n) {
            f.semicircle = half * scale;
        } else {
            f.semicircle = dist * scale;
            f.rectangle = (half - dist) * scale;
        }
        const bool want_centre = f.semicircle > 0 && -j < kCentreLevels;
        if (centre && want_centre) {
            f.centre = boundary_param(cx, *centre);
            auto pre = outside_preimages(*centre, orbit.s);
            if (pre.size() == 1)
                centre = pre.front();
            else
                centre.reset();
        }
        cx.horizontal_families.push_back(f);
    }

    if (cx.hcase == HorizontalCase::endpoint) {
        double w_v = 0;
        for (const auto& b : cx.vertical_bands)
            if (b.semicircle) w_v = std::max(w_v, b.size);
        const double w_h = half;
        // Labels: a^1 is the periodic endpoint of gamma, a^(i+1) its image.
        const int i0 = 1;
        for (int i = 0; i < oo.n; ++i)
            for (int j = 0; j < kIntervalLevels; ++j) {
                cx.intervals.push_back({true, i, j, 2 * w_v / std::pow(lam, i + oo.n * j)});
                int e = ((i - i0) % oo.n + oo.n) % oo.n;
                cx.intervals.push_back({false, i, j, 2 * w_h / std::pow(lam, e + oo.n * j)});
            }
    }
    return cx;
}

ComplexPoint step_point(const RectangleComplex& cx, const ComplexPoint& p) {
    const Rectangle& r = cx.rect(p.strip);
    const double tol = kBoundaryTolerance;
    auto escape = [&](const std::string& why) { throw OrbitEscape(why, {p}); };
    if (!(p.x > tol && p.x < r.width - tol && p.y > tol && p.y < r.height - tol))
        escape("point is not interior to strip " + std::to_string(p.strip));
    const Branch& br = cx.phi_model[static_cast<std::size_t>(p.strip - 1)];
    for (const Pass& ps : br.passes) {
        if (p.x >= ps.u1) continue;
        if (p.x - ps.u0 < tol || ps.u1 - p.x < tol) escape("image lands on a vertical side");
        const Rectangle& t = cx.rect(ps.target);
        const double h = cx.lambda * (p.x - ps.u0);
        ComplexPoint q;
        q.strip = ps.target;
        q.x = ps.reversed ? t.width - h : h;
        q.y = ps.v_offset + (ps.reversed ? r.height - p.y : p.y) / cx.lambda;
        if (!(q.x > tol && q.x < t.width - tol && q.y > tol && q.y < t.height - tol))
            escape("image lands within tolerance of a side");
        return q;
    }
    escape("point lies beyond the image path");
    return p;
}

std::vector<ComplexPoint> iterate(const RectangleComplex& cx, const ComplexPoint& p, int steps) {
    if (steps < 0) throw DomainError("negative step count");
    std::vector<ComplexPoint> out{p};
    for (int k = 0; k < steps; ++k) {
        try {
            out.push_back(step_point(cx, out.back()));
        } catch (const OrbitEscape& e) {
            throw OrbitEscape(std::string(e.what()) + " at step " + std::to_string(k + 1), out);
        }
    }
    return out;
}

SingularityCensus singularity_census(const RectangleComplex& cx, const TrainTrack& track) {
    if (cx.cls.tag == ClassTag::height_zero) throw DomainError("height zero: the 1-prong trichotomy needs positive height");
    SingularityCensus c;
    const int N = cx.N;

    std::set<int> bubbles;
    for (const InfEdge& e : track.inf_edges)
        if (is_bubble(e, cx.description)) bubbles.insert(e.id);
    std::map<int, int> preimages;
    for (int b : bubbles) {
        auto it = track.pi_map.find(b);
        if (it == track.pi_map.end()) continue;
        if (!bubbles.count(it->second)) c.notes.push_back("bubble " + std::to_string(b) + " maps to a non-bubble");
        ++preimages[it->second];
    }
    std::vector<int> roots;
    for (int b : bubbles)
        if (!preimages.count(b)) roots.push_back(b);

    auto chain_from = [&](int start) {
        std::vector<int> chain;
        std::set<int> seen;
        int cur = start;
        while (bubbles.count(cur) && seen.insert(cur).second) {
            chain.push_back(cur);
            auto it = track.pi_map.find(cur);
            if (it == track.pi_map.end()) break;
            cur = it->second;
        }
        return chain;
    };
    auto vertical = [&](int id) {
        OneProng p;
        p.vertical = true;
        p.edge = id;
        p.junction = track.edge(id).junction;
        return p;
    };

    if (cx.hcase == HorizontalCase::nbt) {
        c.finite = true;
        c.asymptotics = OneProngAsymptotics::finite;
        // Start the cycle at a bubble of junction N; horizontal centres coincide with bubble centres.
        int start = 0;
        for (int b : bubbles)
            if (track.edge(b).junction == N) { start = b; break; }
        if (start == 0 && !bubbles.empty()) start = *bubbles.begin();
        auto chain = chain_from(start);
        for (int b : chain) c.one_prong_orbit.push_back(vertical(b));
        auto it = chain.empty() ? track.pi_map.end() : track.pi_map.find(chain.back());
        const bool cycle = it != track.pi_map.end() && it->second == start;
        c.single_orbit = cycle && chain.size() == bubbles.size();
        c.notes.push_back("horizontal arc-band centres lie on the bubble cycle");
    } else {
        c.asymptotics = cx.hcase == HorizontalCase::endpoint ? OneProngAsymptotics::homoclinic
                                                            : OneProngAsymptotics::backward_infinity_forward_periodic;
        for (auto it = cx.horizontal_families.rbegin(); it != cx.horizontal_families.rend(); ++it) {
            if (it->semicircle <= 0) continue;
            OneProng p;
            p.vertical = false;
            p.level = it->level;
            c.one_prong_orbit.push_back(p);
        }
        if (roots.size() == 1) {
            auto chain = chain_from(roots.front());
            for (int b : chain) c.one_prong_orbit.push_back(vertical(b));
            c.single_orbit = chain.size() == bubbles.size() && track.edge(roots.front()).junction == N;
        } else {
            c.notes.push_back(std::to_string(roots.size()) + " bubbles without a bubble preimage");
            for (int b : bubbles) c.one_prong_orbit.push_back(vertical(b));
        }
    }

    for (int t = 1; t <= N; ++t) {
        const Config cf = cx.description.junctions[static_cast<std::size_t>(t)].config;
        if (s_type(cf)) continue;
        for (const Face& f : junction_faces(track.junctions[static_cast<std::size_t>(t)]))
            if (!f.outer && !f.punctured && !f.bubble_inside && f.gaps == 3) ++c.three_prongs;
    }

    bool infinity_essential = cx.hcase != HorizontalCase::nbt;
    for (int t = 1; t <= N; ++t) {
        const Config cf = cx.description.junctions[static_cast<std::size_t>(t)].config;
        if (!accumulating(cf)) continue;
        if (s_type(cf)) {
            c.notes.push_back("junction " + std::to_string(t) + " accumulation lies on the boundary orbit (identified with infinity)");
            infinity_essential = true;
            continue;
        }
        c.special_points.push_back({"essential", "junction " + std::to_string(t), 0});
    }
    if (infinity_essential)
        c.special_points.push_back({"essential", "infinity", 0});
    else
        c.special_points.push_back({"n_prong", "infinity", cx.n});
    return c;
}

double standard_modulus_estimate(double width, double area) {
    if (!(area > 0)) throw DomainError("annulus area must be positive");
    return width * width / area;
}

ModuliReport moduli_bounds(const RectangleComplex& cx, const TrainTrack& track, int count, double target,
                           long long max_k) {
    if (cx.cls.tag == ClassTag::height_zero) throw DomainError("height zero: no modulus estimate");
    if (count < 0) throw DomainError("negative count");
    ModuliReport rep;
    rep.hcase = cx.hcase;
    rep.target = target;
    const double lam = cx.lambda;
    const int n = cx.n;

    if (cx.hcase == HorizontalCase::nbt) {
        rep.notes.push_back("no accumulation of singularities: nothing to show");
        return rep;
    }

    if (cx.hcase == HorizontalCase::endpoint) {
        for (const auto& b : cx.vertical_bands)
            if (b.semicircle) rep.w_v = std::max(rep.w_v, b.size);
        rep.w_h = cx.gamma_length / 2;
        rep.w = std::min(rep.w_v, rep.w_h);
        rep.W = std::max(rep.w_v, rep.w_h);
        const double ln = std::pow(lam, n), il = 1 / ln, base = rep.w / std::pow(lam, n - 1);
        rep.C1 = base * (1 - il);
        rep.C2 = n * std::numbers::pi * base * (1 + il);
        rep.C3 = rep.C2 + 4 * n * rep.W * ln / (ln - 1);
        long double sum = 0;
        for (long long k = 1; k <= std::max<long long>(count, 1) || !rep.target_k; ++k) {
            if (k > max_k) {
                rep.notes.push_back("partial sums stay below the target up to k = " + std::to_string(max_k));
                break;
            }
            const double closed = rep.C1 / (rep.C2 * static_cast<double>(k) + rep.C3);
            sum += closed;
            if (!rep.target_k && sum > target) rep.target_k = k;
            if (k > count) continue;
            // Direct evaluation with radii scaled by lambda^(nk) to avoid underflow.
            const double rk = base, rk1 = base * il;
            const double tail = 4 * rep.W * ln / (ln - 1);
            const double width = rk - rk1;
            const double area = n * ((k + 1) * std::numbers::pi * (rk * rk - rk1 * rk1) + width * tail);
            const double direct = standard_modulus_estimate(width, area);
            if (std::fabs(direct - closed) > 1e-9 * closed)
                throw InternalError("modulus closed form disagrees with width^2/area at k = " + std::to_string(k));
            EndpointModulus m;
            m.k = static_cast<int>(k);
            const double sc = std::pow(lam, -static_cast<double>(n) * static_cast<double>(k));
            m.r_k = rk * sc;
            m.width = width * sc;
            m.area_bound = area * sc * sc;
            m.bound = closed;
            m.partial_sum = static_cast<double>(sum);
            rep.endpoint.push_back(m);
        }
        return rep;
    }

    // Generic case: one constant bound per accumulating junction.
    const double mu = std::pow(lam, -cx.orbit.l);
    std::map<int, double> Yp;
    for (const auto& b : cx.vertical_bands) Yp[b.edge] = b.size;
    for (int t = 1; t <= cx.N; ++t) {
        const Config cf = cx.description.junctions[static_cast<std::size_t>(t)].config;
        if (!accumulating(cf) || s_type(cf)) continue;
        JunctionModulus jm;
        jm.junction = t;
        jm.config = config_name(cf);
        jm.mu = mu;
        for (const InfEdge& e : track.inf_edges) {
            if (e.junction != t) continue;
            double y = Yp.at(e.id);
            if (is_bubble(e, cx.description))
                jm.c = std::max(jm.c, y);
            else
                jm.w = std::max(jm.w, y);
        }
        if (!(jm.w > 0) || !(jm.c > 0)) {
            rep.notes.push_back("junction " + std::to_string(t) + " lacks a band or bubble at this depth");
            continue;
        }
        jm.C = std::numbers::pi / 2 * (2 * (jm.w + jm.c) / (1 - mu) - jm.w);
        jm.bound = jm.w / jm.C;
        double mk = 1;
        for (int k = 0; k <= count && mk > 1e-150; ++k, mk *= mu) {
            const double width = jm.w * mk;
            const double Rk = (jm.w + jm.c) * mk / (1 - mu);
            const double area = std::numbers::pi / 2 * width * (2 * Rk - width);
            const double dev = std::fabs(standard_modulus_estimate(width, area) - jm.bound) / jm.bound;
            jm.max_k_deviation = std::max(jm.max_k_deviation, dev);
        }
        rep.junctions.push_back(jm);
    }
    if (rep.junctions.empty()) rep.notes.push_back("no accumulating junction with a positive bound");
    return rep;
}

std::size_t band_element_count(const RectangleComplex& cx) {
    return cx.vertical_bands.size() + cx.horizontal_families.size();
}

std::string render_svg(const RectangleComplex& cx, const RenderOptions& opt) {
    double ymax = 0;
    for (const auto& r : cx.rectangles) ymax = std::max(ymax, r.height);
    const double gap = 0.3 * ymax;
    const double S = opt.scale, M = opt.margin;
    // Layout: strip i occupies [left(i), left(i)+x_i], centred on the horizontal axis.
    auto left = [&](int strip) { return cx.rect(strip).offset + (strip - 1) * gap + gap; };
    const double width_units = cx.total_width + cx.N * gap + 2 * ymax;
    const double height_units = 3 * ymax;
    auto X = [&](double u) { return fmt(M + S * (u + ymax)); };
    auto Y = [&](double v) { return fmt(M + S * (1.5 * ymax - v)); };  // v measured upward from the axis
    auto bottom = [&](int strip) { return -cx.rect(strip).height / 2; };
    auto side_x = [&](const Attachment& a) { return left(a.strip) + (a.side == Side::R ? cx.rect(a.strip).width : 0); };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(2 * M + S * width_units)
      << "\" height=\"" << fmt(2 * M + S * height_units) << "\">\n";
    o << "<title>" << cx.s.str() << "</title>\n";
    o << "<g id=\"rectangles\" fill=\"#e8eef7\" stroke=\"#1f3b63\" stroke-width=\"1\">\n";
    for (const auto& r : cx.rectangles)
        o << "<rect class=\"strip\" data-strip=\"" << r.strip << "\" x=\"" << X(left(r.strip)) << "\" y=\""
          << Y(r.height / 2) << "\" width=\"" << fmt(S * r.width) << "\" height=\"" << fmt(S * r.height) << "\"/>\n";
    o << "</g>\n";

    o << "<g id=\"vertical-bands\" fill=\"#f4c27a\" fill-opacity=\"0.7\" stroke=\"#8a5a14\" stroke-width=\"0.5\">\n";
    for (const auto& b : cx.vertical_bands) {
        o << "<path class=\"vband\" data-edge=\"" << b.edge << "\" d=\"";
        if (b.ends.size() == 2 && b.ends[0].strip != b.ends[1].strip) {
            const Attachment &p = b.ends[0], &q = b.ends[1];
            const double yp = bottom(p.strip), yq = bottom(q.strip);
            o << "M " << X(side_x(p)) << " " << Y(yp + p.lo) << " L " << X(side_x(q)) << " " << Y(yq + q.lo) << " L "
              << X(side_x(q)) << " " << Y(yq + q.hi) << " L " << X(side_x(p)) << " " << Y(yp + p.hi) << " Z";
        } else if (b.ends.size() == 2) {
            // Loop on one side: concentric half-annulus (half-disk for a bubble).
            const Attachment &p = b.ends[0], &q = b.ends[1];
            const double x = side_x(p), yb = bottom(p.strip);
            const double lo = std::min(p.lo, q.lo), hi = std::max(p.hi, q.hi);
            const double in_lo = std::min(p.hi, q.hi), in_hi = std::max(p.lo, q.lo);
            const double R = (hi - lo) / 2, r = (in_hi - in_lo) / 2;
            const int sweep = p.side == Side::R ? 0 : 1;
            o << "M " << X(x) << " " << Y(yb + lo) << " A " << fmt(S * R) << " " << fmt(S * R) << " 0 0 " << sweep
              << " " << X(x) << " " << Y(yb + hi);
            if (r > 0)
                o << " L " << X(x) << " " << Y(yb + in_hi) << " A " << fmt(S * r) << " " << fmt(S * r) << " 0 0 "
                  << 1 - sweep << " " << X(x) << " " << Y(yb + in_lo);
            o << " Z";
        }
        o << "\"/>\n";
    }
    o << "</g>\n";

    o << "<g id=\"punctures\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1\">\n";
    for (const auto& p : cx.punctures) {
        double x, yb;
        if (p.side == Side::L && p.junction > 1) {
            x = left(p.junction - 1) + cx.rect(p.junction - 1).width + gap / 3;
            yb = bottom(p.junction - 1);
        } else if (p.junction < cx.N) {
            x = left(p.junction) - gap / 3;
            yb = bottom(p.junction);
        } else {
            x = left(cx.N - 1) + cx.rect(cx.N - 1).width + gap / 3;
            yb = bottom(cx.N - 1);
        }
        o << "<circle class=\"puncture\" data-junction=\"" << p.junction << "\" cx=\"" << X(x) << "\" cy=\""
          << Y(yb + p.level) << "\" r=\"" << fmt(3) << "\"/>\n";
    }
    o << "</g>\n";

    // Boundary coordinate to drawing position: upper arc on tops, lower arc on bottoms.
    const double T = cx.total_width;
    auto locate = [&](double param, double& x, double& y) {
        const bool upper = param <= T;
        const double h = upper ? T - param : param - T;
        int strip = 1;
        while (strip < cx.N - 1 && h > cx.rect(strip).offset + cx.rect(strip).width) ++strip;
        x = left(strip) + (h - cx.rect(strip).offset);
        y = (upper ? 1 : -1) * cx.rect(strip).height / 2;
        return upper;
    };
    o << "<g id=\"horizontal-bands\" fill=\"#9fd3a8\" fill-opacity=\"0.6\" stroke=\"#2d6b37\" stroke-width=\"0.5\">\n";
    for (const auto& f : cx.horizontal_families) {
        o << "<path class=\"hband\" data-level=\"" << f.level << "\"";
        if (!f.centre) o << " data-unplaced=\"true\"";
        o << " d=\"";
        if (f.centre) {
            double x, y;
            const bool upper = locate(*f.centre, x, y);
            const double r = f.semicircle;
            o << "M " << X(x - r) << " " << Y(y) << " A " << fmt(S * r) << " " << fmt(S * r) << " 0 0 "
              << (upper ? 1 : 0) << " " << X(x + r) << " " << Y(y) << " Z";
        }
        o << "\"/>\n";
    }
    o << "</g>\n";

    if (!cx.boundary_polygon.empty()) {
        o << "<polygon id=\"boundary\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& v : cx.boundary_polygon) {
            double x, y;
            locate(v.param, x, y);
            o << (first ? "" : " ") << X(x) << "," << Y(y);
            first = false;
        }
        o << "\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace gpa
