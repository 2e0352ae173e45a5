#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gpa/errors.hpp"
#include "gpa/spectral.hpp"
#include "oracles.hpp"

using namespace gpa;

namespace {

struct Setup {
    CriticalOrbit orbit;
    StripCover cover;
    PerronData p;
};

Setup setup(const char* s) {
    Setup r;
    r.orbit = critical_orbit(parse_seq(s));
    r.cover = strip_cover(r.orbit);
    r.p = perron(r.cover);
    return r;
}

SpectralData at_depth(const Setup& st, int depth) {
    const TrainTrack t = grow_invariant_track(st.orbit, depth);
    return spectral_data(t, st.cover, depth);
}

double total(const std::map<int, double>& m) {
    double s = 0;
    for (auto [id, w] : m) s += w;
    return s;
}

}  // namespace

TEST_CASE("running example spectral data") {
    const Setup st = setup("(1001011)");
    CHECK(st.p.lambda == doctest::Approx(1.686).epsilon(0.0005 / 1.686));
    const std::vector<double> X = {0.543, 0.104, 0.191, 0.724, 0.175, 0.322};
    const std::vector<double> Y = {0.368, 0.291, 0.509, 0.536, 0.490, 0.620};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(std::fabs(st.p.X[i] - X[i]) <= 0.0005);
        CHECK(std::fabs(st.p.Y[i] - Y[i]) <= 0.0005);
    }
    CHECK(st.p.residual_x <= 1e-10);
    CHECK(st.p.residual_y <= 1e-10);
}

TEST_CASE("one-by-one matrix") {
    const PerronData d = perron(IntMatrix{{2}});
    CHECK(d.lambda == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.X[0] == doctest::Approx(1.0));
    CHECK(d.X[0] * d.Y[0] == doctest::Approx(1.0));
}

TEST_CASE("Perron root agrees with a determinant oracle") {
    for (const char* s : {"(10011)", "(1001011)", "10(011)", "1000(101)", "100101(10)", "(101)"}) {
        const Setup st = setup(s);
        CHECK(std::fabs(st.p.lambda - oracle::perron_root(st.cover.A)) <= 1e-10);
    }
    // Characteristic polynomial against direct determinant evaluation.
    const IntMatrix A = strip_cover(critical_orbit(parse_seq("(1001011)"))).A;
    const auto c = characteristic_polynomial(A);
    for (double x : {-1.5, 0.3, 1.0, 2.7}) {
        double v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + it->convert_to<double>();
        CHECK(v == doctest::Approx(oracle::char_poly_at(A, x)).epsilon(1e-12));
    }
    CHECK(largest_real_root({BigInt(-1), BigInt(-1), BigInt(1)}) == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-14));
    CHECK_THROWS_AS(perron(IntMatrix{{1, 0}, {0, 1}}), DomainError);
}

TEST_CASE("normalization conventions") {
    const Setup st = setup("(1001011)");
    double n2 = 0, xy = 0;
    for (std::size_t i = 0; i < st.p.X.size(); ++i) {
        n2 += st.p.X[i] * st.p.X[i];
        xy += st.p.X[i] * st.p.Y[i];
    }
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(xy == doctest::Approx(1.0).epsilon(1e-14));
    const PerronData u = perron(st.cover, 1e-12, Normalization::unit_sum);
    CHECK(std::accumulate(u.X.begin(), u.X.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::accumulate(u.Y.begin(), u.Y.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.lambda == doctest::Approx(st.p.lambda).epsilon(1e-14));
}

TEST_CASE("horseshoe heights by hand") {
    const CriticalOrbit o = critical_orbit(parse_seq("1(0)"));
    const TrainTrack t = grow_invariant_track(o, 8);
    const HeightExtension h = extend_heights(t, {1.0}, 2.0, 8);
    // Right-junction bubble 1/2, then 1/4, 1/8, ... along the pi chain.
    int e = -1;
    for (const InfEdge& x : t.inf_edges)
        if (x.junction == 2) e = x.id;
    REQUIRE(e >= 0);
    double want = 0.5;
    for (int k = 0; k < 8; ++k) {
        CHECK(h.Yp.at(e) == doctest::Approx(want).epsilon(1e-15));
        want /= 2;
        if (!t.pi_map.count(e)) break;
        e = t.pi_map.at(e);
    }
    const ResidualReport r = switch_residuals(t, {1.0}, h.Yp);
    CHECK(r.max_residual <= 2 * h.tail_bound + 1e-15);
    CHECK(r.max_residual == doctest::Approx(std::pow(2.0, -8) * 2).epsilon(1e-12));
    CHECK_THROWS_AS(extend_heights(t, {1.0}, 2.0, 9), DomainError);
}

TEST_CASE("NBT heights are finite and exact") {
    const Setup st = setup("(10011)");
    const SpectralData d = at_depth(st, 10);
    CHECK(d.exact);
    CHECK(d.tail_bound == 0);
    CHECK(d.Yp.size() == 8);
    CHECK(d.switch_residual <= 1e-12);
    // Switch-condition oracle: per-junction equations solved independently for the BP bubbles.
    // A BP junction carries one punctured bubble, so its weight is half the real height at the loop's switch.
    const TrainTrack t = grow_invariant_track(st.orbit, 10);
    for (const InfEdge& e : t.inf_edges) {
        if (e.kind != EdgeKind::bubble) continue;
        const int j = e.junction;
        const int strip = e.ends[0].side == Side::L ? j - 1 : j;
        double chords = 0;
        for (int x : t.junctions[static_cast<std::size_t>(j)].side[static_cast<int>(e.ends[0].side)])
            if (x != kPuncture && x != e.id) chords += d.Yp.at(x);
        CHECK(d.Yp.at(e.id) == doctest::Approx((d.Y[static_cast<std::size_t>(strip - 1)] - chords) / 2).epsilon(1e-12));
    }
}

TEST_CASE("running example at default depth") {
    const Setup st = setup("(1001011)");
    const int depth = default_depth(st.p.lambda);
    CHECK(std::pow(st.p.lambda, -depth) < 1e-12);
    CHECK(std::pow(st.p.lambda, -(depth - 1)) >= 1e-12);
    const SpectralData d = at_depth(st, depth);
    for (auto [id, w] : d.Yp) CHECK(w > 0);
    CHECK(d.switch_residual < 1e-9);
    CHECK(d.switch_residual <= 2 * d.tail_bound + 1e-9);
}

TEST_CASE("property: residual decays by lambda per depth once the track has settled") {
    for (const char* s : {"1(0)", "(10011)", "(1001011)", "10(011)", "1000(101)", "100101(10)"}) {
        const Setup st = setup(s);
        const int d0 = settle_depth(st.orbit.N);
        for (int d = d0; d < d0 + 3; ++d) {
            const SpectralData a = at_depth(st, d), b = at_depth(st, d + 1);
            if (b.exact) {
                CHECK(b.switch_residual <= 1e-12);
                continue;
            }
            CHECK(a.switch_residual / b.switch_residual >= st.p.lambda * (1 - 1e-9));
            CHECK(std::fabs(total(b.Yp) - total(a.Yp)) <= a.tail_bound + 1e-12);
        }
    }
}

TEST_CASE("property: partial sums are Cauchy at every depth") {
    for (const char* s : {"1(0)", "(1001011)", "10(011)", "1000(101)", "100101(10)"}) {
        const Setup st = setup(s);
        for (int d = 1; d <= 8; ++d) {
            const SpectralData a = at_depth(st, d), b = at_depth(st, d + 1);
            CHECK(std::fabs(total(b.Yp) - total(a.Yp)) <= a.tail_bound + 1e-12);
        }
    }
}

TEST_CASE("property: weights scale by lambda^-N around a junction return") {
    const Setup st = setup("(1001011)");
    const int depth = 40;
    const TrainTrack t = grow_invariant_track(st.orbit, depth);
    const SpectralData d = spectral_data(t, st.cover, depth);
    std::map<int, int> preimages;
    for (auto [a, b] : t.pi_map) ++preimages[b];
    std::set<int> fed;  // edges receiving B Y directly
    for (const auto& row : t.b_rows)
        for (auto [id, c] : row) fed.insert(id);
    int checked = 0;
    for (const InfEdge& e : t.inf_edges) {
        int f = e.id;
        bool clean = true;
        for (int k = 0; k < st.orbit.N && clean; ++k) {
            auto it = t.pi_map.find(f);
            if (it == t.pi_map.end()) clean = false;
            else {
                f = it->second;
                clean = preimages[f] == 1 && !fed.count(f);
            }
        }
        // Deepest-generation weights are cut by the truncation.
        if (!clean || t.edge(f).depth >= depth) continue;
        CHECK(t.edge(f).junction == e.junction);
        CHECK(d.Yp.at(f) / d.Yp.at(e.id) == doctest::Approx(std::pow(st.p.lambda, -st.orbit.N)).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("property: eigen residuals and positivity over the enumeration") {
    for (const BinarySeq& s : oracle::mia_sequences(10)) {
        const PerronData p = perron(strip_cover(critical_orbit(s)));
        CHECK(p.residual_x <= 1e-10 * p.lambda);
        CHECK(p.residual_y <= 1e-10 * p.lambda);
        for (double v : p.X) CHECK(v > 0);
        for (double v : p.Y) CHECK(v > 0);
        CHECK(p.lambda > 1);
    }
}
