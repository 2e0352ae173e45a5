#include <doctest.h>

#include <cmath>
#include <random>
#include <regex>

#include "gpa/errors.hpp"
#include "gpa/pipeline.hpp"
#include "oracles.hpp"

using namespace gpa;

namespace {

struct Built {
    Pipeline p;
    RectangleComplex cx;
};

Built build(const char* s, std::optional<int> depth = std::nullopt) {
    Built b{run_pipeline(parse_seq(s), depth), {}};
    b.cx = complex_of(b.p);
    return b;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("running example: R4 is tiled by the images of R1 and R4") {
    const Built b = build("(1001011)");
    const auto& cx = b.cx;
    std::vector<std::pair<int, double>> into4;  // (source, sub-band height)
    for (const Branch& br : cx.phi_model)
        for (const Pass& ps : br.passes)
            if (ps.target == 4) into4.push_back({br.strip, cx.rect(br.strip).height / cx.lambda});
    REQUIRE(into4.size() == 2);
    CHECK(into4[0].first + into4[1].first == 5);
    CHECK((into4[0].first == 1 || into4[0].first == 4));
    CHECK(into4[0].second + into4[1].second == doctest::Approx(cx.rect(4).height).epsilon(1e-12));
    CHECK((0.368 + 0.536) / 1.686 == doctest::Approx(0.536).epsilon(0.002));
    CHECK(cx.max_tiling_error <= 1e-12);
    CHECK(cx.max_covering_error <= 1e-12);
}

TEST_CASE("horseshoe: horizontal tent map with fixed point 2/3") {
    const Built b = build("1(0)", 30);
    const auto& cx = b.cx;
    CHECK(cx.lambda == doctest::Approx(2.0));
    CHECK(cx.total_width == doctest::Approx(1.0));
    const double h = cx.rect(1).height;
    const ComplexPoint q = step_point(cx, {1, 2.0 / 3.0, 0.3 * h});
    CHECK(q.strip == 1);
    CHECK(q.x == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // Left branch doubles.
    CHECK(step_point(cx, {1, 0.2, 0.3 * h}).x == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("area is one and preserved by the sub-band decomposition") {
    for (const char* s : {"(1001011)", "(10011)", "(101)", "10(011)", "1000(101)", "100101(10)"}) {
        const Built b = build(s);
        double area = 0, image = 0;
        for (const Rectangle& r : b.cx.rectangles) area += r.width * r.height;
        for (const Branch& br : b.cx.phi_model)
            for (const Pass& ps : br.passes) image += b.cx.lambda * (ps.u1 - ps.u0) * b.cx.rect(br.strip).height / b.cx.lambda;
        CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(image == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("iterate: injective, expands by lambda and contracts by 1/lambda") {
    for (const char* s : {"(1001011)", "10(011)", "1000(101)"}) {
        const Built b = build(s);
        const auto& cx = b.cx;
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> U(0.02, 0.98);
        std::vector<ComplexPoint> in, out;
        for (int k = 0; k < 300; ++k) {
            const int strip = 1 + static_cast<int>(rng() % static_cast<unsigned>(cx.N - 1));
            const ComplexPoint p{strip, U(rng) * cx.rect(strip).width, U(rng) * cx.rect(strip).height};
            try {
                out.push_back(step_point(cx, p));
                in.push_back(p);
            } catch (const OrbitEscape&) {
            }
        }
        REQUIRE(in.size() > 250);
        for (std::size_t i = 0; i < in.size(); ++i)
            for (std::size_t j = i + 1; j < in.size(); ++j) {
                const bool same_out = out[i].strip == out[j].strip && out[i].x == out[j].x && out[i].y == out[j].y;
                CHECK_FALSE(same_out);
            }
        // Pairs in a common branch domain.
        for (const Branch& br : cx.phi_model)
            for (const Pass& ps : br.passes) {
                const double y0 = 0.3 * cx.rect(br.strip).height, y1 = 0.7 * cx.rect(br.strip).height;
                const double x0 = ps.u0 + 0.3 * (ps.u1 - ps.u0), x1 = ps.u0 + 0.6 * (ps.u1 - ps.u0);
                const ComplexPoint a = step_point(cx, {br.strip, x0, y0}), c = step_point(cx, {br.strip, x1, y1});
                CHECK(a.strip == c.strip);
                CHECK(std::fabs(c.x - a.x) == doctest::Approx(cx.lambda * (x1 - x0)).epsilon(1e-12));
                CHECK(std::fabs(c.y - a.y) == doctest::Approx((y1 - y0) / cx.lambda).epsilon(1e-12));
            }
    }
}

TEST_CASE("iterate escapes at boundaries with the partial orbit") {
    const Built b = build("(1001011)");
    CHECK_THROWS_AS(iterate(b.cx, {1, 0.0, 0.1}, 3), OrbitEscape);
    try {
        iterate(b.cx, {1, 0.1, 1e-12}, 3);
        FAIL("expected an escape");
    } catch (const OrbitEscape& e) {
        CHECK(e.partial.size() == 1);
    }
    CHECK_THROWS_AS(iterate(b.cx, {1, 0.1, 0.1}, -1), DomainError);
    CHECK(iterate(b.cx, {1, 0.1, 0.1}, 4).size() == 5);
}

TEST_CASE("horizontal structure per case") {
    const Built e = build("(101)");
    CHECK(e.cx.hcase == HorizontalCase::endpoint);
    CHECK(e.cx.n == 3);
    for (const IdentificationInterval& a : e.cx.intervals)
        for (const IdentificationInterval& c : e.cx.intervals)
            if (a.vertical == c.vertical && a.i == c.i && c.j == a.j + 1)
                CHECK(c.length / a.length == doctest::Approx(std::pow(e.cx.lambda, -3)).epsilon(1e-12));
    for (const HorizontalFamily& f : e.cx.horizontal_families) {
        CHECK(f.semicircle > 0);
        CHECK(f.rectangle == 0);
    }

    const Built n = build("(10011)");
    CHECK(n.cx.hcase == HorizontalCase::nbt);
    CHECK(n.cx.boundary_polygon.size() == 3);
    for (const HorizontalFamily& f : n.cx.horizontal_families)
        if (f.level <= -3) CHECK(f.semicircle == doctest::Approx(0.0).epsilon(1e-15));

    const Built g = build("(1001011)");
    CHECK(g.cx.hcase == HorizontalCase::generic);
    CHECK(g.cx.boundary_polygon.size() == 3);
    for (const HorizontalFamily& f : g.cx.horizontal_families) {
        if (f.level <= -3) {
            CHECK(f.semicircle > 0);
            CHECK(f.rectangle > 0);
        }
        const double scale = std::pow(g.cx.lambda, f.level);
        CHECK((f.level > -3 ? f.semicircle : f.semicircle + f.rectangle) ==
              doctest::Approx(g.cx.gamma_length / 2 * scale).epsilon(1e-12));
    }
}

TEST_CASE("singularity census examples") {
    const Built n = build("(10011)");
    const SingularityCensus c = singularity_census(n.cx, n.p.track);
    CHECK(c.one_prong_orbit.size() == 5);
    CHECK(c.single_orbit);
    CHECK(c.finite);
    CHECK(c.asymptotics == OneProngAsymptotics::finite);

    const Built l = build("(101)");
    const SingularityCensus cl = singularity_census(l.cx, l.p.track);
    CHECK(cl.single_orbit);
    CHECK_FALSE(cl.finite);
    CHECK(cl.asymptotics == OneProngAsymptotics::homoclinic);

    const Built g = build("(1001011)");
    const SingularityCensus cg = singularity_census(g.cx, g.p.track);
    CHECK(cg.single_orbit);
    CHECK_FALSE(cg.finite);
    CHECK(cg.asymptotics == OneProngAsymptotics::backward_infinity_forward_periodic);

    const Built h = build("1(0)", 20);
    CHECK_THROWS_AS(singularity_census(h.cx, h.p.track), DomainError);
}

TEST_CASE("modulus estimates") {
    // Round annulus 1 < r < 2: width 1, area 3 pi.
    const double est = standard_modulus_estimate(1.0, 3 * M_PI);
    CHECK(est == doctest::Approx(1 / (3 * M_PI)));
    CHECK(est <= std::log(2.0) / (2 * M_PI));

    const Built e = build("(101)");
    const ModuliReport m = moduli_bounds(e.cx, e.p.track, 10000);
    REQUIRE(m.endpoint.size() == 10000);
    double prev = 0;
    for (const EndpointModulus& k : m.endpoint) {
        CHECK(k.bound > 0);
        CHECK(k.partial_sum > prev);
        CHECK(k.bound == doctest::Approx(m.C1 / (m.C2 * k.k + m.C3)).epsilon(1e-12));
        prev = k.partial_sum;
    }
    for (std::size_t k = 1; k < 20; ++k)
        CHECK(m.endpoint[k].r_k / m.endpoint[k - 1].r_k == doctest::Approx(std::pow(e.cx.lambda, -3)).epsilon(1e-12));
    CHECK(m.endpoint[0].r_k == doctest::Approx(m.w * std::pow(e.cx.lambda, -(2 + 3))).epsilon(1e-12));
    REQUIRE(m.target_k.has_value());
    CHECK(*m.target_k > 10000);

    const Built g = build("(1001011)");
    const ModuliReport mg = moduli_bounds(g.cx, g.p.track, 50);
    CHECK(mg.hcase == HorizontalCase::generic);
    CHECK_FALSE(mg.junctions.empty());
    for (const JunctionModulus& j : mg.junctions) {
        CHECK(j.bound > 0);
        CHECK(j.max_k_deviation <= 1e-12);
        CHECK(j.mu == doctest::Approx(std::pow(g.cx.lambda, -7)).epsilon(1e-12));
    }

    const Built n = build("(10011)");
    const ModuliReport mn = moduli_bounds(n.cx, n.p.track, 10);
    CHECK(mn.endpoint.empty());
    CHECK(mn.junctions.empty());
    CHECK_FALSE(mn.notes.empty());
}

TEST_CASE("SVG output") {
    for (const char* s : {"(1001011)", "(10011)", "(101)", "10(011)"}) {
        const Built b = build(s, 12);
        const std::string svg = render_svg(b.cx);
        CHECK(svg == render_svg(complex_of(run_pipeline(parse_seq(s), 12))));
        CHECK(count(svg, "<rect class=\"strip\"") == static_cast<std::size_t>(b.cx.N - 1));
        const std::size_t bands = count(svg, "class=\"vband\"") + count(svg, "class=\"hband\"");
        CHECK(bands == band_element_count(b.cx));
        CHECK(bands == b.p.track.inf_edges.size() + 13);
        CHECK(svg.rfind("<?xml", 0) == 0);
        CHECK(svg.find("version=\"1.1\"") != std::string::npos);
        // Every coordinate carries exactly six fractional digits.
        const std::regex attr(R"x(\s(?:x|y|width|height|cx|cy|r|d|points)="([^"]*)")x");
        const std::regex number(R"(-?\d+(\.\d*)?)");
        int numbers = 0;
        for (auto a = std::sregex_iterator(svg.begin(), svg.end(), attr); a != std::sregex_iterator(); ++a) {
            // Arc flags are integers by the path grammar.
            const std::string value = std::regex_replace(std::string((*a)[1]), std::regex(R"((A \S+ \S+) 0 [01] [01])"), "$1");
            for (auto it = std::sregex_iterator(value.begin(), value.end(), number); it != std::sregex_iterator(); ++it) {
                CHECK((*it)[1].length() == 7);
                ++numbers;
            }
        }
        CHECK(numbers > 100);
    }
}

TEST_CASE("property: tiling and covering identities over the length-10 enumeration") {
    int endpoint = 0, generic = 0, nbt = 0;
    for (const BinarySeq& s : oracle::mia_sequences(10)) {
        const Pipeline p = run_pipeline(s);
        const RectangleComplex cx = complex_of(p);
        CHECK(cx.max_tiling_error <= 1e-9);
        CHECK(cx.max_covering_error <= 1e-9);
        CHECK(cx.max_switch_error <= 2 * cx.tail_bound + 1e-9);
        endpoint += cx.hcase == HorizontalCase::endpoint;
        generic += cx.hcase == HorizontalCase::generic;
        nbt += cx.hcase == HorizontalCase::nbt;
        if (p.cls.tag != ClassTag::height_zero) {
            const SingularityCensus c = singularity_census(cx, p.track);
            CHECK(c.single_orbit);
        }
    }
    CHECK(endpoint > 0);
    CHECK(generic > 0);
    CHECK(nbt > 0);
}
