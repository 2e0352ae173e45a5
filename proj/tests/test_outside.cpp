#include <doctest.h>

#include <algorithm>

#include "gpa/errors.hpp"
#include "gpa/outside.hpp"
#include "oracles.hpp"

using namespace gpa;
using Half = OutsidePoint::Half;

namespace {

std::vector<BinarySeq> outside_sequences(std::size_t max_len) {
    std::vector<BinarySeq> out;
    for (const Word& w : maximal_words(max_len)) {
        const BinarySeq s = periodic_seq(w);
        if (w.back() != 1 || !is_kneading(s)) continue;
        try {
            if (!mia_check(strip_cover(critical_orbit(s)))) continue;
            if (classify(s).tag == ClassTag::height_zero) continue;
        } catch (const DomainError&) {
            continue;
        }
        out.push_back(s);
    }
    return out;
}

// Admissible upper and lower points with periodic itineraries of period <= len.
std::vector<OutsidePoint> candidates(const BinarySeq& s, int len) {
    std::vector<OutsidePoint> out;
    for (int l = 1; l <= len; ++l)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << l); ++m) {
            const BinarySeq it = parse_seq("(" + oracle::bits(m, l) + ")");
            for (Half h : {Half::upper, Half::lower}) {
                OutsidePoint p{h, it};
                try {
                    check_point(p, s);
                } catch (const DomainError&) {
                    continue;
                }
                if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
            }
        }
    return out;
}

}  // namespace

TEST_CASE("outside_step rules") {
    const BinarySeq s = parse_seq("(1001011)");
    CHECK(outside_step(b_hat(s), s).point == a_hat(s));
    const OutsidePoint c_lower{Half::lower, prepend(1, s)};
    CHECK(outside_step(c_lower, s).point == b_hat(s));
    const OutsideStepResult r = outside_step({Half::upper, shift(s, 2)}, s);
    CHECK(r.inside);
    CHECK(precedes(shift(s, 2), prepend(1, shift(s, 2))));
    const OutsideStepResult a = outside_step(a_hat(s), s);
    CHECK_FALSE(a.inside);
    CHECK(a.point == OutsidePoint{Half::lower, shift(s, 2)});
    CHECK_THROWS_AS(outside_step({Half::a_hat, s}, s), DomainError);
}

TEST_CASE("outside orbit examples") {
    const OutsideOrbit a = outside_orbit(parse_seq("(101)"));
    CHECK(a.kase == OutsideCase::i);
    CHECK(a.n == 3);
    CHECK(a.steps.back() == a_hat(parse_seq("(101)")));

    const BinarySeq nbt = parse_seq("(10011)");
    const OutsideOrbit b = outside_orbit(nbt);
    CHECK(b.kase == OutsideCase::ii);
    CHECK(b.n == 3);
    CHECK(b.steps.back() == OutsidePoint{Half::upper, prepend(1, nbt)});

    const BinarySeq rhe = parse_seq("10(011)");
    const OutsideOrbit c = outside_orbit(rhe);
    CHECK(c.kase == OutsideCase::iii);
    CHECK(c.n == 3);
    CHECK(c.steps.back() == p_upper(rhe));
    CHECK(c.rotation == Rational(1, 3));
    CHECK(std::find(c.extras.begin(), c.extras.end(), b_hat(rhe)) != c.extras.end());

    const OutsideOrbit d = outside_orbit(parse_seq("(1001011)"));
    CHECK(d.kase == OutsideCase::iv);
    CHECK(d.lambda_orbit.size() == 3);
    CHECK(d.rotation == Rational(1, 3));

    CHECK_THROWS_AS(outside_orbit(parse_seq("1(0)")), DomainError);
    CHECK_THROWS_AS(outside_orbit(parse_seq("(100)")), DomainError);
}

TEST_CASE("property: escape time, case and rotation agree with the height (length <= 10)") {
    const auto seqs = outside_sequences(10);
    // Same set as the periodic, positive-height part of the independent enumeration.
    std::set<std::string> mine, ref;
    for (const BinarySeq& s : seqs) mine.insert(s.str());
    for (const BinarySeq& s : oracle::mia_sequences(10))
        if (s.preperiod().empty() && classify(s).tag != ClassTag::height_zero) ref.insert(s.str());
    CHECK(mine == ref);
    CHECK(seqs.size() > 100);
    static const std::map<ClassTag, OutsideCase> expect = {
        {ClassTag::lhe, OutsideCase::i},   {ClassTag::nbt, OutsideCase::ii},        {ClassTag::rhe, OutsideCase::iii},
        {ClassTag::interior_low, OutsideCase::iv}, {ClassTag::interior_high, OutsideCase::v}};
    for (const BinarySeq& s : seqs) {
        const KneadingClass cls = classify(s);
        const OutsideOrbit o = outside_orbit(s);
        CHECK(BigInt(o.n) == cls.q.den());
        CHECK(o.kase == expect.at(cls.tag));
        CHECK(o.rotation == cls.q);
        CHECK(static_cast<int>(o.lambda_orbit.size()) == o.n);
        // Escape happens exactly at step n.
        for (int i = 1; i < o.n; ++i) {
            const OutsidePoint& p = o.steps[static_cast<std::size_t>(i)];
            const bool closure = p.half == Half::a_hat || (p.half == Half::upper && precedes_eq(p.itinerary, p_upper(s).itinerary));
            CHECK_FALSE(closure);
        }
    }
}

TEST_CASE("property: semiconjugacy with the shift") {
    for (const BinarySeq& s : outside_sequences(7)) {
        for (const OutsidePoint& x : candidates(s, 5)) {
            const OutsideStepResult r = outside_step(x, s);
            CHECK(r.point.itinerary == shift(x.itinerary));
        }
        CHECK(outside_step(a_hat(s), s).point.itinerary == shift(s, 2));
        CHECK(outside_step(b_hat(s), s).point.itinerary == shift(s, 1));
    }
}

TEST_CASE("property: interior cases have no other surviving periodic points") {
    int checked = 0;
    for (const BinarySeq& s : outside_sequences(10)) {
        const OutsideOrbit o = outside_orbit(s);
        if (o.kase != OutsideCase::iv && o.kase != OutsideCase::v) continue;
        for (const OutsidePoint& x : candidates(s, 6)) {
            OutsidePoint p = x;
            bool survived = true;
            for (int k = 0; k < 4 * o.n + 12 && survived; ++k) {
                const OutsideStepResult r = outside_step(p, s);
                if (r.inside) survived = false;
                p = r.point;
            }
            if (!survived) continue;
            // A survivor must end on the periodic orbit.
            CHECK(std::find(o.lambda_orbit.begin(), o.lambda_orbit.end(), p) != o.lambda_orbit.end());
        }
        ++checked;
    }
    CHECK(checked > 20);
}
