#include "gpa/outside.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gpa/errors.hpp"

namespace gpa {

using Half = OutsidePoint::Half;

namespace {

constexpr int kMaxEscape = 100000;

BinarySeq top_fold(const BinarySeq& s) { return prepend(1, shift(s, 2)); }  // 1 sigma^2(s)

bool is_critical(const BinarySeq& it, const BinarySeq& s) { return it != s && shift(it, 1) == s; }

OutsidePoint normalize(OutsidePoint p, const BinarySeq& s) {
    if (p.half == Half::upper || p.half == Half::lower) {
        if (p.itinerary == s) return b_hat(s);
        if (p.itinerary == shift(s, 1)) return a_hat(s);
        if (is_critical(p.itinerary, s)) p.itinerary = prepend(1, s);
    }
    return p;
}

bool admissible(const BinarySeq& it, const BinarySeq& s) {
    const BinarySeq a = shift(s, 1);
    BinarySeq t = it;
    for (std::size_t k = 0; k <= it.orbit_size(); ++k) {
        if (precedes(s, t) || precedes(t, a)) return false;
        t = shift(t, 1);
    }
    return true;
}

// Circle position key: b_hat, upper by decreasing itinerary, a_hat, lower by increasing itinerary.
int group(Half h) {
    switch (h) {
        case Half::b_hat: return 0;
        case Half::upper: return 1;
        case Half::a_hat: return 2;
        case Half::lower: return 3;
    }
    return 0;
}

bool ccw_before(const OutsidePoint& x, const OutsidePoint& y) {
    if (group(x.half) != group(y.half)) return group(x.half) < group(y.half);
    if (x.half == Half::upper) return precedes(y.itinerary, x.itinerary);
    return precedes(x.itinerary, y.itinerary);
}

bool starts_upper(const BinarySeq& it) {
    std::size_t k = 0;
    while (it[k] == 1) {
        if (++k > it.orbit_size() + 1) throw DomainError("itinerary has no zero");
    }
    return k % 2 == 1;
}

}  // namespace

std::string half_name(Half h) {
    switch (h) {
        case Half::upper: return "upper";
        case Half::lower: return "lower";
        case Half::a_hat: return "a_hat";
        case Half::b_hat: return "b_hat";
    }
    return "?";
}

std::string point_str(const OutsidePoint& p) {
    if (p.half == Half::a_hat) return "a^";
    if (p.half == Half::b_hat) return "b^";
    return p.itinerary.str() + (p.half == Half::upper ? "_u" : "_l");
}

std::string case_name(OutsideCase c) {
    switch (c) {
        case OutsideCase::i: return "i";
        case OutsideCase::ii: return "ii";
        case OutsideCase::iii: return "iii";
        case OutsideCase::iv: return "iv";
        case OutsideCase::v: return "v";
    }
    return "?";
}

OutsidePoint a_hat(const BinarySeq& s) { return {Half::a_hat, shift(s, 1)}; }
OutsidePoint b_hat(const BinarySeq& s) { return {Half::b_hat, s}; }
OutsidePoint p_upper(const BinarySeq& s) { return {Half::upper, top_fold(s)}; }

void check_point(const OutsidePoint& x, const BinarySeq& s) {
    if (x.half == Half::a_hat && x.itinerary != shift(s, 1)) throw DomainError("a_hat carries the wrong itinerary");
    if (x.half == Half::b_hat && x.itinerary != s) throw DomainError("b_hat carries the wrong itinerary");
    if (!is_critical(x.itinerary, s) && !admissible(x.itinerary, s))
        throw DomainError("itinerary " + x.itinerary.str() + " is not realized in [a, b]");
}

OutsideStepResult outside_step(const OutsidePoint& x0, const BinarySeq& s) {
    check_point(x0, s);
    const OutsidePoint x = normalize(x0, s);
    OutsideStepResult r;
    switch (x.half) {
        case Half::a_hat:
            r.point = {Half::lower, shift(s, 2)};
            break;
        case Half::b_hat:
            r.point = a_hat(s);
            break;
        case Half::upper:
            if (precedes(x.itinerary, top_fold(s))) {
                r.inside = true;
                r.point = {Half::lower, shift(x.itinerary, 1)};
                return r;
            }
            r.point = {Half::lower, shift(x.itinerary, 1)};
            break;
        case Half::lower:
            if (is_critical(x.itinerary, s) || x.itinerary == prepend(1, s))
                r.point = b_hat(s);
            else if (x.itinerary[0] == 0)
                r.point = {Half::lower, shift(x.itinerary, 1)};
            else
                r.point = {Half::upper, shift(x.itinerary, 1)};
            break;
    }
    r.point = normalize(r.point, s);
    return r;
}

std::vector<OutsidePoint> outside_preimages(const OutsidePoint& y, const BinarySeq& s) {
    check_point(y, s);
    const OutsidePoint target = normalize(y, s);
    std::vector<OutsidePoint> out;
    for (int sym = 0; sym < 2; ++sym) {
        BinarySeq it = prepend(sym, target.itinerary);
        if (!is_critical(it, s) && !admissible(it, s)) continue;
        for (Half h : {Half::upper, Half::lower}) {
            OutsidePoint c = normalize({h, it}, s);
            if (std::find(out.begin(), out.end(), c) != out.end()) continue;
            OutsideStepResult r = outside_step(c, s);
            if (!r.inside && r.point == target) out.push_back(c);
        }
    }
    return out;
}

OutsideOrbit outside_orbit(const BinarySeq& s, int extra_depth) {
    if (!is_kneading(s)) throw DomainError("not a kneading sequence: " + s.str());
    if (s.periodic() && s.period().back() != 1)
        throw DomainError("periodic word must end in 1: " + s.str());
    if (extra_depth < 0) throw DomainError("negative extras depth");
    const KneadingClass cls = classify(s);
    if (cls.tag == ClassTag::height_zero) throw DomainError("height zero: the outside map has no escaping orbit");

    OutsideOrbit o;
    const BinarySeq pu = top_fold(s);
    auto in_closure = [&](const OutsidePoint& p) {
        return p.half == Half::a_hat || (p.half == Half::upper && precedes_eq(p.itinerary, pu));
    };
    o.steps.push_back(a_hat(s));
    for (int i = 1;; ++i) {
        if (i > kMaxEscape) throw InternalError("orbit of a_hat does not return to the fold arc");
        OutsideStepResult r = outside_step(o.steps.back(), s);
        if (r.inside) throw InternalError("orbit of a_hat fell inside before returning");
        o.steps.push_back(r.point);
        if (in_closure(r.point)) break;
    }
    o.n = static_cast<int>(o.steps.size()) - 1;
    const OutsidePoint& last = o.steps.back();
    const BinarySeq cu = prepend(1, s);
    if (last.half == Half::a_hat)
        o.kase = OutsideCase::i;
    else if (last.itinerary == cu)
        o.kase = OutsideCase::ii;
    else if (last.itinerary == pu)
        o.kase = OutsideCase::iii;
    else if (last.itinerary[0] == 0)
        o.kase = OutsideCase::iv;
    else
        o.kase = OutsideCase::v;

    static const std::map<ClassTag, OutsideCase> expect = {
        {ClassTag::lhe, OutsideCase::i},          {ClassTag::nbt, OutsideCase::ii},
        {ClassTag::rhe, OutsideCase::iii},        {ClassTag::interior_low, OutsideCase::iv},
        {ClassTag::interior_high, OutsideCase::v}};
    if (expect.at(cls.tag) != o.kase)
        throw InternalError("outside orbit case " + case_name(o.kase) + " disagrees with class " + tag_name(cls.tag));
    if (BigInt(o.n) != cls.q.den())
        throw InternalError("escape time " + std::to_string(o.n) + " differs from height denominator " +
                            cls.q.den().str());

    // Periodic orbit: shifts of (w_q 1)^infinity.
    const HeightWords hw = height_words(cls.q);
    Word block = hw.w_q;
    block.push_back(1);
    const BinarySeq base = periodic_seq(block);
    std::vector<OutsidePoint> orbit;
    for (int k = 0; k < o.n; ++k) {
        BinarySeq it = shift(base, static_cast<std::size_t>(k));
        OutsidePoint p = normalize({starts_upper(it) ? Half::upper : Half::lower, it}, s);
        check_point(p, s);
        orbit.push_back(p);
    }
    for (int k = 0; k < o.n; ++k) {
        OutsideStepResult r = outside_step(orbit[static_cast<std::size_t>(k)], s);
        if (r.inside || !(r.point == orbit[static_cast<std::size_t>((k + 1) % o.n)]))
            throw InternalError("periodic orbit is not invariant under the outside map");
    }
    o.lambda_orbit = orbit;
    std::sort(o.lambda_orbit.begin(), o.lambda_orbit.end(), ccw_before);
    auto pos = [&](const OutsidePoint& p) {
        return static_cast<int>(std::find(o.lambda_orbit.begin(), o.lambda_orbit.end(), p) - o.lambda_orbit.begin());
    };
    int shift_by = -1;
    for (int k = 0; k < o.n; ++k) {
        const auto& p = o.lambda_orbit[static_cast<std::size_t>(k)];
        int d = ((pos(outside_step(p, s).point) - k) % o.n + o.n) % o.n;
        if (shift_by >= 0 && d != shift_by) throw InternalError("outside map does not rotate the periodic orbit");
        shift_by = d;
    }
    o.rotation = Rational(shift_by, o.n);
    if (o.rotation != cls.q)
        throw InternalError("rotation number " + o.rotation.str() + " differs from height " + cls.q.str());

    // Backward tree of the landing point in the endpoint cases.
    if (o.kase == OutsideCase::i || o.kase == OutsideCase::iii) {
        std::vector<OutsidePoint> layer{o.kase == OutsideCase::i ? p_upper(s) : a_hat(s)};
        std::vector<OutsidePoint> seen;
        for (int d = 0; d < extra_depth; ++d) {
            std::vector<OutsidePoint> next;
            for (const auto& y : layer)
                for (const auto& x : outside_preimages(y, s)) {
                    if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
                    seen.push_back(x);
                    next.push_back(x);
                }
            layer = std::move(next);
        }
        o.extras = std::move(seen);
    }
    return o;
}

}  // namespace gpa
