#include "gpa/height.hpp"

#include <algorithm>

#include "gpa/errors.hpp"

namespace gpa {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw DomainError("zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

std::string Rational::str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

double Rational::to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    auto parse_int = [&](std::string_view part) {
        if (part.empty()) throw DomainError("malformed rational \"" + std::string(text) + "\"");
        std::size_t start = part[0] == '-' ? 1 : 0;
        if (start == part.size()) throw DomainError("malformed rational \"" + std::string(text) + "\"");
        for (std::size_t i = start; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') throw DomainError("malformed rational \"" + std::string(text) + "\"");
        return BigInt(std::string(part));
    };
    if (slash == std::string_view::npos) return Rational(parse_int(text), BigInt(1));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational mediant(const Rational& a, const Rational& b) { return Rational(a.num() + b.num(), a.den() + b.den()); }

long long small_num(const Rational& q) {
    if (boost::multiprecision::abs(q.num()) > BigInt(1) << 40) throw DomainError("numerator too large");
    return q.num().convert_to<long long>();
}

long long small_den(const Rational& q) {
    if (q.den() > BigInt(1) << 40) throw DomainError("denominator too large");
    return q.den().convert_to<long long>();
}

std::string tag_name(ClassTag t) {
    switch (t) {
        case ClassTag::height_zero: return "height_zero";
        case ClassTag::lhe: return "lhe";
        case ClassTag::nbt: return "nbt";
        case ClassTag::rhe: return "rhe";
        case ClassTag::interior_low: return "interior_low";
        case ClassTag::interior_high: return "interior_high";
    }
    return "?";
}

namespace {

void require_word_range(const Rational& q) {
    if (q <= Rational(0) || q > Rational(1, 2))
        throw DomainError("q = " + q.str() + " outside (0, 1/2]");
}

}  // namespace

long long kappa(const Rational& q, long long i) {
    require_word_range(q);
    const long long m = small_num(q), n = small_den(q);
    if (i < 1 || i > m) throw DomainError("kappa index out of range");
    // floor(i/q) = floor(i n / m)
    auto fl = [&](long long j) { return (j * n) / m; };
    if (i == 1) return fl(1) - 1;
    return fl(i) - fl(i - 1) - 2;
}

Word c_word(const Rational& q) {
    require_word_range(q);
    const long long m = small_num(q);
    Word w{1};
    for (long long i = 1; i <= m; ++i) {
        if (i > 1) {
            w.push_back(1);
            w.push_back(1);
        }
        w.insert(w.end(), static_cast<std::size_t>(kappa(q, i)), 0);
    }
    w.push_back(1);
    return w;
}

HeightWords height_words(const Rational& q) {
    if (q <= Rational(0) || q >= Rational(1, 2)) throw DomainError("height words need q in (0, 1/2), got " + q.str());
    HeightWords h;
    h.q = q;
    const long long m = small_num(q);
    for (long long i = 1; i <= m; ++i) h.kappa.push_back(kappa(q, i));
    h.c_q = c_word(q);
    h.w_q.assign(h.c_q.begin(), h.c_q.end() - 2);
    h.w_hat_q = reversed(h.w_q);
    h.lhe = periodic_seq(concat(h.w_q, Word{1}));
    h.nbt = periodic_seq(concat(h.c_q, Word{1}));
    h.rhe = BinarySeq(h.c_q, concat(Word{1}, h.w_hat_q));

    if (reversed(h.c_q) != h.c_q) throw InternalError("c_q not palindromic for q = " + q.str());
    bool reaches = false;
    for (std::size_t k = 0; k <= h.rhe.orbit_size() && !reaches; ++k) reaches = shift(h.rhe, k) == h.lhe;
    if (!reaches) throw InternalError("rhe not preperiodic to lhe for q = " + q.str());
    return h;
}

Rational height(const BinarySeq& s) {
    if (!is_kneading(s)) throw DomainError("not a kneading sequence: " + s.str());
    if (s == BinarySeq(Word{1}, Word{0})) return Rational(0);
    const long long cap = static_cast<long long>(s.orbit_size()) + 2;
    Rational lo(0), hi(1, 2);
    for (;;) {
        Rational r = mediant(lo, hi);
        if (r.den() > cap)
            throw DomainError("no rational height with denominator <= " + std::to_string(cap) + " for " + s.str() +
                              " (not MIA?)");
        HeightWords h = height_words(r);
        if (precedes(s, h.lhe))
            lo = r;
        else if (precedes(h.rhe, s))
            hi = r;
        else
            return r;
    }
}

KneadingClass classify(const BinarySeq& s) {
    Rational q = height(s);
    if (q == Rational(0)) return {ClassTag::height_zero, q};
    HeightWords h = height_words(q);
    if (s == h.lhe) return {ClassTag::lhe, q};
    if (s == h.nbt) return {ClassTag::nbt, q};
    if (s == h.rhe) return {ClassTag::rhe, q};
    return {precedes(s, h.nbt) ? ClassTag::interior_low : ClassTag::interior_high, q};
}

}  // namespace gpa
