#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gpa/symbolic.hpp"

namespace gpa {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt num, BigInt den);
    Rational(long long num, long long den = 1) : Rational(BigInt(num), BigInt(den)) {}

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    std::string str() const;
    double to_double() const;

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    BigInt num_, den_;
};

Rational parse_rational(std::string_view text);
Rational mediant(const Rational& a, const Rational& b);

// Denominator and numerator as machine integers; throws if they do not fit.
long long small_num(const Rational& q);
long long small_den(const Rational& q);

struct HeightWords {
    Rational q;
    std::vector<long long> kappa;
    Word c_q, w_q, w_hat_q;
    BinarySeq lhe, nbt, rhe;
};

enum class ClassTag { height_zero, lhe, nbt, rhe, interior_low, interior_high };

struct KneadingClass {
    ClassTag tag;
    Rational q;
};

std::string tag_name(ClassTag t);

long long kappa(const Rational& q, long long i);
Word c_word(const Rational& q);
HeightWords height_words(const Rational& q);
Rational height(const BinarySeq& s);
KneadingClass classify(const BinarySeq& s);

}  // namespace gpa
