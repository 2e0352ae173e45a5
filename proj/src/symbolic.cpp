#include "gpa/symbolic.hpp"

#include <algorithm>
#include <numeric>

#include "gpa/errors.hpp"

namespace gpa {

Word word_from_string(std::string_view text) {
    Word w;
    w.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1') throw DomainError("invalid symbol '" + std::string(1, ch) + "' in word");
        w.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return w;
}

std::string to_string(const Word& w) {
    std::string out;
    out.reserve(w.size());
    for (auto c : w) out.push_back(static_cast<char>('0' + c));
    return out;
}

int parity(const Word& w) {
    int p = 0;
    for (auto c : w) p ^= c;
    return p;
}

Word reversed(Word w) {
    std::reverse(w.begin(), w.end());
    return w;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

namespace {

std::size_t least_period(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
        if (ok) return d;
    }
    return n;
}

}  // namespace

BinarySeq::BinarySeq(Word preperiod, Word period) : pre_(std::move(preperiod)), per_(std::move(period)) {
    if (per_.empty()) throw DomainError("empty period");
    for (auto c : pre_)
        if (c > 1) throw DomainError("symbol out of range");
    for (auto c : per_)
        if (c > 1) throw DomainError("symbol out of range");
    per_.resize(least_period(per_));
    while (!pre_.empty() && pre_.back() == per_.back()) {
        std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
        pre_.pop_back();
    }
}

int BinarySeq::operator[](std::size_t i) const {
    if (i < pre_.size()) return pre_[i];
    return per_[(i - pre_.size()) % per_.size()];
}

Word BinarySeq::prefix(std::size_t n) const {
    Word out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>((*this)[i]);
    return out;
}

std::string BinarySeq::str() const { return to_string(pre_) + "(" + to_string(per_) + ")"; }

BinarySeq parse_seq(std::string_view text) {
    auto open = text.find('(');
    if (open == std::string_view::npos || text.empty() || text.back() != ')')
        throw DomainError("syntax error: expected [01]*(period), got \"" + std::string(text) + "\"");
    auto body = text.substr(open + 1, text.size() - open - 2);
    if (body.find_first_of("()") != std::string_view::npos)
        throw DomainError("syntax error: nested parentheses in \"" + std::string(text) + "\"");
    if (body.empty()) throw DomainError("empty period in \"" + std::string(text) + "\"");
    return BinarySeq(word_from_string(text.substr(0, open)), word_from_string(body));
}

BinarySeq periodic_seq(const Word& w) { return BinarySeq({}, w); }

BinarySeq shift(const BinarySeq& s, std::size_t k) {
    Word pre = s.preperiod();
    Word per = s.period();
    std::size_t drop = std::min(k, pre.size());
    pre.erase(pre.begin(), pre.begin() + static_cast<std::ptrdiff_t>(drop));
    k -= drop;
    k %= per.size();
    std::rotate(per.begin(), per.begin() + static_cast<std::ptrdiff_t>(k), per.end());
    return BinarySeq(std::move(pre), std::move(per));
}

BinarySeq prepend(const Word& u, const BinarySeq& s) { return BinarySeq(concat(u, s.preperiod()), s.period()); }

BinarySeq prepend(int symbol, const BinarySeq& s) { return prepend(Word{static_cast<std::uint8_t>(symbol)}, s); }

Order unimodal_cmp(const BinarySeq& s, const BinarySeq& t) {
    const std::size_t span = std::max(s.preperiod_length(), t.preperiod_length()) +
                             std::lcm(s.period_length(), t.period_length());
    int sum = 0;
    for (std::size_t i = 0; i < span; ++i) {
        int a = s[i], b = t[i];
        if (a != b) {
            sum += a;
            return (sum % 2 == 0) ? Order::less : Order::greater;
        }
        sum += a;
    }
    return Order::equal;
}

bool is_kneading(const BinarySeq& s) {
    const BinarySeq lo = shift(s);
    BinarySeq cur = s;
    for (std::size_t n = 0; n < s.orbit_size(); ++n) {
        if (precedes(cur, lo) || precedes(s, cur)) return false;
        cur = shift(cur);
    }
    return true;
}

bool is_maximal(const Word& w) {
    if (w.empty()) throw DomainError("maximal-word check needs a nonempty word");
    const BinarySeq s = periodic_seq(w);
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!precedes(shift(s, i), s)) return false;
    return true;
}

std::vector<Word> maximal_words(std::size_t max_len) {
    std::vector<Word> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
            Word w(len);
            for (std::size_t i = 0; i < len; ++i) w[i] = (bits >> (len - 1 - i)) & 1U;
            if (is_maximal(w)) out.push_back(std::move(w));
        }
    }
    return out;
}

}  // namespace gpa
