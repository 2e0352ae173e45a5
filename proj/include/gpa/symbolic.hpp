#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gpa {

using Word = std::vector<std::uint8_t>;

Word word_from_string(std::string_view text);
std::string to_string(const Word& w);
int parity(const Word& w);
Word reversed(Word w);
Word concat(const Word& a, const Word& b);

// Eventually periodic sequence v w w w ..., always stored canonically:
// w is primitive and v is as short as possible.
class BinarySeq {
public:
    BinarySeq() = default;
    BinarySeq(Word preperiod, Word period);

    const Word& preperiod() const { return pre_; }
    const Word& period() const { return per_; }
    bool periodic() const { return pre_.empty(); }
    std::size_t preperiod_length() const { return pre_.size(); }
    std::size_t period_length() const { return per_.size(); }
    // Number of distinct shifts, |v| + |w|.
    std::size_t orbit_size() const { return pre_.size() + per_.size(); }

    int operator[](std::size_t i) const;
    Word prefix(std::size_t n) const;
    std::string str() const;

    friend bool operator==(const BinarySeq& a, const BinarySeq& b) {
        return a.pre_ == b.pre_ && a.per_ == b.per_;
    }
    friend bool operator!=(const BinarySeq& a, const BinarySeq& b) { return !(a == b); }

private:
    Word pre_;
    Word per_;
};

BinarySeq parse_seq(std::string_view text);
BinarySeq periodic_seq(const Word& w);
BinarySeq shift(const BinarySeq& s, std::size_t k = 1);
BinarySeq prepend(const Word& u, const BinarySeq& s);
BinarySeq prepend(int symbol, const BinarySeq& s);

enum class Order { less, equal, greater };

Order unimodal_cmp(const BinarySeq& s, const BinarySeq& t);
inline bool precedes(const BinarySeq& s, const BinarySeq& t) { return unimodal_cmp(s, t) == Order::less; }
inline bool precedes_eq(const BinarySeq& s, const BinarySeq& t) { return unimodal_cmp(s, t) != Order::greater; }

bool is_kneading(const BinarySeq& s);
bool is_maximal(const Word& w);

// All maximal words of length 1..max_len, in length-then-lexicographic order.
std::vector<Word> maximal_words(std::size_t max_len);

}  // namespace gpa
