#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gpa/orbit.hpp"
#include "gpa/symbolic.hpp"

namespace oracle {

// Digit word of the segment from (0,0) to (n,m): symbol i is 1 when the
// segment meets a horizontal integer line at some x in (i-1, i+1).
inline std::string line_word(long long m, long long n) {
    std::string out;
    for (long long i = 0; i <= n; ++i) {
        bool hit = false;
        for (long long k = 0; k <= m && !hit; ++k) hit = std::llabs(k * n - i * m) < m;  // |kn/m - i| < 1
        out += hit ? '1' : '0';
    }
    return out;
}

// Symbol at index i of the eventually periodic sequence v w w w ...
inline int symbol(const std::string& v, const std::string& w, std::size_t i) {
    return (i < v.size() ? v[i] : w[(i - v.size()) % w.size()]) - '0';
}

// Unimodal comparison read off a long prefix: -1, 0, 1.
inline int prefix_cmp(const std::string& v1, const std::string& w1, const std::string& v2, const std::string& w2,
                      std::size_t len = 400) {
    int sum = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const int a = symbol(v1, w1, i), b = symbol(v2, w2, i);
        if (a != b) {
            return (sum + a) % 2 == 0 ? -1 : 1;  // first sequence's prefix sum through index i
        }
        sum += a;
    }
    return 0;
}

inline std::string bits(std::uint64_t m, int len) {
    std::string s;
    for (int i = 0; i < len; ++i) s += ((m >> i) & 1U) ? '1' : '0';
    return s;
}

// det(x I - A) by Gaussian elimination with partial pivoting.
inline double char_poly_at(const std::vector<std::vector<int>>& A, double x) {
    const std::size_t n = A.size();
    std::vector<std::vector<double>> M(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M[i][j] = (i == j ? x : 0.0) - A[i][j];
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(M[r][c]) > std::fabs(M[p][c])) p = r;
        if (M[p][c] == 0) return 0;
        if (p != c) {
            std::swap(M[p], M[c]);
            det = -det;
        }
        det *= M[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = M[r][c] / M[c][c];
            for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
        }
    }
    return det;
}

// Largest real root of det(xI - A) for a nonnegative matrix: bisection from
// the row-sum bound down to the last sign change.
inline double perron_root(const std::vector<std::vector<int>>& A) {
    double hi = 0;
    for (const auto& row : A) {
        double s = 0;
        for (int v : row) s += v;
        hi = std::max(hi, s);
    }
    hi += 1;
    const int steps = 4000;
    const double h = hi / steps;
    double x = hi, fx = char_poly_at(A, x);
    for (int i = 0; i < steps; ++i) {
        double y = x - h, fy = char_poly_at(A, y);
        if ((fx > 0) != (fy > 0) || fy == 0) {
            double a = y, b = x;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (a + b);
                if ((char_poly_at(A, mid) > 0) == (fx > 0)) b = mid;
                else a = mid;
            }
            return 0.5 * (a + b);
        }
        x = y;
        fx = fy;
    }
    return 0;
}

// All MIA kneading sequences with preperiod + period length <= max_len that
// satisfy the orbit conventions.
inline std::vector<gpa::BinarySeq> mia_sequences(int max_len) {
    std::vector<gpa::BinarySeq> out;
    std::set<std::string> seen;
    for (int tot = 1; tot <= max_len; ++tot)
        for (int pl = 0; pl < tot; ++pl) {
            const int wl = tot - pl;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << tot); ++m) {
                gpa::Word v, w;
                for (int i = 0; i < pl; ++i) v.push_back((m >> i) & 1U);
                for (int i = 0; i < wl; ++i) w.push_back((m >> (pl + i)) & 1U);
                gpa::BinarySeq s;
                try {
                    s = gpa::BinarySeq(v, w);
                } catch (...) {
                    continue;
                }
                if (!seen.insert(s.str()).second || !gpa::is_kneading(s)) continue;
                try {
                    if (!gpa::mia_check(gpa::strip_cover(gpa::critical_orbit(s)))) continue;
                } catch (...) {
                    continue;
                }
                out.push_back(s);
            }
        }
    return out;
}

}  // namespace oracle
