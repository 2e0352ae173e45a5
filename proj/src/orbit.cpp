#include "gpa/orbit.hpp"

#include <algorithm>

#include "gpa/errors.hpp"

namespace gpa {

int CriticalOrbit::index_of(const BinarySeq& t) const {
    for (int j = 1; j <= N; ++j)
        if (points[static_cast<std::size_t>(j)] == t) return j;
    return 0;
}

int CriticalOrbit::iterate_from_top(int r) const {
    int j = N;
    for (int i = 0; i < r; ++i) j = succ[static_cast<std::size_t>(j)];
    return j;
}

CriticalOrbit critical_orbit(const BinarySeq& s) {
    if (!is_kneading(s)) throw DomainError("not a kneading sequence: " + s.str());
    CriticalOrbit o;
    o.s = s;
    o.N = static_cast<int>(s.orbit_size());
    o.periodic = s.periodic();
    o.k = static_cast<int>(s.preperiod_length());
    o.l = static_cast<int>(s.period_length());
    if (o.periodic && s.period().back() != 1)
        throw DomainError("periodic sequence " + s.str() + " has period word ending in 0");

    std::vector<BinarySeq> shifts;
    for (int i = 0; i < o.N; ++i) shifts.push_back(shift(s, static_cast<std::size_t>(i)));
    std::vector<BinarySeq> sorted = shifts;
    std::sort(sorted.begin(), sorted.end(), [](const BinarySeq& a, const BinarySeq& b) { return precedes(a, b); });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) throw DomainError("duplicate shifts in " + s.str());

    o.points.assign(1, BinarySeq());
    o.points.insert(o.points.end(), sorted.begin(), sorted.end());
    if (o.points.back() != s) throw InternalError("top orbit point differs from s for " + s.str());

    o.succ.assign(static_cast<std::size_t>(o.N) + 1, 0);
    for (int j = 1; j <= o.N; ++j) {
        int t = o.index_of(shift(o.points[static_cast<std::size_t>(j)]));
        if (t == 0) throw InternalError("shift leaves the orbit for " + s.str());
        o.succ[static_cast<std::size_t>(j)] = t;
    }

    std::vector<int> indeg(static_cast<std::size_t>(o.N) + 1, 0);
    for (int j = 1; j <= o.N; ++j) ++indeg[static_cast<std::size_t>(o.succ[static_cast<std::size_t>(j)])];
    if (o.periodic) {
        for (int j = 1; j <= o.N; ++j)
            if (o.succ[static_cast<std::size_t>(j)] == o.N) o.c_point = j;
    } else {
        if (indeg[static_cast<std::size_t>(o.N)] != 0) throw InternalError("point N has a preimage in " + s.str());
        if (std::count(indeg.begin(), indeg.end(), 2) != 1)
            throw InternalError("expected exactly one doubly covered point in " + s.str());
        int zeros = 0;
        for (int j = 1; j <= o.N; ++j) zeros += o.symbol(j) == 0;
        for (int j = 1; j <= zeros; ++j)
            if (o.symbol(j) != 0) throw InternalError("orbit points not split by first symbol");
        if (zeros == 0 || zeros == o.N) throw DomainError("critical point not inside the orbit hull for " + s.str());
        o.c_gap = zeros;
    }
    return o;
}

StripCover strip_cover(const CriticalOrbit& o) {
    StripCover sc;
    sc.strips = o.N - 1;
    sc.cover.assign(static_cast<std::size_t>(o.N), {});
    sc.A.assign(static_cast<std::size_t>(std::max(sc.strips, 0)), std::vector<int>(static_cast<std::size_t>(std::max(sc.strips, 0)), 0));
    auto run = [](std::vector<int>& out, int from, int to) {
        // strips traversed walking from junction `from` to junction `to`
        if (from < to)
            for (int i = from; i < to; ++i) out.push_back(i);
        else
            for (int i = from - 1; i >= to; --i) out.push_back(i);
    };
    for (int j = 1; j <= sc.strips; ++j) {
        auto& path = sc.cover[static_cast<std::size_t>(j)];
        int a = o.succ[static_cast<std::size_t>(j)], b = o.succ[static_cast<std::size_t>(j) + 1];
        if (!o.periodic && j == o.c_gap) {
            sc.fold_strip = j;
            run(path, a, o.N);
            run(path, o.N, b);
        } else {
            run(path, a, b);
        }
        for (int i : path) ++sc.A[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1];
    }
    return sc;
}

bool mia_check(const std::vector<std::vector<int>>& A) {
    const std::size_t n = A.size();
    if (n == 0) return false;
    using Bool = std::vector<std::vector<char>>;
    Bool base(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) base[i][j] = A[i][j] > 0;
    Bool p = base;
    const std::size_t bound = n * n + 1;
    for (std::size_t k = 1; k <= bound; ++k) {
        bool all = true;
        for (std::size_t i = 0; i < n && all; ++i)
            for (std::size_t j = 0; j < n && all; ++j) all = p[i][j];
        if (all) return true;
        Bool next(n, std::vector<char>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m = 0; m < n; ++m)
                if (p[i][m])
                    for (std::size_t j = 0; j < n; ++j) next[i][j] |= base[m][j];
        p = std::move(next);
    }
    return false;
}

}  // namespace gpa
