#include "gpa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "gpa/errors.hpp"

namespace gpa {

namespace {

void check_square(const IntMatrix& A) {
    if (A.empty()) throw DomainError("empty transition matrix");
    for (const auto& row : A)
        if (row.size() != A.size()) throw DomainError("transition matrix is not square");
}

long double eval(const std::vector<BigInt>& p, long double x) {
    long double v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + it->convert_to<long double>();
    return v;
}

Eigen::MatrixXd to_eigen(const IntMatrix& A) {
    const auto n = static_cast<Eigen::Index>(A.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return M;
}

struct PowerResult {
    Eigen::VectorXd v;
    double lambda = 0;
    int iterations = 0;
    bool converged = false;
};

PowerResult power_iterate(const Eigen::MatrixXd& M, double tol) {
    constexpr int kMaxIterations = 100000;
    PowerResult r;
    r.v = Eigen::VectorXd::Ones(M.rows());
    r.v /= r.v.norm();
    for (r.iterations = 1; r.iterations <= kMaxIterations; ++r.iterations) {
        Eigen::VectorXd w = M * r.v;
        r.lambda = r.v.dot(w);
        double res = (w - r.lambda * r.v).lpNorm<Eigen::Infinity>();
        r.v = w / w.norm();
        if (res <= tol * r.lambda) {
            r.converged = true;
            break;
        }
    }
    return r;
}

Eigen::VectorXd inverse_iterate(const Eigen::MatrixXd& M, double lambda) {
    const auto n = M.rows();
    Eigen::MatrixXd S = M - (lambda * (1 + 1e-10)) * Eigen::MatrixXd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < 50; ++i) {
        v = lu.solve(v);
        v /= v.norm();
    }
    return v;
}

}  // namespace

std::vector<BigInt> characteristic_polynomial(const IntMatrix& A) {
    check_square(A);
    const std::size_t n = A.size();
    using BM = std::vector<std::vector<BigInt>>;
    BM a(n, std::vector<BigInt>(n)), m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = A[i][j];
    std::vector<BigInt> c(n + 1, 0);
    c[n] = 1;
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
    for (std::size_t k = 1; k <= n; ++k) {
        BM am(n, std::vector<BigInt>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (a[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) am[i][j] += a[i][l] * m[l][j];
            }
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        m = std::move(am);
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
        c[n - k] = -tr / static_cast<long long>(k);
    }
    return c;
}

double largest_real_root(const std::vector<BigInt>& p) {
    if (p.size() < 2) throw DomainError("polynomial has no roots");
    // Cauchy bound on root moduli.
    long double lead = p.back().convert_to<long double>();
    long double bound = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        bound = std::max(bound, std::fabs(p[i].convert_to<long double>() / lead));
    long double hi = 1 + bound, lo = -hi;
    const int steps = 20000;
    long double h = (hi - lo) / steps;
    long double x = hi;
    long double fx = eval(p, x);
    for (int i = 0; i < steps; ++i) {
        long double y = x - h;
        long double fy = eval(p, y);
        if (fy == 0) return static_cast<double>(y);
        if ((fx > 0) != (fy > 0)) {
            long double a = y, b = x, fa = fy;
            for (int it = 0; it < 200 && b - a > 0; ++it) {
                long double mid = (a + b) / 2;
                if (mid == a || mid == b) break;
                long double fm = eval(p, mid);
                if ((fm > 0) == (fa > 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return static_cast<double>((a + b) / 2);
        }
        x = y;
        fx = fy;
    }
    throw DomainError("polynomial has no real root");
}

PerronData perron(const IntMatrix& A, double tol, Normalization norm) {
    check_square(A);
    if (!mia_check(A)) throw DomainError("transition matrix is not irreducible and aperiodic");
    const Eigen::MatrixXd M = to_eigen(A);
    PerronData d;
    PowerResult ry = power_iterate(M, tol);
    PowerResult rx = power_iterate(M.transpose(), tol);
    d.iterations = std::max(ry.iterations, rx.iterations);
    Eigen::VectorXd y = ry.v, x = rx.v;
    d.lambda = ry.lambda;
    const bool small = A.size() <= 8;
    if (!ry.converged || !rx.converged || small) {
        double root = largest_real_root(characteristic_polynomial(A));
        if (!ry.converged || !rx.converged) {
            d.fallback = true;
            d.lambda = root;
            y = inverse_iterate(M, root);
            x = inverse_iterate(M.transpose(), root);
        } else if (std::fabs(root - d.lambda) > 1e-8 * d.lambda) {
            throw InternalError("power iteration and characteristic polynomial disagree on the Perron root");
        }
    }
    if (!d.fallback) {
        // Polish to machine precision with shifted inverse iteration.
        y = inverse_iterate(M, d.lambda);
        x = inverse_iterate(M.transpose(), d.lambda);
        y = y.cwiseAbs();
        d.lambda = y.dot(M * y) / y.dot(y);
    }
    y = y.cwiseAbs();
    x = x.cwiseAbs();
    if (norm == Normalization::standard) {
        x /= x.norm();
        y /= x.dot(y);
    } else {
        x /= x.sum();
        y /= y.sum();
    }
    d.residual_y = (M * y - d.lambda * y).lpNorm<Eigen::Infinity>();
    d.residual_x = (M.transpose() * x - d.lambda * x).lpNorm<Eigen::Infinity>();
    d.X.assign(x.data(), x.data() + x.size());
    d.Y.assign(y.data(), y.data() + y.size());
    if (std::min(x.minCoeff(), y.minCoeff()) <= 0) throw InternalError("Perron eigenvector is not positive");
    return d;
}

PerronData perron(const StripCover& cover, double tol, Normalization norm) { return perron(cover.A, tol, norm); }

int default_depth(double lambda) {
    if (!(lambda > 1)) throw DomainError("growth rate must exceed 1");
    return static_cast<int>(std::floor(12 * std::log(10.0) / std::log(lambda))) + 1;
}

HeightExtension extend_heights(const TrainTrack& tr, const std::vector<double>& Y, double lambda, int depth) {
    if (!(lambda > 1)) throw DomainError("growth rate must exceed 1");
    if (depth < 0 || depth > tr.depth)
        throw DomainError("depth " + std::to_string(depth) + " exceeds track truncation " + std::to_string(tr.depth));
    if (Y.size() + 1 != static_cast<std::size_t>(tr.orbit.N)) throw DomainError("height vector size mismatch");

    std::map<int, double> by;  // B Y
    for (std::size_t j = 1; j < tr.b_rows.size(); ++j)
        for (auto [id, cnt] : tr.b_rows[j]) by[id] += cnt * Y[j - 1];
    double by_norm = 0;
    for (auto& [id, w] : by) by_norm += w;

    HeightExtension ext;
    for (const InfEdge& e : tr.inf_edges) ext.Yp[e.id] = 0;

    const bool closed = !tr.inf_edges.empty() && std::all_of(tr.inf_edges.begin(), tr.inf_edges.end(),
                                                             [&](const InfEdge& e) { return tr.pi_map.count(e.id); });
    if (closed) {
        // Finite invariant track: (lambda I - Pi) Y' = B Y.
        std::map<int, Eigen::Index> idx;
        for (const InfEdge& e : tr.inf_edges) idx.emplace(e.id, static_cast<Eigen::Index>(idx.size()));
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd S = lambda * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (auto [from, to] : tr.pi_map) S(idx.at(to), idx.at(from)) -= 1;
        for (auto [id, w] : by) rhs(idx.at(id)) = w;
        Eigen::VectorXd sol = S.partialPivLu().solve(rhs);
        for (auto [id, i] : idx) ext.Yp[id] = sol(i);
        ext.exact = true;
        ext.tail_bound = 0;
        return ext;
    }

    std::map<int, double> v = by;
    double scale = 1 / lambda;
    for (int k = 0; k < depth && !v.empty(); ++k) {
        std::map<int, double> next;
        for (auto [id, w] : v) {
            ext.Yp[id] += w * scale;
            auto it = tr.pi_map.find(id);
            if (it != tr.pi_map.end()) next[it->second] += w;
        }
        v = std::move(next);
        scale /= lambda;
    }
    ext.tail_bound = by_norm * std::pow(lambda, -depth) / (lambda - 1);
    return ext;
}

ResidualReport switch_residuals(const TrainTrack& tr, const std::vector<double>& Y, const std::map<int, double>& Yp) {
    const int N = tr.orbit.N;
    if (Y.size() + 1 != static_cast<std::size_t>(N)) throw DomainError("height vector size mismatch");
    ResidualReport rep;
    for (int t = 1; t <= N; ++t) {
        for (int s = 0; s < 2; ++s) {
            int strip = s == 0 ? t - 1 : t;  // L switch meets strip t-1, R switch strip t
            if (strip < 1 || strip > N - 1) continue;
            SwitchResidual sr;
            sr.junction = t;
            sr.side = static_cast<Side>(s);
            sr.real = Y[static_cast<std::size_t>(strip - 1)];
            for (int x : tr.junctions[static_cast<std::size_t>(t)].side[s]) {
                if (x == kPuncture) continue;
                auto it = Yp.find(x);
                if (it == Yp.end()) throw DomainError("missing weight for edge " + std::to_string(x));
                sr.infinitesimal += it->second;
            }
            sr.residual = std::fabs(sr.real - sr.infinitesimal);
            rep.max_residual = std::max(rep.max_residual, sr.residual);
            rep.switches.push_back(sr);
        }
    }
    return rep;
}

SpectralData spectral_data(const TrainTrack& track, const StripCover& cover, int depth, double tol, Normalization norm) {
    PerronData p = perron(cover, tol, norm);
    HeightExtension ext = extend_heights(track, p.Y, p.lambda, depth);
    SpectralData d;
    d.lambda = p.lambda;
    d.X = p.X;
    d.Y = p.Y;
    d.Yp = ext.Yp;
    d.tail_bound = ext.tail_bound;
    d.exact = ext.exact;
    d.switch_residual = switch_residuals(track, p.Y, ext.Yp).max_residual;
    return d;
}

}  // namespace gpa
