#pragma once

#include <map>
#include <vector>

#include "gpa/height.hpp"
#include "gpa/orbit.hpp"
#include "gpa/traintrack.hpp"

namespace gpa {

using IntMatrix = std::vector<std::vector<int>>;

// standard: ||X||_2 = 1 and sum x_i y_i = 1. unit_sum: sum X = 1 and sum Y = 1.
enum class Normalization { standard, unit_sum };

struct PerronData {
    double lambda = 0;
    std::vector<double> X;  // left eigenvector (A^T X = lambda X), strip j at index j-1
    std::vector<double> Y;  // right eigenvector (A Y = lambda Y)
    int iterations = 0;
    bool fallback = false;  // lambda taken from the characteristic polynomial
    double residual_x = 0;  // ||A^T X - lambda X||_inf
    double residual_y = 0;  // ||A Y - lambda Y||_inf
};

// Coefficients c[0..n] of det(xI - A), lowest degree first.
std::vector<BigInt> characteristic_polynomial(const IntMatrix& A);
// Largest real root of a polynomial with a simple dominant root, by bracketing and bisection.
double largest_real_root(const std::vector<BigInt>& poly);

PerronData perron(const IntMatrix& A, double tol = 1e-12, Normalization norm = Normalization::standard);
PerronData perron(const StripCover& cover, double tol = 1e-12, Normalization norm = Normalization::standard);

// Smallest d with lambda^-d < 1e-12.
int default_depth(double lambda);

struct HeightExtension {
    std::map<int, double> Yp;  // inf_edge id -> weight
    double tail_bound = 0;
    bool exact = false;        // closed finite track: solved exactly, no tail
};

// Y' = (1/lambda) sum_k Pi^k B Y / lambda^k through Pi^(depth-1).
HeightExtension extend_heights(const TrainTrack& track, const std::vector<double>& Y, double lambda, int depth);

struct SwitchResidual {
    int junction = 0;
    Side side = Side::L;
    double real = 0;          // height of the real edge at the switch
    double infinitesimal = 0; // sum of end weights (loops twice)
    double residual = 0;
};

struct ResidualReport {
    double max_residual = 0;
    std::vector<SwitchResidual> switches;
};

ResidualReport switch_residuals(const TrainTrack& track, const std::vector<double>& Y,
                                const std::map<int, double>& Yp);

struct SpectralData {
    double lambda = 0;
    std::vector<double> X, Y;
    std::map<int, double> Yp;
    double tail_bound = 0;
    bool exact = false;
    double switch_residual = 0;
};

SpectralData spectral_data(const TrainTrack& track, const StripCover& cover, int depth, double tol = 1e-12,
                           Normalization norm = Normalization::standard);

}  // namespace gpa
