#pragma once

#include <vector>

namespace wvres {

/// Uniform truncation of the Fourier axis: N nodes covering [-L, L].
///
/// Dirichlet conditions are imposed at the ghost nodes -L - dxi and L + dxi,
/// so every node carries the same trapezoid weight dxi.
class GridSpec {
public:
    static constexpr int kMinPoints = 16;

    GridSpec(double half_width, int points);

    double half_width() const { return L_; }
    int size() const { return N_; }
    double spacing() const { return dxi_; }

    double node(int i) const { return -L_ + i * dxi_; }
    std::vector<double> nodes() const;

    /// Same interval with 2N - 1 nodes; every old node is a node of the result.
    GridSpec refined() const { return GridSpec(L_, 2 * N_ - 1); }

private:
    double L_;
    int N_;
    double dxi_;
};

}  // namespace wvres
