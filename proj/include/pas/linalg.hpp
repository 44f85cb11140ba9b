#pragma once

#include <vector>

namespace pas {

/// Row-major dense square matrix helper for the two linear systems the solvers
/// need (policy evaluation and the LSTD normal equations).
struct DenseMatrix {
    int n = 0;
    std::vector<double> a;  // n * n, row major

    DenseMatrix() = default;
    explicit DenseMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
    double& operator()(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
    double operator()(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += (*this)(i, i);
        return t;
    }
};

struct SolveInfo {
    double min_pivot = 0.0;
    double max_pivot = 0.0;
    /// min/max pivot magnitude ratio; a crude conditioning signal.
    double pivot_ratio() const { return max_pivot > 0.0 ? min_pivot / max_pivot : 0.0; }
};

/// LU with partial pivoting; destroys its inputs. Throws std::runtime_error on
/// a (numerically) singular matrix.
std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b, SolveInfo* info = nullptr);

} // namespace pas
