#include "pas/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace pas {

std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b, SolveInfo* info) {
    const int n = a.n;
    if (static_cast<int>(b.size()) != n) throw std::runtime_error("solve_dense: size mismatch");

    double min_pivot = 0.0, max_pivot = 0.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[static_cast<size_t>(pivot)], b[static_cast<size_t>(col)]);
        }
        if (col == 0) {
            min_pivot = max_pivot = best;
        } else {
            min_pivot = std::min(min_pivot, best);
            max_pivot = std::max(max_pivot, best);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<size_t>(r)];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(r)] = s / a(r, r);
    }
    if (info) {
        info->min_pivot = min_pivot;
        info->max_pivot = max_pivot;
    }
    return x;
}

} // namespace pas
