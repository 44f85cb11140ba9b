#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace pas {

/// Dense row-major matrix with value semantics. Used for ward-by-type counts
/// and rates; kept deliberately small (no expression templates, no views).
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

    T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    std::span<const T> flat() const { return data_; }
    std::span<T> flat() { return data_; }

    T sum() const { return std::accumulate(data_.begin(), data_.end(), T{}); }
    T row_sum(int r) const {
        T s{};
        for (int c = 0; c < cols_; ++c) s += (*this)(r, c);
        return s;
    }

    bool operator==(const Grid&) const = default;
    auto operator<=>(const Grid&) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

/// K x K x I tensor for transfer counts/costs, indexed (from-ward, to-ward, type).
template <typename T>
class Cube {
public:
    Cube() = default;
    Cube(int wards, int types, T fill = T{})
        : wards_(wards), types_(types),
          data_(static_cast<size_t>(wards) * wards * types, fill) {}

    T& operator()(int k, int l, int i) {
        return data_[(static_cast<size_t>(k) * wards_ + l) * types_ + i];
    }
    const T& operator()(int k, int l, int i) const {
        return data_[(static_cast<size_t>(k) * wards_ + l) * types_ + i];
    }

    int wards() const { return wards_; }
    int types() const { return types_; }
    std::span<const T> flat() const { return data_; }

    T sum() const { return std::accumulate(data_.begin(), data_.end(), T{}); }

    bool operator==(const Cube&) const = default;

private:
    int wards_ = 0, types_ = 0;
    std::vector<T> data_;
};

} // namespace pas
