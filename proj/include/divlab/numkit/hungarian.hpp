#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "divlab/error.hpp"

namespace divlab::numkit {

// Rectangular score matrix for assignment problems. Entries live in [0, 1]
// (similarity scores); the bound is enforced on every write.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, double v);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

struct Matching {
    // (row, col), sorted by row; always exactly min(rows, cols) pairs.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double total = 0.0;
};

// Maximum-total-weight assignment, O(max(n,m)^3).
Matching hungarian_max(const CostMatrix& m);

} // namespace divlab::numkit
