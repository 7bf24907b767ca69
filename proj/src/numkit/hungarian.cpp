#include "divlab/numkit/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace divlab::numkit {

namespace {

void check_entry(double v) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        raise(ErrorKind::DomainError, "CostMatrix entry " + std::to_string(v) + " outside [0, 1]");
}

} // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0)
        raise(ErrorKind::DomainError, "CostMatrix: empty matrix");
    check_entry(fill);
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
        raise(ErrorKind::DomainError, "CostMatrix: empty matrix");
    CostMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_)
            raise(ErrorKind::LengthMismatch, "CostMatrix: ragged row " + std::to_string(i));
        for (std::size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

void CostMatrix::set(std::size_t i, std::size_t j, double v) {
    check_entry(v);
    data_[i * cols_ + j] = v;
}

// Kuhn-Munkres with potentials on a zero-padded square, minimizing the
// negated scores. 1-indexed work arrays, column 0 is the virtual start.
Matching hungarian_max(const CostMatrix& m) {
    const std::size_t n = m.rows(), mm = m.cols();
    const std::size_t N = std::max(n, mm);
    const double inf = std::numeric_limits<double>::infinity();

    auto cost = [&](std::size_t i, std::size_t j) -> double {
        return (i < n && j < mm) ? -m.at(i, j) : 0.0;
    };

    std::vector<double> u(N + 1, 0.0), v(N + 1, 0.0);
    std::vector<std::size_t> p(N + 1, 0), way(N + 1, 0);
    for (std::size_t i = 1; i <= N; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(N + 1, inf);
        std::vector<char> used(N + 1, 0);
        do {
            used[j0] = 1;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= N; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= N; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    // p[j] = row assigned to column j (both 1-indexed). Keep real/real pairs.
    std::vector<char> row_used(n, 0), col_used(mm, 0);
    Matching out;
    for (std::size_t j = 1; j <= N; ++j) {
        std::size_t i = p[j];
        if (i >= 1 && i <= n && j <= mm) {
            out.pairs.emplace_back(i - 1, j - 1);
            row_used[i - 1] = 1;
            col_used[j - 1] = 1;
        }
    }
    // Rows/cols the solver parked on padding pair up at zero-score entries
    // (anything positive would contradict optimality), which keeps the
    // matching at full size min(n, m).
    std::vector<std::size_t> free_rows, free_cols;
    for (std::size_t i = 0; i < n; ++i)
        if (!row_used[i]) free_rows.push_back(i);
    for (std::size_t j = 0; j < mm; ++j)
        if (!col_used[j]) free_cols.push_back(j);
    for (std::size_t k = 0; k < std::min(free_rows.size(), free_cols.size()); ++k)
        out.pairs.emplace_back(free_rows[k], free_cols[k]);

    std::sort(out.pairs.begin(), out.pairs.end());
    out.total = 0.0;
    for (auto [i, j] : out.pairs) out.total += m.at(i, j);
    return out;
}

} // namespace divlab::numkit
