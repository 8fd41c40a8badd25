#ifndef MSMFE_SPARSE_HPP
#define MSMFE_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "msmfe/dense.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/parallel.hpp"

namespace msmfe {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

    /// Builds from triplets; duplicates are summed in input order.
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t)
    {
        std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        CsrMatrix m(rows, cols);
        for (std::size_t i = 0; i < t.size();) {
            const std::size_t r = t[i].row;
            const std::size_t c = t[i].col;
            if (r >= rows || c >= cols) throw InvalidArgument("triplet index out of range");
            double v = 0.0;
            for (; i < t.size() && t[i].row == r && t[i].col == c; ++i) v += t[i].value;
            m.col_.push_back(c);
            m.val_.push_back(v);
            ++m.row_ptr_[r + 1];
        }
        for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
        return m;
    }

    /// Builds row by row; row_fn(r, entries) fills (col, value) pairs, duplicates are summed.
    template <class RowFn>
    static CsrMatrix from_rows(std::size_t rows, std::size_t cols, RowFn&& row_fn)
    {
        CsrMatrix m(rows, cols);
        std::vector<std::pair<std::size_t, double>> entries;
        for (std::size_t r = 0; r < rows; ++r) {
            entries.clear();
            row_fn(r, entries);
            std::stable_sort(entries.begin(), entries.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t i = 0; i < entries.size();) {
                const std::size_t c = entries[i].first;
                if (c >= cols) throw InvalidArgument("column index out of range");
                double v = 0.0;
                for (; i < entries.size() && entries[i].first == c; ++i) v += entries[i].second;
                m.col_.push_back(c);
                m.val_.push_back(v);
            }
            m.row_ptr_[r + 1] = m.col_.size();
        }
        return m;
    }

    /// Builds a matrix with the given sorted per-row column pattern and zero values.
    static CsrMatrix from_pattern(std::size_t rows, std::size_t cols, const std::vector<std::vector<std::size_t>>& pattern)
    {
        CsrMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] = m.row_ptr_[r] + pattern[r].size();
        m.col_.reserve(m.row_ptr_[rows]);
        for (const auto& p : pattern) m.col_.insert(m.col_.end(), p.begin(), p.end());
        m.val_.assign(m.col_.size(), 0.0);
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t nonzeros() const noexcept { return val_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
    [[nodiscard]] const std::vector<std::size_t>& col_index() const noexcept { return col_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return val_; }
    std::vector<double>& values() noexcept { return val_; }

    /// Position of (r, c) in the value array, or size_t(-1) if absent.
    [[nodiscard]] std::size_t find(std::size_t r, std::size_t c) const
    {
        const auto b = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
        const auto e = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
        const auto it = std::lower_bound(b, e, c);
        if (it == e || *it != c) return static_cast<std::size_t>(-1);
        return static_cast<std::size_t>(it - col_.begin());
    }

    /// Adds v at (r, c), which must be in the pattern.
    void add(std::size_t r, std::size_t c, double v)
    {
        const std::size_t p = find(r, c);
        if (p == static_cast<std::size_t>(-1)) throw SolverError("entry outside the sparse pattern");
        val_[p] += v;
    }

    [[nodiscard]] double at(std::size_t r, std::size_t c) const
    {
        const std::size_t p = find(r, c);
        return p == static_cast<std::size_t>(-1) ? 0.0 : val_[p];
    }

    void multiply(std::span<const double> x, std::span<double> y) const
    {
        parallel_for(0, rows_, [&](std::size_t r) {
            double s = 0.0;
            for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += val_[p] * x[col_[p]];
            y[r] = s;
        });
    }

    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const
    {
        std::vector<double> y(rows_, 0.0);
        multiply(x, y);
        return y;
    }

    [[nodiscard]] std::vector<double> diagonal() const
    {
        std::vector<double> d(std::min(rows_, cols_), 0.0);
        for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
        return d;
    }

    [[nodiscard]] CsrMatrix transposed() const
    {
        std::vector<Triplet> t;
        t.reserve(val_.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) t.push_back({col_[p], r, val_[p]});
        return from_triplets(cols_, rows_, std::move(t));
    }

    /// max |a_ij - a_ji| over the stored entries.
    [[nodiscard]] double max_asymmetry() const
    {
        double m = 0.0;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                m = std::max(m, std::abs(val_[p] - at(col_[p], r)));
        return m;
    }

    [[nodiscard]] double max_abs() const
    {
        double m = 0.0;
        for (double v : val_) m = std::max(m, std::abs(v));
        return m;
    }

    [[nodiscard]] DenseMatrix to_dense() const
    {
        DenseMatrix d(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) d(r, col_[p]) = val_[p];
        return d;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_;
    std::vector<double> val_;
};

}  // namespace msmfe

#endif  // MSMFE_SPARSE_HPP
