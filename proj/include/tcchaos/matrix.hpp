// matrix.hpp — write-once real symmetric sparse matrix, upper triangle in
// coordinate-list form.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcc {

struct SymmetricSparseMatrix {
    struct Entry {
        std::size_t row, col;  // row <= col
        double value;
    };

    std::size_t dim = 0;
    std::vector<Entry> entries;  // sorted (row, col), unique
    std::string params_snapshot;
    std::uint64_t basis_checksum = 0;

    double trace() const {
        double t = 0.0;
        for (const auto& e : entries)
            if (e.row == e.col) t += e.value;
        return t;
    }

    // Max-norm of the stored entries; cheap scale estimate for residual checks.
    double max_abs() const {
        double m = 0.0;
        for (const auto& e : entries) m = std::max(m, std::abs(e.value));
        return m;
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
        for (const auto& e : entries) {
            M(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
            M(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) = e.value;
        }
        return M;
    }

    void dump_coordinate(std::ostream& os) const {
        os << "# " << params_snapshot << "\n";
        os << "# dim " << dim << " nnz_upper " << entries.size() << "\n";
        for (const auto& e : entries)
            os << e.row << " " << e.col << " " << e.value << "\n";
    }
};

// Accumulates (row, col, value) contributions, folding everything onto the
// upper triangle, then freezes into a SymmetricSparseMatrix.
class SparseAccumulator {
  public:
    explicit SparseAccumulator(std::size_t dim) : dim_(dim) {}

    void add(std::size_t row, std::size_t col, double value) {
        if (row >= dim_ || col >= dim_)
            throw std::out_of_range("SparseAccumulator: index out of range");
        if (row > col) std::swap(row, col);
        map_[{row, col}] += value;
    }

    SymmetricSparseMatrix finalize(std::string snapshot = {},
                                   std::uint64_t checksum = 0,
                                   double drop_tol = 0.0) const {
        SymmetricSparseMatrix m;
        m.dim = dim_;
        m.params_snapshot = std::move(snapshot);
        m.basis_checksum = checksum;
        m.entries.reserve(map_.size());
        for (const auto& [rc, v] : map_) {
            if (!std::isfinite(v))
                throw std::runtime_error("SparseAccumulator: non-finite matrix entry");
            if (std::abs(v) <= drop_tol) continue;
            m.entries.push_back({rc.first, rc.second, v});
        }
        return m;
    }

  private:
    std::size_t dim_;
    std::map<std::pair<std::size_t, std::size_t>, double> map_;
};

}  // namespace tcc
