#ifndef WIGNER_BLOCK_TRIDIAGONAL_HPP
#define WIGNER_BLOCK_TRIDIAGONAL_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <string>
#include <vector>

#include "wigner/error.hpp"

namespace wigner {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Direct solver for sparse systems whose unknowns split into contiguous
/// groups such that the rows of group g only touch columns of groups g-1, g
/// and g+1.
///
/// Block LU without inter-block pivoting; each diagonal Schur complement is
/// factored with partial pivoting. The super-diagonal blocks are stored
/// compressed to their nonzero columns, which keeps memory at
/// O(groups * rows * nonzero-coupling-columns).
class BlockTridiagonalSolver {
public:
    /// `starts` holds the first unknown of each group plus a final end marker.
    /// The matrix is referenced, not copied, and must outlive the solver.
    BlockTridiagonalSolver(const SparseRowMatrix& matrix, std::vector<Eigen::Index> starts)
        : matrix_(matrix), starts_(std::move(starts))
    {
        if (matrix_.rows() != matrix_.cols())
            throw InvalidArgument("block solver: matrix must be square");
        if (starts_.size() < 2 || starts_.front() != 0 || starts_.back() != matrix_.rows())
            throw InvalidArgument("block solver: group starts must cover [0, n]");
        for (std::size_t g = 0; g + 1 < starts_.size(); ++g)
            if (starts_[g + 1] <= starts_[g]) throw InvalidArgument("block solver: empty group");
        check_structure();
    }

    Eigen::Index groups() const noexcept { return static_cast<Eigen::Index>(starts_.size()) - 1; }

    /// One full forward/backward sweep. Throws SolverFailure if a diagonal
    /// Schur complement is numerically singular.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const
    {
        if (rhs.size() != matrix_.rows()) throw InvalidArgument("block solver: rhs length mismatch");
        const Eigen::Index count = groups();
        std::vector<Eigen::VectorXd> partial(count);
        std::vector<Eigen::MatrixXd> upper(count);           // D~_g^{-1} U_g, nonzero columns only
        std::vector<std::vector<Eigen::Index>> upper_cols(count);  // local column indices in group g+1

        for (Eigen::Index g = 0; g < count; ++g) {
            const Eigen::Index r0 = starts_[g], n = size(g);
            Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(n, n);
            Eigen::VectorXd b = rhs.segment(r0, n);

            std::vector<Eigen::Triplet<double>> lower_entries;
            std::vector<Eigen::Triplet<double>> upper_entries;
            std::vector<char> used(g + 1 < count ? size(g + 1) : 0, 0);
            for (Eigen::Index r = 0; r < n; ++r) {
                for (SparseRowMatrix::InnerIterator it(matrix_, r0 + r); it; ++it) {
                    const Eigen::Index c = it.col();
                    if (c < r0) {
                        lower_entries.emplace_back(r, c - starts_[g - 1], it.value());
                    } else if (c < r0 + n) {
                        diag(r, c - r0) += it.value();
                    } else {
                        const Eigen::Index local = c - starts_[g + 1];
                        used[local] = 1;
                        upper_entries.emplace_back(r, local, it.value());
                    }
                }
            }

            if (g > 0) {
                SparseRowMatrix lower(n, size(g - 1));
                lower.setFromTriplets(lower_entries.begin(), lower_entries.end());
                const Eigen::MatrixXd fill = lower * upper[g - 1];
                const auto& cols = upper_cols[g - 1];
                for (std::size_t k = 0; k < cols.size(); ++k) diag.col(cols[k]) -= fill.col(k);
                b -= lower * partial[g - 1];
            }

            Eigen::PartialPivLU<Eigen::MatrixXd> lu(diag);
            const double rcond = lu.rcond();
            if (!(rcond > 1e-15) || !std::isfinite(rcond))
                throw SolverFailure("block solver: singular diagonal block in group " + std::to_string(g), rcond);
            partial[g] = lu.solve(b);

            if (g + 1 < count) {
                std::vector<Eigen::Index> map(used.size(), -1);
                auto& cols = upper_cols[g];
                for (std::size_t c = 0; c < used.size(); ++c)
                    if (used[c]) {
                        map[c] = static_cast<Eigen::Index>(cols.size());
                        cols.push_back(static_cast<Eigen::Index>(c));
                    }
                Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(cols.size()));
                for (const auto& t : upper_entries) coupling(t.row(), map[t.col()]) += t.value();
                upper[g] = lu.solve(coupling);
            }
        }

        Eigen::VectorXd x(rhs.size());
        x.segment(starts_[count - 1], size(count - 1)) = partial[count - 1];
        for (Eigen::Index g = count - 2; g >= 0; --g) {
            const auto& cols = upper_cols[g];
            Eigen::VectorXd next(static_cast<Eigen::Index>(cols.size()));
            for (std::size_t k = 0; k < cols.size(); ++k) next[k] = x[starts_[g + 1] + cols[k]];
            x.segment(starts_[g], size(g)) = partial[g] - upper[g] * next;
        }
        return x;
    }

private:
    Eigen::Index size(Eigen::Index g) const noexcept { return starts_[g + 1] - starts_[g]; }

    void check_structure() const
    {
        for (Eigen::Index g = 0; g < groups(); ++g) {
            const Eigen::Index lo = g > 0 ? starts_[g - 1] : 0;
            const Eigen::Index hi = g + 2 < static_cast<Eigen::Index>(starts_.size()) ? starts_[g + 2] : starts_[g + 1];
            for (Eigen::Index r = starts_[g]; r < starts_[g + 1]; ++r)
                for (SparseRowMatrix::InnerIterator it(matrix_, r); it; ++it)
                    if (it.col() < lo || it.col() >= hi)
                        throw InvalidArgument("block solver: row " + std::to_string(r) +
                                              " reaches beyond the neighbouring groups");
        }
    }

    const SparseRowMatrix& matrix_;
    std::vector<Eigen::Index> starts_;
};

}  // namespace wigner

#endif  // WIGNER_BLOCK_TRIDIAGONAL_HPP
