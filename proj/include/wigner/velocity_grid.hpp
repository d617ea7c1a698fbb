#ifndef WIGNER_VELOCITY_GRID_HPP
#define WIGNER_VELOCITY_GRID_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wigner/error.hpp"

namespace wigner {

/// Truncated discrete velocity lattice v_i = i*kappa + shift, i in [i_min, i_max].
///
/// Vectors over the grid are stored by position p = i - i_min, so position 0
/// is the most negative velocity. The shift lies strictly inside (0, kappa),
/// which keeps zero out of the lattice.
class VelocityGrid {
public:
    /// Build the grid for truncation parameter M.
    ///
    /// With `symmetric` set and shift == kappa/2 the index range is
    /// [-M, M-1], which makes the velocity set closed under v -> -v.
    /// Otherwise the range is [-M, M].
    static VelocityGrid build(double kappa, double shift, int M, bool symmetric)
    {
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw InvalidArgument("velocity grid: kappa must be positive and finite");
        if (!(shift > 0.0) || !(shift < kappa))
            throw InvalidArgument("velocity grid: shift s must satisfy 0 < s < kappa");
        if (M < 1)
            throw InvalidArgument("velocity grid: truncation M must be >= 1");
        const bool half_shift =
            std::abs(shift - 0.5 * kappa) <= 4.0 * std::numeric_limits<double>::epsilon() * kappa;
        const int upper = (symmetric && half_shift) ? M - 1 : M;
        return VelocityGrid(kappa, shift, -M, upper);
    }

    /// Explicit index range. Both signs must be present: i_min <= -1 and i_max >= 0.
    static VelocityGrid with_range(double kappa, double shift, int i_min, int i_max)
    {
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw InvalidArgument("velocity grid: kappa must be positive and finite");
        if (!(shift > 0.0) || !(shift < kappa))
            throw InvalidArgument("velocity grid: shift s must satisfy 0 < s < kappa");
        if (!(i_min < 0 && i_max >= 0))
            throw InvalidArgument("velocity grid: index range must contain -1 and 0");
        return VelocityGrid(kappa, shift, i_min, i_max);
    }

    double kappa() const noexcept { return kappa_; }
    double shift() const noexcept { return shift_; }
    int i_min() const noexcept { return i_min_; }
    int i_max() const noexcept { return i_max_; }
    Eigen::Index size() const noexcept { return i_max_ - i_min_ + 1; }

    int index_at(Eigen::Index pos) const noexcept { return i_min_ + static_cast<int>(pos); }
    Eigen::Index position_of(int index) const noexcept { return index - i_min_; }
    bool contains(int index) const noexcept { return index >= i_min_ && index <= i_max_; }

    double velocity(Eigen::Index pos) const noexcept { return index_at(pos) * kappa_ + shift_; }

    Eigen::VectorXd velocities() const
    {
        Eigen::VectorXd v(size());
        for (Eigen::Index p = 0; p < size(); ++p) v[p] = velocity(p);
        return v;
    }

    // v_i < 0 exactly when i < 0, because 0 < s < kappa.
    Eigen::Index negative_count() const noexcept { return -i_min_; }
    Eigen::Index positive_count() const noexcept { return i_max_ + 1; }
    bool is_positive(Eigen::Index pos) const noexcept { return index_at(pos) >= 0; }

    /// Smallest |v| over the untruncated lattice, min(s, kappa - s).
    double min_abs_velocity() const noexcept { return std::min(shift_, kappa_ - shift_); }

    bool operator==(const VelocityGrid&) const = default;

private:
    VelocityGrid(double kappa, double shift, int i_min, int i_max)
        : kappa_(kappa), shift_(shift), i_min_(i_min), i_max_(i_max) {}

    double kappa_;
    double shift_;
    int i_min_;
    int i_max_;
};

}  // namespace wigner

#endif  // WIGNER_VELOCITY_GRID_HPP
