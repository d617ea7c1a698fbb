#ifndef WIGNER_KINETIC_SYSTEM_HPP
#define WIGNER_KINETIC_SYSTEM_HPP

#include <Eigen/Core>

#include <cmath>
#include <map>
#include <string>

#include "wigner/error.hpp"
#include "wigner/potential.hpp"
#include "wigner/velocity_grid.hpp"

namespace wigner {

inline VelocityGrid build_velocity_grid(double kappa, double shift, int M, bool symmetric)
{
    return VelocityGrid::build(kappa, shift, M, symmetric);
}

/// Uniform mesh on [-l/2, l/2] with an even number of cells.
///
/// Node j sits at (2j - Nx) * (l / (2 Nx)), which equals -l/2 + j*dx and makes
/// node Nx - j the exact negation of node j.
class SpatialMesh {
public:
    SpatialMesh(double period_l, int cells) : length_(period_l), cells_(cells)
    {
        if (!(period_l > 0.0) || !std::isfinite(period_l))
            throw InvalidArgument("mesh: length must be positive and finite");
        if (cells < 2 || cells % 2 != 0)
            throw InvalidArgument("mesh: Nx must be an even integer >= 2, got " + std::to_string(cells));
        dx_ = length_ / cells_;
        half_step_ = length_ / (2.0 * cells_);
    }

    double length() const noexcept { return length_; }
    int cells() const noexcept { return cells_; }
    Eigen::Index nodes() const noexcept { return cells_ + 1; }
    double dx() const noexcept { return dx_; }

    double node(Eigen::Index j) const noexcept
    {
        if (j == 0) return -0.5 * length_;
        if (j == cells_) return 0.5 * length_;
        return static_cast<double>(2 * j - cells_) * half_step_;
    }

    Eigen::VectorXd node_positions() const
    {
        Eigen::VectorXd x(nodes());
        for (Eigen::Index j = 0; j < nodes(); ++j) x[j] = node(j);
        return x;
    }

    Eigen::Index mirror(Eigen::Index j) const noexcept { return cells_ - j; }

    bool operator==(const SpatialMesh&) const = default;

private:
    double length_;
    int cells_;
    double dx_;
    double half_step_;
};

inline SpatialMesh build_mesh(double period_l, int cells) { return SpatialMesh(period_l, cells); }

/// Inflow data, one value per grid position. Positions with v > 0 are
/// prescribed at the left contact, positions with v < 0 at the right one.
class BoundaryData {
public:
    BoundaryData(const VelocityGrid& grid, Eigen::VectorXd values) : grid_(grid), values_(std::move(values))
    {
        if (values_.size() != grid_.size())
            throw InvalidArgument("boundary: value count does not match the velocity grid");
        for (Eigen::Index p = 0; p < values_.size(); ++p)
            if (!std::isfinite(values_[p]) || values_[p] < 0.0)
                throw InvalidArgument("boundary: inflow value at index " + std::to_string(grid_.index_at(p)) +
                                      " must be finite and nonnegative");
    }

    const VelocityGrid& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    double operator[](Eigen::Index pos) const noexcept { return values_[pos]; }

    /// Values for v > 0, in increasing velocity order.
    auto left_inflow() const { return values_.tail(grid_.positive_count()); }
    /// Values for v < 0, in increasing velocity order.
    auto right_inflow() const { return values_.head(grid_.negative_count()); }

    bool is_zero() const { return (values_.array() == 0.0).all(); }

private:
    VelocityGrid grid_;
    Eigen::VectorXd values_;
};

/// Unit injection at lattice index i0 from the left contact.
inline BoundaryData mono_energetic_boundary(const VelocityGrid& grid, int i0)
{
    if (!grid.contains(i0))
        throw InvalidArgument("mono-energetic boundary: index " + std::to_string(i0) + " is outside the grid");
    if (!grid.is_positive(grid.position_of(i0)))
        throw InvalidArgument("mono-energetic boundary: v_" + std::to_string(i0) +
                              " < 0 cannot be injected from the left contact");
    Eigen::VectorXd values = Eigen::VectorXd::Zero(grid.size());
    values[grid.position_of(i0)] = 1.0;
    return BoundaryData(grid, std::move(values));
}

/// Arbitrary inflow profile keyed by lattice index. Unlisted entries are zero.
inline BoundaryData tabulated_boundary(const VelocityGrid& grid, const std::map<int, double>& table)
{
    Eigen::VectorXd values = Eigen::VectorXd::Zero(grid.size());
    for (const auto& [index, value] : table) {
        if (!grid.contains(index))
            throw InvalidArgument("tabulated boundary: index " + std::to_string(index) + " is outside the grid");
        values[grid.position_of(index)] = value;
    }
    return BoundaryData(grid, std::move(values));
}

enum class NormWeight { unit, velocity };

/// l2 norm with weight 1 (the H norm) or |v_i| (the H_v norm).
inline double weighted_norm(const VelocityGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& f,
                            NormWeight weight)
{
    if (f.size() != grid.size()) throw InvalidArgument("weighted_norm: vector does not match grid");
    if (weight == NormWeight::unit) return f.norm();
    double sum = 0.0;
    for (Eigen::Index p = 0; p < f.size(); ++p) sum += std::abs(grid.velocity(p)) * f[p] * f[p];
    return std::sqrt(sum);
}

/// The fully specified boundary value problem.
struct WignerSystem {
    FourierPotential potential;
    VelocityGrid grid;
    SpatialMesh mesh;
    BoundaryData boundary;

    WignerSystem(FourierPotential potential_, VelocityGrid grid_, SpatialMesh mesh_, BoundaryData boundary_)
        : potential(std::move(potential_)), grid(grid_), mesh(mesh_), boundary(std::move(boundary_))
    {
        if (grid.kappa() != potential.kappa())
            throw InvalidArgument("system: grid kappa differs from pi / period_l of the potential");
        if (mesh.length() != potential.period())
            throw InvalidArgument("system: mesh length differs from the potential period");
        if (!(boundary.grid() == grid))
            throw InvalidArgument("system: boundary data built on a different velocity grid");
    }

    /// Same system on a different mesh.
    WignerSystem with_cells(int cells) const { return {potential, grid, SpatialMesh(mesh.length(), cells), boundary}; }

    WignerSystem with_boundary(BoundaryData b) const { return {potential, grid, mesh, std::move(b)}; }
};

}  // namespace wigner

#endif  // WIGNER_KINETIC_SYSTEM_HPP
