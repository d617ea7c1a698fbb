#ifndef WIGNER_POTENTIAL_HPP
#define WIGNER_POTENTIAL_HPP

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "wigner/error.hpp"
#include "wigner/velocity_grid.hpp"

namespace wigner {

/// Periodic even potential V(x) = a_0 + sum_{n>=1} a_n cos(2 n kappa x),
/// kappa = pi / l. Immutable once constructed.
class FourierPotential {
public:
    FourierPotential(double period_l, std::vector<double> coeffs)
        : period_l_(period_l), coeffs_(std::move(coeffs))
    {
        if (!(period_l_ > 0.0) || !std::isfinite(period_l_))
            throw InvalidArgument("potential: period_l must be positive and finite");
        if (coeffs_.empty())
            throw InvalidArgument("potential: coeffs must contain at least a_0");
        for (std::size_t n = 0; n < coeffs_.size(); ++n)
            if (!std::isfinite(coeffs_[n]))
                throw InvalidArgument("potential: coefficient a_" + std::to_string(n) + " is not finite");
        kappa_ = std::numbers::pi / period_l_;
    }

    double period() const noexcept { return period_l_; }
    double kappa() const noexcept { return kappa_; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Highest harmonic index N carried by the truncated series.
    int harmonics() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    double operator()(double x) const noexcept
    {
        double v = coeffs_[0];
        for (int n = 1; n <= harmonics(); ++n) v += coeffs_[n] * std::cos((2.0 * n * kappa_) * x);
        return v;
    }

    /// sin(2 n kappa x) weighted by a_n, for n = 1..N. Entry 0 is unused.
    /// The angle is formed as (2 n kappa) * x so that x and -x give exactly
    /// negated weights.
    std::vector<double> coupling_weights(double x) const
    {
        std::vector<double> w(coeffs_.size(), 0.0);
        for (int n = 1; n <= harmonics(); ++n) w[n] = coeffs_[n] * std::sin((2.0 * n * kappa_) * x);
        return w;
    }

    bool operator==(const FourierPotential&) const = default;

private:
    double period_l_;
    std::vector<double> coeffs_;
    double kappa_;
};

inline double eval_potential(const FourierPotential& p, double x) noexcept { return p(x); }

/// C = 2 sum_{n>=1} |a_n|. Bounds the l2 operator norm of A(x) for every x.
inline double coupling_bound(const FourierPotential& p) noexcept
{
    double c = 0.0;
    for (int n = 1; n <= p.harmonics(); ++n) c += std::abs(p.coeffs()[n]);
    return 2.0 * c;
}

namespace detail {

/// out += scale * A(x) * in, columnwise, with hard truncation at the grid ends.
/// Row k of A(x) f is sum_n a_n sin(2 n kappa x) (f_{k-n} - f_{k+n}).
template <typename In, typename Out>
void accumulate_coupling(const std::vector<double>& weights, const Eigen::MatrixBase<In>& in,
                         Eigen::MatrixBase<Out>& out, double scale = 1.0)
{
    const Eigen::Index rows = in.rows();
    for (std::size_t n = 1; n < weights.size(); ++n) {
        const Eigen::Index shift = static_cast<Eigen::Index>(n);
        if (shift >= rows || weights[n] == 0.0) continue;
        const double c = scale * weights[n];
        out.bottomRows(rows - shift) += c * in.topRows(rows - shift);
        out.topRows(rows - shift) -= c * in.bottomRows(rows - shift);
    }
}

}  // namespace detail

/// g = A(x) f on the truncated index set of `grid`.
inline Eigen::VectorXd apply_coupling(const FourierPotential& p, const VelocityGrid& grid, double x,
                                      const Eigen::Ref<const Eigen::VectorXd>& f)
{
    if (f.size() != grid.size())
        throw InvalidArgument("apply_coupling: vector length " + std::to_string(f.size()) +
                              " does not match grid size " + std::to_string(grid.size()));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(f.size());
    detail::accumulate_coupling(p.coupling_weights(x), f, g);
    return g;
}

/// Dense skew-symmetric A(x) over the grid, entries a_{|k-i|} sin(2 (k-i) kappa x).
inline Eigen::MatrixXd coupling_matrix(const FourierPotential& p, const VelocityGrid& grid, double x)
{
    const Eigen::Index size = grid.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    const auto w = p.coupling_weights(x);
    for (Eigen::Index k = 0; k < size; ++k) {
        for (std::size_t n = 1; n < w.size(); ++n) {
            const Eigen::Index shift = static_cast<Eigen::Index>(n);
            if (k - shift >= 0) a(k, k - shift) += w[n];
            if (k + shift < size) a(k, k + shift) -= w[n];
        }
    }
    return a;
}

}  // namespace wigner

#endif  // WIGNER_POTENTIAL_HPP
