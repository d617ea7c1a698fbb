#ifndef WIGNER_CONFIG_HPP
#define WIGNER_CONFIG_HPP

#include <fmt/format.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/error.hpp"
#include "wigner/fd_solvers.hpp"
#include "wigner/kinetic_system.hpp"

namespace wigner {

/// Invalid run configuration; `key()` names the offending entry.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string key, const std::string& message)
        : InvalidArgument(key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class Emit { solution, density, current, report };

/// Everything needed for one run. Config files are `key = value` lines;
/// `#` starts a comment. Recognised keys:
///
///   period_l      device length and potential period        (required)
///   coeffs        a_0, a_1, ... comma separated              (required)
///   s_over_kappa  velocity shift as a fraction of kappa      (0.5)
///   M             velocity truncation                        (40)
///   symmetric     symmetric index range when s = kappa/2     (true)
///   Nx            even number of mesh cells                  (required)
///   boundary      mono:<i0> or table:<i>=<value>,...         (required)
///   scheme        upwind1 | upwind2 | central | oracle       (central)
///   rel_tol       linear solver relative residual            (1e-12)
///   output_dir    directory for CSV output                   (.)
///   emit          subset of solution, density, current, report (solution, density)
struct RunConfig {
    double period_l = 0.0;
    std::vector<double> coeffs;
    double s_over_kappa = 0.5;
    int M = 40;
    bool symmetric = true;
    int Nx = 0;
    std::string boundary_mode;
    std::map<int, double> boundary_table;
    int boundary_index = 0;
    Method method = Method::central;
    double rel_tol = default_rel_tol;
    std::filesystem::path output_dir = ".";
    std::set<Emit> emit = {Emit::solution, Emit::density};

    /// Builds the system, checking every module invariant and naming the
    /// responsible key on failure.
    WignerSystem build_system() const
    {
        auto guarded = [](const char* key, auto&& make) {
            try {
                return make();
            } catch (const ConfigError&) {
                throw;
            } catch (const InvalidArgument& e) {
                throw ConfigError(key, e.what());
            }
        };
        if (!(period_l > 0.0)) throw ConfigError("period_l", "must be positive");
        const FourierPotential potential = guarded("coeffs", [&] { return FourierPotential(period_l, coeffs); });
        if (!(s_over_kappa > 0.0 && s_over_kappa < 1.0))
            throw ConfigError("s_over_kappa", fmt::format("must lie in (0, 1), got {}", s_over_kappa));
        if (M < 1) throw ConfigError("M", "must be a positive integer");
        const VelocityGrid grid = guarded("s_over_kappa", [&] {
            return build_velocity_grid(potential.kappa(), s_over_kappa * potential.kappa(), M, symmetric);
        });
        const SpatialMesh mesh = guarded("Nx", [&] { return SpatialMesh(period_l, Nx); });
        BoundaryData boundary = guarded("boundary", [&] {
            return boundary_mode == "mono" ? mono_energetic_boundary(grid, boundary_index)
                                           : tabulated_boundary(grid, boundary_table);
        });
        return WignerSystem(potential, grid, mesh, std::move(boundary));
    }
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> items;
    std::size_t begin = 0;
    for (;;) {
        const auto end = s.find(',', begin);
        auto item = trim(s.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
        if (!item.empty()) items.push_back(std::move(item));
        if (end == std::string_view::npos) break;
        begin = end + 1;
    }
    return items;
}

inline double parse_real(const std::string& key, const std::string& text)
{
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value))
        throw ConfigError(key, fmt::format("'{}' is not a finite real number", text));
    return value;
}

inline int parse_int(const std::string& key, const std::string& text)
{
    errno = 0;
    char* end = nullptr;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max())
        throw ConfigError(key, fmt::format("'{}' is not an integer", text));
    return static_cast<int>(value);
}

inline bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(key, fmt::format("'{}' is not a boolean", text));
}

inline void parse_boundary(RunConfig& cfg, const std::string& text)
{
    const auto colon = text.find(':');
    const std::string mode = trim(text.substr(0, colon));
    const std::string payload = colon == std::string::npos ? std::string() : trim(text.substr(colon + 1));
    if (mode == "mono") {
        cfg.boundary_mode = mode;
        cfg.boundary_index = parse_int("boundary", payload);
    } else if (mode == "table") {
        cfg.boundary_mode = mode;
        cfg.boundary_table.clear();
        for (const auto& entry : split_list(payload)) {
            const auto eq = entry.find('=');
            if (eq == std::string::npos)
                throw ConfigError("boundary", fmt::format("table entry '{}' is not index=value", entry));
            const int index = parse_int("boundary", trim(entry.substr(0, eq)));
            if (!cfg.boundary_table.emplace(index, parse_real("boundary", trim(entry.substr(eq + 1)))).second)
                throw ConfigError("boundary", fmt::format("index {} listed twice", index));
        }
    } else {
        throw ConfigError("boundary", fmt::format("expected mono:<i0> or table:<i>=<v>,..., got '{}'", text));
    }
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("line {}", line_no), fmt::format("expected key = value, got '{}'", body));
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(key, "given more than once");

        if (key == "period_l") {
            cfg.period_l = detail::parse_real(key, value);
        } else if (key == "coeffs") {
            cfg.coeffs.clear();
            for (const auto& item : detail::split_list(value)) cfg.coeffs.push_back(detail::parse_real(key, item));
        } else if (key == "s_over_kappa") {
            cfg.s_over_kappa = detail::parse_real(key, value);
        } else if (key == "M") {
            cfg.M = detail::parse_int(key, value);
        } else if (key == "symmetric") {
            cfg.symmetric = detail::parse_bool(key, value);
        } else if (key == "Nx") {
            cfg.Nx = detail::parse_int(key, value);
        } else if (key == "boundary") {
            detail::parse_boundary(cfg, value);
        } else if (key == "scheme") {
            const auto m = parse_method(value);
            if (!m) throw ConfigError(key, fmt::format("unknown scheme '{}'", value));
            cfg.method = *m;
        } else if (key == "rel_tol") {
            cfg.rel_tol = detail::parse_real(key, value);
            if (!(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-6)) throw ConfigError(key, "must lie in (0, 1e-6]");
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "emit") {
            cfg.emit.clear();
            for (const auto& item : detail::split_list(value)) {
                if (item == "solution") cfg.emit.insert(Emit::solution);
                else if (item == "density") cfg.emit.insert(Emit::density);
                else if (item == "current") cfg.emit.insert(Emit::current);
                else if (item == "report") cfg.emit.insert(Emit::report);
                else throw ConfigError(key, fmt::format("unknown output '{}'", item));
            }
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    for (const char* required : {"period_l", "coeffs", "Nx", "boundary"})
        if (!seen.count(required)) throw ConfigError(required, "missing");
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config", path.string());
    return parse_config(in);
}

}  // namespace wigner

#endif  // WIGNER_CONFIG_HPP
