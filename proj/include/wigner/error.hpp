#ifndef WIGNER_ERROR_HPP
#define WIGNER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wigner {

/// Raised when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a linear solve or an iteration fails to reach its tolerance.
/// Carries the best residual (or iteration gap) that was achieved.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, std::string path)
        : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace wigner

#endif  // WIGNER_ERROR_HPP
