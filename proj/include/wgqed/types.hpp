// types.hpp — scalar aliases and the error hierarchy shared by all modules

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace wgqed {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using SparseXc = Eigen::SparseMatrix<cplx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Every failure raised by the library derives from Error so callers (the CLI,
// the sweep runner) can catch one type and still report the category.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}
    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define WGQED_DEFINE_ERROR(Name, tag)                                          \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(tag, what) {}           \
    }

WGQED_DEFINE_ERROR(ConfigError, "config");
WGQED_DEFINE_ERROR(CapacityError, "capacity");
WGQED_DEFINE_ERROR(SingularityError, "singularity");
WGQED_DEFINE_ERROR(ExtrapolationError, "extrapolation");
WGQED_DEFINE_ERROR(FormatError, "format");
WGQED_DEFINE_ERROR(ContractError, "contract");
WGQED_DEFINE_ERROR(StiffnessError, "stiffness");
WGQED_DEFINE_ERROR(IntegrityError, "integrity");
WGQED_DEFINE_ERROR(UndefinedReflectivityError, "undefined-reflectivity");
WGQED_DEFINE_ERROR(DiscretizationError, "discretization");
WGQED_DEFINE_ERROR(SweepError, "sweep");

#undef WGQED_DEFINE_ERROR

} // namespace wgqed
