#include "wgqed/coupling.hpp"

#include <cmath>
#include <sstream>

namespace wgqed {

cplx nonguided_term(double gamma_j, double gamma_l, double kr, double dipole_angle,
                    DipoleKernel kernel)
{
    const double s2 = std::pow(std::sin(dipole_angle), 2);
    const double c2 = std::pow(std::cos(dipole_angle), 2);
    const double inv2 = 1.0 / (kr * kr);
    const double inv_im = kernel == DipoleKernel::verbatim ? inv2 : inv2 / kr;
    const cplx bracket = s2 * (-I / kr) + (1.0 - 3.0 * c2) * (inv2 + I * inv_im);
    return 0.75 * std::sqrt(gamma_j * gamma_l) * bracket * std::exp(I * kr);
}

CouplingMatrix build_lambda(const EmitterArray& array, const LambdaOptions& options)
{
    array.validate();
    const int n = array.count();
    double k_a = 0.0;
    if (options.include_nonguided) {
        if (!array.lambda_a) {
            throw ConfigError("non-guided coupling requires lambda_a and physical positions");
        }
        k_a = 2 * pi / *array.lambda_a;
    }

    CouplingMatrix c{MatrixXc::Zero(n, n)};
    for (int j = 0; j < n; ++j) {
        c.lambda(j, j) = 0.5 * (array.gamma_wg[j] + array.gamma_ng[j]);
        for (int l = j + 1; l < n; ++l) {
            // z is sorted, so k_a|z_jl| == phase_l - phase_j (mod 2pi)
            const double dphi = array.phase[l] - array.phase[j];
            cplx v = 0.5 * std::sqrt(array.gamma_wg[j] * array.gamma_wg[l]) * std::exp(I * dphi);
            if (options.include_nonguided && array.gamma_ng[j] * array.gamma_ng[l] > 0) {
                const double r = std::abs(array.z[l] - array.z[j]);
                if (r == 0.0) {
                    std::ostringstream os;
                    os << "emitters " << j << " and " << l
                       << " coincide; the non-guided dipole term is singular";
                    throw SingularityError(os.str());
                }
                v += nonguided_term(array.gamma_ng[j], array.gamma_ng[l], k_a * r,
                                    array.dipole_angle, options.kernel);
            }
            c.lambda(j, l) = v;
            c.lambda(l, j) = v;
        }
    }
    return c;
}

} // namespace wgqed
