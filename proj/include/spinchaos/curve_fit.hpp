#pragma once

#include <span>
#include <string>

namespace spinchaos {

/// Unit-mass Gaussian with standard deviation `sigma`.
double gaussian_profile(double e, double center, double sigma);
/// Unit-mass Lorentzian (Breit-Wigner) with full width `gamma`:
/// (gamma/2pi) / ((e-center)^2 + gamma^2/4)
double breit_wigner_profile(double e, double center, double gamma);

struct ProfileFit {
    double center = 0.0;
    double width = 0.0;     // sigma for the Gaussian, Gamma for Breit-Wigner
    double residual = 0.0;  // RMS deviation over the sample points
    bool converged = false;
    int iterations = 0;
    std::string diagnostic;  // set when the fit did not converge
};

/// Levenberg-Marquardt least squares of a unit-mass profile against (x, y).
ProfileFit fit_gaussian(std::span<const double> x, std::span<const double> y, double center0, double sigma0);
ProfileFit fit_breit_wigner(std::span<const double> x, std::span<const double> y, double center0,
                            double gamma0);

}  // namespace spinchaos
