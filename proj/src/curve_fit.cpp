#include "spinchaos/curve_fit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinchaos/error.hpp"

namespace spinchaos {

double gaussian_profile(double e, double center, double sigma) {
    const double z = (e - center) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double breit_wigner_profile(double e, double center, double gamma) {
    const double d = e - center;
    return (gamma / (2.0 * std::numbers::pi)) / (d * d + 0.25 * gamma * gamma);
}

namespace {

struct Eval {
    double value;
    double d_center;
    double d_width;
};

Eval gaussian_eval(double e, double c, double s) {
    const double g = gaussian_profile(e, c, s);
    const double z = (e - c) / s;
    return {g, g * z / s, g * (z * z - 1.0) / s};
}

Eval breit_wigner_eval(double e, double c, double w) {
    const double d = e - c;
    const double den = d * d + 0.25 * w * w;
    const double f = (w / (2.0 * std::numbers::pi)) / den;
    return {f, f * 2.0 * d / den, f / w - f * 0.5 * w / den};
}

template <typename Model>
ProfileFit levenberg_marquardt(Model model, std::span<const double> x, std::span<const double> y, double c0,
                               double w0, const char* name) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("profile fit needs at least two points");
    ProfileFit fit;
    double c = c0, w = w0;
    auto cost_at = [&](double cc, double ww) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = model(x[i], cc, ww).value - y[i];
            s += r * r;
        }
        return s;
    };
    double cost = cost_at(c, w);
    double damping = 1e-3;
    constexpr int kMaxIterations = 500;
    for (int it = 0; it < kMaxIterations; ++it) {
        fit.iterations = it + 1;
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, g0 = 0, g1 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Eval ev = model(x[i], c, w);
            const double r = ev.value - y[i];
            jtj00 += ev.d_center * ev.d_center;
            jtj01 += ev.d_center * ev.d_width;
            jtj11 += ev.d_width * ev.d_width;
            g0 += ev.d_center * r;
            g1 += ev.d_width * r;
        }
        bool accepted = false;
        while (damping < 1e16) {
            const double a00 = jtj00 * (1.0 + damping), a11 = jtj11 * (1.0 + damping);
            const double det = a00 * a11 - jtj01 * jtj01;
            if (det <= 0.0 || !std::isfinite(det)) {
                damping *= 10.0;
                continue;
            }
            const double dc = -(a11 * g0 - jtj01 * g1) / det;
            const double dw = -(a00 * g1 - jtj01 * g0) / det;
            const double nc = c + dc, nw = w + dw;
            const double ncost = nw > 0.0 ? cost_at(nc, nw) : INFINITY;
            if (ncost <= cost) {
                const double step = std::abs(dc) + std::abs(dw);
                const double drop = cost - ncost;
                c = nc;
                w = nw;
                cost = ncost;
                damping = std::max(damping / 10.0, 1e-12);
                accepted = true;
                if (step < 1e-13 * (std::abs(c) + std::abs(w) + 1e-300) || drop <= 1e-15 * cost) fit.converged = true;
                break;
            }
            damping *= 10.0;
        }
        // No improving step at any damping: we are at a (numerical) minimum.
        if (!accepted) fit.converged = true;
        if (fit.converged) break;
    }
    fit.center = c;
    fit.width = w;
    fit.residual = std::sqrt(cost / static_cast<double>(x.size()));
    if (!fit.converged || !std::isfinite(cost)) {
        fit.converged = false;
        std::ostringstream os;
        os << name << " fit did not converge after " << fit.iterations << " iterations (initial center " << c0
           << ", width " << w0 << "; final center " << c << ", width " << w << ")";
        fit.diagnostic = os.str();
    }
    return fit;
}

}  // namespace

ProfileFit fit_gaussian(std::span<const double> x, std::span<const double> y, double center0, double sigma0) {
    return levenberg_marquardt(gaussian_eval, x, y, center0, sigma0, "Gaussian");
}

ProfileFit fit_breit_wigner(std::span<const double> x, std::span<const double> y, double center0,
                            double gamma0) {
    return levenberg_marquardt(breit_wigner_eval, x, y, center0, gamma0, "Breit-Wigner");
}

}  // namespace spinchaos
