#include "spinchaos/eigensystem.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spinchaos/error.hpp"

namespace spinchaos {

bool nearly_degenerate(double a, double b) {
    return std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a));
}

std::vector<std::pair<std::size_t, std::size_t>> degenerate_multiplets(std::span<const double> values) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        while (j < values.size() && nearly_degenerate(values[i], values[j])) ++j;
        out.emplace_back(i, j);
        i = j;
    }
    return out;
}

namespace {

constexpr double kSignificant = 1e-8;

void fix_sign(DenseMatrix& v, std::size_t col) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t r = 0; r < v.rows(); ++r) {
        const double m = std::abs(v(r, col));
        if (m > best_mag) {
            best_mag = m;
            best = r;
        }
    }
    if (v(best, col) < 0.0)
        for (std::size_t r = 0; r < v.rows(); ++r) v(r, col) = -v(r, col);
}

std::pair<std::size_t, double> leading_component(const DenseMatrix& v, std::size_t col) {
    for (std::size_t r = 0; r < v.rows(); ++r)
        if (std::abs(v(r, col)) > kSignificant) return {r, std::abs(v(r, col))};
    return {v.rows(), 0.0};
}

std::string diagnostics(const RealSymmetricMatrix& h, int info) {
    std::ostringstream os;
    os << "dsyevd failed (info=" << info << ") on N=" << h.order() << ", max|H|=" << h.max_abs()
       << ", finite=" << (h.all_finite() ? "yes" : "no") << ", asymmetry=" << h.asymmetry();
    return os.str();
}

}  // namespace

Spectrum diagonalize(const RealSymmetricMatrix& h) {
    const std::size_t n = h.order();
    Spectrum s{std::vector<double>(n), h.dense()};
    if (n == 0) return s;
    if (!h.all_finite()) throw NumericalError(diagnostics(h, -1));
    const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                                           s.vectors.data(), static_cast<lapack_int>(n), s.values.data());
    if (info != 0) throw NumericalError(diagnostics(h, info));

    for (std::size_t c = 0; c < n; ++c) fix_sign(s.vectors, c);

    // Canonical order inside degenerate multiplets.
    bool reordered = false;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (auto [first, last] : degenerate_multiplets(s.values)) {
        if (last - first < 2) continue;
        std::stable_sort(perm.begin() + first, perm.begin() + last, [&](std::size_t a, std::size_t b) {
            const auto [ia, ma] = leading_component(s.vectors, a);
            const auto [ib, mb] = leading_component(s.vectors, b);
            if (ia != ib) return ia < ib;
            return ma > mb;
        });
        reordered = true;
    }
    if (reordered) {
        DenseMatrix sorted(n, n);
        std::vector<double> values(n);
        for (std::size_t c = 0; c < n; ++c) {
            values[c] = s.values[perm[c]];
            for (std::size_t r = 0; r < n; ++r) sorted(r, c) = s.vectors(r, perm[c]);
        }
        s.values = std::move(values);
        s.vectors = std::move(sorted);
    }
    return s;
}

MeanFieldRepresentation from_rotated(std::vector<double> unperturbed, RealSymmetricMatrix rotated, Stage stage) {
    if (unperturbed.size() != rotated.order())
        throw DomainError("mean-field representation: label count differs from matrix order");
    MeanFieldRepresentation rep;
    rep.unperturbed = std::move(unperturbed);
    rep.rotated = std::move(rotated);
    rep.rows = compute_row_statistics(rep.unperturbed, rep.rotated,
                                      kRelativeZeroThreshold * rep.rotated.max_abs());
    if (stage == Stage::Full) {
        Spectrum exact = diagonalize(rep.rotated);
        rep.exact = std::move(exact.values);
        rep.coefficients = std::move(exact.vectors);
    }
    return rep;
}

MeanFieldRepresentation rotate_into(const Spectrum& unperturbed, const RealSymmetricMatrix& perturbation,
                                    Stage stage) {
    const std::size_t n = unperturbed.size();
    if (perturbation.order() != n) throw DomainError("rotate_into: perturbation order differs from basis size");
    const DenseMatrix& u = unperturbed.vectors;
    const DenseMatrix vu = multiply(perturbation.dense(), u);
    DenseMatrix rotated = multiply(u, vu, /*transpose_a=*/true);
    for (std::size_t i = 0; i < n; ++i) rotated(i, i) += unperturbed.values[i];
    return from_rotated(unperturbed.values, RealSymmetricMatrix::symmetrized(rotated), stage);
}

MeanFieldRepresentation mean_field_representation(const ModelSpec& spec, const OperatorSet& ops, Stage stage) {
    spec.validate();
    const RealSymmetricMatrix h_unperturbed = unperturbed_operator(spec, ops);
    const RealSymmetricMatrix total = compose_model(spec, ops);
    const RealSymmetricMatrix perturbation = total.plus_scaled(h_unperturbed, -1.0);
    return rotate_into(diagonalize(h_unperturbed), perturbation, stage);
}

MeanFieldRepresentation mean_field_representation(const ModelSpec& spec, const SectorBasis& basis, Stage stage) {
    return mean_field_representation(spec, OperatorSet::build(basis, spec.model == Model::Model2), stage);
}

}  // namespace spinchaos
