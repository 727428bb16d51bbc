#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "spinchaos/error.hpp"
#include "spinchaos/shell.hpp"

using namespace spinchaos;

namespace {

MeanFieldRepresentation toy(std::vector<double> eps, std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t n = rows.size();
    DenseMatrix m(n, n);
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return from_rotated(std::move(eps), RealSymmetricMatrix::from_dense(std::move(m)));
}

MeanFieldRepresentation uniform_rep(std::size_t n) {
    // Sylvester-Hadamard columns: every eigenstate spread evenly over all rows
    MeanFieldRepresentation rep;
    rep.unperturbed.resize(n);
    rep.exact.resize(n);
    for (std::size_t i = 0; i < n; ++i) rep.unperturbed[i] = rep.exact[i] = static_cast<double>(i);
    rep.rotated = RealSymmetricMatrix::diagonal(rep.unperturbed);
    rep.rows.resize(n);
    rep.coefficients = DenseMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t a = 0; a < n; ++a)
            rep.coefficients(r, a) = (__builtin_popcountll(r & a) % 2 ? -1.0 : 1.0) / std::sqrt(double(n));
    return rep;
}

}  // namespace

TEST_CASE("row selection helpers") {
    const std::vector<double> v{5, 1, 3, 9, 4, 2};
    CHECK(nearest_to_median(v, 2) == std::vector<std::size_t>{2, 4});
    CHECK(nearest_to_median(v, 10).size() == 6);
    CHECK(central_range(100, 0.1) == std::pair<std::size_t, std::size_t>{45, 55});
    CHECK(central_range(1512, 0.2) == std::pair<std::size_t, std::size_t>{605, 907});
    CHECK(central_range(3, 0.01) == std::pair<std::size_t, std::size_t>{1, 2});
}

TEST_CASE("two-level toy row statistics") {
    const auto rep = toy({0.0, 1.0}, {{0.0, 0.5}, {0.5, 1.0}});
    for (const auto& r : rep.rows) {
        CHECK(r.connectivity == 1);
        CHECK(r.mean_coupling == doctest::Approx(0.5));
        CHECK(r.mean_spacing == doctest::Approx(1.0));
        CHECK(r.sigma_squared == doctest::Approx(0.25));
        CHECK(r.sigma() == doctest::Approx(0.5));
        CHECK(r.coupling_ratio() == doctest::Approx(0.5));
        CHECK_FALSE(r.undefined);
    }
    const auto shell = energy_shell(rep, 1);
    CHECK(shell.center == 1.0);
    CHECK(shell.sigma == doctest::Approx(0.5));
    CHECK_THROWS_AS(energy_shell(rep, 2), DomainError);
}

TEST_CASE("three-level toy: spacing range includes the row itself") {
    // row 0 couples only to row 2; eps range over {0, 2} is 2, one coupling
    const auto rep = toy({0.0, 1.0, 2.0}, {{0.0, 0.0, 0.3}, {0.0, 1.0, 0.0}, {0.3, 0.0, 2.0}});
    CHECK(rep.rows[0].connectivity == 1);
    CHECK(rep.rows[0].mean_spacing == doctest::Approx(2.0));
    CHECK(rep.rows[1].undefined);
    CHECK(rep.rows[1].connectivity == 0);
}

TEST_CASE("structural zeros below the relative threshold are ignored") {
    const auto rep = toy({0.0, 1.0}, {{0.0, 1e-13}, {1e-13, 1.0}});
    CHECK(rep.rows[0].undefined);
    CHECK(rep.rows[0].sigma_squared == doctest::Approx(1e-26));
}

TEST_CASE("criticality scan bookkeeping") {
    const std::vector<double> grid{0.1, 0.2, 0.3, 0.4};
    auto build = [](double g) {
        // unit spacing, so v/d = 4g crosses 1 between 0.2 and 0.3
        return toy({0.0, 1.0}, {{0.0, 4.0 * g}, {4.0 * g, 1.0}});
    };
    const auto scan = criticality_scan(grid, [&](double g) { return build(g); });
    REQUIRE(scan.points.size() == 4);
    CHECK(scan.crossing == 0.3);
    CHECK(scan.bracket_low == 0.2);
    CHECK(scan.points[0].m_over_n == doctest::Approx(0.5));

    const auto flat = criticality_scan(grid, [](double) { return toy({0.0, 1.0}, {{0.0, 0.1}, {0.1, 1.0}}); });
    CHECK_FALSE(flat.crossing.has_value());
    CHECK_FALSE(flat.bracket_low.has_value());
}

TEST_CASE("parameter scans reuse the unperturbed basis without changing results") {
    const ModelSpec base{Model::Model2, 10, 3, 0.5, 0.0, false};
    const std::vector<double> grid{0.2, 0.6};
    const auto fast = criticality_scan(base, ScanParameter::Lambda, grid);
    const auto slow = criticality_scan(grid, [&](double lambda) {
        ModelSpec s = base;
        s.lambda = lambda;
        return mean_field_representation(s, build_even_parity_basis(10, 3), Stage::Rotation);
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(fast.points[i].mean_v_over_d == doctest::Approx(slow.points[i].mean_v_over_d).epsilon(1e-12));
        CHECK(fast.points[i].m_over_n == doctest::Approx(slow.points[i].m_over_n).epsilon(1e-12));
    }
    ModelSpec iso{Model::Model1, 10, 3, 0.5, 0.0, false};
    const std::vector<double> with_one{0.9, 1.0};
    CHECK_THROWS_AS(criticality_scan(iso, ScanParameter::Mu, with_one), DomainError);
}

TEST_CASE("zero perturbation: strength function is a single spike") {
    const ModelSpec spec{Model::Model1, 10, 3, 0.0, 0.0, false};
    const auto rep = mean_field_representation(spec, build_even_parity_basis(10, 3));
    const std::size_t n = rep.dimension() / 2;
    const auto sf = strength_function(rep, n);
    CHECK(sf.shell.sigma == 0.0);
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < sf.weights.size(); ++i)
        if (sf.weights[i] > 0.0) {
            ++nonzero;
            CHECK(sf.weights[i] == 1.0);
            CHECK(sf.energies[i] == doctest::Approx(rep.unperturbed[n]));
        }
    CHECK(nonzero == 1);
    CHECK(sf.envelope.captured_mass == doctest::Approx(1.0));
    CHECK(sf.envelope.bin_width == doctest::Approx(1.0 / 41));
    const double peak = *std::max_element(sf.envelope.heights.begin(), sf.envelope.heights.end());
    CHECK(peak == doctest::Approx(1.0 / sf.envelope.bin_width));

    const std::size_t states[] = {n};
    const auto ef = eigenstate_shell_profile(rep, states);
    CHECK(ef.fill_ratio == 0.0);

    const auto d = delocalization(rep);
    for (std::size_t a = 0; a < rep.dimension(); ++a) {
        CHECK(d.entropy[a] == 0.0);
        CHECK(d.ipr[a] == doctest::Approx(1.0));
    }
}

TEST_CASE("delocalization of uniformly spread eigenstates") {
    const std::size_t n = 64;
    const auto rep = uniform_rep(n);
    const auto d = delocalization(rep);
    for (std::size_t a = 0; a < n; ++a) {
        CHECK(d.entropy[a] == doctest::Approx(std::log(64.0)).epsilon(1e-12));
        CHECK(d.ipr[a] == doctest::Approx(64.0).epsilon(1e-12));
        CHECK(d.npc[a] == doctest::Approx(64.0).epsilon(1e-12));
    }
    CHECK(d.entropy_variance < 1e-20);
}

TEST_CASE("moment identities and double stochasticity hold for both models") {
    const auto basis = build_even_parity_basis(10, 3);
    for (const auto& spec : {ModelSpec{Model::Model1, 10, 3, 0.3, 0.0, false},
                             ModelSpec{Model::Model1, 10, 3, 1.5, 0.0, false},
                             ModelSpec{Model::Model2, 10, 3, 0.5, 0.2, false},
                             ModelSpec{Model::Model2, 10, 3, 0.5, 1.0, false}}) {
        const auto rep = mean_field_representation(spec, basis);
        const auto mc = check_moment_identities(rep);
        CHECK(mc.max_row_sum_error < 1e-10);
        CHECK(mc.max_column_sum_error < 1e-10);
        CHECK(mc.max_centroid_error < 1e-10);
        CHECK(mc.max_variance_error < 1e-10);
    }
}

TEST_CASE("averaged strength function is normalized and centered") {
    const ModelSpec spec{Model::Model2, 12, 4, 0.5, 0.8, false};
    const auto rep = mean_field_representation(spec, build_even_parity_basis(12, 4));
    const auto rows = nearest_to_median(rep.unperturbed, 5);
    const auto sf = strength_function(rep, rows);
    double total = 0.0, first = 0.0;
    for (std::size_t i = 0; i < sf.weights.size(); ++i) {
        total += sf.weights[i];
        first += sf.weights[i] * sf.energies[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(first == doctest::Approx(sf.shell.center).epsilon(1e-10));
    double area = 0.0;
    for (double h : sf.envelope.heights) area += h * sf.envelope.bin_width;
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sf.envelope.captured_mass > 0.95);
    CHECK(sf.envelope.centers.size() == 41);

    SmoothingOptions smooth;
    smooth.gaussian_kernel = true;
    const auto s2 = strength_function(rep, rows, smooth);
    area = 0.0;
    for (double h : s2.envelope.heights) area += h * s2.envelope.bin_width;
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));

    const auto light = mean_field_representation(spec, build_even_parity_basis(12, 4), Stage::Rotation);
    CHECK_THROWS_AS(strength_function(light, rows), DomainError);
}

TEST_CASE("envelope with a synthetic Gaussian sample selects the Gaussian shape") {
    std::vector<double> x, w;
    for (int i = -400; i <= 400; ++i) {
        x.push_back(i * 0.01);
        w.push_back(std::exp(-0.5 * (i * 0.01) * (i * 0.01)));
    }
    const auto env = smooth_profile(x, w, {0.0, 1.0}, {});
    const auto sel = classify_shape(env);
    CHECK(sel.selected == ProfileShape::Gaussian);
    CHECK(sel.gaussian.width == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sel.margin > 0.5);
}
