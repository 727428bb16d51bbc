#include "spinchaos/hamiltonian.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "spinchaos/error.hpp"

namespace spinchaos {

void ModelSpec::validate() const {
    if (length < 2 || length > kMaxSites || n_up < 0 || n_up > length)
        throw DomainError("invalid sector L=" + std::to_string(length) + " n_up=" + std::to_string(n_up));
    if (mu == 1.0 && !allow_isotropic)
        throw DomainError("mu = 1 is the isotropic point; pass the isotropic override to allow it");
    if (model == Model::Model2 && length < 3)
        throw DomainError("Model2 needs at least 3 sites");
}

namespace {

int term_range(Term t) { return (t == Term::H0 || t == Term::V1) ? 1 : 2; }
bool is_flip_flop(Term t) { return t == Term::H0 || t == Term::V2Hop; }

// Squared norm of the projected representative: <c|P|c>.
double projected_norm(ParityClass cls) { return cls == ParityClass::Palindromic ? 1.0 : 0.5; }

}  // namespace

RealSymmetricMatrix build_operator(Term term, const SectorBasis& basis) {
    const int range = term_range(term);
    const int length = basis.length();
    if (length < range + 1)
        throw DomainError("chain of " + std::to_string(length) + " sites too short for range-" +
                          std::to_string(range) + " term");

    const std::size_t n = basis.dimension();
    const bool odd = basis.parity() == Parity::Odd;
    RealSymmetricMatrix::Builder builder(n);
    std::map<std::size_t, double> column;

    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t c = basis.representative(j).bits;
        const double source_norm = projected_norm(basis.parity_class(j));
        column.clear();

        // <r_i|O|r_j> = sum_d <c|O|d> <c_i|P|d> / sqrt(n_i n_j), with P the
        // parity projector; this reduces to sqrt(n_i/n_j), negated for odd
        // parity when d is the reflected partner.
        auto deposit = [&](std::uint64_t d, double amplitude) {
            const auto loc = basis.locate(d);
            if (!loc) return;
            const double target_norm = projected_norm(basis.parity_class(loc->index));
            const double sign = (odd && loc->via_partner) ? -1.0 : 1.0;
            column[loc->index] += sign * amplitude * std::sqrt(target_norm / source_norm);
        };

        for (int site = 0; site + range < length; ++site) {
            const bool a = (c >> site) & 1U;
            const bool b = (c >> (site + range)) & 1U;
            if (is_flip_flop(term)) {
                if (a != b) {
                    const std::uint64_t mask = (std::uint64_t{1} << site) | (std::uint64_t{1} << (site + range));
                    deposit(c ^ mask, 0.5);
                }
            } else {
                deposit(c, a == b ? 0.25 : -0.25);
            }
        }

        for (const auto& [i, value] : column) {
            if (i == j) {
                builder.add_diagonal(j, value);
            } else if (i > j) {
                builder.set(i, j, value);
            }
        }
    }
    return std::move(builder).build();
}

OperatorSet OperatorSet::build(const SectorBasis& basis, bool with_next_nearest) {
    OperatorSet ops{build_operator(Term::H0, basis), build_operator(Term::V1, basis), {}, {}};
    if (with_next_nearest && basis.length() >= 3) {
        ops.v2_hop = build_operator(Term::V2Hop, basis);
        ops.v2_ising = build_operator(Term::V2Ising, basis);
    }
    return ops;
}

RealSymmetricMatrix unperturbed_operator(const ModelSpec& spec, const OperatorSet& ops) {
    if (spec.model == Model::Model1) return ops.h0;
    return ops.h0.plus_scaled(ops.v1, spec.mu);
}

RealSymmetricMatrix compose_model(const ModelSpec& spec, const OperatorSet& ops) {
    RealSymmetricMatrix h = ops.h0.plus_scaled(ops.v1, spec.mu);
    if (spec.model == Model::Model2) {
        if (ops.v2_hop.order() != h.order() || ops.v2_ising.order() != h.order())
            throw std::logic_error("compose_model: next-nearest operators missing or mismatched");
        h = h.plus_scaled(ops.v2_hop, spec.lambda).plus_scaled(ops.v2_ising, spec.lambda * spec.mu);
    }
    return h;
}

RealSymmetricMatrix compose_model(const ModelSpec& spec, const SectorBasis& basis) {
    return compose_model(spec, OperatorSet::build(basis, spec.model == Model::Model2));
}

}  // namespace spinchaos
