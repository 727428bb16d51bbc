#pragma once

#include "spinchaos/basis.hpp"
#include "spinchaos/dense_matrix.hpp"

namespace spinchaos {

/// Terms of the two spin-chain models (J = 1, open boundaries).
///   H0       = sum_i (Sx_i Sx_{i+1} + Sy_i Sy_{i+1})
///   V1       = sum_i  Sz_i Sz_{i+1}
///   V2Hop    = sum_i (Sx_i Sx_{i+2} + Sy_i Sy_{i+2})
///   V2Ising  = sum_i  Sz_i Sz_{i+2}        (unscaled; compose applies mu)
enum class Term { H0, V1, V2Hop, V2Ising };

enum class Model { Model1, Model2 };

/// Model1: H = H0 + mu V1.  Model2: H = H0 + mu V1 + lambda (V2Hop + mu V2Ising).
struct ModelSpec {
    Model model = Model::Model2;
    int length = 15;
    int n_up = 5;
    double mu = 0.5;
    double lambda = 0.0;
    /// mu = 1 adds SU(2) symmetry; rejected unless explicitly allowed.
    bool allow_isotropic = false;

    /// Throws DomainError on mu == 1 without the override or a bad sector.
    void validate() const;
};

/// Matrix of one term in the parity-adapted sector basis. Throws DomainError
/// when the chain is too short for the term's range.
RealSymmetricMatrix build_operator(Term term, const SectorBasis& basis);

/// All four terms on one basis (NNN terms are empty matrices when L < 3).
struct OperatorSet {
    RealSymmetricMatrix h0;
    RealSymmetricMatrix v1;
    RealSymmetricMatrix v2_hop;
    RealSymmetricMatrix v2_ising;

    static OperatorSet build(const SectorBasis& basis, bool with_next_nearest = true);
    std::size_t order() const { return h0.order(); }
};

/// Total Hamiltonian of the model. Linear in mu and lambda.
RealSymmetricMatrix compose_model(const ModelSpec& spec, const OperatorSet& ops);
RealSymmetricMatrix compose_model(const ModelSpec& spec, const SectorBasis& basis);

/// The part whose eigenbasis is the mean-field basis: H0 for Model1,
/// H0 + mu V1 for Model2.
RealSymmetricMatrix unperturbed_operator(const ModelSpec& spec, const OperatorSet& ops);

}  // namespace spinchaos
