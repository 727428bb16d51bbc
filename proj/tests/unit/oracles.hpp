#pragma once

// Reference constructions built directly on product states, with no use of
// the library's parity-adapted assembly.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

inline std::uint64_t mirror(std::uint64_t c, int length) {
    std::uint64_t r = 0;
    for (int i = 0; i < length; ++i)
        if ((c >> i) & 1U) r |= std::uint64_t{1} << (length - 1 - i);
    return r;
}

inline std::vector<std::uint64_t> sector_states(int length, int n_up) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << length); ++c)
        if (popcount(c) == n_up) out.push_back(c);
    return out;
}

struct Sparse {
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> entries;  // (row, col) in product labels
};

/// Spin-spin coupling at distance `range`: XY part flips antiparallel pairs
/// with amplitude 1/2, Z part gives +-1/4.
inline Sparse product_operator(const std::vector<std::uint64_t>& states, int length, int range, bool zz) {
    Sparse m;
    for (std::uint64_t c : states) {
        for (int s = 0; s + range < length; ++s) {
            const int a = (c >> s) & 1U;
            const int b = (c >> (s + range)) & 1U;
            if (zz) {
                m.entries[{c, c}] += a == b ? 0.25 : -0.25;
            } else if (a != b) {
                const std::uint64_t f = c ^ ((std::uint64_t{1} << s) | (std::uint64_t{1} << (s + range)));
                m.entries[{f, c}] += 0.5;
            }
        }
    }
    return m;
}

/// Parity basis vectors as sparse combinations of product states.
struct Embedding {
    std::vector<std::vector<std::pair<std::uint64_t, double>>> vectors;
};

inline Embedding parity_embedding(int length, int n_up, bool even) {
    Embedding e;
    const double h = 1.0 / std::sqrt(2.0);
    for (std::uint64_t c : sector_states(length, n_up)) {
        const std::uint64_t r = mirror(c, length);
        if (r < c) continue;
        if (r == c) {
            if (even) e.vectors.push_back({{c, 1.0}});
        } else {
            e.vectors.push_back({{c, h}, {r, even ? h : -h}});
        }
    }
    return e;
}

/// E O E^T, computed entry by entry.
inline Eigen::MatrixXd project(const Embedding& e, const Sparse& op) {
    const auto n = static_cast<Eigen::Index>(e.vectors.size());
    std::map<std::uint64_t, std::vector<std::pair<Eigen::Index, double>>> owners;
    for (Eigen::Index i = 0; i < n; ++i)
        for (auto [c, a] : e.vectors[i]) owners[c].push_back({i, a});
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [rc, v] : op.entries) {
        auto ri = owners.find(rc.first);
        auto ci = owners.find(rc.second);
        if (ri == owners.end() || ci == owners.end()) continue;
        for (auto [i, a] : ri->second)
            for (auto [j, b] : ci->second) out(i, j) += a * v * b;
    }
    return out;
}

/// Dense operator on the full 2^L space.
inline Eigen::MatrixXd full_space_operator(int length, int range, bool zz) {
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << length);
    std::vector<std::uint64_t> all(dim);
    for (Eigen::Index i = 0; i < dim; ++i) all[i] = static_cast<std::uint64_t>(i);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [rc, v] : product_operator(all, length, range, zz).entries)
        m(static_cast<Eigen::Index>(rc.first), static_cast<Eigen::Index>(rc.second)) += v;
    return m;
}

}  // namespace oracle
