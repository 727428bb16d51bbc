#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace spinchaos {

inline constexpr int kMaxSites = 64;

/// Product state of a spin-1/2 chain: bit i set means site i+1 is up.
struct SpinConfiguration {
    std::uint64_t bits = 0;
    int length = 0;

    int up_count() const;
    auto operator<=>(const SpinConfiguration&) const = default;
};

/// Mirror image: site i goes to site L-1-i.
SpinConfiguration reflect(SpinConfiguration c);

/// All configurations of L sites with n_up up-spins, in increasing order of
/// `bits`. Throws DomainError unless 0 <= n_up <= L <= 64.
std::vector<SpinConfiguration> enumerate_sector(int length, int n_up);

/// Up-spin count used when none is given: round(L/3).
int default_up_count(int length);

enum class Parity { Even, Odd };

enum class ParityClass : std::uint8_t { Palindromic, Paired };

/// Parity-adapted basis of a fixed-magnetization sector.
///
/// Each basis vector is built from a representative c (the smaller of c and
/// reflect(c)). Even parity: |c> for palindromes, (|c> + |Rc>)/sqrt(2) for
/// pairs. Odd parity: palindromes drop out and pairs give (|c> - |Rc>)/sqrt(2).
class SectorBasis {
public:
    SectorBasis(int length, int n_up, Parity parity = Parity::Even);

    int length() const { return length_; }
    int up_count() const { return n_up_; }
    Parity parity() const { return parity_; }
    std::size_t dimension() const { return reps_.size(); }

    SpinConfiguration representative(std::size_t i) const { return {reps_[i], length_}; }
    ParityClass parity_class(std::size_t i) const { return classes_[i]; }
    /// reflect(representative) for paired entries, nullopt for palindromes.
    std::optional<SpinConfiguration> partner(std::size_t i) const;

    std::size_t palindromic_count() const { return palindromic_; }
    std::size_t paired_count() const { return reps_.size() - palindromic_; }

    struct Location {
        std::size_t index;
        bool via_partner;  // the configuration is the reflected partner
    };
    /// Where a sector configuration lives in this basis; nullopt if it is
    /// outside the sector or (odd parity) a palindrome.
    std::optional<Location> locate(std::uint64_t bits) const;

    bool operator==(const SectorBasis&) const = default;

private:
    int length_;
    int n_up_;
    Parity parity_;
    std::vector<std::uint64_t> reps_;
    std::vector<ParityClass> classes_;
    std::size_t palindromic_ = 0;
};

/// The even-parity basis used throughout the analysis.
SectorBasis build_even_parity_basis(int length, int n_up);

}  // namespace spinchaos
