#include "spinchaos/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "spinchaos/error.hpp"

namespace spinchaos {

int SpinConfiguration::up_count() const { return std::popcount(bits); }

SpinConfiguration reflect(SpinConfiguration c) {
    std::uint64_t r = 0;
    for (int i = 0; i < c.length; ++i)
        if ((c.bits >> i) & 1U) r |= std::uint64_t{1} << (c.length - 1 - i);
    return {r, c.length};
}

namespace {

void check_sector(int length, int n_up) {
    if (length < 0 || length > kMaxSites || n_up < 0 || n_up > length)
        throw DomainError("invalid sector: L=" + std::to_string(length) +
                          ", n_up=" + std::to_string(n_up));
}

// Next larger integer with the same popcount.
std::uint64_t next_same_popcount(std::uint64_t v) {
    const std::uint64_t t = v | (v - 1);
    return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

std::vector<SpinConfiguration> enumerate_sector(int length, int n_up) {
    check_sector(length, n_up);
    std::vector<SpinConfiguration> out;
    if (n_up == 0) {
        out.push_back({0, length});
        return out;
    }
    const std::uint64_t first = n_up == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_up) - 1;
    const std::uint64_t last = first << (length - n_up);
    for (std::uint64_t v = first;; v = next_same_popcount(v)) {
        out.push_back({v, length});
        if (v == last) break;
    }
    return out;
}

int default_up_count(int length) { return static_cast<int>(std::lround(length / 3.0)); }

SectorBasis::SectorBasis(int length, int n_up, Parity parity)
    : length_(length), n_up_(n_up), parity_(parity) {
    for (SpinConfiguration c : enumerate_sector(length, n_up)) {
        const std::uint64_t r = reflect(c).bits;
        if (r < c.bits) continue;
        if (r == c.bits) {
            if (parity == Parity::Odd) continue;
            reps_.push_back(c.bits);
            classes_.push_back(ParityClass::Palindromic);
            ++palindromic_;
        } else {
            reps_.push_back(c.bits);
            classes_.push_back(ParityClass::Paired);
        }
    }
}

std::optional<SpinConfiguration> SectorBasis::partner(std::size_t i) const {
    if (classes_[i] == ParityClass::Palindromic) return std::nullopt;
    return reflect(representative(i));
}

std::optional<SectorBasis::Location> SectorBasis::locate(std::uint64_t bits) const {
    const std::uint64_t r = reflect({bits, length_}).bits;
    const std::uint64_t rep = std::min(bits, r);
    const auto it = std::lower_bound(reps_.begin(), reps_.end(), rep);
    if (it == reps_.end() || *it != rep) return std::nullopt;
    return Location{static_cast<std::size_t>(it - reps_.begin()), bits != rep};
}

SectorBasis build_even_parity_basis(int length, int n_up) {
    return SectorBasis(length, n_up, Parity::Even);
}

}  // namespace spinchaos
