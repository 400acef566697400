#pragma once

#include <cstdint>

namespace tsph::persistence {

inline constexpr std::uint64_t kDefaultPrime = 6972593;

/// Prime field Z/pZ. The modulus must be prime and fit well below 2^32 so
/// products of residues stay within 64-bit intermediates.
class FieldSpec {
  public:
    explicit FieldSpec(std::uint64_t p = kDefaultPrime);

    std::uint64_t modulus() const { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + p_ - b;
    }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p_; }

    /// Multiplicative inverse of a nonzero residue. Throws on 0.
    std::uint64_t inv(std::uint64_t a) const;

  private:
    std::uint64_t p_;
};

}  // namespace tsph::persistence
