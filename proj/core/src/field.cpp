#include "tsph/field.hpp"

#include <stdexcept>
#include <string>

namespace tsph::persistence {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

FieldSpec::FieldSpec(std::uint64_t p) : p_(p) {
    if (p >= (std::uint64_t(1) << 31))
        throw std::invalid_argument("FieldSpec: modulus must fit in 31 bits");
    if (!is_prime(p)) throw std::invalid_argument("FieldSpec: " + std::to_string(p) + " is not prime");
}

std::uint64_t FieldSpec::inv(std::uint64_t a) const {
    if (a % p_ == 0) throw std::domain_error("FieldSpec::inv: zero has no inverse");
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = std::int64_t(p_), new_r = std::int64_t(a % p_);
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (t < 0) t += std::int64_t(p_);
    return std::uint64_t(t);
}

}  // namespace tsph::persistence
