#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace cfspectra {

using BigInt = mpz_class;
using Rational = mpq_class;

// Full prime factorization by trial division up to trial_limit, finishing
// with a primality test on the cofactor. Returns nullopt when the value does
// not fully factor into primes below 2^62 this way (callers then fall back to
// interval logs). v must be >= 1; factor(1) = {}.
std::optional<std::map<std::uint64_t, unsigned long>>
factorize(const BigInt& v, unsigned long trial_limit = 100000);

// p/q, "3", "3/2", "2.5", "-0.75" all accepted; canonicalized.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q); // "num/den" or "num" when den == 1

Rational pow_rational(const Rational& base, long exp); // exact, exp may be < 0

BigInt floor_rational(const Rational& q);
BigInt ceil_rational(const Rational& q);

// Number of bits in |z|; 0 for z == 0.
std::size_t bit_length(const BigInt& z);

} // namespace cfspectra
