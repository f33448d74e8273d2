#include "cfspectra/numeric_util.hpp"

#include <stdexcept>

#include "cfspectra/errors.hpp"

namespace cfspectra {

std::optional<std::map<std::uint64_t, unsigned long>>
factorize(const BigInt& v, unsigned long trial_limit) {
    if (v < 1) throw UsageError("factorize: value must be >= 1");
    std::map<std::uint64_t, unsigned long> out;
    if (v == 1) return out;

    BigInt rem = v;
    auto strip = [&](std::uint64_t p) {
        unsigned long e = 0;
        while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
            mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
            ++e;
        }
        if (e) out[p] = e;
    };

    strip(2);
    strip(3);
    // 5, 7, 11, ... wheel over 6k±1.
    for (std::uint64_t p = 5; p <= trial_limit && rem > 1; p += 6) {
        strip(p);
        strip(p + 2);
        if (mpz_cmp_ui(rem.get_mpz_t(), 1) == 0) break;
        // Cofactor below limit^2 must be prime; bail out of the wheel early.
        if (mpz_cmp_ui(rem.get_mpz_t(), p * p) < 0) break;
    }
    if (rem > 1) {
        // Accept a prime cofactor that fits the base type. GMP's test is
        // BPSW + Miller-Rabin; no composite below 2^64 passes it.
        if (!mpz_fits_ulong_p(rem.get_mpz_t())) return std::nullopt;
        if (mpz_probab_prime_p(rem.get_mpz_t(), 40) == 0) return std::nullopt;
        std::uint64_t p = mpz_get_ui(rem.get_mpz_t());
        if (p >= (std::uint64_t{1} << 62)) return std::nullopt;
        out[p] += 1;
    }
    return out;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw UsageError("empty rational literal");
    const auto dot = text.find('.');
    try {
        if (dot == std::string::npos) {
            // Base must be pinned: the auto-detecting constructor reads a
            // leading zero as octal.
            Rational q(text, 10); // handles "a" and "a/b"
            if (mpz_sgn(q.get_den().get_mpz_t()) == 0)
                throw UsageError("zero denominator: " + text);
            q.canonicalize();
            return q;
        }
        // decimal literal
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        const std::size_t frac = text.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw UsageError("bad rational literal: " + text);
        Rational q{BigInt(digits, 10)};
        BigInt den = 1;
        for (std::size_t i = 0; i < frac; ++i) den *= 10;
        q /= Rational(den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw UsageError("bad rational literal: " + text);
    }
}

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational pow_rational(const Rational& base, long exp) {
    if (exp == 0) return Rational(1);
    if (base == 0 && exp < 0) throw UsageError("pow_rational: 0^negative");
    const unsigned long e =
        exp > 0 ? static_cast<unsigned long>(exp)
                : static_cast<unsigned long>(-(exp + 1)) + 1ul;
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
    Rational out;
    if (exp > 0) {
        out = Rational(num) / Rational(den);
    } else {
        out = Rational(den) / Rational(num);
    }
    out.canonicalize();
    return out;
}

BigInt floor_rational(const Rational& q) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

BigInt ceil_rational(const Rational& q) {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

std::size_t bit_length(const BigInt& z) {
    if (z == 0) return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

} // namespace cfspectra
