#ifndef JDR_PARAM_POLY_HPP
#define JDR_PARAM_POLY_HPP

#include "jdr/rational.hpp"

#include <array>
#include <compare>
#include <optional>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

namespace jdr {

// Parameters of the coefficient ring, in a fixed order. `Alpha` is the
// annihilator coefficient (delta = t + alpha + t^-1), `A`..`D` are the
// lambda-automorphism parameters and `R` is the pairing scalar. The
// annihilator coefficient is a separate symbol from `A`; constraint-quotient
// runs specialize alpha to 1.
enum class Param : std::uint8_t { Alpha = 0, A, B, C, D, R };

inline constexpr std::size_t kParamCount = 6;
using Exponents = std::array<std::uint32_t, kParamCount>;

// Exact multivariate polynomial in {alpha, a, b, c, d, r} over Q, stored as a
// sorted exponent-vector map with no zero coefficients.
class ParamPoly {
public:
    using TermMap = std::map<Exponents, Rational>;

    ParamPoly() = default;
    ParamPoly(long long c) { add_term(Exponents{}, Rational(c)); }
    ParamPoly(const Rational& c) { add_term(Exponents{}, c); }

    static ParamPoly variable(Param v, std::uint32_t k = 1);
    static ParamPoly monomial(const Rational& coeff, const Exponents& e);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const TermMap& terms() const { return terms_; }

    void add_term(const Exponents& e, const Rational& c);

    ParamPoly operator-() const;
    ParamPoly& operator+=(const ParamPoly& o);
    ParamPoly& operator-=(const ParamPoly& o);
    friend ParamPoly operator+(ParamPoly l, const ParamPoly& r) { return l += r; }
    friend ParamPoly operator-(ParamPoly l, const ParamPoly& r) { return l -= r; }
    friend ParamPoly operator*(const ParamPoly& l, const ParamPoly& r);

    bool operator==(const ParamPoly& o) const { return terms_ == o.terms_; }
    std::strong_ordering operator<=>(const ParamPoly& o) const;

    // Total substitution; `vals` indexed by Param.
    Rational eval(const std::array<Rational, kParamCount>& vals) const;
    // Partial substitution of a single parameter by a rational.
    ParamPoly substitute(Param v, const Rational& value) const;

    std::uint32_t max_exponent(Param v) const;
    // Rational gcd of the coefficients (positive; 0 for the zero polynomial).
    Rational content() const;

    std::string to_string() const;

private:
    TermMap terms_;
};

// Exact division: returns p/q when q divides p in the polynomial ring.
std::optional<ParamPoly> divide_exact(const ParamPoly& p, const ParamPoly& q);

// Normal form in Q[alpha,a,b,c,d,r] / (a^2 - 1 - ab - cd + b^2 + c^2 + d^2):
// rewrites a^2 -> 1 + ab + cd - b^2 - c^2 - d^2 until every stored monomial
// has a-exponent 0 or 1. With `constraint_enabled == false` this is the
// identity. Idempotent, and unique on each residue class.
ParamPoly param_normalize(const ParamPoly& p, bool constraint_enabled);

// Small context threaded through the diagram engine: multiplication in the
// plain ring or in the lambda-constraint quotient.
struct CoeffCtx {
    bool lambda_constraint = false;

    ParamPoly norm(const ParamPoly& p) const { return param_normalize(p, lambda_constraint); }
    ParamPoly mul(const ParamPoly& l, const ParamPoly& r) const { return norm(l * r); }
};

} // namespace jdr

#endif
