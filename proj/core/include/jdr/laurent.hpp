#ifndef JDR_LAURENT_HPP
#define JDR_LAURENT_HPP

#include "jdr/param_poly.hpp"

#include <map>
#include <optional>
#include <string>

namespace jdr {

// Exact Laurent polynomial in t with ParamPoly coefficients.
class LaurentPoly {
public:
    using TermMap = std::map<int, ParamPoly>;

    LaurentPoly() = default;
    LaurentPoly(const ParamPoly& c) { add_term(0, c); }
    LaurentPoly(long long c) { add_term(0, ParamPoly(c)); }

    static LaurentPoly t_power(int k) { return monomial(k, ParamPoly(1)); }
    static LaurentPoly monomial(int k, const ParamPoly& c);

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    int min_exp() const;
    int max_exp() const;
    ParamPoly coeff(int k) const;

    void add_term(int k, const ParamPoly& c);

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly l, const LaurentPoly& r) { return l += r; }
    friend LaurentPoly operator-(LaurentPoly l, const LaurentPoly& r) { return l -= r; }
    friend LaurentPoly operator*(const LaurentPoly& l, const LaurentPoly& r);
    LaurentPoly shifted(int k) const; // multiply by t^k

    bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }

    std::string to_string() const;

private:
    TermMap terms_;
};

// The bar involution t <-> t^-1.
LaurentPoly laurent_bar(const LaurentPoly& q);

struct AnnihilatorSpec {
    enum class Kind { CyclicDim2, NonCyclicDim2 };

    Kind kind = Kind::CyclicDim2;
    // Numeric alpha when set (must differ from -2); symbolic otherwise.
    std::optional<Rational> alpha;

    static AnnihilatorSpec cyclic_symbolic() { return AnnihilatorSpec{Kind::CyclicDim2, std::nullopt}; }
    static AnnihilatorSpec cyclic(const Rational& a);
    static AnnihilatorSpec noncyclic() { return AnnihilatorSpec{Kind::NonCyclicDim2, std::nullopt}; }

    bool is_cyclic() const { return kind == Kind::CyclicDim2; }
    // alpha as a coefficient-ring element (the symbolic variable or the fixed value).
    ParamPoly alpha_poly() const;
    // t + alpha + t^-1, or t + 1.
    LaurentPoly delta() const;
    // delta(1) = alpha + 2, or 2. Nonzero in every admitted spec.
    ParamPoly delta_at_one() const;
};

// Reduction of q modulo delta. Cyclic: support {0,1} using t^2 = -alpha*t - 1
// and t^-1 = -t - alpha. Non-cyclic: support {0} using t = -1.
LaurentPoly laurent_mod_delta(const LaurentPoly& q, const AnnihilatorSpec& spec);

// Given numerator/delta = prescribed/delta + E with E a Laurent polynomial,
// returns E. Throws NotPolynomialExcess when numerator - prescribed is not
// divisible by delta.
LaurentPoly split_fraction(const LaurentPoly& numerator, const LaurentPoly& prescribed,
                           const AnnihilatorSpec& spec);

// Exact division by delta; nullopt when not divisible.
std::optional<LaurentPoly> divide_by_delta(const LaurentPoly& p, const AnnihilatorSpec& spec);

} // namespace jdr

#endif
