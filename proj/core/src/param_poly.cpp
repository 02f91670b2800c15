#include "jdr/param_poly.hpp"

#include "jdr/errors.hpp"

#include <sstream>

namespace jdr {

std::string rational_to_string(const Rational& q) {
    std::ostringstream out;
    out << numerator(q);
    if (denominator(q) != 1) out << '/' << denominator(q);
    return out.str();
}

Rational rational_from_string(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw ParseError("bad rational literal: " + text);
    }
}

ParamPoly ParamPoly::variable(Param v, std::uint32_t k) {
    Exponents e{};
    e[static_cast<std::size_t>(v)] = k;
    return monomial(Rational(1), e);
}

ParamPoly ParamPoly::monomial(const Rational& coeff, const Exponents& e) {
    ParamPoly p;
    p.add_term(e, coeff);
    return p;
}

void ParamPoly::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool ParamPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Exponents{};
}

ParamPoly ParamPoly::operator-() const {
    ParamPoly out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

ParamPoly operator*(const ParamPoly& l, const ParamPoly& r) {
    ParamPoly out;
    for (const auto& [el, cl] : l.terms()) {
        for (const auto& [er, cr] : r.terms()) {
            Exponents e;
            for (std::size_t i = 0; i < kParamCount; ++i) e[i] = el[i] + er[i];
            out.add_term(e, cl * cr);
        }
    }
    return out;
}

std::strong_ordering ParamPoly::operator<=>(const ParamPoly& o) const {
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
        if (a->first != b->first) return a->first < b->first ? std::strong_ordering::less : std::strong_ordering::greater;
        if (a->second != b->second) return a->second < b->second ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a != terms_.end()) return std::strong_ordering::greater;
    if (b != o.terms_.end()) return std::strong_ordering::less;
    return std::strong_ordering::equal;
}

Rational ParamPoly::eval(const std::array<Rational, kParamCount>& vals) const {
    Rational out = 0;
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < kParamCount; ++i) {
            for (std::uint32_t k = 0; k < e[i]; ++k) term *= vals[i];
        }
        out += term;
    }
    return out;
}

ParamPoly ParamPoly::substitute(Param v, const Rational& value) const {
    const auto idx = static_cast<std::size_t>(v);
    ParamPoly out;
    for (const auto& [e, c] : terms_) {
        Rational coeff = c;
        for (std::uint32_t k = 0; k < e[idx]; ++k) coeff *= value;
        Exponents reduced = e;
        reduced[idx] = 0;
        out.add_term(reduced, coeff);
    }
    return out;
}

std::uint32_t ParamPoly::max_exponent(Param v) const {
    const auto idx = static_cast<std::size_t>(v);
    std::uint32_t m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, e[idx]);
    return m;
}

Rational ParamPoly::content() const {
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (const auto& [e, c] : terms_) {
        num_gcd = gcd(num_gcd, numerator(c));
        den_lcm = lcm(den_lcm, denominator(c));
    }
    if (num_gcd == 0) return Rational(0);
    return Rational(num_gcd, den_lcm);
}

namespace {

const char* const kParamNames[kParamCount] = {"alpha", "a", "b", "c", "d", "r"};

} // namespace

std::string ParamPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out << '-';
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        bool has_vars = false;
        for (std::size_t i = 0; i < kParamCount; ++i) has_vars = has_vars || e[i] > 0;
        if (!has_vars || mag != 1) {
            out << rational_to_string(mag);
            if (has_vars) out << '*';
        }
        bool first_var = true;
        for (std::size_t i = 0; i < kParamCount; ++i) {
            if (e[i] == 0) continue;
            if (!first_var) out << '*';
            first_var = false;
            out << kParamNames[i];
            if (e[i] > 1) out << '^' << e[i];
        }
    }
    return out.str();
}

std::optional<ParamPoly> divide_exact(const ParamPoly& p, const ParamPoly& q) {
    if (q.is_zero()) return std::nullopt;
    if (p.is_zero()) return ParamPoly();
    const auto& qlead = *q.terms().rbegin();
    ParamPoly rem = p;
    ParamPoly out;
    while (!rem.is_zero()) {
        const auto& rlead = *rem.terms().rbegin();
        Exponents e;
        for (std::size_t i = 0; i < kParamCount; ++i) {
            if (rlead.first[i] < qlead.first[i]) return std::nullopt;
            e[i] = rlead.first[i] - qlead.first[i];
        }
        const ParamPoly factor = ParamPoly::monomial(rlead.second / qlead.second, e);
        out += factor;
        rem -= factor * q;
    }
    return out;
}

ParamPoly param_normalize(const ParamPoly& p, bool constraint_enabled) {
    if (!constraint_enabled) return p;
    // a^2 = 1 + ab + cd - b^2 - c^2 - d^2, applied until every a-exponent
    // is 0 or 1. Each pass strictly lowers the total a-degree.
    ParamPoly cur = p;
    auto aidx = static_cast<std::size_t>(Param::A);
    while (true) {
        ParamPoly next;
        bool changed = false;
        for (const auto& [e, c] : cur.terms()) {
            if (e[aidx] < 2) {
                next.add_term(e, c);
                continue;
            }
            changed = true;
            Exponents base = e;
            base[aidx] -= 2;
            auto bump = [&base](Param v, std::uint32_t k) {
                Exponents out = base;
                out[static_cast<std::size_t>(v)] += k;
                return out;
            };
            next.add_term(base, c);
            Exponents ab = bump(Param::A, 1);
            ab[static_cast<std::size_t>(Param::B)] += 1;
            next.add_term(ab, c);
            Exponents cd = bump(Param::C, 1);
            cd[static_cast<std::size_t>(Param::D)] += 1;
            next.add_term(cd, c);
            next.add_term(bump(Param::B, 2), -c);
            next.add_term(bump(Param::C, 2), -c);
            next.add_term(bump(Param::D, 2), -c);
        }
        cur = std::move(next);
        if (!changed) break;
    }
    return cur;
}

} // namespace jdr
