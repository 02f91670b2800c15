#include "jdr/laurent.hpp"

#include "jdr/errors.hpp"

#include <sstream>

namespace jdr {

LaurentPoly LaurentPoly::monomial(int k, const ParamPoly& c) {
    LaurentPoly q;
    q.add_term(k, c);
    return q;
}

int LaurentPoly::min_exp() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int LaurentPoly::max_exp() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

ParamPoly LaurentPoly::coeff(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? ParamPoly() : it->second;
}

void LaurentPoly::add_term(int k, const ParamPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& l, const LaurentPoly& r) {
    LaurentPoly out;
    for (const auto& [kl, cl] : l.terms()) {
        for (const auto& [kr, cr] : r.terms()) out.add_term(kl + kr, cl * cr);
    }
    return out;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly out;
    for (const auto& [e, c] : terms_) out.add_term(e + k, c);
    return out;
}

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        std::string cs = c.to_string();
        bool negated = false;
        if (c.terms().size() == 1 && cs.front() == '-') {
            negated = true;
            cs.erase(cs.begin());
        }
        if (first) {
            if (negated) out << '-';
            first = false;
        } else {
            out << (negated ? " - " : " + ");
        }
        bool wrap = c.terms().size() > 1;
        if (k == 0) {
            out << (wrap ? "(" + cs + ")" : cs);
            continue;
        }
        if (cs != "1") out << (wrap ? "(" + cs + ")" : cs) << '*';
        out << 't';
        if (k != 1) out << '^' << k;
    }
    return out.str();
}

LaurentPoly laurent_bar(const LaurentPoly& q) {
    LaurentPoly out;
    for (const auto& [k, c] : q.terms()) out.add_term(-k, c);
    return out;
}

AnnihilatorSpec AnnihilatorSpec::cyclic(const Rational& a) {
    if (a == -2) throw ConstraintViolated("cyclic annihilator requires alpha != -2");
    return AnnihilatorSpec{Kind::CyclicDim2, a};
}

ParamPoly AnnihilatorSpec::alpha_poly() const {
    if (!is_cyclic()) throw NonCyclicMode("alpha is only defined for the cyclic annihilator");
    return alpha ? ParamPoly(*alpha) : ParamPoly::variable(Param::Alpha);
}

LaurentPoly AnnihilatorSpec::delta() const {
    LaurentPoly d;
    if (is_cyclic()) {
        d.add_term(1, ParamPoly(1));
        d.add_term(0, alpha_poly());
        d.add_term(-1, ParamPoly(1));
    } else {
        d.add_term(1, ParamPoly(1));
        d.add_term(0, ParamPoly(1));
    }
    return d;
}

ParamPoly AnnihilatorSpec::delta_at_one() const {
    return is_cyclic() ? alpha_poly() + ParamPoly(2) : ParamPoly(2);
}

LaurentPoly laurent_mod_delta(const LaurentPoly& q, const AnnihilatorSpec& spec) {
    if (!spec.is_cyclic()) {
        ParamPoly c0;
        for (const auto& [k, c] : q.terms()) {
            if (k % 2 == 0) c0 += c;
            else c0 -= c;
        }
        return LaurentPoly(c0);
    }
    const ParamPoly alpha = spec.alpha_poly();
    LaurentPoly cur = q;
    while (!cur.is_zero() && (cur.max_exp() > 1 || cur.min_exp() < 0)) {
        LaurentPoly next;
        for (const auto& [k, c] : cur.terms()) {
            if (k > 1) {
                // t^k = -alpha*t^{k-1} - t^{k-2}
                next.add_term(k - 1, -(alpha * c));
                next.add_term(k - 2, -c);
            } else if (k < 0) {
                // t^k = -alpha*t^{k+1} - t^{k+2}
                next.add_term(k + 1, -(alpha * c));
                next.add_term(k + 2, -c);
            } else {
                next.add_term(k, c);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

std::optional<LaurentPoly> divide_by_delta(const LaurentPoly& p, const AnnihilatorSpec& spec) {
    if (p.is_zero()) return LaurentPoly();
    const LaurentPoly delta = spec.delta();
    // Shift both so the divisor starts at t^0 with constant term 1, then do
    // ascending exact division.
    const int dmin = delta.min_exp();
    LaurentPoly rem = p;
    LaurentPoly quot;
    int guard = (p.max_exp() - p.min_exp()) + 4;
    while (!rem.is_zero()) {
        if (--guard < 0) return std::nullopt;
        const int m = rem.min_exp();
        const ParamPoly c = rem.coeff(m);
        const int qk = m - dmin;
        quot.add_term(qk, c);
        rem -= delta.shifted(qk) * LaurentPoly(c);
        if (!rem.is_zero() && rem.max_exp() > p.max_exp() + 1) return std::nullopt;
    }
    return quot;
}

LaurentPoly split_fraction(const LaurentPoly& numerator, const LaurentPoly& prescribed,
                           const AnnihilatorSpec& spec) {
    auto excess = divide_by_delta(numerator - prescribed, spec);
    if (!excess) {
        throw NotPolynomialExcess("numerator - prescribed is not divisible by delta");
    }
    return *excess;
}

} // namespace jdr
