#include "nildyn/heis.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nildyn {

GroupElement power(const GroupElement& g, const BigInt& n) {
    // Closed form, checked against repeated multiplication in the tests.
    return {g.a * n, g.b * n, g.c * n + Rational(binomial(n, 2)) * g.a * g.b};
}

std::optional<std::int64_t> rationality_order(const GroupElement& g, std::int64_t Q_max) {
    if (Q_max < 1) throw std::invalid_argument("rationality_order: Q_max must be >= 1");
    BigInt exact = rationality_order_exact(g);
    if (exact > Q_max) return std::nullopt;
    return static_cast<std::int64_t>(exact);
}

BigInt rationality_order_exact(const GroupElement& g) {
    // g^n = (na, nb, nc + C(n,2)ab).  The first two coordinates force n to
    // be a multiple of L = lcm(den a, den b); along multiples of L the last
    // coordinate is periodic with period dividing L * den(c) * den(ab), so
    // the scan below terminates.
    BigInt L = boost::multiprecision::lcm(den(g.a), den(g.b));
    BigInt cap = L * den(g.c) * den(g.a * g.b) * 2;
    for (BigInt n = L; n <= cap; n += L) {
        if (power(g, n).in_gamma()) return n;
    }
    throw InternalConsistencyError("rationality_order_exact: no order within proven cap");
}

BigInt q_prime_bound(unsigned Q, unsigned d) {
    BigInt f = factorial(Q);
    return boost::multiprecision::pow(f, d * (d + 1) / 2);
}

const Filtration& Filtration::heisenberg_lower_central() {
    static const Filtration filt = [] {
        Filtration f;
        f.degree = 2;
        f.name = "heisenberg-lower-central";
        auto whole = [](const GroupElement&) { return true; };
        auto center = [](const GroupElement& g) { return g.a == 0 && g.b == 0; };
        auto trivial = [](const GroupElement& g) { return g == GroupElement::identity(); };
        f.levels = {whole, whole, center, trivial};
        return f;
    }();
    return filt;
}

PolySeq::PolySeq(const Filtration& filt, std::vector<GroupElement> coeffs)
    : filt_(&filt), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != filt.degree + 1)
        throw std::invalid_argument("PolySeq: expected degree+1 coefficients");
    for (unsigned i = 0; i <= filt.degree; ++i) {
        if (!filt.level_contains(i, coeffs_[i]))
            throw std::invalid_argument("PolySeq: coefficient outside filtration level");
    }
}

PolySeq PolySeq::from_values(const Filtration& filt,
                             const std::vector<GroupElement>& values) {
    unsigned d = filt.degree;
    if (values.size() != d + 1)
        throw std::invalid_argument("PolySeq::from_values: expected d+1 values");
    // Triangular system: P(k) = prod_{i<=k} a_i^C(k,i), so
    // a_k = (a_0^C(k,0) ... a_{k-1}^C(k,k-1))^{-1} P(k).
    std::vector<GroupElement> coeffs;
    coeffs.reserve(d + 1);
    for (unsigned k = 0; k <= d; ++k) {
        GroupElement prefix = GroupElement::identity();
        for (unsigned i = 0; i < k; ++i)
            prefix = prefix * power(coeffs[i], binomial(BigInt(k), i));
        GroupElement ak = prefix.inverse() * values[k];
        if (!filt.level_contains(k, ak))
            throw InternalConsistencyError(
                "PolySeq::from_values: recovered coefficient escapes its level");
        coeffs.push_back(ak);
    }
    return PolySeq(filt, std::move(coeffs));
}

PolySeq PolySeq::constant(const Filtration& filt, const GroupElement& g) {
    std::vector<GroupElement> coeffs(filt.degree + 1, GroupElement::identity());
    coeffs[0] = g;
    return PolySeq(filt, std::move(coeffs));
}

GroupElement PolySeq::eval(const BigInt& n) const {
    GroupElement out = GroupElement::identity();
    for (unsigned i = 0; i < coeffs_.size(); ++i)
        out = out * power(coeffs_[i], binomial(n, i));
    return out;
}

std::string PolySeq::to_json() const {
    nlohmann::json j;
    j["d"] = degree();
    auto arr = nlohmann::json::array();
    for (const auto& g : coeffs_)
        arr.push_back({to_string(g.a), to_string(g.b), to_string(g.c)});
    j["coeffs"] = arr;
    return j.dump();
}

PolySeq PolySeq::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    unsigned d = j.at("d").get<unsigned>();
    const Filtration& filt = Filtration::heisenberg_lower_central();
    if (d != filt.degree)
        throw std::invalid_argument("PolySeq::from_json: unsupported degree");
    std::vector<GroupElement> coeffs;
    for (const auto& row : j.at("coeffs")) {
        if (row.size() != 3)
            throw std::invalid_argument("PolySeq::from_json: coefficient needs 3 coordinates");
        coeffs.push_back({parse_rational(row[0].get<std::string>()),
                          parse_rational(row[1].get<std::string>()),
                          parse_rational(row[2].get<std::string>())});
    }
    return PolySeq(filt, std::move(coeffs));
}

namespace {

PolySeq from_value_fn(const Filtration& filt,
                      const std::function<GroupElement(const BigInt&)>& f) {
    std::vector<GroupElement> values;
    for (unsigned k = 0; k <= filt.degree; ++k) values.push_back(f(k));
    return PolySeq::from_values(filt, values);
}

} // namespace

PolySeq poly_mul(const PolySeq& P, const PolySeq& Q) {
    if (&P.filtration() != &Q.filtration())
        throw std::invalid_argument("poly_mul: mismatched filtrations");
    return from_value_fn(P.filtration(),
                         [&](const BigInt& n) { return P.eval(n) * Q.eval(n); });
}

PolySeq poly_translate(const PolySeq& P, const BigInt& k) {
    return from_value_fn(P.filtration(),
                         [&](const BigInt& n) { return P.eval(n + k); });
}

PolySeq poly_invert(const PolySeq& P) {
    return from_value_fn(P.filtration(),
                         [&](const BigInt& n) { return P.eval(n).inverse(); });
}

PolySeq diff_prime(const PolySeq& P, std::int64_t N) {
    return from_value_fn(P.filtration(), [&](const BigInt& n) {
        return P.eval(n + N).inverse() * P.eval(n);
    });
}

bool is_orbit_periodic_criterion(const PolySeq& P, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("is_orbit_periodic_criterion: N must be >= 1");
    // Gamma-valuedness of d'_N P at d+1 consecutive points pins the whole
    // difference sequence inside Gamma, hence the coset orbit is N-periodic.
    // The d+1 values are checked directly; the tests confirm they coincide
    // with diff_prime evaluations.
    for (unsigned n = 0; n <= P.degree(); ++n)
        if (!(P.eval(BigInt(n) + N).inverse() * P.eval(n)).in_gamma()) return false;
    return true;
}

bool is_orbit_periodic_direct(const PolySeq& P, std::int64_t N, std::int64_t span) {
    if (N < 1) throw std::invalid_argument("is_orbit_periodic_direct: N must be >= 1");
    if (span < P.degree() + 1)
        throw std::invalid_argument("is_orbit_periodic_direct: span must cover degree+1 points");
    for (std::int64_t n = -span; n <= span; ++n)
        if (!(P.eval(n + N).inverse() * P.eval(n)).in_gamma()) return false;
    return true;
}

bool is_orbit_periodic(const PolySeq& P, std::int64_t N, std::int64_t check_span) {
    bool crit = is_orbit_periodic_criterion(P, N);
    bool direct = is_orbit_periodic_direct(P, N, check_span);
    if (crit != direct)
        throw InternalConsistencyError("is_orbit_periodic: criterion and direct scan disagree");
    return crit;
}

// --- factored periodicity bound -------------------------------------------

struct PeriodicityBound::Expr {
    enum Kind { Lit, Fact, Pow, Prod } kind = Lit;
    BigInt lit = 1;               // Lit
    std::vector<Expr> children;   // Fact: 1 child; Pow: 1 child; Prod: any
    unsigned exponent = 1;        // Pow

    static Expr literal(BigInt v) {
        Expr e;
        e.kind = Lit;
        e.lit = std::move(v);
        return e;
    }
    static Expr fact(Expr arg) {
        Expr e;
        e.kind = Fact;
        e.children.push_back(std::move(arg));
        return e;
    }
    static Expr pow(Expr base, unsigned k) {
        Expr e;
        e.kind = Pow;
        e.children.push_back(std::move(base));
        e.exponent = k;
        return e;
    }
    static Expr prod(std::vector<Expr> parts) {
        Expr e;
        e.kind = Prod;
        e.children = std::move(parts);
        return e;
    }

    // Lower bound on log2 of the value; factorials via Stirling.
    long double log2_lower() const {
        switch (kind) {
            case Lit:
                return lit <= 1 ? 0.0L
                                : static_cast<long double>(boost::multiprecision::msb(lit));
            case Pow:
                return exponent * children[0].log2_lower();
            case Prod: {
                long double s = 0;
                for (const auto& c : children) s += c.log2_lower();
                return s;
            }
            case Fact: {
                long double x = std::exp2l(std::min(children[0].log2_lower(), 16000.0L));
                if (x < 2) return 0.0L;
                // log2(x!) >= x log2(x) - x log2(e)
                return x * (std::log2l(x) - 1.4426950408889634L);
            }
        }
        return 0.0L;
    }

    std::optional<BigInt> exact(unsigned max_bits) const {
        if (log2_lower() > max_bits) return std::nullopt;
        switch (kind) {
            case Lit:
                return lit;
            case Pow: {
                auto b = children[0].exact(max_bits);
                if (!b) return std::nullopt;
                BigInt r = boost::multiprecision::pow(*b, exponent);
                if (boost::multiprecision::msb(r < 1 ? BigInt(1) : r) > max_bits)
                    return std::nullopt;
                return r;
            }
            case Prod: {
                BigInt r = 1;
                for (const auto& c : children) {
                    auto v = c.exact(max_bits);
                    if (!v) return std::nullopt;
                    r *= *v;
                    if (boost::multiprecision::msb(r < 1 ? BigInt(1) : r) > max_bits)
                        return std::nullopt;
                }
                return r;
            }
            case Fact: {
                auto v = children[0].exact(max_bits);
                if (!v || *v > 100000) return std::nullopt;
                BigInt r = 1;
                for (BigInt i = 2; i <= *v; ++i) {
                    r *= i;
                    if (boost::multiprecision::msb(r) > max_bits) return std::nullopt;
                }
                return r;
            }
        }
        return std::nullopt;
    }

    static constexpr std::int64_t kSaturated = INT64_C(1) << 60;

    // Lower bound on the q-adic valuation of the value, saturating.
    std::int64_t valuation_lower(const BigInt& q) const {
        switch (kind) {
            case Lit: {
                std::int64_t v = 0;
                BigInt x = lit;
                while (x != 0 && x % q == 0) {
                    x /= q;
                    ++v;
                }
                return v;
            }
            case Pow: {
                std::int64_t v = children[0].valuation_lower(q);
                return v >= kSaturated / exponent ? kSaturated : v * exponent;
            }
            case Prod: {
                std::int64_t s = 0;
                for (const auto& c : children) {
                    s += c.valuation_lower(q);
                    if (s >= kSaturated) return kSaturated;
                }
                return s;
            }
            case Fact: {
                if (auto x = children[0].exact(4096)) {
                    // Legendre: v_q(x!) = sum_i floor(x / q^i).
                    std::int64_t v = 0;
                    BigInt p = q;
                    while (p <= *x) {
                        BigInt t = *x / p;
                        v += t > kSaturated ? kSaturated : static_cast<std::int64_t>(t);
                        if (v >= kSaturated) return kSaturated;
                        if (p > *x / q) break;
                        p *= q;
                    }
                    return v;
                }
                // Argument is astronomically large: v_q(x!) >= floor(x/q).
                long double lx = std::min(children[0].log2_lower(), 120.0L);
                long double lq = static_cast<long double>(
                    boost::multiprecision::msb(q) + 1);
                if (lx - lq >= 60) return kSaturated;
                return static_cast<std::int64_t>(std::exp2l(lx - lq));
            }
        }
        return 0;
    }

    std::string str() const {
        std::ostringstream os;
        switch (kind) {
            case Lit:
                os << lit;
                break;
            case Fact:
                os << "(" << children[0].str() << ")!";
                break;
            case Pow:
                os << "(" << children[0].str() << ")^" << exponent;
                break;
            case Prod:
                for (size_t i = 0; i < children.size(); ++i) {
                    if (i) os << " * ";
                    os << children[i].str();
                }
                break;
        }
        return os.str();
    }
};

PeriodicityBound::PeriodicityBound(Expr e) : expr_(std::make_unique<Expr>(std::move(e))) {}
PeriodicityBound::PeriodicityBound(const PeriodicityBound& o)
    : expr_(std::make_unique<Expr>(*o.expr_)) {}
PeriodicityBound& PeriodicityBound::operator=(const PeriodicityBound& o) {
    expr_ = std::make_unique<Expr>(*o.expr_);
    return *this;
}
PeriodicityBound::PeriodicityBound(PeriodicityBound&&) noexcept = default;
PeriodicityBound& PeriodicityBound::operator=(PeriodicityBound&&) noexcept = default;
PeriodicityBound::~PeriodicityBound() = default;

bool PeriodicityBound::divides(const BigInt& p) const {
    if (p < 1) throw std::invalid_argument("PeriodicityBound::divides: p must be positive");
    BigInt rest = p;
    for (BigInt q = 2; q * q <= rest; ++q) {
        if (rest % q != 0) continue;
        std::int64_t e = 0;
        while (rest % q == 0) {
            rest /= q;
            ++e;
        }
        if (expr_->valuation_lower(q) < e) return false;
    }
    if (rest > 1 && expr_->valuation_lower(rest) < 1) return false;
    return true;
}

std::string PeriodicityBound::str() const { return expr_->str(); }

std::optional<BigInt> PeriodicityBound::exact_value(unsigned max_bits) const {
    return expr_->exact(max_bits);
}

namespace {

using Expr = PeriodicityBound::Expr;

Expr expr_fact_of(unsigned Q) { return Expr::fact(Expr::literal(Q)); }

// (Q!)^{d(d+1)/2} as an expression.
Expr qprime_expr(const Expr& q_fact, unsigned d) {
    return Expr::pow(q_fact, d * (d + 1) / 2);
}

// d! * ((Q!)^{d(d+1)/2})!  -- the abelian-quotient modulus for Q-rational data.
Expr nab_expr(const Expr& q_fact, unsigned d) {
    return Expr::prod({Expr::literal(factorial(d)), Expr::fact(qprime_expr(q_fact, d))});
}

Expr modulus_expr(unsigned Q, unsigned d) {
    if (d == 0) return Expr::literal(1);
    Expr n0 = modulus_expr(Q, d - 1);
    Expr qp = qprime_expr(expr_fact_of(Q), d);
    // N1 handles the top quotient: its data is Q'-rational, so the abelian
    // modulus is taken at Q'.
    Expr n1 = nab_expr(Expr::fact(qp), d);
    return Expr::prod({std::move(n0), std::move(n1), Expr::fact(std::move(qp))});
}

} // namespace

PeriodicityBound periodicity_modulus(unsigned Q, unsigned d) {
    if (Q < 1) throw std::invalid_argument("periodicity_modulus: Q must be >= 1");
    return PeriodicityBound(modulus_expr(Q, d));
}

std::optional<std::int64_t> verify_rational_orbit_periodic(const PolySeq& P, unsigned Q,
                                                           std::int64_t scan_cap) {
    unsigned d = P.degree();
    for (unsigned k = 0; k <= d; ++k) {
        if (!rationality_order(P.eval(k), Q))
            throw std::invalid_argument(
                "verify_rational_orbit_periodic: value is not Q-rational");
    }
    PeriodicityBound bound = periodicity_modulus(Q, d);
    for (std::int64_t N = 1; N <= scan_cap; ++N) {
        if (!is_orbit_periodic_criterion(P, N)) continue;
        if (!bound.divides(N))
            throw InternalConsistencyError(
                "verify_rational_orbit_periodic: empirical period escapes the modulus");
        return N;
    }
    return std::nullopt;
}

} // namespace nildyn
