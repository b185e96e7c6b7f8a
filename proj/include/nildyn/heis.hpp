#ifndef NILDYN_HEIS_HPP
#define NILDYN_HEIS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nildyn/errors.hpp"
#include "nildyn/rational.hpp"

namespace nildyn {

// Rational Heisenberg group element.  The lattice of integer points is
// the discrete cocompact subgroup written Gamma throughout.
struct GroupElement {
    Rational a, b, c;

    static GroupElement identity() { return {0, 0, 0}; }

    GroupElement operator*(const GroupElement& o) const {
        return {a + o.a, b + o.b, c + o.c + a * o.b};
    }

    GroupElement inverse() const { return {-a, -b, a * b - c}; }

    bool in_gamma() const { return is_integer(a) && is_integer(b) && is_integer(c); }

    bool operator==(const GroupElement& o) const = default;
};

inline GroupElement commutator(const GroupElement& g, const GroupElement& h) {
    return g * h * g.inverse() * h.inverse();
}

// g^n = (na, nb, nc + C(n,2) ab), valid for all integers n.
GroupElement power(const GroupElement& g, const BigInt& n);

// Least n in [1, Q_max] with g^n in Gamma.
std::optional<std::int64_t> rationality_order(const GroupElement& g, std::int64_t Q_max);

// As above without a caller bound; every rational-coordinate element has
// a finite order, found from the coordinate denominators.
BigInt rationality_order_exact(const GroupElement& g);

// (Q!)^{d(d+1)/2}: a uniform rationality bound for products of Q-rational
// elements in a d-step nilpotent group.
BigInt q_prime_bound(unsigned Q, unsigned d);

// Degree-d filtration presented as level-membership predicates.  Only the
// Heisenberg lower central series ships, but everything downstream is
// written against this interface.
struct Filtration {
    unsigned degree = 0; // d
    // levels[i] tests membership in G^(i), i = 0..d+1.
    std::vector<std::function<bool(const GroupElement&)>> levels;
    std::string name;

    bool level_contains(unsigned i, const GroupElement& g) const {
        return i < levels.size() ? levels[i](g) : g == GroupElement::identity();
    }

    static const Filtration& heisenberg_lower_central();
};

// Polynomial sequence P(n) = a_0^C(n,0) a_1^C(n,1) ... a_d^C(n,d) with
// a_i in G^(i); determined by any d+1 consecutive values.
class PolySeq {
public:
    PolySeq(const Filtration& filt, std::vector<GroupElement> coeffs);

    // Triangular coefficient recovery from values at n = 0..d.
    static PolySeq from_values(const Filtration& filt,
                               const std::vector<GroupElement>& values);

    static PolySeq constant(const Filtration& filt, const GroupElement& g);

    unsigned degree() const { return filt_->degree; }
    const Filtration& filtration() const { return *filt_; }
    const std::vector<GroupElement>& coeffs() const { return coeffs_; }

    GroupElement eval(const BigInt& n) const;

    std::string to_json() const;
    static PolySeq from_json(const std::string& text);

    bool operator==(const PolySeq& o) const { return coeffs_ == o.coeffs_; }

private:
    const Filtration* filt_;
    std::vector<GroupElement> coeffs_;
};

PolySeq poly_mul(const PolySeq& P, const PolySeq& Q);
PolySeq poly_translate(const PolySeq& P, const BigInt& k);
PolySeq poly_invert(const PolySeq& P);

// Reverse difference (d'_N P)(n) = P(n+N)^{-1} P(n).
PolySeq diff_prime(const PolySeq& P, std::int64_t N);

// Gamma-valuedness of d'_N P at d+1 consecutive points.
bool is_orbit_periodic_criterion(const PolySeq& P, std::int64_t N);
// Direct coset comparison P(n)Gamma = P(n+N)Gamma over [-span, span].
bool is_orbit_periodic_direct(const PolySeq& P, std::int64_t N, std::int64_t span);
// Both routes; throws InternalConsistencyError if they disagree.
bool is_orbit_periodic(const PolySeq& P, std::int64_t N, std::int64_t check_span);

// Periodicity modulus from the constructive recursion
//   N(Q,0) = 1,
//   N(Q,d) = N(Q,d-1) * N_ab(Q',d) * Q'!   with Q' = q_prime_bound(Q,d),
//   N_ab(Q,d) = d! * q_prime_bound(Q,d)!.
// The modulus is an existence bound that grows past what fits in any
// integer type, so it is kept in factored form; divisibility is decided
// through Legendre valuations without expanding factorials.
class PeriodicityBound {
public:
    struct Expr;

    bool divides(const BigInt& p) const;
    std::string str() const;
    // Exact value when the expansion stays under max_bits.
    std::optional<BigInt> exact_value(unsigned max_bits = 256) const;

    explicit PeriodicityBound(Expr e);
    PeriodicityBound(const PeriodicityBound&);
    PeriodicityBound& operator=(const PeriodicityBound&);
    PeriodicityBound(PeriodicityBound&&) noexcept;
    PeriodicityBound& operator=(PeriodicityBound&&) noexcept;
    ~PeriodicityBound();

private:
    std::unique_ptr<Expr> expr_;
};

PeriodicityBound periodicity_modulus(unsigned Q, unsigned d);

// Least empirical period of the projected orbit of P, scanned up to
// scan_cap; requires P's values at 0..d to be Q-rational.  The returned
// period is checked to divide periodicity_modulus(Q, d).
std::optional<std::int64_t> verify_rational_orbit_periodic(const PolySeq& P, unsigned Q,
                                                           std::int64_t scan_cap = 100000);

} // namespace nildyn

#endif
