#ifndef NILDYN_TORUS_HPP
#define NILDYN_TORUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nildyn/errors.hpp"
#include "nildyn/rational.hpp"
#include "nildyn/window_set.hpp"

namespace nildyn {

// Fractional part in [0, 1).
long double tfrac(long double x);
Rational tfrac(const Rational& x);

// d_T(x, y) = min(|x-y|, 1-|x-y|).
long double torus_dist(long double x, long double y);

// Point of T = R/Z.  Exact rational when available, so lattice goldens are
// bit-stable; long double otherwise.
struct TorusPoint {
    bool exact = true;
    Rational rv;        // valid when exact
    long double fv = 0; // always valid

    static TorusPoint of(const Rational& r);
    static TorusPoint of(long double f);

    bool operator==(const TorusPoint& o) const = default;
};

// Quadratic irrationals used by the experiments, 30+ decimal digits.
// lookup: user-loaded constants (load_constants) shadow the built-ins.
long double named_constant(const std::string& name);
// Plain-text constants file, one `name=decimal` per line; '#' comments.
std::map<std::string, long double> load_constants(const std::string& path);
// Resolve a CLI-style value: a constant name or a decimal literal.
long double resolve_constant(const std::string& text,
                             const std::map<std::string, long double>& extra = {});

struct RotationSystem {
    TorusPoint alpha;
    // T^n x, closed form x + n*alpha.
    long double iterate(long double x, std::int64_t n) const;
    Rational iterate(const Rational& x, const BigInt& n) const; // exact alpha only
};

// T(x,y) = (x+a, y+2x+a); T^m(x,y) = (x+ma, y+2mx+m^2 a).
struct QuadraticSkew {
    TorusPoint alpha;
    std::pair<long double, long double> iterate(long double x, long double y,
                                                std::int64_t m) const;
};

struct TrigTerm {
    int frequency = 1;
    double cos_coeff = 0;
    double sin_coeff = 0;
};

// T_h(x,y) = (x+a, y + h(x) mod 1) with h a trigonometric polynomial.
struct SkewGeneric {
    TorusPoint alpha;
    double constant = 0;
    std::vector<TrigTerm> terms;

    long double h(long double x) const;
    std::pair<long double, long double> iterate(long double x, long double y,
                                                std::int64_t n) const;
};

// h_n(x): sum_{i=0}^{n-1} h(x+ia) for n>0, 0 for n=0,
// -sum_{i=n}^{-1} h(x+ia) for n<0.
long double cocycle_sum(const SkewGeneric& skew, long double x, std::int64_t n);

// SA(x, A) for an irrational rotation: either the full torus or the coset
// x + (1/N)Z with N = gcd(A-A)/gcd(A).
struct SAExactResult {
    bool full_torus = false;
    std::vector<TorusPoint> points; // sorted by offset when not full
};

SAExactResult sa_exact_rotation(const TorusPoint& x, const std::vector<std::int64_t>& A);

// Least m <= m_max with d(T^{fm} x, y) < eps for every f in F, else none.
std::optional<std::int64_t> sa_numeric_witness(const RotationSystem& sys, long double x,
                                               long double y,
                                               const std::vector<std::int64_t>& F,
                                               long double eps, std::int64_t m_max);
std::optional<std::int64_t> sa_numeric_witness(const QuadraticSkew& sys, long double x0,
                                               long double y0, long double tx,
                                               long double ty,
                                               const std::vector<std::int64_t>& F,
                                               long double eps, std::int64_t m_max);

// Witness search for every grid point j/denom at once; one orbit pass instead
// of a scan per grid point.  witnesses[j] is the least m or nullopt.
std::vector<std::optional<std::int64_t>> sa_rotation_grid_witnesses(
    long double alpha, long double x, const std::vector<std::int64_t>& F,
    std::int64_t denom, long double eps, std::int64_t m_max);

// { m in [1, horizon] : d(T^m x, center) < radius }.
IntWindowSet return_times(const RotationSystem& sys, long double x, long double center,
                          long double radius, std::int64_t horizon);
IntWindowSet return_times(const QuadraticSkew& sys, long double x0, long double y0,
                          long double cx, long double cy, long double radius,
                          std::int64_t horizon);

} // namespace nildyn

#endif
