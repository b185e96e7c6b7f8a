#ifndef NILDYN_MANIFOLD_HPP
#define NILDYN_MANIFOLD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nildyn/heis.hpp"
#include "nildyn/torus.hpp"
#include "nildyn/window_set.hpp"

namespace nildyn {

// Canonical fundamental-domain representative of a coset g*Gamma: all three
// coordinates in [0,1).  Exact (rational) and float points share the type;
// float coordinates mirror the rational ones when exact.
struct HeisPoint {
    bool exact = true;
    GroupElement rep;                // valid when exact; coords in [0,1)
    long double a = 0, b = 0, c = 0; // always valid

    static HeisPoint origin();
};

// Deterministic reduction: right-multiply by (-floor a, -floor b, 0), then
// by (0,0,-floor c').
HeisPoint reduce(const GroupElement& g);
HeisPoint reduce_f(long double a, long double b, long double c);

// Canonical lift of an exact point; float point -> precondition error.
GroupElement lift(const HeisPoint& x);

// Max of coordinate-wise torus distances; stand-in for a right-invariant
// metric (equivalent on the compact quotient).
long double heis_dist(const HeisPoint& x, const HeisPoint& y);

// x |-> g x on X = G/Gamma.  Exact when g has rational coordinates.
struct Nilrotation {
    bool exact = true;
    GroupElement g;                   // valid when exact
    long double ga = 0, gb = 0, gc = 0;

    static Nilrotation of(const GroupElement& g);
    static Nilrotation of(long double ga, long double gb, long double gc);
};

// Canonical representative of g^n * x, via the closed power form and a
// single reduction (no per-step error accumulation on the float path).
HeisPoint apply(const Nilrotation& rot, const HeisPoint& x, const BigInt& n);

// Least Q <= Q_max making the canonical lift Q-rational.
std::optional<std::int64_t> is_rational_point(const HeisPoint& x, std::int64_t Q_max);

// { m in [1,horizon] : d(T_g^m x, center) < radius } in the max metric.
IntWindowSet return_times_nil(const Nilrotation& rot, const HeisPoint& x,
                              const HeisPoint& center, long double radius,
                              std::int64_t horizon);

// Lattice-containment experiment on the quadratic skew: which lattice points of
// (1/N)Z x (1/(4N))Z admit SA witnesses with F = {1, N+1, 2N+1}, and do any
// off-lattice controls (distance > 2 eps from the lattice)?
struct SAQuadHit {
    std::int64_t j = 0, k = 0; // y = (j/N, k/(4N))
    std::int64_t m = 0;        // least witness
};

struct SAQuadReport {
    std::int64_t N = 0;
    long double eps = 0;
    std::int64_t m_max = 0;
    std::int64_t grid_size = 0;       // N * 4N lattice candidates
    std::vector<SAQuadHit> witnessed; // sorted by (j, k)
    std::int64_t controls_total = 0;
    bool controls_clean = true;
    std::string to_json() const;
};

SAQuadReport sa_quadratic_experiment(long double alpha, std::int64_t N,
                                     std::int64_t grid_resolution, long double eps,
                                     std::int64_t m_max);

} // namespace nildyn

#endif
