#include "nildyn/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

namespace nildyn {

namespace {

// 113-bit floats for the closed power form on the float path: C(n,2)*ga*gb
// at n ~ 10^6 would otherwise eat most of a long double mantissa.
using Quad = boost::multiprecision::cpp_bin_float_quad;

Quad qfrac(const Quad& x) {
    Quad f = x - boost::multiprecision::floor(x);
    if (f >= 1) f -= 1;
    if (f < 0) f += 1;
    return f;
}

} // namespace

HeisPoint HeisPoint::origin() {
    HeisPoint p;
    p.exact = true;
    p.rep = GroupElement::identity();
    return p;
}

HeisPoint reduce(const GroupElement& g) {
    // g * (p, q, 0) = (a+p, b+q, c + a q); then (.,.,c') * (0,0,r) shifts c'.
    BigInt p = -rfloor(g.a), q = -rfloor(g.b);
    Rational a = g.a + p, b = g.b + q, c = g.c + g.a * Rational(q);
    c -= rfloor(c);
    HeisPoint out;
    out.exact = true;
    out.rep = {a, b, c};
    out.a = static_cast<long double>(a);
    out.b = static_cast<long double>(b);
    out.c = static_cast<long double>(c);
    return out;
}

HeisPoint reduce_f(long double a, long double b, long double c) {
    long double q = -std::floor(b);
    long double ra = tfrac(a);
    long double rc = tfrac(c + a * q);
    HeisPoint out;
    out.exact = false;
    out.a = ra;
    out.b = tfrac(b);
    out.c = rc;
    return out;
}

GroupElement lift(const HeisPoint& x) {
    if (!x.exact) throw std::invalid_argument("lift: point has float coordinates");
    return x.rep;
}

long double heis_dist(const HeisPoint& x, const HeisPoint& y) {
    return std::max({torus_dist(x.a, y.a), torus_dist(x.b, y.b), torus_dist(x.c, y.c)});
}

Nilrotation Nilrotation::of(const GroupElement& g) {
    Nilrotation r;
    r.exact = true;
    r.g = g;
    r.ga = static_cast<long double>(g.a);
    r.gb = static_cast<long double>(g.b);
    r.gc = static_cast<long double>(g.c);
    return r;
}

Nilrotation Nilrotation::of(long double ga, long double gb, long double gc) {
    Nilrotation r;
    r.exact = false;
    r.ga = ga;
    r.gb = gb;
    r.gc = gc;
    return r;
}

HeisPoint apply(const Nilrotation& rot, const HeisPoint& x, const BigInt& n) {
    if (rot.exact && x.exact) {
        return reduce(power(rot.g, n) * x.rep);
    }
    Quad qn(n.str());
    Quad binom2 = qn * (qn - 1) / 2;
    Quad A = qn * Quad(rot.ga), B = qn * Quad(rot.gb);
    Quad C = qn * Quad(rot.gc) + binom2 * Quad(rot.ga) * Quad(rot.gb);
    // (A,B,C) * (xa,xb,xc) then canonical reduction, all in quad precision.
    Quad pa = A + Quad(x.a), pb = B + Quad(x.b);
    Quad pc = C + Quad(x.c) + A * Quad(x.b);
    Quad q = -boost::multiprecision::floor(pb);
    HeisPoint out;
    out.exact = false;
    out.a = static_cast<long double>(qfrac(pa));
    out.b = static_cast<long double>(qfrac(pb));
    out.c = static_cast<long double>(qfrac(pc + pa * q));
    return out;
}

std::optional<std::int64_t> is_rational_point(const HeisPoint& x, std::int64_t Q_max) {
    return rationality_order(lift(x), Q_max);
}

IntWindowSet return_times_nil(const Nilrotation& rot, const HeisPoint& x,
                              const HeisPoint& center, long double radius,
                              std::int64_t horizon) {
    if (!(radius > 0))
        throw std::invalid_argument("return_times_nil: radius must be positive");
    IntWindowSet out(1, horizon);
    for (std::int64_t m = 1; m <= horizon; ++m)
        if (heis_dist(apply(rot, x, m), center) < radius) out.insert(m);
    return out;
}

namespace {

std::string fmt12(long double v) {
    std::ostringstream os;
    os.precision(12);
    os << static_cast<double>(v);
    return os.str();
}

} // namespace

std::string SAQuadReport::to_json() const {
    nlohmann::json j;
    auto grid = nlohmann::json::array();
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t b = 0; b < 4 * N; ++b) grid.push_back({a, b});
    j["grid"] = grid;
    auto wits = nlohmann::json::array();
    for (const auto& h : witnessed) {
        nlohmann::json w;
        w["y"] = {fmt12(static_cast<long double>(h.j) / N),
                  fmt12(static_cast<long double>(h.k) / (4 * N))};
        w["m"] = h.m;
        wits.push_back(w);
    }
    j["witnessed"] = wits;
    j["controls_clean"] = controls_clean;
    j["params"] = {{"N", N},
                   {"eps", fmt12(eps)},
                   {"m_max", m_max},
                   {"controls_total", controls_total}};
    return j.dump();
}

SAQuadReport sa_quadratic_experiment(long double alpha, std::int64_t N,
                                     std::int64_t grid_resolution, long double eps,
                                     std::int64_t m_max) {
    if (N < 2) throw std::invalid_argument("sa_quadratic_experiment: N must be >= 2");
    if (grid_resolution < 2)
        throw std::invalid_argument("sa_quadratic_experiment: grid_resolution must be >= 2");
    if (!(eps > 0) || !(eps < 0.25L / (4 * N)))
        throw std::invalid_argument("sa_quadratic_experiment: eps too large for the lattice");
    if (!(eps < 0.5L / grid_resolution))
        throw std::invalid_argument("sa_quadratic_experiment: eps too large for the control grid");

    SAQuadReport rep;
    rep.N = N;
    rep.eps = eps;
    rep.m_max = m_max;
    rep.grid_size = N * 4 * N;

    std::vector<std::int64_t> F = {1, N + 1, 2 * N + 1};
    std::vector<std::int64_t> least(static_cast<std::size_t>(rep.grid_size), 0);

    // Off-lattice controls: the (1/R)-grid offset by 1/(2R), kept only at
    // distance > 2 eps from the target lattice, plus two irrational points.
    const std::int64_t R = grid_resolution;
    auto lattice_dist_x = [&](long double x) {
        long double s = x * N;
        return torus_dist(x, std::floor(s + 0.5L) / N);
    };
    auto lattice_dist_y = [&](long double y) {
        long double s = y * (4 * N);
        return torus_dist(y, std::floor(s + 0.5L) / (4 * N));
    };
    auto is_control = [&](long double x, long double y) {
        return lattice_dist_x(x) > 2 * eps && lattice_dist_y(y) > 2 * eps;
    };
    std::int64_t control_cells = 0;
    for (std::int64_t i = 0; i < R; ++i)
        for (std::int64_t l = 0; l < R; ++l)
            if (is_control((2 * i + 1) / (2.0L * R), (2 * l + 1) / (2.0L * R)))
                ++control_cells;
    struct NamedControl {
        long double x, y;
        bool hit = false;
    };
    std::vector<NamedControl> named = {
        {named_constant("inv_pi"), named_constant("inv_e")},
        {tfrac(named_constant("inv_e") * 3), tfrac(named_constant("inv_pi") * 2)},
    };
    rep.controls_total = control_cells + static_cast<std::int64_t>(named.size());

    bool control_hit = false;
    long double u = 0, v = 0; // frac(m a), frac(m^2 a)
    for (std::int64_t m = 1; m <= m_max; ++m) {
        long double u_prev = u;
        u = tfrac(u + alpha);
        v = tfrac(v + u_prev + u);

        // Candidate lattice cell from f = 1; eps < 1/(8N) makes it unique.
        std::int64_t jc = static_cast<std::int64_t>(std::floor(u * N + 0.5L)) % N;
        std::int64_t kc = static_cast<std::int64_t>(std::floor(v * 4 * N + 0.5L)) % (4 * N);
        long double ty0 = static_cast<long double>(jc) / N;
        long double ty1 = static_cast<long double>(kc) / (4 * N);
        std::size_t cell = static_cast<std::size_t>(jc * 4 * N + kc);
        if (least[cell] == 0) {
            bool ok = true;
            for (std::int64_t f : F) {
                long double lf = static_cast<long double>(f);
                if (torus_dist(lf * u, ty0) >= eps || torus_dist(lf * lf * v, ty1) >= eps) {
                    ok = false;
                    break;
                }
            }
            if (ok) least[cell] = m;
        }

        // Candidate control cell from f = 1; the control grid is also
        // eps-separated, so at most one cell can be hit at this m.
        long double gx = (std::floor(u * R) + 0.5L) / R;
        long double gy = (std::floor(v * R) + 0.5L) / R;
        if (is_control(gx, gy) && torus_dist(u, gx) < eps && torus_dist(v, gy) < eps) {
            bool ok = true;
            for (std::int64_t f : F) {
                long double lf = static_cast<long double>(f);
                if (torus_dist(lf * u, gx) >= eps || torus_dist(lf * lf * v, gy) >= eps) {
                    ok = false;
                    break;
                }
            }
            if (ok) control_hit = true;
        }

        for (auto& nc : named) {
            if (nc.hit) continue;
            bool ok = true;
            for (std::int64_t f : F) {
                long double lf = static_cast<long double>(f);
                if (torus_dist(lf * u, nc.x) >= eps || torus_dist(lf * lf * v, nc.y) >= eps) {
                    ok = false;
                    break;
                }
            }
            if (ok) nc.hit = true;
        }
    }
    for (const auto& nc : named) control_hit = control_hit || nc.hit;
    rep.controls_clean = !control_hit;
    for (std::int64_t jk = 0; jk < rep.grid_size; ++jk) {
        if (least[static_cast<std::size_t>(jk)] != 0)
            rep.witnessed.push_back(
                {jk / (4 * N), jk % (4 * N), least[static_cast<std::size_t>(jk)]});
    }
    return rep;
}

} // namespace nildyn
