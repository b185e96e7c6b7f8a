#include "nildyn/torus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nildyn {

long double tfrac(long double x) {
    long double f = x - std::floor(x);
    if (f >= 1.0L) f -= 1.0L; // floor rounding at negative epsilons
    if (f < 0.0L) f += 1.0L;
    return f;
}

Rational tfrac(const Rational& x) { return rfrac(x); }

long double torus_dist(long double x, long double y) {
    long double d = std::fabs(tfrac(x) - tfrac(y));
    return std::min(d, 1.0L - d);
}

TorusPoint TorusPoint::of(const Rational& r) {
    TorusPoint p;
    p.exact = true;
    p.rv = rfrac(r);
    p.fv = static_cast<long double>(p.rv);
    return p;
}

TorusPoint TorusPoint::of(long double f) {
    TorusPoint p;
    p.exact = false;
    p.fv = tfrac(f);
    return p;
}

namespace {

const std::map<std::string, long double>& builtin_constants() {
    static const std::map<std::string, long double> table = {
        // (sqrt(5)-1)/2 and sqrt(2)-1, 36 digits
        {"golden", 0.618033988749894848204586834365638118L},
        {"sqrt2m1", 0.414213562373095048801688724209698079L},
        {"inv_pi", 0.318309886183790671537767526745028724L},
        {"inv_e", 0.367879441171442321595523770161460867L},
        {"sqrt3m1", 0.732050807568877293527446341505872367L},
        {"sqrt5m2", 0.236067977499789696409173668731276235L},
        {"sqrt6m2", 0.449489742783178098197284074705891392L},
        {"sqrt7m2", 0.645751311064590590501615753639260426L},
        {"sqrt10m3", 0.162277660168379331998893544432718534L},
        {"cbrt2m1", 0.259921049894873164767210607278228350L},
        {"pim3", 0.141592653589793238462643383279502884L},
        {"em2", 0.718281828459045235360287471352662498L},
    };
    return table;
}

} // namespace

long double named_constant(const std::string& name) {
    auto& table = builtin_constants();
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown constant: " + name);
    return it->second;
}

std::map<std::string, long double> load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open constants file: " + path);
    std::map<std::string, long double> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string name = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto e = s.find_last_not_of(" \t\r");
            s.erase(e == std::string::npos ? 0 : e + 1);
        };
        strip(name);
        strip(val);
        if (name.empty()) continue;
        out[name] = std::strtold(val.c_str(), nullptr);
    }
    return out;
}

long double resolve_constant(const std::string& text,
                             const std::map<std::string, long double>& extra) {
    auto it = extra.find(text);
    if (it != extra.end()) return it->second;
    auto& table = builtin_constants();
    auto bit = table.find(text);
    if (bit != table.end()) return bit->second;
    char* end = nullptr;
    long double v = std::strtold(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw std::invalid_argument("not a constant name or decimal: " + text);
    return v;
}

long double RotationSystem::iterate(long double x, std::int64_t n) const {
    return tfrac(x + static_cast<long double>(n) * alpha.fv);
}

Rational RotationSystem::iterate(const Rational& x, const BigInt& n) const {
    if (!alpha.exact)
        throw std::invalid_argument("RotationSystem: exact iteration needs rational alpha");
    return rfrac(x + Rational(n) * alpha.rv);
}

std::pair<long double, long double> QuadraticSkew::iterate(long double x, long double y,
                                                           std::int64_t m) const {
    long double lm = static_cast<long double>(m);
    long double xm = tfrac(x + lm * alpha.fv);
    long double ym = tfrac(y + 2.0L * lm * x + lm * lm * alpha.fv);
    return {xm, ym};
}

long double SkewGeneric::h(long double x) const {
    long double v = constant;
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    for (const auto& t : terms) {
        long double arg = two_pi * t.frequency * x;
        v += t.cos_coeff * std::cos(arg) + t.sin_coeff * std::sin(arg);
    }
    return v;
}

std::pair<long double, long double> SkewGeneric::iterate(long double x, long double y,
                                                         std::int64_t n) const {
    return {tfrac(x + static_cast<long double>(n) * alpha.fv),
            tfrac(y + cocycle_sum(*this, x, n))};
}

long double cocycle_sum(const SkewGeneric& skew, long double x, std::int64_t n) {
    if (n == 0) return 0.0L;
    long double s = 0;
    if (n > 0) {
        for (std::int64_t i = 0; i < n; ++i)
            s += skew.h(x + static_cast<long double>(i) * skew.alpha.fv);
    } else {
        for (std::int64_t i = n; i < 0; ++i)
            s -= skew.h(x + static_cast<long double>(i) * skew.alpha.fv);
    }
    return s;
}

SAExactResult sa_exact_rotation(const TorusPoint& x, const std::vector<std::int64_t>& A) {
    if (A.empty()) throw std::invalid_argument("sa_exact_rotation: A must be nonempty");
    SAExactResult res;
    // f = 0 forces y = x: T^{0*m} x is x itself.
    if (std::find(A.begin(), A.end(), 0) != A.end()) {
        res.points = {x};
        return res;
    }
    if (A.size() == 1) {
        // Single nonzero frequency: the orbit {T^{am} x} is dense.
        res.full_torus = true;
        return res;
    }
    std::int64_t g = 0, gd = 0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        g = std::gcd(g, A[i]);
        for (std::size_t j = i + 1; j < A.size(); ++j) gd = std::gcd(gd, A[i] - A[j]);
    }
    std::int64_t N = gd / g;
    for (std::int64_t j = 0; j < N; ++j) {
        Rational off(j, N);
        res.points.push_back(x.exact ? TorusPoint::of(x.rv + off)
                                     : TorusPoint::of(x.fv + static_cast<long double>(off)));
    }
    return res;
}

std::optional<std::int64_t> sa_numeric_witness(const RotationSystem& sys, long double x,
                                               long double y,
                                               const std::vector<std::int64_t>& F,
                                               long double eps, std::int64_t m_max) {
    if (F.empty()) throw std::invalid_argument("sa_numeric_witness: F must be nonempty");
    if (!(eps > 0)) throw std::invalid_argument("sa_numeric_witness: eps must be positive");
    long double a = sys.alpha.fv;
    long double t = 0; // frac(m*alpha), incrementally
    for (std::int64_t m = 1; m <= m_max; ++m) {
        t = tfrac(t + a);
        bool ok = true;
        for (std::int64_t f : F) {
            if (torus_dist(x + static_cast<long double>(f) * t, y) >= eps) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
    }
    return std::nullopt;
}

std::optional<std::int64_t> sa_numeric_witness(const QuadraticSkew& sys, long double x0,
                                               long double y0, long double tx,
                                               long double ty,
                                               const std::vector<std::int64_t>& F,
                                               long double eps, std::int64_t m_max) {
    if (F.empty()) throw std::invalid_argument("sa_numeric_witness: F must be nonempty");
    if (!(eps > 0)) throw std::invalid_argument("sa_numeric_witness: eps must be positive");
    long double a = sys.alpha.fv;
    // T^{fm}(x0,y0) = (x0 + fm a, y0 + 2fm x0 + (fm)^2 a): with u = frac(ma),
    // v = frac(m^2 a) the coordinates are frac(x0 + f u + 2fm x0)… m^2 kept
    // through v so the pass stays O(1) per step.
    long double u = 0, v = 0;
    for (std::int64_t m = 1; m <= m_max; ++m) {
        long double u_prev = u;
        u = tfrac(u + a);
        // m^2 - (m-1)^2 = 2m-1, so v += (2m-1)a = u_prev + u (mod 1).
        v = tfrac(v + u_prev + u);
        bool ok = true;
        for (std::int64_t f : F) {
            long double lf = static_cast<long double>(f);
            long double px = x0 + lf * u;
            long double py = y0 + 2.0L * lf * static_cast<long double>(m) * x0 + lf * lf * v;
            if (torus_dist(px, tx) >= eps || torus_dist(py, ty) >= eps) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
    }
    return std::nullopt;
}

std::vector<std::optional<std::int64_t>> sa_rotation_grid_witnesses(
    long double alpha, long double x, const std::vector<std::int64_t>& F,
    std::int64_t denom, long double eps, std::int64_t m_max) {
    if (F.empty()) throw std::invalid_argument("sa_rotation_grid_witnesses: F empty");
    if (denom < 1) throw std::invalid_argument("sa_rotation_grid_witnesses: denom < 1");
    std::vector<std::optional<std::int64_t>> wit(denom);
    std::int64_t remaining = denom;
    long double t = 0;
    long double ld = static_cast<long double>(denom);
    long double f0 = static_cast<long double>(F[0]);
    for (std::int64_t m = 1; m <= m_max && remaining > 0; ++m) {
        t = tfrac(t + alpha);
        // Only grid points within eps of T^{F[0] m} x can be witnessed at m.
        long double p0 = tfrac(x + f0 * t);
        std::int64_t jlo = static_cast<std::int64_t>(std::ceil((p0 - eps) * ld));
        std::int64_t jhi = static_cast<std::int64_t>(std::floor((p0 + eps) * ld));
        for (std::int64_t jr = jlo; jr <= jhi; ++jr) {
            std::int64_t j = ((jr % denom) + denom) % denom;
            if (wit[j]) continue;
            long double y = static_cast<long double>(j) / ld;
            bool ok = true;
            for (std::int64_t f : F) {
                if (torus_dist(x + static_cast<long double>(f) * t, y) >= eps) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                wit[j] = m;
                --remaining;
            }
        }
    }
    return wit;
}

IntWindowSet return_times(const RotationSystem& sys, long double x, long double center,
                          long double radius, std::int64_t horizon) {
    if (!(radius > 0)) throw std::invalid_argument("return_times: radius must be positive");
    IntWindowSet out(1, horizon);
    for (std::int64_t m = 1; m <= horizon; ++m)
        if (torus_dist(sys.iterate(x, m), center) < radius) out.insert(m);
    return out;
}

IntWindowSet return_times(const QuadraticSkew& sys, long double x0, long double y0,
                          long double cx, long double cy, long double radius,
                          std::int64_t horizon) {
    if (!(radius > 0)) throw std::invalid_argument("return_times: radius must be positive");
    IntWindowSet out(1, horizon);
    for (std::int64_t m = 1; m <= horizon; ++m) {
        auto [px, py] = sys.iterate(x0, y0, m);
        if (std::max(torus_dist(px, cx), torus_dist(py, cy)) < radius) out.insert(m);
    }
    return out;
}

} // namespace nildyn
