#include "nildyn/experiments.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nildyn/counterexample.hpp"
#include "nildyn/heis.hpp"
#include "nildyn/manifold.hpp"
#include "nildyn/search.hpp"
#include "nildyn/torus.hpp"
#include "nildyn/window_set.hpp"

namespace nildyn::exp {

namespace {

// Fixed 12-significant-digit float formatting for byte-stable artifacts.
std::string fmt12(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", v);
    return buf;
}

std::string join_ints(const std::vector<std::int64_t>& xs, char sep) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << sep;
        os << xs[i];
    }
    return os.str();
}

} // namespace

std::string Params::get_str(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
}

std::int64_t Params::get_int(const std::string& key, std::int64_t def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("parameter '" + key + "': expected integer, got '" + it->second +
                          "'");
    }
}

long double Params::get_float(const std::string& key, long double def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    char* end = nullptr;
    long double v = std::strtold(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError("parameter '" + key + "': expected decimal, got '" + it->second +
                          "'");
    return v;
}

std::vector<std::int64_t> Params::get_int_list(const std::string& key,
                                               const std::string& def) const {
    std::string text = get_str(key, def);
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw ConfigError("parameter '" + key + "': bad integer '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("parameter '" + key + "': empty list");
    return out;
}

long double Params::get_alpha(const std::string& key, const std::string& def) const {
    std::string text = get_str(key, def);
    try {
        return resolve_constant(text);
    } catch (const std::exception& e) {
        throw ConfigError("parameter '" + key + "': " + e.what());
    }
}

std::vector<std::string> parallel_map(std::size_t count,
                                      const std::function<std::string(std::size_t)>& fn) {
    std::vector<std::string> results(count);
    int workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

namespace {

// --- sa-rotation ------------------------------------------------------------

ExperimentResult run_sa_rotation(const Params& p) {
    long double alpha = p.get_alpha("alpha", "golden");
    std::vector<std::int64_t> A = p.get_int_list("set", "3,7,11");
    long double eps = p.get_float("eps", 1e-3L);
    std::int64_t m_max = p.get_int("mmax", 1000000);
    if (!(eps > 0)) throw ConfigError("eps must be positive");
    if (m_max < 1) throw ConfigError("mmax must be >= 1");

    SAExactResult formula = sa_exact_rotation(TorusPoint::of(Rational(0)), A);
    std::int64_t denom = formula.full_torus
                             ? 8
                             : std::max<std::int64_t>(1, 2 * static_cast<std::int64_t>(
                                                             formula.points.size()));
    RotationSystem sys{TorusPoint::of(alpha)};

    std::vector<std::string> items = parallel_map(
        static_cast<std::size_t>(denom), [&](std::size_t j) {
            long double y = static_cast<long double>(j) / denom;
            auto w = sa_numeric_witness(sys, 0.0L, y, A, eps, m_max);
            std::string wtxt = w ? std::to_string(*w) : std::string();
            std::ostringstream os;
            os << "rotation," << fmt12(0.0L) << "," << fmt12(y) << "," << join_ints(A, ';')
               << "," << fmt12(eps) << "," << m_max << "," << wtxt << ",0";
            return os.str() + "\x1f" + (w ? "1" : "0");
        });

    // Agreement between the exact formula and the witnessed grid.
    bool agree = true;
    std::vector<long double> formula_vals;
    for (const auto& pt : formula.points) formula_vals.push_back(pt.fv);
    std::vector<std::int64_t> witnessed_j;
    std::ostringstream csv;
    csv << "system,x,y,F,eps,m_max,witness_m,elapsed_ns\n";
    for (std::int64_t j = 0; j < denom; ++j) {
        const std::string& item = items[static_cast<std::size_t>(j)];
        auto cut = item.find('\x1f');
        csv << item.substr(0, cut) << "\n";
        bool witnessed = item.substr(cut + 1) == "1";
        long double y = static_cast<long double>(j) / denom;
        bool on_formula = formula.full_torus;
        for (long double fv : formula_vals)
            if (torus_dist(y, fv) <= eps) on_formula = true;
        if (witnessed) witnessed_j.push_back(j);
        if (witnessed != on_formula) agree = false;
    }

    nlohmann::json j;
    j["full_torus"] = formula.full_torus;
    auto fp = nlohmann::json::array();
    for (long double fv : formula_vals) fp.push_back(fmt12(fv));
    j["formula_points"] = fp;
    auto wj = nlohmann::json::array();
    for (std::int64_t jj : witnessed_j) {
        wj.push_back(fmt12(static_cast<long double>(jj) / denom));
    }
    j["witnessed"] = wj;
    j["agreement"] = agree;
    j["params"] = {{"alpha", p.get_str("alpha", "golden")},
                   {"set", join_ints(A, ',')},
                   {"eps", fmt12(eps)},
                   {"mmax", m_max},
                   {"grid_denom", denom}};

    ExperimentResult res;
    res.exit_code = agree ? 0 : 2;
    res.summary = agree ? "sa-rotation: formula and witnessed grid agree"
                        : "sa-rotation: MISMATCH between formula and witnessed grid";
    res.files.emplace_back("sa-rotation.csv", csv.str());
    res.files.emplace_back("sa-rotation.json", j.dump() + "\n");
    return res;
}

// --- sa-quadratic -----------------------------------------------------------

ExperimentResult run_sa_quadratic(const Params& p) {
    long double alpha = p.get_alpha("alpha", "golden");
    std::int64_t N = p.get_int("N", 2);
    std::int64_t resolution = p.get_int("resolution", 64);
    long double eps = p.get_float("eps", 1e-3L);
    std::int64_t m_max = p.get_int("mmax", 1000000);

    SAQuadReport rep;
    try {
        rep = sa_quadratic_experiment(alpha, N, resolution, eps, m_max);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    std::ostringstream csv;
    csv << "system,x,y,F,eps,m_max,witness_m,elapsed_ns\n";
    std::vector<std::int64_t> F = {1, N + 1, 2 * N + 1};
    for (const auto& h : rep.witnessed) {
        csv << "quadskew,0;0," << fmt12(static_cast<long double>(h.j) / N) << ";"
            << fmt12(static_cast<long double>(h.k) / (4 * N)) << "," << join_ints(F, ';')
            << "," << fmt12(eps) << "," << m_max << "," << h.m << ",0\n";
    }

    ExperimentResult res;
    res.exit_code = rep.controls_clean ? 0 : 2;
    std::ostringstream sum;
    sum << "sa-quadratic: N=" << N << " witnessed=" << rep.witnessed.size()
        << " controls_clean=" << (rep.controls_clean ? "true" : "false");
    res.summary = sum.str();
    res.files.emplace_back("sa-quadratic.csv", csv.str());
    res.files.emplace_back("sa-quadratic.json", rep.to_json() + "\n");
    return res;
}

// --- nilpoly-periodicity ------------------------------------------------------

GroupElement random_element(std::mt19937_64& rng, std::int64_t den_max, bool central) {
    std::uniform_int_distribution<std::int64_t> dden(1, den_max);
    auto coord = [&] {
        std::int64_t d = dden(rng);
        std::uniform_int_distribution<std::int64_t> dnum(0, d - 1);
        return Rational(dnum(rng), d);
    };
    if (central) return GroupElement{0, 0, coord()};
    return GroupElement{coord(), coord(), coord()};
}

ExperimentResult run_nilpoly_periodicity(const Params& p) {
    std::uint64_t seed = static_cast<std::uint64_t>(p.get_int("seed", 1));
    std::int64_t count = p.get_int("count", 50);
    std::int64_t den_max = p.get_int("denmax", 6);
    std::int64_t scan_cap = p.get_int("scancap", 500000);
    if (count < 1 || den_max < 1) throw ConfigError("count and denmax must be >= 1");

    const Filtration& filt = Filtration::heisenberg_lower_central();
    std::atomic<bool> all_ok{true};

    std::vector<std::string> rows = parallel_map(
        static_cast<std::size_t>(count), [&](std::size_t i) {
            std::mt19937_64 rng(seed * 1000003 + i);
            std::vector<GroupElement> coeffs = {random_element(rng, den_max, false),
                                                random_element(rng, den_max, false),
                                                random_element(rng, den_max, true)};
            PolySeq P(filt, coeffs);
            BigInt q = 1;
            for (unsigned k = 0; k <= filt.degree; ++k)
                q = std::max(q, rationality_order_exact(P.eval(k)));
            auto period = verify_rational_orbit_periodic(
                P, static_cast<unsigned>(q.convert_to<std::uint64_t>()), scan_cap);
            if (!period) all_ok = false;
            std::ostringstream os;
            os << i << "," << q << "," << (period ? std::to_string(*period) : std::string())
               << "," << P.to_json();
            return os.str();
        });

    std::ostringstream csv;
    csv << "index,q,period,polyseq\n";
    for (const auto& r : rows) {
        auto third = r.find(',', r.find(',', r.find(',') + 1) + 1);
        std::string head = r.substr(0, third);
        std::string json = r.substr(third + 1);
        std::string quoted = "\"";
        for (char ch : json) {
            if (ch == '"') quoted += "\"\"";
            else quoted += ch;
        }
        quoted += "\"";
        csv << head << "," << quoted << "\n";
    }

    nlohmann::json j;
    j["count"] = count;
    j["all_periodic_within_bound"] = all_ok.load();
    j["params"] = {{"seed", seed}, {"denmax", den_max}, {"scancap", scan_cap}};
    ExperimentResult res;
    res.exit_code = all_ok ? 0 : 2;
    res.summary = all_ok ? "nilpoly-periodicity: all orbits periodic, periods divide the modulus"
                         : "nilpoly-periodicity: FAILURE (period not found within scan cap)";
    res.files.emplace_back("nilpoly-periodicity.csv", csv.str());
    res.files.emplace_back("nilpoly-periodicity.json", j.dump() + "\n");
    return res;
}

// --- heis-return-times --------------------------------------------------------

ExperimentResult run_heis_return_times(const Params& p) {
    long double alpha = p.get_alpha("alpha", "golden");
    long double radius = p.get_float("radius", 0.05L);
    std::int64_t horizon = p.get_int("horizon", 100000);
    if (!(radius > 0)) throw ConfigError("radius must be positive");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");

    Nilrotation rot = Nilrotation::of(alpha, 0.0L, 0.0L);
    HeisPoint x = HeisPoint::origin();
    HeisPoint center = HeisPoint::origin();

    // Fixed chunking (independent of worker count) keeps bytes stable.
    const std::int64_t chunk = 1 << 13;
    std::size_t nchunks = static_cast<std::size_t>((horizon + chunk - 1) / chunk);
    std::vector<std::string> parts = parallel_map(nchunks, [&](std::size_t ci) {
        std::int64_t lo = static_cast<std::int64_t>(ci) * chunk + 1;
        std::int64_t hi = std::min<std::int64_t>(horizon, lo + chunk - 1);
        std::ostringstream os;
        for (std::int64_t m = lo; m <= hi; ++m) {
            if (heis_dist(apply(rot, x, m), center) < radius) os << m << "\n";
        }
        return os.str();
    });

    IntWindowSet hits(1, horizon);
    std::ostringstream csv;
    csv << "m\n";
    for (const auto& part : parts) {
        std::stringstream ss(part);
        std::string line;
        while (std::getline(ss, line)) {
            hits.insert(std::stoll(line));
            csv << line << "\n";
        }
    }
    SyndeticityVerdict verdict = syndeticity_gap(hits);

    nlohmann::json j;
    j["count"] = hits.count();
    j["gap"] = verdict.gap ? nlohmann::json(*verdict.gap) : nlohmann::json();
    j["reason"] = verdict.reason == SyndeticityVerdict::Reason::found
                      ? "found"
                      : (verdict.reason == SyndeticityVerdict::Reason::empty_set
                             ? "empty_set"
                             : "edge_inconclusive");
    j["params"] = {{"alpha", p.get_str("alpha", "golden")},
                   {"radius", fmt12(radius)},
                   {"horizon", horizon}};
    ExperimentResult res;
    res.exit_code = hits.empty() ? 2 : 0;
    std::ostringstream sum;
    sum << "heis-return-times: " << hits.count() << " returns in [1," << horizon << "]";
    res.summary = sum.str();
    res.files.emplace_back("heis-return-times.csv", csv.str());
    res.files.emplace_back("heis-return-times.txt", hits.to_runs_text());
    res.files.emplace_back("heis-return-times.json", j.dump() + "\n");
    return res;
}

// --- counterexample-verify ------------------------------------------------------

ExperimentResult run_counterexample_verify(const Params& p) {
    std::int64_t horizon = p.get_int("horizon", 1 << 24);
    std::int64_t grid = p.get_int("grid", 8);
    std::int64_t flen = p.get_int("flen", 4);
    if (horizon < 2 || grid < 1 || flen < 1) throw ConfigError("bad counterexample params");

    bool cover_ok = cx::verify_cover(static_cast<std::uint64_t>(horizon));

    std::size_t pairs = static_cast<std::size_t>(grid * grid);
    std::vector<std::string> items = parallel_map(pairs, [&](std::size_t idx) {
        std::uint64_t I = idx / static_cast<std::uint64_t>(grid) + 1;
        std::uint64_t N = idx % static_cast<std::uint64_t>(grid) + 1;
        cx::Refutation r = cx::thickness_refutation(I, N, static_cast<int>(flen),
                                                    static_cast<std::uint64_t>(horizon));
        std::ostringstream csv;
        csv << I << "," << N << "," << r.F_len << "," << r.m_bound << ","
            << (r.witness ? "true" : "false") << "," << r.certificate.size() << ","
            << (r.certificate_covers ? "true" : "false") << ","
            << (r.cross_check_ok ? "true" : "false");
        return csv.str() + "\x1f" + cx::to_json(r);
    });

    bool ok = cover_ok;
    std::ostringstream csv;
    csv << "I,N,F_len,m_bound,witness_found,certificate_size,certificate_covers,cross_check_ok\n";
    std::string refs;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto cut = items[i].find('\x1f');
        std::string row = items[i].substr(0, cut);
        csv << row << "\n";
        if (!refs.empty()) refs += ",";
        refs += items[i].substr(cut + 1);
        // Any found witness, failed cover, or failed cross-check is a failure.
        std::stringstream ss(row);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
        if (cols[4] == "true" || cols[6] != "true" || cols[7] != "true") ok = false;
    }

    std::string json = std::string("{\"cover_horizon\":") + std::to_string(horizon) +
                       ",\"cover_ok\":" + (cover_ok ? "true" : "false") +
                       ",\"refutations\":[" + refs + "]}\n";
    ExperimentResult res;
    res.exit_code = ok ? 0 : 2;
    std::ostringstream sum;
    sum << "counterexample-verify: cover=" << (cover_ok ? "ok" : "FAIL") << " refutations="
        << pairs << (ok ? " all clean" : " FAILURES present");
    res.summary = sum.str();
    res.files.emplace_back("counterexample-verify.csv", csv.str());
    res.files.emplace_back("counterexample-verify.json", json);
    return res;
}

// --- vdw-starters ---------------------------------------------------------------

ExperimentResult run_vdw_starters(const Params& p) {
    long double alpha = p.get_alpha("alpha", "sqrt2m1");
    std::string window = p.get_str("window", "0,0.1");
    std::int64_t N = p.get_int("N", 5);
    std::int64_t k = p.get_int("k", 3);
    std::int64_t m_max = p.get_int("mmax", 1000);
    std::int64_t horizon = p.get_int("horizon", 1000000);

    auto comma = window.find(',');
    if (comma == std::string::npos) throw ConfigError("window must be 'lo,hi'");
    long double wlo = std::strtold(window.substr(0, comma).c_str(), nullptr);
    long double whi = std::strtold(window.substr(comma + 1).c_str(), nullptr);
    if (!(wlo < whi)) throw ConfigError("window must satisfy lo < hi");

    // A = { n <= horizon : frac(n alpha) in (wlo, whi) }.
    IntWindowSet A(1, horizon);
    long double t = 0;
    for (std::int64_t n = 1; n <= horizon; ++n) {
        t = tfrac(t + alpha);
        if (t > wlo && t < whi) A.insert(n);
    }

    IntWindowSet S(0, 0);
    try {
        S = starters(A, N, k, m_max);
    } catch (const InsufficientWindowError& e) {
        throw ConfigError(std::string("starter window too small: ") + e.what());
    }

    // Longest run of consecutive starters; a run of length L contains an
    // interval of every length <= L.
    std::int64_t max_run = 0, run = 0;
    for (std::int64_t b = S.lo(); b <= S.hi(); ++b) {
        run = S.contains(b) ? run + 1 : 0;
        max_run = std::max(max_run, run);
    }
    bool thick20 = max_run >= 20;

    std::ostringstream csv;
    csv << "run_start,run_end,length\n";
    {
        std::int64_t start = 0;
        bool in_run = false;
        for (std::int64_t b = S.lo(); b <= S.hi() + 1; ++b) {
            bool m = b <= S.hi() && S.contains(b);
            if (m && !in_run) {
                start = b;
                in_run = true;
            } else if (!m && in_run) {
                csv << start << "," << (b - 1) << "," << (b - start) << "\n";
                in_run = false;
            }
        }
    }

    nlohmann::json j;
    j["count"] = S.count();
    j["max_run"] = max_run;
    j["thick_to_20"] = thick20;
    j["params"] = {{"alpha", p.get_str("alpha", "sqrt2m1")},
                   {"window", window},
                   {"N", N},
                   {"k", k},
                   {"mmax", m_max},
                   {"horizon", horizon}};
    ExperimentResult res;
    res.exit_code = S.empty() ? 2 : 0;
    std::ostringstream sum;
    sum << "vdw-starters: " << S.count() << " starters, max_run=" << max_run
        << ", thick_to_20=" << (thick20 ? "true" : "false");
    res.summary = sum.str();
    res.files.emplace_back("vdw-starters.csv", csv.str());
    res.files.emplace_back("vdw-starters.txt", S.to_runs_text());
    res.files.emplace_back("vdw-starters.json", j.dump() + "\n");
    return res;
}

} // namespace

const std::vector<ExperimentInfo>& catalog() {
    static const std::vector<ExperimentInfo> entries = {
        {"sa-rotation",
         "Exact vs witnessed simultaneous approximation for an irrational rotation",
         "--alpha NAME|DEC --set a,b,c --eps E --mmax M"},
        {"sa-quadratic",
         "Lattice containment of witnessed SA points for the quadratic skew",
         "--alpha NAME|DEC --N INT --resolution INT --eps E --mmax M"},
        {"nilpoly-periodicity",
         "Random rational polynomial sequences: empirical periods vs the modulus",
         "--seed S --count C --denmax D --scancap K"},
        {"heis-return-times",
         "Return times of a Heisenberg nilrotation orbit to a ball",
         "--alpha NAME|DEC --radius R --horizon H"},
        {"counterexample-verify",
         "Cover and nowhere-thickness certificates for the explicit syndetic set",
         "--horizon H --grid G --flen L"},
        {"vdw-starters",
         "Starter sets for common-dilate progressions inside a Bohr-like set",
         "--alpha NAME|DEC --window lo,hi --N INT --k INT --mmax M --horizon H"},
    };
    return entries;
}

ExperimentResult run_experiment(const std::string& name, const Params& params) {
    if (name == "sa-rotation") return run_sa_rotation(params);
    if (name == "sa-quadratic") return run_sa_quadratic(params);
    if (name == "nilpoly-periodicity") return run_nilpoly_periodicity(params);
    if (name == "heis-return-times") return run_heis_return_times(params);
    if (name == "counterexample-verify") return run_counterexample_verify(params);
    if (name == "vdw-starters") return run_vdw_starters(params);
    throw ConfigError("unknown experiment: " + name);
}

const std::vector<std::pair<std::string, Params>>& golden_configs() {
    static const std::vector<std::pair<std::string, Params>> configs = [] {
        std::vector<std::pair<std::string, Params>> c;
        c.emplace_back("sa-rotation", Params(std::map<std::string, std::string>{{"mmax", "1000000"}}));
        c.emplace_back("sa-quadratic", Params(std::map<std::string, std::string>{
                                           {"N", "2"}, {"alpha", "sqrt2m1"}, {"mmax", "1000000"}}));
        c.emplace_back("nilpoly-periodicity", Params(std::map<std::string, std::string>{{"count", "20"}}));
        c.emplace_back("heis-return-times", Params(std::map<std::string, std::string>{{"horizon", "20000"}}));
        c.emplace_back("counterexample-verify",
                       Params(std::map<std::string, std::string>{{"horizon", "262144"}, {"grid", "4"}}));
        c.emplace_back("vdw-starters", Params(std::map<std::string, std::string>{
                                           {"horizon", "200000"}, {"N", "10"}}));
        return c;
    }();
    return configs;
}

int check_goldens(const std::string& dir, std::ostream& log) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        log << "goldens directory does not exist: " << dir << "\n";
        return 2;
    }
    int rc = 0;
    for (const auto& [name, params] : golden_configs()) {
        ExperimentResult res = run_experiment(name, params);
        for (const auto& [fname, content] : res.files) {
            fs::path path = fs::path(dir) / fname;
            if (!fs::exists(path)) {
                log << "MISSING golden: " << path.string() << "\n";
                rc = 2;
                continue;
            }
            std::ifstream in(path, std::ios::binary);
            std::string expected((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
            if (expected == content) {
                log << "ok: " << fname << "\n";
                continue;
            }
            rc = 2;
            log << "MISMATCH: " << fname << "\n";
            // Line-oriented unified-style diff, first 40 differing lines.
            std::stringstream se(expected), sa(content);
            std::string le, la;
            int lineno = 0, shown = 0;
            for (;;) {
                bool he = static_cast<bool>(std::getline(se, le));
                bool ha = static_cast<bool>(std::getline(sa, la));
                if (!he && !ha) break;
                ++lineno;
                if (he && ha && le == la) continue;
                if (shown++ >= 40) {
                    log << "  ... (diff truncated)\n";
                    break;
                }
                log << "  @" << lineno << "\n";
                if (he) log << "  -" << le << "\n";
                if (ha) log << "  +" << la << "\n";
            }
        }
    }
    return rc;
}

} // namespace nildyn::exp
