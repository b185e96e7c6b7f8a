#ifndef NILDYN_EXPERIMENTS_HPP
#define NILDYN_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nildyn::exp {

// Bad or missing configuration; the CLI maps this to exit code 64.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value parameter map with typed accessors.
class Params {
public:
    Params() = default;
    explicit Params(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    void set(const std::string& key, std::string value) { kv_[key] = std::move(value); }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_str(const std::string& key, const std::string& def) const;
    std::int64_t get_int(const std::string& key, std::int64_t def) const;
    long double get_float(const std::string& key, long double def) const;
    // Comma-separated integers.
    std::vector<std::int64_t> get_int_list(const std::string& key,
                                           const std::string& def) const;
    // Constant name or decimal literal (see torus constants).
    long double get_alpha(const std::string& key, const std::string& def) const;

    const std::map<std::string, std::string>& raw() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct ExperimentResult {
    int exit_code = 0; // 0 pass, 2 assertion failure
    std::string summary;
    // Deterministic, byte-stable artifacts keyed by file name.
    std::vector<std::pair<std::string, std::string>> files;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::string schema; // flag summary, plain text
};

const std::vector<ExperimentInfo>& catalog();

// Dispatch by experiment name; unknown name -> ConfigError.
ExperimentResult run_experiment(const std::string& name, const Params& params);

// Small configs used to produce and check golden outputs.
const std::vector<std::pair<std::string, Params>>& golden_configs();

// Re-runs the golden configs and byte-compares against files in dir.
// Logs a unified-style diff per mismatch; missing files fail explicitly.
// Returns 0 on pass, 2 on any mismatch.
int check_goldens(const std::string& dir, std::ostream& log);

// Order-canonical parallel map: applies fn to 0..count-1 on the worker
// pool and returns results indexed by item, so output never depends on
// scheduling.
std::vector<std::string> parallel_map(std::size_t count,
                                      const std::function<std::string(std::size_t)>& fn);

} // namespace nildyn::exp

#endif
