#ifndef NILDYN_WINDOW_SET_HPP
#define NILDYN_WINDOW_SET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nildyn/errors.hpp"

namespace nildyn {

// Finite-horizon view of a set of integers.  Membership is exact inside
// the window [lo,hi] and a query outside it throws; a verdict computed
// from one of these is always a statement "up to the horizon", never
// about the infinite set.
class IntWindowSet {
public:
    IntWindowSet(std::int64_t lo, std::int64_t hi);
    IntWindowSet(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& members);

    static IntWindowSet full(std::int64_t lo, std::int64_t hi);

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }
    std::int64_t window_size() const { return hi_ - lo_ + 1; }

    bool in_window(std::int64_t n) const { return n >= lo_ && n <= hi_; }

    bool contains(std::int64_t n) const {
        if (!in_window(n)) throw DegenerateWindowError("membership query outside window");
        std::uint64_t i = static_cast<std::uint64_t>(n - lo_);
        return (bits_[i >> 6] >> (i & 63)) & 1u;
    }

    void insert(std::int64_t n);
    void erase(std::int64_t n);

    std::int64_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<std::int64_t> members() const;

    bool operator==(const IntWindowSet& other) const;

    // Compact run-length text: "lo hi" header, then one sorted run "a..b"
    // per line.  Byte-stable for a given set.
    std::string to_runs_text() const;
    static IntWindowSet from_runs_text(const std::string& text);

    // JSON array of members; intended for small sets.
    std::string to_json_array() const;

private:
    std::int64_t lo_, hi_;
    std::vector<std::uint64_t> bits_;
};

struct CongruenceCoset {
    enum class Flavor { naturals, integers };
    std::int64_t I = 1;
    std::int64_t N = 1;
    Flavor flavor = Flavor::naturals;

    CongruenceCoset(std::int64_t I_, std::int64_t N_, Flavor f = Flavor::naturals);
};

// { m : m+n in A }, window shrunk by |n| on the appropriate side.
IntWindowSet shift(const IntWindowSet& A, std::int64_t n);

// { m : m*n in A } on [ceil(lo/n), floor(hi/n)], n >= 1.
IntWindowSet quotient(const IntWindowSet& A, std::int64_t n);

// gcd of |a| over A (0 iff A = {0}); empty A throws.
std::int64_t gcd_set(const std::vector<std::int64_t>& A);

// gcd of all pairwise differences (0 iff A is a singleton); empty A throws.
std::int64_t gcd_diff(const std::vector<std::int64_t>& A);

// Least m in N_{N,1}, m <= m_max, with I*m*f in A for every f in F.
// Deterministic least witness regardless of worker count.
std::optional<std::int64_t> find_thick_dilate(const IntWindowSet& A,
                                              const CongruenceCoset& coset,
                                              const std::vector<std::int64_t>& F,
                                              std::int64_t m_max);

struct SyndeticityVerdict {
    enum class Reason { found, empty_set, edge_inconclusive };
    std::optional<std::int64_t> gap;
    Reason reason = Reason::found;
};

// Least g such that every length-g block fully inside the window meets A.
// Blocks touching the window edge are inconclusive: if the edge regions
// would force a larger g, the verdict is none.
SyndeticityVerdict syndeticity_gap(const IntWindowSet& A);

// Set of b such that some m in [1,m_max] has b + (jN+1)m in A for all
// j = 0..k.  Result window is the b-range for which every probe stays
// inside A's window.
IntWindowSet starters(const IntWindowSet& A, std::int64_t N, std::int64_t k,
                      std::int64_t m_max);

} // namespace nildyn

#endif
