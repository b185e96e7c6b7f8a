#ifndef NILDYN_COUNTEREXAMPLE_HPP
#define NILDYN_COUNTEREXAMPLE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nildyn::cx {

// Membership oracles for the explicit additively syndetic set A that is
// multiplicatively thick in no coset of a congruence subsemigroup.
// Construction: R0/R1 alternate dyadic blocks, J0 = R0 ∩ evens,
// J1 = R1 ∩ odds, B = J0 ∪ J1, B' = B minus {4^k - 1}, A = N \ B'.
// All oracles are O(1) in the bit length of n and require n >= 1.

inline void check_domain(std::uint64_t n) {
    if (n == 0) throw std::domain_error("counterexample oracle: n must be >= 1");
}

inline int dyadic_block(std::uint64_t n) { // k with 2^k <= n < 2^(k+1)
    check_domain(n);
    return 63 - __builtin_clzll(n);
}

inline bool in_R0(std::uint64_t n) { return dyadic_block(n) % 2 == 0; }
inline bool in_R1(std::uint64_t n) { return dyadic_block(n) % 2 == 1; }

inline bool is_pow4_minus1(std::uint64_t n) {
    check_domain(n);
    std::uint64_t x = n + 1;
    if (x & (x - 1)) return false;            // not a power of two
    return __builtin_ctzll(x) % 2 == 0 && x >= 4; // even exponent, k >= 1
}

inline bool in_B(std::uint64_t n) {
    return in_R0(n) ? n % 2 == 0 : n % 2 == 1;
}

inline bool in_Bprime(std::uint64_t n) { return in_B(n) && !is_pow4_minus1(n); }

inline bool in_A(std::uint64_t n) { return !in_Bprime(n); }

// True iff every n in [1,horizon] lies in A or A-1, equivalently
// B' ∩ (B'-1) ∩ [1,horizon] is empty.
bool verify_cover(std::uint64_t horizon);

struct Refutation {
    std::uint64_t I = 1, N = 1;
    int F_len = 0;
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> F;            // {1, N+1, ..., (F_len-1)N+1}; F_len is
                                             // the final (possibly extended) length
    std::uint64_t m_bound = 0;               // m scanned over N_{N,1} ∩ [1,m_bound]
    std::optional<std::uint64_t> witness;    // m with I*m*F ⊆ A, if found
    std::vector<std::uint64_t> certificate;  // dilates n_i certifying B' syndetic
    std::uint64_t cover_target_max = 0;      // certificate covers N_{N,1} ∩ [1,this]
    bool certificate_covers = false;
    bool cross_check_ok = false;             // duality: certificate => no dilate of it fits in A
};

// Exhaustive no-dilate verdict for A plus a greedy multiplicative
// syndeticity certificate for B' in I*N_{N,1}, both horizon-limited.
Refutation thickness_refutation(std::uint64_t I, std::uint64_t N, int F_len,
                                std::uint64_t horizon);

std::string to_json(const Refutation& r);

} // namespace nildyn::cx

#endif
