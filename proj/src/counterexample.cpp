#include "nildyn/counterexample.hpp"

#include <algorithm>
#include <sstream>

namespace nildyn::cx {

bool verify_cover(std::uint64_t horizon) {
    if (horizon < 1) throw std::domain_error("verify_cover: horizon must be >= 1");
    for (std::uint64_t n = 1; n <= horizon; ++n)
        if (!in_A(n) && !in_A(n + 1)) return false;
    return true;
}

namespace {

// Greedy set cover: pick dilates n in N_{N,1} so that the sets
// { m in N_{N,1}, m <= M : I*n*m in B' } jointly cover N_{N,1} ∩ [1,M].
// Candidates are capped so every probe I*n*m stays <= horizon.
struct Cover {
    std::vector<std::uint64_t> dilates;
    std::uint64_t target_max = 0;
    bool complete = false;
};

Cover greedy_bprime_cover(std::uint64_t I, std::uint64_t N, std::uint64_t horizon) {
    const std::uint64_t max_candidate_index = 128; // n = jN+1, j <= this
    std::uint64_t n_max = max_candidate_index * N + 1;
    std::uint64_t M = horizon / (I * n_max);
    if (M < 1) return {};
    std::uint64_t count = (M - 1) / N + 1; // m = kN+1, k = 0..count-1
    std::uint64_t words = (count + 63) / 64;

    Cover cover;
    cover.target_max = (count - 1) * N + 1;

    // mask[j] bit k set  <=>  I * (jN+1) * (kN+1) in B'
    std::vector<std::uint64_t> candidates;
    std::vector<std::vector<std::uint64_t>> masks;
    for (std::uint64_t j = 0; j <= max_candidate_index; ++j) {
        std::uint64_t n = j * N + 1;
        std::vector<std::uint64_t> mask(words, 0);
        for (std::uint64_t k = 0; k < count; ++k)
            if (in_Bprime(I * n * (k * N + 1))) mask[k >> 6] |= 1ull << (k & 63);
        candidates.push_back(n);
        masks.push_back(std::move(mask));
    }

    std::vector<std::uint64_t> uncovered(words, ~0ull);
    if (count & 63) uncovered.back() = (1ull << (count & 63)) - 1;
    auto remaining = [&] {
        std::uint64_t c = 0;
        for (auto w : uncovered) c += __builtin_popcountll(w);
        return c;
    };

    while (remaining() > 0) {
        std::uint64_t best_gain = 0;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            std::uint64_t gain = 0;
            for (std::uint64_t w = 0; w < words; ++w)
                gain += __builtin_popcountll(masks[i][w] & uncovered[w]);
            if (gain > best_gain) { best_gain = gain; best_i = i; }
        }
        if (best_gain == 0) break; // cannot complete within horizon
        cover.dilates.push_back(candidates[best_i]);
        for (std::uint64_t w = 0; w < words; ++w) uncovered[w] &= ~masks[best_i][w];
    }
    cover.complete = (remaining() == 0);
    return cover;
}

} // namespace

Refutation thickness_refutation(std::uint64_t I, std::uint64_t N, int F_len,
                                std::uint64_t horizon) {
    if (I < 1 || N < 1 || F_len < 1)
        throw std::domain_error("thickness_refutation: I, N, F_len must be >= 1");
    Refutation r;
    r.I = I;
    r.N = N;
    r.horizon = horizon;

    // F_len is a lower bound on the progression length.  A fixed short F can
    // be defeated by the sparse exceptional points 4^k - 1 that A keeps (for
    // example I=1, N=2, F={1,3,5,7} admits the dilate m=1 because 3 stays in
    // A), so when a dilate fits we lengthen F and search again, mirroring the
    // existential quantifier over progression lengths in the thickness
    // definition.  The length is capped so a set that really is thick (the
    // positive control) still reports its witness.
    const int len_cap = std::max(F_len, 64);
    for (int len = F_len; len <= len_cap; ++len) {
        r.F_len = len;
        r.F.clear();
        for (int j = 0; j < len; ++j)
            r.F.push_back(static_cast<std::uint64_t>(j) * N + 1);
        std::uint64_t fmax = r.F.back();
        r.m_bound = horizon / (I * fmax);
        if (r.m_bound < 1)
            throw std::domain_error("thickness_refutation: horizon too small for any dilate");

        r.witness.reset();
        for (std::uint64_t m = 1; m <= r.m_bound; m += N) {
            bool all = true;
            for (std::uint64_t f : r.F)
                if (!in_A(I * m * f)) { all = false; break; }
            if (all) { r.witness = m; break; }
        }
        if (!r.witness) break;
    }

    Cover cover = greedy_bprime_cover(I, N, horizon);
    r.certificate = cover.dilates;
    r.cover_target_max = cover.target_max;
    r.certificate_covers = cover.complete;

    // Duality cross-check: if every m in the covered range has some
    // certificate dilate n_i with I*n_i*m in B', then no such m can have
    // I*m*{n_i} inside A.  Verify by direct scan.
    r.cross_check_ok = false;
    if (cover.complete && !cover.dilates.empty()) {
        bool any_fit = false;
        for (std::uint64_t m = 1; m <= cover.target_max && !any_fit; m += N) {
            bool all = true;
            for (std::uint64_t n : cover.dilates)
                if (!in_A(I * m * n)) { all = false; break; }
            any_fit = all;
        }
        r.cross_check_ok = !any_fit;
    }
    return r;
}

std::string to_json(const Refutation& r) {
    std::ostringstream os;
    auto list = [&](const std::vector<std::uint64_t>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ']';
    };
    os << "{\"I\":" << r.I << ",\"N\":" << r.N << ",\"F_len\":" << r.F_len
       << ",\"horizon\":" << r.horizon << ",\"F\":";
    list(r.F);
    os << ",\"m_bound\":" << r.m_bound << ",\"witness\":";
    if (r.witness) os << *r.witness; else os << "null";
    os << ",\"certificate\":";
    list(r.certificate);
    os << ",\"cover_target_max\":" << r.cover_target_max
       << ",\"certificate_covers\":" << (r.certificate_covers ? "true" : "false")
       << ",\"cross_check_ok\":" << (r.cross_check_ok ? "true" : "false") << "}";
    return os.str();
}

} // namespace nildyn::cx
