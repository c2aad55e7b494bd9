#pragma once

#include <vector>

namespace fas {

// One (l, q) index pair of the double series; Sum l = Sum q = p and the
// q prefix sums never exceed the l prefix sums.
struct CompositionIndex {
    int p = 0;
    std::vector<int> l_vec;
    std::vector<int> q_vec;
};

// Streams every weak composition of p into N parts exactly once, first part
// largest first ((p,0,..), .., (0,..,p)). Count is C(p+N-1, N-1).
// Templated on the visitor so hot loops inline; enumeration order is fixed
// for reproducibility.
template <typename Fn>
void for_each_composition(int p, int N, Fn&& fn) {
    std::vector<int> l((size_t)N, 0);
    // recursive descent without heap churn
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == N - 1) {
            l[(size_t)pos] = rem;
            fn(const_cast<const std::vector<int>&>(l));
            return;
        }
        for (int v = rem; v >= 0; --v) {
            l[(size_t)pos] = v;
            self(self, pos + 1, rem - v);
        }
    };
    if (N >= 1) rec(rec, 0, p);
}

// Streams every q_vec with Sum q = Sum l and prefix sums dominated by l's
// (constraint applies to prefixes 1..N-1; the last entry is forced).
// Order: ascending in q_1, then q_2, ...
template <typename Fn>
void for_each_q(const std::vector<int>& l_vec, Fn&& fn) {
    const int N = (int)l_vec.size();
    const int p = [&] {
        int s = 0;
        for (int v : l_vec) s += v;
        return s;
    }();
    std::vector<int> q((size_t)N, 0);
    if (N == 1) {
        q[0] = p;
        fn(const_cast<const std::vector<int>&>(q));
        return;
    }
    auto rec = [&](auto&& self, int pos, int lpref, int qpref) -> void {
        if (pos == N - 1) {
            q[(size_t)pos] = p - qpref;
            fn(const_cast<const std::vector<int>&>(q));
            return;
        }
        const int nlpref = lpref + l_vec[(size_t)pos];
        const int hi = std::min(nlpref - qpref, p - qpref);
        for (int v = 0; v <= hi; ++v) {
            q[(size_t)pos] = v;
            self(self, pos + 1, nlpref, qpref + v);
        }
    };
    rec(rec, 0, 0, 0);
}

// Pole-multiplicity signature of a q-vector (length N-K+1):
//   eta_1 = K + q_1 + ... + q_K,  eta_k = q_{K+k-1} + 1 for k >= 2.
std::vector<int> eta_signature(const std::vector<int>& q_vec, int K, int N);

} // namespace fas
