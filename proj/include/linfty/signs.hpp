#pragma once

#include "linfty/rational.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace linfty {

/// A permutation of {0..m-1} in one-line notation: perm[i] is where slot i
/// comes from, i.e. the permuted tuple is (x_{perm[0]}, ..., x_{perm[m-1]}).
struct SignedPermutation {
    std::vector<int> perm;

    int size() const { return static_cast<int>(perm.size()); }

    bool is_valid() const {
        std::vector<char> seen(perm.size(), 0);
        for (int p : perm) {
            if (p < 0 || p >= size() || seen[p]) return false;
            seen[p] = 1;
        }
        return true;
    }
};

/// Sign of the permutation, (-1)^sigma.
inline int permutation_sign(const SignedPermutation& sigma) {
    int n = sigma.size(), sign = 1;
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = sigma.perm[j]) {
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

/// Koszul sign epsilon(sigma) of rearranging graded slots: the permuted
/// tuple is (x_{perm[0]}, ...); each transposition of adjacent slots of
/// degrees a, b contributes (-1)^{ab}.
inline int koszul_sign(const SignedPermutation& sigma, const std::vector<int>& degrees) {
    if (static_cast<int>(degrees.size()) != sigma.size())
        throw std::invalid_argument("koszul_sign: degree list does not match permutation size");
    int sign = 1;
    int n = sigma.size();
    // Count inversions (i < j in output order but perm[i] > perm[j]); each
    // inversion moves x_{perm[j]} past x_{perm[i]}.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (sigma.perm[i] > sigma.perm[j])
                if ((degrees[sigma.perm[i]] * degrees[sigma.perm[j]]) % 2 != 0) sign = -sign;
    return sign;
}

/// All (p,q)-unshuffles: permutations sigma of {0..p+q-1} increasing on the
/// first p slots and on the last q slots. Count is binomial(p+q, p).
inline std::vector<SignedPermutation> unshuffles(int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("unshuffles: negative block size");
    int m = p + q;
    std::vector<SignedPermutation> out;
    std::vector<int> pick(p);
    // choose which source positions go to the first block
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        SignedPermutation s;
        s.perm.reserve(m);
        std::vector<char> used(m, 0);
        for (int v : pick) {
            s.perm.push_back(v);
            used[v] = 1;
        }
        for (int v = 0; v < m; ++v)
            if (!used[v]) s.perm.push_back(v);
        out.push_back(std::move(s));
        if (p == 0) break;
        // next combination
        int i = p - 1;
        while (i >= 0 && pick[i] == m - p + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < p; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

/// Multi-block unshuffles for block sizes (k_1, ..., k_t): increasing inside
/// each block. Used by the coalgebra lifts and the morphism equation.
inline std::vector<SignedPermutation> unshuffles_multi(const std::vector<int>& blocks) {
    std::vector<SignedPermutation> out;
    int m = std::accumulate(blocks.begin(), blocks.end(), 0);
    SignedPermutation cur;
    cur.perm.assign(m, -1);
    std::vector<char> used(m, 0);
    // fill block by block, each block an increasing choice of unused slots
    auto rec = [&](auto&& self, size_t b, int pos) -> void {
        if (b == blocks.size()) {
            out.push_back(cur);
            return;
        }
        int k = blocks[b];
        std::vector<int> avail;
        for (int v = 0; v < m; ++v)
            if (!used[v]) avail.push_back(v);
        std::vector<int> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        int a = static_cast<int>(avail.size());
        if (k > a) return;
        while (true) {
            for (int j = 0; j < k; ++j) {
                cur.perm[pos + j] = avail[idx[j]];
                used[avail[idx[j]]] = 1;
            }
            self(self, b + 1, pos + k);
            for (int j = 0; j < k; ++j) used[avail[idx[j]]] = 0;
            if (k == 0) break;
            int i = k - 1;
            while (i >= 0 && idx[i] == a - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    };
    rec(rec, 0, 0);
    return out;
}

}  // namespace linfty
