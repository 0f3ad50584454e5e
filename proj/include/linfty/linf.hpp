#pragma once

#include "linfty/graded.hpp"
#include "linfty/signs.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linfty {

/// Sorted basis multi-index. Canonical form sorts labels by the space's
/// (degree, position) order; the accumulated sign lives with the caller.
using MultiIndex = std::vector<std::string>;

/// Sort a tuple of labels into canonical order for a *skew* multilinear slot
/// family (wedge powers). Returns the sign, or 0 when the tuple dies
/// (repeated label of even degree).
inline int sort_skew(MultiIndex& labels, const GradedSpace& space) {
    int sign = 1;
    size_t n = labels.size();
    for (size_t i = 1; i < n; ++i)  // insertion sort, adjacent transpositions
        for (size_t j = i; j > 0 && space.label_less(labels[j], labels[j - 1]); --j) {
            int da = space.degree_of(labels[j - 1]), db = space.degree_of(labels[j]);
            sign *= -1;
            if ((da * db) % 2 != 0) sign *= -1;
            std::swap(labels[j], labels[j - 1]);
        }
    for (size_t i = 1; i < n; ++i)
        if (labels[i] == labels[i - 1] && space.degree_of(labels[i]) % 2 == 0) return 0;
    return sign;
}

/// Same for *symmetric* slot families (the coalgebra side): plain Koszul
/// signs, and a repeated label of odd degree kills the word.
inline int sort_sym(MultiIndex& labels, const GradedSpace& space) {
    int sign = 1;
    size_t n = labels.size();
    for (size_t i = 1; i < n; ++i)
        for (size_t j = i; j > 0 && space.label_less(labels[j], labels[j - 1]); --j) {
            int da = space.degree_of(labels[j - 1]), db = space.degree_of(labels[j]);
            if ((da * db) % 2 != 0) sign *= -1;
            std::swap(labels[j], labels[j - 1]);
        }
    for (size_t i = 1; i < n; ++i)
        if (labels[i] == labels[i - 1] && space.degree_of(labels[i]) % 2 != 0) return 0;
    return sign;
}

inline int multi_degree(const MultiIndex& idx, const GradedSpace& space) {
    int d = 0;
    for (auto& l : idx) d += space.degree_of(l);
    return d;
}

/// Sparse graded skew multilinear map of a fixed arity, keyed on canonical
/// sorted multi-indices. Evaluation on unsorted tuples multiplies by the
/// sort sign, so skewness holds by construction.
struct SkewMultiMap {
    int arity = 1;
    int shift = 0;  // output degree minus total input degree
    std::map<MultiIndex, Vec> entries;

    Vec eval_labels(const GradedSpace& src, MultiIndex idx) const {
        int sign = sort_skew(idx, src);
        if (sign == 0) return {};
        auto it = entries.find(idx);
        if (it == entries.end()) return {};
        return sign == 1 ? it->second : vec_scale(it->second, -1);
    }

    /// Multilinear evaluation with arbitrary sparse vectors in each slot.
    /// Koszul reordering signs are produced by the label-level sort.
    Vec eval(const GradedSpace& src, const std::vector<Vec>& args) const {
        Vec out;
        if (static_cast<int>(args.size()) != arity) throw std::invalid_argument("arity mismatch");
        MultiIndex idx(arity);
        Rational coeff = 1;
        auto rec = [&](auto&& self, int slot, const Rational& c) -> void {
            if (slot == arity) {
                Vec v = eval_labels(src, idx);
                vec_add(out, v, c);
                return;
            }
            for (auto& [l, x] : args[slot]) {
                idx[slot] = l;
                self(self, slot + 1, c * x);
            }
        };
        rec(rec, 0, coeff);
        return out;
    }

    void add(const GradedSpace& src, MultiIndex idx, const std::string& target_label, Rational c) {
        int sign = sort_skew(idx, src);
        if (sign == 0 || c == 0) return;
        Vec& v = entries[idx];
        vec_add(v, target_label, sign == 1 ? c : -c);
        if (v.empty()) entries.erase(idx);
    }

    bool is_zero() const { return entries.empty(); }
};

/// L-infinity algebra: graded space plus skew brackets l_k of degree k-2.
struct LInfinityAlgebra {
    GradedSpace space;
    std::map<int, SkewMultiMap> brackets;  // arity -> bracket, omitted arities vanish
    int max_arity = 0;                     // highest arity with stored data

    const SkewMultiMap* bracket(int k) const {
        auto it = brackets.find(k);
        return it == brackets.end() ? nullptr : &it->second;
    }

    SkewMultiMap& ensure_bracket(int k) {
        auto [it, fresh] = brackets.emplace(k, SkewMultiMap{k, k - 2, {}});
        if (fresh) max_arity = std::max(max_arity, k);
        return it->second;
    }

    void add_bracket(int k, MultiIndex idx, const std::string& target, Rational c) {
        ensure_bracket(k).add(space, std::move(idx), target, std::move(c));
    }

    Vec apply_bracket(int k, const std::vector<Vec>& args) const {
        const SkewMultiMap* b = bracket(k);
        if (!b) return {};
        return b->eval(space, args);
    }

    Vec apply_bracket_labels(int k, const MultiIndex& idx) const {
        const SkewMultiMap* b = bracket(k);
        if (!b) return {};
        return b->eval_labels(space, idx);
    }

    /// Degree sanity: every stored entry respects deg l_k = k - 2.
    void validate_degrees() const {
        for (auto& [k, b] : brackets)
            for (auto& [idx, v] : b.entries) {
                int din = multi_degree(idx, space);
                for (auto& [l, c] : v)
                    if (space.degree_of(l) != din + k - 2)
                        throw std::invalid_argument("bracket degree violation at arity " + std::to_string(k));
            }
    }

    ChainComplex tangent_complex() const {
        GradedLinearMap d(space, space, -1);
        if (const SkewMultiMap* l1 = bracket(1))
            for (auto& [idx, v] : l1->entries) d.set(idx[0], v);
        return ChainComplex(space, d);
    }

    bool is_lie_n_algebra(int n) const {
        for (auto& [d, labels] : space.degrees)
            if (!labels.empty() && (d < 0 || d > n - 1)) return false;
        return true;
    }

    /// Smallest n with all degrees in [0, n-1]; 1 for the zero algebra.
    int lie_n() const {
        int top = 0;
        for (auto& [d, labels] : space.degrees) {
            if (!labels.empty() && d < 0) throw std::domain_error("algebra not non-negatively graded");
            if (!labels.empty()) top = std::max(top, d);
        }
        return top + 1;
    }
};

/// All canonical multi-indices of a given size over the space's basis
/// (sorted, skipping tuples that are zero by skewness).
inline std::vector<MultiIndex> canonical_multi_indices(const GradedSpace& space, int size) {
    std::vector<std::string> labels = space.all_labels();  // already (degree, pos)-sorted per degree map
    std::vector<MultiIndex> out;
    MultiIndex cur;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (size_t i = start; i < labels.size(); ++i) {
            if (!cur.empty() && cur.back() == labels[i] && space.degree_of(labels[i]) % 2 == 0)
                continue;  // even-degree repeat is zero in the exterior power
            cur.push_back(labels[i]);
            self(self, i);  // allow repeats of odd-degree labels
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Sparse residual of an identity evaluated on all canonical multi-indices.
using Residual = std::map<MultiIndex, Vec>;

inline bool residual_is_zero(const Residual& r) {
    for (auto& [idx, v] : r)
        if (!vec_is_zero(v)) return false;
    return true;
}

/// Left side of the generalized Jacobi identity at word length m,
/// evaluated on one canonical multi-index.
inline Vec jacobi_defect(const LInfinityAlgebra& L, const MultiIndex& x) {
    int m = static_cast<int>(x.size());
    Vec out;
    std::vector<int> degs(m);
    for (int i = 0; i < m; ++i) degs[i] = L.space.degree_of(x[i]);
    for (int i = 1; i <= m; ++i) {
        int j = m - i + 1;
        if (!L.bracket(i) || !L.bracket(j)) continue;
        for (const auto& sigma : unshuffles(i, m - i)) {
            int sgn = permutation_sign(sigma) * koszul_sign(sigma, degs);
            if ((i * (j - 1)) % 2 != 0) sgn = -sgn;
            MultiIndex inner(i);
            for (int a = 0; a < i; ++a) inner[a] = x[sigma.perm[a]];
            Vec v = L.apply_bracket_labels(i, inner);
            if (vec_is_zero(v)) continue;
            // outer: l_j(v, x_{sigma(i)}, ..., x_{sigma(m-1)})
            const SkewMultiMap* lj = L.bracket(j);
            if (!lj) continue;
            std::vector<Vec> args(j);
            args[0] = v;
            for (int a = 0; a < m - i; ++a) args[1 + a] = Vec{{x[sigma.perm[i + a]], 1}};
            Vec w = lj->eval(L.space, args);
            vec_add(out, w, sgn);
        }
    }
    return out;
}

/// check_jacobi: for each 1 <= m <= up_to, the full sparse defect of the
/// Jacobi identity on every canonical multi-index. Empty residual == holds.
inline std::map<int, Residual> check_jacobi(const LInfinityAlgebra& L, int up_to) {
    L.validate_degrees();
    std::map<int, Residual> out;
    for (int m = 1; m <= up_to; ++m) {
        Residual r;
        for (auto& idx : canonical_multi_indices(L.space, m)) {
            Vec v = jacobi_defect(L, idx);
            if (!vec_is_zero(v)) r[idx] = std::move(v);
        }
        out[m] = std::move(r);
    }
    return out;
}

inline bool jacobi_holds(const LInfinityAlgebra& L, int up_to) {
    auto res = check_jacobi(L, up_to);
    for (auto& [m, r] : res)
        if (!residual_is_zero(r)) return false;
    return true;
}

/// Weak morphism of L-infinity algebras: Taylor coefficients f_k of degree k-1.
struct LInfinityMorphism {
    LInfinityAlgebra source, target;
    std::map<int, SkewMultiMap> taylor;  // arity -> f_k

    const SkewMultiMap* component(int k) const {
        auto it = taylor.find(k);
        return it == taylor.end() ? nullptr : &it->second;
    }

    SkewMultiMap& ensure_component(int k) {
        auto [it, fresh] = taylor.emplace(k, SkewMultiMap{k, k - 1, {}});
        return it->second;
    }

    void add_component(int k, MultiIndex idx, const std::string& target_label, Rational c) {
        ensure_component(k).add(source.space, std::move(idx), target_label, std::move(c));
    }

    Vec apply_component(int k, const std::vector<Vec>& args) const {
        const SkewMultiMap* f = component(k);
        if (!f) return {};
        return f->eval(source.space, args);
    }

    bool is_strict() const {
        for (auto& [k, f] : taylor)
            if (k >= 2 && !f.is_zero()) return false;
        return true;
    }

    int max_arity() const {
        int m = 1;
        for (auto& [k, f] : taylor)
            if (!f.is_zero()) m = std::max(m, k);
        return m;
    }

    GradedLinearMap linear_part() const {
        GradedLinearMap out(source.space, target.space, 0);
        if (const SkewMultiMap* f1 = component(1))
            for (auto& [idx, v] : f1->entries) out.set(idx[0], v);
        return out;
    }

    void validate_degrees() const {
        for (auto& [k, f] : taylor)
            for (auto& [idx, v] : f.entries) {
                int din = multi_degree(idx, source.space);
                for (auto& [l, c] : v)
                    if (target.space.degree_of(l) != din + k - 1)
                        throw std::invalid_argument("morphism degree violation at arity " + std::to_string(k));
            }
    }
};

inline LInfinityMorphism identity_morphism(const LInfinityAlgebra& L) {
    LInfinityMorphism f;
    f.source = L;
    f.target = L;
    auto& f1 = f.ensure_component(1);
    for (auto& l : L.space.all_labels()) f1.add(L.space, {l}, l, 1);
    return f;
}

inline LInfinityMorphism strict_morphism(const LInfinityAlgebra& src, const LInfinityAlgebra& tgt,
                                         const GradedLinearMap& f1) {
    LInfinityMorphism f;
    f.source = src;
    f.target = tgt;
    auto& c = f.ensure_component(1);
    for (auto& [l, v] : f1.entries)
        for (auto& [t, coeff] : v) c.add(src.space, {l}, t, coeff);
    return f;
}

/// Left side of the morphism equation at word length m on one multi-index,
/// evaluated literally from the displayed double sum. The Koszul sign
/// chi(tau, f) follows the evaluation convention for f_{i1} x ... x f_{it}.
inline Vec morphism_defect_direct(const LInfinityMorphism& f, const MultiIndex& x) {
    int m = static_cast<int>(x.size());
    const GradedSpace& S = f.source.space;
    std::vector<int> degs(m);
    for (int i = 0; i < m; ++i) degs[i] = S.degree_of(x[i]);
    Vec out;

    // first sum: f_j ( l_k(...), ... )
    for (int k = 1; k <= m; ++k) {
        int j = m - k + 1;
        const SkewMultiMap* fj = f.component(j);
        if (!fj || !f.source.bracket(k)) continue;
        for (const auto& sigma : unshuffles(k, m - k)) {
            int sgn = permutation_sign(sigma) * koszul_sign(sigma, degs);
            if ((k * (j - 1) + 1) % 2 != 0) sgn = -sgn;
            MultiIndex inner(k);
            for (int a = 0; a < k; ++a) inner[a] = x[sigma.perm[a]];
            Vec v = f.source.apply_bracket_labels(k, inner);
            if (vec_is_zero(v)) continue;
            std::vector<Vec> args(j);
            args[0] = v;
            for (int a = 0; a < m - k; ++a) args[1 + a] = Vec{{x[sigma.perm[k + a]], 1}};
            vec_add(out, fj->eval(S, args), sgn);
        }
    }

    // second sum: l'_t ( f_{i1}(...), ..., f_{it}(...) )
    std::vector<int> blocks;
    auto comp_rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            int t = static_cast<int>(blocks.size());
            const SkewMultiMap* lt = f.target.bracket(t);
            if (!lt) return;
            bool have_all = true;
            for (int b : blocks)
                if (!f.component(b)) have_all = false;
            if (!have_all) return;
            for (const auto& tau : unshuffles_multi(blocks)) {
                // blocks ordered by first element
                bool ordered = true;
                int pos = 0, prev = -1;
                for (int s = 0; s < t; ++s) {
                    if (tau.perm[pos] < prev) ordered = false;
                    prev = tau.perm[pos];
                    pos += blocks[s];
                }
                if (!ordered) continue;
                int sgn = permutation_sign(tau) * koszul_sign(tau, degs);
                // chi(tau, f): evaluation Koszul sign and the fixed exponent
                long expo = static_cast<long>(t) * (t - 1) / 2;
                for (int s = 0; s < t - 1; ++s) expo += static_cast<long>(blocks[s]) * (t - 1 - s);
                if (expo % 2 != 0) sgn = -sgn;
                // eval sign: move f_{i_s} (degree i_s - 1) past earlier blocks' arguments
                pos = 0;
                long before = 0;
                int esgn = 0;
                for (int s = 0; s < t; ++s) {
                    if (s > 0 && ((blocks[s] - 1) % 2 != 0) && (before % 2 != 0)) esgn ^= 1;
                    for (int a = 0; a < blocks[s]; ++a) before += degs[tau.perm[pos + a]];
                    pos += blocks[s];
                }
                if (esgn) sgn = -sgn;
                std::vector<Vec> args(t);
                pos = 0;
                bool dead = false;
                for (int s = 0; s < t && !dead; ++s) {
                    MultiIndex blk(blocks[s]);
                    for (int a = 0; a < blocks[s]; ++a) blk[a] = x[tau.perm[pos + a]];
                    args[s] = f.component(blocks[s])->eval_labels(S, blk);
                    if (vec_is_zero(args[s])) dead = true;
                    pos += blocks[s];
                }
                if (dead) continue;
                vec_add(out, lt->eval(f.target.space, args), sgn);
            }
            return;
        }
        for (int b = 1; b <= remaining; ++b) {
            blocks.push_back(b);
            self(self, remaining - b);
            blocks.pop_back();
        }
    };
    comp_rec(comp_rec, m);
    return out;
}

inline std::map<int, Residual> check_morphism_direct(const LInfinityMorphism& f, int up_to) {
    f.validate_degrees();
    std::map<int, Residual> out;
    for (int m = 1; m <= up_to; ++m) {
        Residual r;
        for (auto& idx : canonical_multi_indices(f.source.space, m)) {
            Vec v = morphism_defect_direct(f, idx);
            if (!vec_is_zero(v)) r[idx] = std::move(v);
        }
        out[m] = std::move(r);
    }
    return out;
}

}  // namespace linfty
