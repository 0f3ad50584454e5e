#pragma once

#include "linfty/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace linfty {

/// Finite-type graded vector space with a named basis in each degree.
/// Labels are unique across all degrees.
struct GradedSpace {
    std::map<int, std::vector<std::string>> degrees;
    std::unordered_map<std::string, std::pair<int, int>> index;  // label -> (degree, pos)

    GradedSpace() = default;
    explicit GradedSpace(std::map<int, std::vector<std::string>> degs) : degrees(std::move(degs)) {
        reindex();
    }

    void add(int degree, const std::string& label) {
        if (index.count(label)) throw std::invalid_argument("duplicate basis label: " + label);
        index[label] = {degree, static_cast<int>(degrees[degree].size())};
        degrees[degree].push_back(label);
    }

    void reindex() {
        index.clear();
        for (auto& [d, labels] : degrees)
            for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
                if (index.count(labels[i]))
                    throw std::invalid_argument("duplicate basis label: " + labels[i]);
                index[labels[i]] = {d, i};
            }
    }

    bool has(const std::string& label) const { return index.count(label) > 0; }

    int degree_of(const std::string& label) const {
        auto it = index.find(label);
        if (it == index.end()) throw std::out_of_range("unknown basis label: " + label);
        return it->second.first;
    }

    int dim(int degree) const {
        auto it = degrees.find(degree);
        return it == degrees.end() ? 0 : static_cast<int>(it->second.size());
    }

    int total_dim() const {
        int n = 0;
        for (auto& [d, labels] : degrees) n += static_cast<int>(labels.size());
        return n;
    }

    const std::vector<std::string>& basis(int degree) const {
        static const std::vector<std::string> empty;
        auto it = degrees.find(degree);
        return it == degrees.end() ? empty : it->second;
    }

    std::vector<std::string> all_labels() const {
        std::vector<std::string> out;
        for (auto& [d, labels] : degrees) out.insert(out.end(), labels.begin(), labels.end());
        return out;
    }

    int min_degree() const { return degrees.empty() ? 0 : degrees.begin()->first; }
    int max_degree() const { return degrees.empty() ? 0 : degrees.rbegin()->first; }

    /// Canonical total order on basis labels: by (degree, position).
    /// Multi-index normalization sorts against this.
    bool label_less(const std::string& a, const std::string& b) const {
        return index.at(a) < index.at(b);
    }

    bool operator==(const GradedSpace& o) const { return degrees == o.degrees; }
};

/// Suspension V[k]: same labels, degrees shifted up by k.
inline GradedSpace suspend(const GradedSpace& v, int k) {
    GradedSpace out;
    for (auto& [d, labels] : v.degrees) out.degrees[d + k] = labels;
    out.reindex();
    return out;
}

/// Sparse vector: label -> coefficient, zero coefficients never stored.
using Vec = std::map<std::string, Rational>;

inline void vec_add(Vec& a, const std::string& label, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = a.emplace(label, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) a.erase(it);
    }
}

inline void vec_add(Vec& a, const Vec& b, const Rational& scale = 1) {
    for (auto& [l, c] : b) vec_add(a, l, c * scale);
}

inline Vec vec_scale(const Vec& a, const Rational& s) {
    Vec out;
    if (s == 0) return out;
    for (auto& [l, c] : a) out[l] = c * s;
    return out;
}

inline bool vec_is_zero(const Vec& a) { return a.empty(); }

/// A graded linear map of fixed degree shift, stored sparsely on basis labels.
struct GradedLinearMap {
    GradedSpace source, target;
    int shift = 0;
    std::map<std::string, Vec> entries;  // source label -> image

    GradedLinearMap() = default;
    GradedLinearMap(GradedSpace src, GradedSpace tgt, int deg_shift)
        : source(std::move(src)), target(std::move(tgt)), shift(deg_shift) {}

    void set(const std::string& from, const Vec& to) {
        for (auto& [l, c] : to)
            if (target.degree_of(l) != source.degree_of(from) + shift)
                throw std::invalid_argument("entry violates degree shift at " + from + " -> " + l);
        if (to.empty())
            entries.erase(from);
        else
            entries[from] = to;
    }

    void add(const std::string& from, const std::string& to, const Rational& c) {
        if (target.degree_of(to) != source.degree_of(from) + shift)
            throw std::invalid_argument("entry violates degree shift at " + from + " -> " + to);
        Vec& v = entries[from];
        vec_add(v, to, c);
        if (v.empty()) entries.erase(from);
    }

    Vec apply_basis(const std::string& label) const {
        auto it = entries.find(label);
        return it == entries.end() ? Vec{} : it->second;
    }

    Vec apply(const Vec& v) const {
        Vec out;
        for (auto& [l, c] : v) {
            auto it = entries.find(l);
            if (it != entries.end()) vec_add(out, it->second, c);
        }
        return out;
    }

    bool is_zero() const { return entries.empty(); }
};

inline GradedLinearMap compose(const GradedLinearMap& g, const GradedLinearMap& f) {
    GradedLinearMap out(f.source, g.target, f.shift + g.shift);
    for (auto& [l, v] : f.entries) {
        Vec img = g.apply(v);
        if (!img.empty()) out.entries[l] = std::move(img);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact linear algebra: dense echelon over Q with deterministic
// leftmost-pivot selection, giving reproducible kernels and representatives.
// ---------------------------------------------------------------------------

using Matrix = std::vector<std::vector<Rational>>;  // rows

struct Echelon {
    Matrix rows;             // reduced row echelon form, zero rows dropped
    std::vector<int> pivots; // pivot column of each row
};

inline Echelon row_reduce(Matrix m) {
    Echelon e;
    size_t cols = 0;
    for (auto& r : m) cols = std::max(cols, r.size());
    for (auto& r : m) r.resize(cols, 0);
    size_t row = 0;
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        Rational inv = m[row][col];
        for (auto& x : m[row]) x /= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            Rational f = m[r][col];
            for (size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        e.pivots.push_back(static_cast<int>(col));
        ++row;
    }
    m.resize(row);
    e.rows = std::move(m);
    return e;
}

inline int matrix_rank(const Matrix& m) { return static_cast<int>(row_reduce(m).pivots.size()); }

inline Matrix transpose(const Matrix& m, size_t cols) {
    Matrix t(cols, std::vector<Rational>(m.size(), 0));
    for (size_t r = 0; r < m.size(); ++r)
        for (size_t c = 0; c < m[r].size() && c < cols; ++c) t[c][r] = m[r][c];
    return t;
}

/// Basis of { v : m v = 0 } (rows of m are equations), from the reduced echelon form.
inline Matrix null_space(const Matrix& m, size_t cols) {
    Matrix mm = m;
    for (auto& r : mm) r.resize(cols, 0);
    Echelon e = row_reduce(mm);
    std::vector<char> is_pivot(cols, 0);
    for (int p : e.pivots) is_pivot[p] = 1;
    Matrix out;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rational> v(cols, 0);
        v[free_col] = 1;
        for (size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][free_col];
        out.push_back(std::move(v));
    }
    return out;
}

/// Basis of { x : sum_i x_i row_i = 0 }, i.e. the kernel of the linear map
/// whose i-th basis image is row_i.
inline Matrix left_null_space(const Matrix& rows, size_t cols) {
    return null_space(transpose(rows, cols), rows.size());
}

/// Solve x * m = target for a single row vector x (m given by rows).
/// Returns empty optional when inconsistent.
inline std::optional<std::vector<Rational>> solve_row_combination(const Matrix& m,
                                                                  const std::vector<Rational>& target) {
    // transpose system: columns of m^T are the rows of m
    size_t nrows = m.size(), cols = target.size();
    Matrix aug(cols, std::vector<Rational>(nrows + 1, 0));
    for (size_t r = 0; r < nrows; ++r)
        for (size_t c = 0; c < cols && c < m[r].size(); ++c) aug[c][r] = m[r][c];
    for (size_t c = 0; c < cols; ++c) aug[c][nrows] = target[c];
    Echelon e = row_reduce(aug);
    std::vector<Rational> x(nrows, 0);
    for (size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == static_cast<int>(nrows)) return std::nullopt;  // inconsistent
        x[e.pivots[r]] = e.rows[r][nrows];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Chain complexes and homology
// ---------------------------------------------------------------------------

/// A chain complex: graded space with a degree -1 differential, d*d = 0.
struct ChainComplex {
    GradedSpace space;
    GradedLinearMap d;  // degree -1

    ChainComplex() = default;
    ChainComplex(GradedSpace sp, GradedLinearMap diff) : space(std::move(sp)), d(std::move(diff)) {
        if (d.shift != -1) throw std::invalid_argument("differential must have degree -1");
    }

    bool d_squared_zero() const {
        for (auto& [l, v] : d.entries)
            if (!vec_is_zero(d.apply(v))) return false;
        return true;
    }
};

inline Vec row_to_vec(const std::vector<Rational>& row, const std::vector<std::string>& basis) {
    Vec out;
    for (size_t i = 0; i < basis.size() && i < row.size(); ++i)
        if (row[i] != 0) out[basis[i]] = row[i];
    return out;
}

inline std::vector<Rational> vec_to_row(const Vec& v, const std::vector<std::string>& basis) {
    std::vector<Rational> row(basis.size(), 0);
    for (size_t i = 0; i < basis.size(); ++i) {
        auto it = v.find(basis[i]);
        if (it != v.end()) row[i] = it->second;
    }
    return row;
}

inline Matrix map_matrix(const GradedLinearMap& f, int degree) {
    // rows indexed by source basis in `degree`, expressed in target basis
    const auto& src = f.source.basis(degree);
    const auto& tgt = f.target.basis(degree + f.shift);
    Matrix m;
    m.reserve(src.size());
    for (auto& l : src) m.push_back(vec_to_row(f.apply_basis(l), tgt));
    return m;
}

struct HomologySummand {
    int dimension = 0;
    std::vector<Vec> representatives;  // cycles spanning the homology
};

/// Exact homology of a chain complex, degree by degree. Representatives are
/// cycles chosen by echelon with deterministic pivots.
inline std::map<int, HomologySummand> homology(const ChainComplex& c) {
    if (!c.d_squared_zero()) throw std::invalid_argument("homology: differential does not square to zero");
    std::map<int, HomologySummand> out;
    for (auto& [deg, basis] : c.space.degrees) {
        size_t n = basis.size();
        if (n == 0) continue;
        // kernel of d in this degree
        Matrix ker;
        const auto& below = c.space.basis(deg - 1);
        if (below.empty()) {
            for (size_t i = 0; i < n; ++i) {
                std::vector<Rational> e(n, 0);
                e[i] = 1;
                ker.push_back(std::move(e));
            }
        } else {
            Matrix dmat(n);
            for (size_t i = 0; i < n; ++i) dmat[i] = vec_to_row(c.d.apply_basis(basis[i]), below);
            ker = left_null_space(dmat, below.size());
        }
        // image of d from one degree up
        Matrix img;
        for (auto& l : c.space.basis(deg + 1)) img.push_back(vec_to_row(c.d.apply_basis(l), basis));
        Echelon eimg = row_reduce(img);
        // kernel mod image: keep kernel rows independent of the image echelon
        Matrix work = eimg.rows;
        std::vector<int> pivots = eimg.pivots;
        HomologySummand h;
        for (auto& krow : ker) {
            std::vector<Rational> v = krow;
            v.resize(n, 0);
            for (size_t r = 0; r < work.size(); ++r) {
                if (v[pivots[r]] == 0) continue;
                Rational f = v[pivots[r]];
                for (size_t cidx = 0; cidx < n; ++cidx) v[cidx] -= f * work[r][cidx];
            }
            int pc = -1;
            for (size_t cidx = 0; cidx < n; ++cidx)
                if (v[cidx] != 0) {
                    pc = static_cast<int>(cidx);
                    break;
                }
            if (pc == -1) continue;
            Rational inv = v[pc];
            for (auto& x : v) x /= inv;
            work.push_back(v);
            pivots.push_back(pc);
            h.representatives.push_back(row_to_vec(krow, basis));
            ++h.dimension;
        }
        if (h.dimension > 0) out[deg] = std::move(h);
    }
    return out;
}

/// dim ker and dim im of the differential at a given degree (for rank-nullity checks).
inline std::pair<int, int> differential_ranks(const ChainComplex& c, int degree) {
    Matrix dmat = map_matrix(c.d, degree);
    int rank = matrix_rank(dmat);
    int n = static_cast<int>(c.space.basis(degree).size());
    return {n - rank, rank};
}

}  // namespace linfty
