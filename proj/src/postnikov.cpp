#include "linfty/postnikov.hpp"

#include <stdexcept>

namespace linfty {

namespace {

/// Reduce a degree-m vector against the echelon of im(d_{m+1}); the result is
/// supported on non-pivot columns.
std::vector<Rational> reduce_against(const Echelon& e, std::vector<Rational> v) {
    for (size_t r = 0; r < e.rows.size(); ++r) {
        int p = e.pivots[r];
        if (v[p] == 0) continue;
        Rational f = v[p];
        for (size_t c = 0; c < v.size(); ++c) v[c] -= f * e.rows[r][c];
    }
    return v;
}

struct LinearSystem {
    size_t n = 0;
    Matrix rows;  // each row: n coefficients + rhs

    explicit LinearSystem(size_t unknowns) : n(unknowns) {}

    void add(const std::map<size_t, Rational>& coeffs, const Rational& rhs) {
        std::vector<Rational> row(n + 1, 0);
        bool nonzero = rhs != 0;
        for (auto& [u, c] : coeffs) {
            row[u] = c;
            if (c != 0) nonzero = true;
        }
        row[n] = rhs;
        if (nonzero) rows.push_back(std::move(row));
    }

    std::optional<std::vector<Rational>> solve() const {
        Echelon e = row_reduce(rows);
        std::vector<Rational> x(n, 0);
        for (size_t r = 0; r < e.rows.size(); ++r) {
            if (e.pivots[r] == static_cast<int>(n)) return std::nullopt;
            x[e.pivots[r]] = e.rows[r][n];
        }
        return x;
    }
};

}  // namespace

Truncation truncate(const LInfinityAlgebra& L, int m, TruncFlavor flavor) {
    const GradedSpace& S = L.space;
    const auto& basis_m = S.basis(m);
    GradedLinearMap d = L.tangent_complex().d;

    Truncation out;
    LInfinityAlgebra& T = out.algebra;
    std::map<std::string, Vec> proj_m;  // L_m basis -> new degree-m coordinates
    std::vector<Vec> kernel_m;          // kernel of the degree-m projection, in L coords

    for (auto& [deg, labels] : S.degrees)
        if (deg < m)
            for (auto& l : labels) T.space.add(deg, l);

    std::map<std::string, Vec> lift_m;  // new degree-m label -> representative in L_m
    if (flavor == TruncFlavor::LeqM) {
        // degree m: coker d_{m+1}
        Matrix img;
        for (auto& l : S.basis(m + 1)) img.push_back(vec_to_row(d.apply_basis(l), basis_m));
        Echelon e = row_reduce(img);
        std::vector<char> is_pivot(basis_m.size(), 0);
        for (int p : e.pivots) is_pivot[p] = 1;
        for (size_t i = 0; i < basis_m.size(); ++i)
            if (!is_pivot[i]) {
                T.space.add(m, basis_m[i]);
                lift_m[basis_m[i]] = Vec{{basis_m[i], 1}};
            }
        for (size_t i = 0; i < basis_m.size(); ++i) {
            std::vector<Rational> v(basis_m.size(), 0);
            v[i] = 1;
            v = reduce_against(e, std::move(v));
            Vec pv;
            for (size_t c = 0; c < basis_m.size(); ++c)
                if (v[c] != 0) pv[basis_m[c]] = v[c];
            proj_m[basis_m[i]] = std::move(pv);
        }
        for (auto& row : e.rows) kernel_m.push_back(row_to_vec(row, basis_m));
    } else {
        // degree m: im d_m, labels im:<i>, differential = inclusion
        Matrix img;
        for (auto& l : basis_m) img.push_back(vec_to_row(d.apply_basis(l), S.basis(m - 1)));
        Echelon e = row_reduce(img);
        for (size_t i = 0; i < e.rows.size(); ++i) T.space.add(m, "im:" + std::to_string(i));
        for (auto& l : basis_m) {
            auto x = solve_row_combination(e.rows, vec_to_row(d.apply_basis(l), S.basis(m - 1)));
            if (!x) throw std::logic_error("truncate: image expression failed");
            Vec pv;
            for (size_t i = 0; i < e.rows.size(); ++i)
                if ((*x)[i] != 0) pv["im:" + std::to_string(i)] = (*x)[i];
            proj_m[l] = std::move(pv);
        }
        // lift: im:<i> -> a preimage under d_m
        Matrix dm;
        for (auto& l : basis_m) dm.push_back(vec_to_row(d.apply_basis(l), S.basis(m - 1)));
        for (size_t i = 0; i < e.rows.size(); ++i) {
            auto x = solve_row_combination(dm, e.rows[i]);
            if (!x) throw std::logic_error("truncate: no preimage for image basis vector");
            Vec lv;
            for (size_t j = 0; j < basis_m.size(); ++j)
                if ((*x)[j] != 0) lv[basis_m[j]] = (*x)[j];
            lift_m["im:" + std::to_string(i)] = std::move(lv);
        }
        Matrix ker = left_null_space(img, S.basis(m - 1).size());
        for (auto& row : ker) kernel_m.push_back(row_to_vec(row, basis_m));
        // the degree-m differential of the new algebra is the inclusion
        for (size_t i = 0; i < e.rows.size(); ++i) {
            Vec incl = row_to_vec(e.rows[i], S.basis(m - 1));
            for (auto& [t, c] : incl) T.ensure_bracket(1).add(T.space, {"im:" + std::to_string(i)}, t, c);
        }
    }

    auto push = [&](const Vec& v) -> Vec {
        Vec outv;
        for (auto& [l, c] : v) {
            int dl = S.degree_of(l);
            if (dl < m)
                vec_add(outv, l, c);
            else if (dl == m) {
                auto it = proj_m.find(l);
                if (it != proj_m.end()) vec_add(outv, vec_scale(it->second, c), 1);
            }
        }
        return outv;
    };
    auto lift_label = [&](const std::string& l) -> Vec {
        if (T.space.degree_of(l) < m) return Vec{{l, 1}};
        return lift_m.at(l);
    };

    for (auto& [arity, br] : L.brackets) {
        if (br.is_zero()) continue;
        for (auto& idx : canonical_multi_indices(T.space, arity)) {
            if (flavor == TruncFlavor::LtM && arity == 1 && T.space.degree_of(idx[0]) == m)
                continue;  // inclusion differential set explicitly above
            std::vector<Vec> args;
            args.reserve(arity);
            for (auto& l : idx) args.push_back(lift_label(l));
            Vec v = push(br.eval(S, args));
            for (auto& [t, c] : v) T.ensure_bracket(arity).add(T.space, idx, t, c);
        }
        if (!kernel_m.empty()) {
            for (auto& z : kernel_m)
                for (auto& rest : canonical_multi_indices(T.space, arity - 1)) {
                    std::vector<Vec> args;
                    args.push_back(z);
                    for (auto& l : rest) args.push_back(lift_label(l));
                    if (!vec_is_zero(push(br.eval(S, args))))
                        throw std::logic_error("truncate: pushforward bracket is ill-defined");
                }
        }
    }

    out.projection.source = L;
    out.projection.target = T;
    for (auto& [deg, labels] : S.degrees)
        for (auto& l : labels) {
            Vec img = push(Vec{{l, 1}});
            for (auto& [t, c] : img) out.projection.add_component(1, {l}, t, c);
        }
    return out;
}

LInfinityMorphism solve_section(const LInfinityMorphism& q, int arity_bound) {
    const LInfinityAlgebra& X = q.source;
    const LInfinityAlgebra& Y = q.target;
    GradedLinearMap q1 = q.linear_part();
    GradedLinearMap dX = X.tangent_complex().d, dY = Y.tangent_complex().d;

    LInfinityMorphism sigma;
    sigma.source = Y;
    sigma.target = X;

    // arity 1: linear chain section
    {
        std::vector<std::pair<std::string, std::string>> unknowns;  // (y label, x label)
        std::map<std::pair<std::string, std::string>, size_t> uidx;
        for (auto& [deg, ylabels] : Y.space.degrees)
            for (auto& yl : ylabels)
                for (auto& xl : X.space.basis(deg)) {
                    uidx[{yl, xl}] = unknowns.size();
                    unknowns.emplace_back(yl, xl);
                }
        LinearSystem sys(unknowns.size());
        for (auto& [deg, ylabels] : Y.space.degrees)
            for (auto& yl : ylabels)
                for (auto& yt : Y.space.basis(deg)) {
                    std::map<size_t, Rational> coeffs;
                    for (auto& xl : X.space.basis(deg)) {
                        Vec qx = q1.apply_basis(xl);
                        auto it = qx.find(yt);
                        if (it != qx.end()) coeffs[uidx[{yl, xl}]] = it->second;
                    }
                    sys.add(coeffs, yl == yt ? 1 : 0);
                }
        for (auto& [deg, ylabels] : Y.space.degrees)
            for (auto& yl : ylabels)
                for (auto& xt : X.space.basis(deg - 1)) {
                    std::map<size_t, Rational> coeffs;
                    for (auto& xl : X.space.basis(deg)) {
                        Vec dx = dX.apply_basis(xl);
                        auto it = dx.find(xt);
                        if (it != dx.end()) coeffs[uidx[{yl, xl}]] += it->second;
                    }
                    Vec dy = dY.apply_basis(yl);
                    for (auto& [yl2, c] : dy) {
                        auto it = uidx.find({yl2, xt});
                        if (it != uidx.end()) coeffs[it->second] -= c;
                    }
                    sys.add(coeffs, 0);
                }
        auto sol = sys.solve();
        if (!sol) throw std::logic_error("solve_section: no linear chain section (acyclicity violated?)");
        for (size_t u = 0; u < unknowns.size(); ++u)
            if ((*sol)[u] != 0) sigma.add_component(1, {unknowns[u].first}, unknowns[u].second, (*sol)[u]);
    }

    // higher arities: morphism equation arity by arity, values in ker q1
    std::map<int, std::vector<Vec>> kernel;
    for (auto& [deg, labels] : X.space.degrees) {
        if (labels.empty()) continue;
        Matrix rows(labels.size());
        for (size_t i = 0; i < labels.size(); ++i)
            rows[i] = vec_to_row(q1.apply_basis(labels[i]), Y.space.basis(deg));
        Matrix ker = left_null_space(rows, Y.space.basis(deg).size());
        for (auto& kr : ker) kernel[deg].push_back(row_to_vec(kr, labels));
    }

    for (int k = 2; k <= arity_bound; ++k) {
        struct Unknown {
            MultiIndex idx;
            int degree;
            size_t kvec;
        };
        std::vector<Unknown> unknowns;
        for (auto& idx : canonical_multi_indices(Y.space, k)) {
            int outdeg = multi_degree(idx, Y.space) + k - 1;
            auto it = kernel.find(outdeg);
            if (it == kernel.end()) continue;
            for (size_t i = 0; i < it->second.size(); ++i) unknowns.push_back({idx, outdeg, i});
        }
        auto residual_k = [&](const LInfinityMorphism& s) {
            auto res = check_morphism(s, k);
            return res[k];
        };
        Residual base = residual_k(sigma);
        if (unknowns.empty()) {
            if (!residual_is_zero(base))
                throw std::logic_error("solve_section: obstruction with no unknowns at arity " +
                                       std::to_string(k));
            continue;
        }
        std::map<std::pair<MultiIndex, std::string>, size_t> eqidx;
        std::vector<std::map<size_t, Rational>> eqs;
        std::vector<Rational> rhs;
        auto touch = [&](const Residual& r, size_t u) {
            for (auto& [w, v] : r)
                for (auto& [t, c] : v) {
                    if (c == 0) continue;
                    auto key = std::make_pair(w, t);
                    auto [it, fresh] = eqidx.emplace(key, eqs.size());
                    if (fresh) {
                        eqs.emplace_back();
                        rhs.push_back(0);
                    }
                    if (u == SIZE_MAX)
                        rhs[it->second] -= c;
                    else
                        eqs[it->second][u] += c;
                }
        };
        touch(base, SIZE_MAX);
        for (size_t u = 0; u < unknowns.size(); ++u) {
            LInfinityMorphism probe = sigma;
            const Vec& kv = kernel[unknowns[u].degree][unknowns[u].kvec];
            for (auto& [t, c] : kv) probe.add_component(k, unknowns[u].idx, t, c);
            Residual ru = residual_k(probe);
            for (auto& [w, v] : base)
                for (auto& [t, c] : v) {
                    Vec& slot = ru[w];
                    vec_add(slot, t, -c);
                }
            touch(ru, u);
        }
        LinearSystem sys(unknowns.size());
        for (size_t e = 0; e < eqs.size(); ++e) sys.add(eqs[e], rhs[e]);
        auto sol = sys.solve();
        if (!sol) throw std::logic_error("solve_section: infeasible at arity " + std::to_string(k));
        for (size_t u = 0; u < unknowns.size(); ++u) {
            if ((*sol)[u] == 0) continue;
            const Vec& kv = kernel[unknowns[u].degree][unknowns[u].kvec];
            for (auto& [t, c] : kv) sigma.add_component(k, unknowns[u].idx, t, c * (*sol)[u]);
        }
    }
    if (!morphism_holds(sigma, arity_bound + 1))
        throw std::logic_error("solve_section: solved section fails the morphism equations");
    return sigma;
}

std::vector<TruncationPair> postnikov_tower(const LInfinityAlgebra& L, int depth) {
    std::vector<TruncationPair> out;
    for (int m = 0; m <= depth; ++m) {
        TruncationPair st;
        st.m = m;
        Truncation leq = truncate(L, m, TruncFlavor::LeqM);
        Truncation lt = truncate(L, m, TruncFlavor::LtM);
        st.tau_leq = leq.algebra;
        st.tau_lt = lt.algebra;
        st.p_leq = leq.projection;
        st.p_lt = lt.projection;
        st.q_leq.source = st.tau_leq;
        st.q_leq.target = st.tau_lt;
        GradedLinearMap plt = lt.projection.linear_part();
        for (auto& [deg, labels] : st.tau_leq.space.degrees)
            for (auto& l : labels) {
                Vec img = (deg < m) ? Vec{{l, 1}} : plt.apply_basis(l);
                for (auto& [t, c] : img) st.q_leq.add_component(1, {l}, t, c);
            }
        st.q_leq_report = classify_morphism(st.q_leq);
        Truncation ltn = truncate(L, m + 1, TruncFlavor::LtM);
        st.q_lt_next.source = ltn.algebra;
        st.q_lt_next.target = st.tau_leq;
        GradedLinearMap pleq = leq.projection.linear_part();
        for (auto& [deg, labels] : ltn.algebra.space.degrees)
            for (auto& l : labels) {
                if (deg == m + 1) continue;  // maps to zero
                Vec img = (deg < m) ? Vec{{l, 1}} : pleq.apply_basis(l);
                for (auto& [t, c] : img) st.q_lt_next.add_component(1, {l}, t, c);
            }
        st.q_lt_next_report = classify_morphism(st.q_lt_next);
        int bound = std::max(2, ltn.algebra.lie_n() + 1);
        st.sigma_lt_next = solve_section(st.q_lt_next, bound);
        out.push_back(std::move(st));
    }
    return out;
}

namespace {

/// Deterministic preimage data for a strict degreewise surjection.
struct Lifter {
    const GradedSpace* src;
    const GradedSpace* tgt;
    GradedLinearMap f1;
    std::map<std::string, Vec> lifts;

    void build() {
        for (auto& [deg, tlabels] : tgt->degrees) {
            if (tlabels.empty()) continue;
            const auto& slabels = src->basis(deg);
            Matrix rows(slabels.size());
            for (size_t i = 0; i < slabels.size(); ++i)
                rows[i] = vec_to_row(f1.apply_basis(slabels[i]), tlabels);
            for (size_t j = 0; j < tlabels.size(); ++j) {
                std::vector<Rational> e(tlabels.size(), 0);
                e[j] = 1;
                auto x = solve_row_combination(rows, e);
                if (!x)
                    throw std::invalid_argument("lift: map not surjective in degree " + std::to_string(deg));
                Vec v;
                for (size_t i = 0; i < slabels.size(); ++i) vec_add(v, slabels[i], (*x)[i]);
                lifts[tlabels[j]] = std::move(v);
            }
        }
    }
};

}  // namespace

RelativeStage relative_truncation(const LInfinityMorphism& f, int m) {
    if (!f.is_strict()) throw std::invalid_argument("relative_truncation: f must be strict");
    const LInfinityAlgebra& L = f.source;
    const LInfinityAlgebra& Lp = f.target;
    GradedLinearMap f1 = f.linear_part();

    RelativeStage st;
    st.m = m;
    LInfinityAlgebra& T = st.algebra;
    for (auto& [deg, labels] : L.space.degrees)
        if (deg <= m)
            for (auto& l : labels) T.space.add(deg, "lo:" + l);
    for (auto& [deg, labels] : Lp.space.degrees)
        if (deg > m)
            for (auto& l : labels) T.space.add(deg, "hi:" + l);

    Lifter lifter{&L.space, &Lp.space, f1, {}};
    lifter.build();

    auto push = [&](const Vec& v) -> Vec {
        Vec out;
        for (auto& [l, c] : v) {
            if (L.space.degree_of(l) <= m)
                vec_add(out, "lo:" + l, c);
            else
                for (auto& [t, c2] : f1.apply_basis(l)) vec_add(out, "hi:" + t, c * c2);
        }
        return out;
    };
    auto lift_label = [&](const std::string& l) -> Vec {
        if (l.rfind("lo:", 0) == 0) return Vec{{l.substr(3), 1}};
        return lifter.lifts.at(l.substr(3));
    };

    std::vector<Vec> rker;  // kernel of the pushforward in degrees > m
    for (auto& [deg, labels] : L.space.degrees) {
        if (deg <= m || labels.empty()) continue;
        Matrix rows(labels.size());
        for (size_t i = 0; i < labels.size(); ++i)
            rows[i] = vec_to_row(f1.apply_basis(labels[i]), Lp.space.basis(deg));
        for (auto& kr : left_null_space(rows, Lp.space.basis(deg).size()))
            rker.push_back(row_to_vec(kr, labels));
    }

    for (auto& [arity, br] : L.brackets) {
        if (br.is_zero()) continue;
        for (auto& idx : canonical_multi_indices(T.space, arity)) {
            std::vector<Vec> args;
            args.reserve(arity);
            for (auto& l : idx) args.push_back(lift_label(l));
            Vec v = push(br.eval(L.space, args));
            for (auto& [t, c] : v) T.ensure_bracket(arity).add(T.space, idx, t, c);
        }
        for (auto& z : rker)
            for (auto& rest : canonical_multi_indices(T.space, arity - 1)) {
                std::vector<Vec> args;
                args.push_back(z);
                for (auto& l : rest) args.push_back(lift_label(l));
                if (!vec_is_zero(push(br.eval(L.space, args))))
                    throw std::logic_error("relative_truncation: pushforward ill-defined (minimality?)");
            }
    }

    st.r.source = L;
    st.r.target = T;
    for (auto& l : L.space.all_labels())
        for (auto& [t, c] : push(Vec{{l, 1}})) st.r.add_component(1, {l}, t, c);

    st.tau_f.source = T;
    st.tau_f.target = Lp;
    for (auto& l : T.space.all_labels()) {
        if (l.rfind("lo:", 0) == 0) {
            for (auto& [t, c] : f1.apply_basis(l.substr(3))) st.tau_f.add_component(1, {l}, t, c);
        } else {
            st.tau_f.add_component(1, {l}, l.substr(3), 1);
        }
    }
    return st;
}

LInfinityMorphism relative_q(const RelativeStage& upper, const RelativeStage& lower) {
    if (lower.m != upper.m - 1) throw std::invalid_argument("relative_q: stages must be consecutive");
    const LInfinityAlgebra& T = upper.algebra;
    const LInfinityAlgebra& B = lower.algebra;
    GradedLinearMap tf = upper.tau_f.linear_part();
    LInfinityMorphism q;
    q.source = T;
    q.target = B;
    for (auto& l : T.space.all_labels()) {
        int deg = T.space.degree_of(l);
        if (deg == upper.m) {
            for (auto& [t, c] : tf.apply_basis(l)) q.add_component(1, {l}, "hi:" + t, c);
        } else {
            q.add_component(1, {l}, l, 1);
        }
    }
    return q;
}

UniversalFibration universal_fibration(int dimA, int m, const LInfinityAlgebra& Lprime) {
    UniversalFibration u;
    u.dimA = dimA;
    u.m = m;
    LInfinityAlgebra lea = lea_algebra(dimA, m), lba = lba_algebra(dimA, m);
    u.total = product(lea, Lprime);
    u.base = product(lba, Lprime);
    u.p.source = u.total;
    u.p.target = u.base;
    for (auto& l : u.total.space.all_labels()) {
        if (l.rfind("l:b", 0) == 0)
            u.p.add_component(1, {l}, "l:a" + l.substr(3), 1);
        else if (l.rfind("l:a", 0) == 0)
            continue;  // the fiber A[m] dies
        else
            u.p.add_component(1, {l}, l, 1);
    }
    LInfinityAlgebra endl = product(end_lie_algebra(dimA), Lprime);
    u.pi_E.source = u.total;
    u.pi_E.target = endl;
    u.pi_B.source = u.base;
    u.pi_B.target = endl;
    for (auto& l : u.total.space.all_labels())
        if (l.rfind("l:E", 0) == 0 || l.rfind("r:", 0) == 0) u.pi_E.add_component(1, {l}, l, 1);
    for (auto& l : u.base.space.all_labels())
        if (l.rfind("l:E", 0) == 0 || l.rfind("r:", 0) == 0) u.pi_B.add_component(1, {l}, l, 1);
    return u;
}

GradedLinearMap default_section(const LInfinityMorphism& f, int m) {
    GradedLinearMap f1 = f.linear_part();
    Lifter lifter{&f.source.space, &f.target.space, f1, {}};
    lifter.build();
    GradedLinearMap s(f.target.space, f.source.space, 0);
    for (auto& l : f.target.space.basis(m)) s.set(l, lifter.lifts.at(l));
    return s;
}

KInvariantData k_invariant(const LInfinityMorphism& f, int m, const GradedLinearMap& sigma_m) {
    if (m < 1) throw std::invalid_argument("k_invariant: m must be >= 1");
    const LInfinityAlgebra& L = f.source;
    GradedLinearMap f1 = f.linear_part();

    KInvariantData kd;
    kd.m = m;
    RelativeStage lower = relative_truncation(f, m - 1);
    RelativeStage upper = relative_truncation(f, m);
    kd.total = upper.algebra;
    kd.base = lower.algebra;
    kd.q = relative_q(upper, lower);
    kd.tau_f_total = upper.tau_f;
    kd.tau_f_base = lower.tau_f;

    // fiber A = (ker f)_m inside the total stage (degree m is lo:L_m)
    const auto& lm = L.space.basis(m);
    Matrix rows(lm.size());
    for (size_t i = 0; i < lm.size(); ++i)
        rows[i] = vec_to_row(f1.apply_basis(lm[i]), f.target.space.basis(m));
    Matrix ker = left_null_space(rows, f.target.space.basis(m).size());
    kd.dimA = static_cast<int>(ker.size());
    GradedSpace fib;
    for (int i = 0; i < kd.dimA; ++i) fib.add(m, "a" + std::to_string(i));
    kd.fiber_in_total = GradedLinearMap(fib, kd.total.space, 0);
    for (int i = 0; i < kd.dimA; ++i) {
        Vec v;
        for (size_t j = 0; j < lm.size(); ++j)
            if (ker[i][j] != 0) v["lo:" + lm[j]] = ker[i][j];
        kd.fiber_in_total.set("a" + std::to_string(i), v);
    }

    // eta: base -> total; sigma_m in degree m, identity elsewhere
    kd.eta = GradedLinearMap(kd.base.space, kd.total.space, 0);
    for (auto& l : kd.base.space.all_labels()) {
        int deg = kd.base.space.degree_of(l);
        if (deg == m) {
            Vec v;
            for (auto& [t, c] : sigma_m.apply_basis(l.substr(3))) vec_add(v, "lo:" + t, c);
            kd.eta.set(l, v);
        } else {
            kd.eta.set(l, Vec{{l, 1}});
        }
    }
    GradedLinearMap q1 = kd.q.linear_part();
    for (auto& l : kd.base.space.all_labels()) {
        Vec v = q1.apply(kd.eta.apply_basis(l));
        vec_add(v, l, -1);
        if (!vec_is_zero(v)) throw std::invalid_argument("k_invariant: sigma_m is not a section");
    }

    // phi : base + A[m] -> total and pr_A
    GradedSpace split;
    for (auto& [d, labels] : kd.base.space.degrees)
        for (auto& l : labels) split.add(d, l);
    for (int i = 0; i < kd.dimA; ++i) split.add(m, "fib:a" + std::to_string(i));
    GradedLinearMap phi(split, kd.total.space, 0);
    for (auto& [l, v] : kd.eta.entries) phi.set(l, v);
    for (int i = 0; i < kd.dimA; ++i)
        phi.set("fib:a" + std::to_string(i), kd.fiber_in_total.apply_basis("a" + std::to_string(i)));
    GradedLinearMap phi_inv = invert_linear_iso(phi);
    auto pr_A = [&](const Vec& v) -> Vec {  // coordinates in a<i>
        Vec split_v = phi_inv.apply(v);
        Vec out;
        for (auto& [l, c] : split_v)
            if (l.rfind("fib:", 0) == 0) vec_add(out, l.substr(4), c);
        return out;
    };

    // psi : base -> A[m+1]//End(A)
    kd.psi.source = kd.base;
    kd.psi.target = lba_algebra(kd.dimA, m);
    for (auto& x : kd.base.space.basis(0)) {
        for (int j = 0; j < kd.dimA; ++j) {
            Vec br = kd.total.apply_bracket(
                2, {Vec{{x, 1}}, kd.fiber_in_total.apply_basis("a" + std::to_string(j))});
            for (auto& [ai, c] : pr_A(br))
                kd.psi.add_component(1, {x}, "E" + ai.substr(1) + std::to_string(j), c);
        }
    }
    for (auto& x : kd.base.space.basis(m + 1)) {
        Vec br = kd.total.apply_bracket(1, {Vec{{x, 1}}});  // same label upstairs
        for (auto& [ai, c] : pr_A(br)) kd.psi.add_component(1, {x}, ai, c);
    }
    for (int k = 2; k <= std::max(2, kd.total.max_arity); ++k) {
        if (!kd.total.bracket(k)) continue;
        for (auto& idx : canonical_multi_indices(kd.base.space, k)) {
            if (multi_degree(idx, kd.base.space) != m - k + 2) continue;
            std::vector<Vec> args;
            args.reserve(k);
            for (auto& l : idx) args.push_back(kd.eta.apply_basis(l));
            Vec br = kd.total.apply_bracket(k, args);
            for (auto& [ai, c] : pr_A(br)) kd.psi.add_component(k, idx, ai, c);
        }
    }

    // psi_tilde : total -> EA[m]//End(A)
    kd.psi_tilde.source = kd.total;
    kd.psi_tilde.target = lea_algebra(kd.dimA, m);
    GradedLinearMap eta_qbar(kd.total.space, kd.total.space, 0);  // eta q in degree m, id elsewhere
    for (auto& l : kd.total.space.all_labels()) {
        if (kd.total.space.degree_of(l) == m)
            eta_qbar.set(l, kd.eta.apply(q1.apply_basis(l)));
        else
            eta_qbar.set(l, Vec{{l, 1}});
    }
    for (auto& x : kd.total.space.basis(0)) {
        for (int j = 0; j < kd.dimA; ++j) {
            Vec br = kd.total.apply_bracket(
                2, {Vec{{x, 1}}, kd.fiber_in_total.apply_basis("a" + std::to_string(j))});
            for (auto& [ai, c] : pr_A(br))
                kd.psi_tilde.add_component(1, {x}, "E" + ai.substr(1) + std::to_string(j), c);
        }
    }
    for (auto& x : kd.total.space.basis(m))
        for (auto& [ai, c] : pr_A(Vec{{x, 1}})) kd.psi_tilde.add_component(1, {x}, ai, c);
    for (auto& x : kd.total.space.basis(m + 1)) {
        Vec br = kd.total.apply_bracket(1, {Vec{{x, 1}}});
        for (auto& [ai, c] : pr_A(br)) kd.psi_tilde.add_component(1, {x}, "b" + ai.substr(1), c);
    }
    for (int k = 2; k <= std::max(2, kd.total.max_arity); ++k) {
        if (!kd.total.bracket(k)) continue;
        for (auto& idx : canonical_multi_indices(kd.total.space, k)) {
            if (multi_degree(idx, kd.total.space) != m - k + 2) continue;
            std::vector<Vec> args;
            args.reserve(k);
            for (auto& l : idx) args.push_back(eta_qbar.apply_basis(l));
            Vec br = kd.total.apply_bracket(k, args);
            for (auto& [ai, c] : pr_A(br)) kd.psi_tilde.add_component(k, idx, "b" + ai.substr(1), c);
        }
    }
    return kd;
}

namespace {

LInfinityMorphism pair_into_product(const LInfinityMorphism& g, const LInfinityMorphism& h,
                                    const LInfinityAlgebra& prod) {
    LInfinityMorphism out;
    out.source = g.source;
    out.target = prod;
    for (auto& [k, comp] : g.taylor)
        for (auto& [idx, v] : comp.entries)
            for (auto& [t, c] : v) out.add_component(k, idx, "l:" + t, c);
    for (auto& [k, comp] : h.taylor) {
        if (comp.is_zero()) continue;
        if (k != 1) throw std::invalid_argument("pair_into_product: second leg must be strict");
        for (auto& [idx, v] : comp.entries)
            for (auto& [t, c] : v) out.add_component(1, idx, "r:" + t, c);
    }
    return out;
}

bool same_taylor(const LInfinityMorphism& a, const LInfinityMorphism& b) {
    auto nonzero = [](const LInfinityMorphism& f) {
        std::map<int, std::map<MultiIndex, Vec>> out;
        for (auto& [k, comp] : f.taylor)
            if (!comp.is_zero()) out[k] = comp.entries;
        return out;
    };
    return nonzero(a) == nonzero(b);
}

}  // namespace

ClassifyingSquareReport verify_classifying_square(const LInfinityMorphism& f, int m,
                                                  const GradedLinearMap& sigma_m) {
    KInvariantData kd = k_invariant(f, m, sigma_m);
    ClassifyingSquareReport rep;
    int nA = kd.dimA;
    const LInfinityAlgebra& Lp = f.target;

    rep.psi_is_morphism = morphism_holds(kd.psi, kd.psi.target.space.max_degree() + 2);
    rep.psi_tilde_is_morphism =
        morphism_holds(kd.psi_tilde, kd.psi_tilde.target.space.max_degree() + 2);

    UniversalFibration uf = universal_fibration(nA, m, Lp);
    LInfinityMorphism psi_pair = pair_into_product(kd.psi, kd.tau_f_base, uf.base);
    LInfinityMorphism psit_pair = pair_into_product(kd.psi_tilde, kd.tau_f_total, uf.total);

    LInfinityMorphism left = compose_morphisms(uf.p, psit_pair);
    LInfinityMorphism right = compose_morphisms(psi_pair, kd.q);
    rep.square_commutes = same_taylor(left, right);

    // tangent comparison into the degreewise fiber product
    {
        GradedLinearMap q1 = kd.q.linear_part();
        GradedLinearMap t1 = psit_pair.linear_part();
        GradedLinearMap b1 = psi_pair.linear_part();
        GradedLinearMap p1 = uf.p.linear_part();
        bool iso = true;
        int topdeg = std::max(kd.total.space.max_degree(), uf.total.space.max_degree()) + 1;
        for (int deg = 0; deg <= topdeg && iso; ++deg) {
            const auto& bb = kd.base.space.basis(deg);
            const auto& eb = uf.total.space.basis(deg);
            const auto& cb = uf.base.space.basis(deg);
            Matrix sys;
            size_t ncols = bb.size() + eb.size();
            for (size_t j = 0; j < cb.size(); ++j) {
                std::vector<Rational> row(ncols, 0);
                for (size_t i = 0; i < bb.size(); ++i) {
                    Vec v = b1.apply_basis(bb[i]);
                    auto it = v.find(cb[j]);
                    if (it != v.end()) row[i] = it->second;
                }
                for (size_t i = 0; i < eb.size(); ++i) {
                    Vec v = p1.apply_basis(eb[i]);
                    auto it = v.find(cb[j]);
                    if (it != v.end()) row[bb.size() + i] = -it->second;
                }
                sys.push_back(std::move(row));
            }
            int pb_dim = static_cast<int>(ncols) - matrix_rank(sys);
            const auto& tb = kd.total.space.basis(deg);
            if (pb_dim != static_cast<int>(tb.size())) {
                iso = false;
                break;
            }
            Matrix comp(tb.size());
            for (size_t i = 0; i < tb.size(); ++i) {
                comp[i] = vec_to_row(q1.apply_basis(tb[i]), bb);
                auto er = vec_to_row(t1.apply_basis(tb[i]), eb);
                comp[i].insert(comp[i].end(), er.begin(), er.end());
            }
            if (matrix_rank(comp) != static_cast<int>(tb.size())) iso = false;
        }
        rep.tangent_comparison_iso = iso;
    }

    // Appendix-B identity: the bundle's twisting function equals s^-1 Psi^1
    {
        CoalgebraBundle bundle = bundle_from_fibration(kd.total, kd.base, kd.eta, kd.fiber_in_total, nA, m);
        int max_len = kd.base.space.max_degree() + 2;
        TwistingFunction from_bundle = twisting_from_bundle(bundle, max_len);
        TwistingFunction from_psi =
            twisting_from_morphism(ce_encode_morphism(kd.psi), bundle.base, bundle.coder, max_len);
        rep.twisting_matches_psi =
            from_bundle.values == from_psi.values && twisting_mc_holds(from_bundle, max_len);
    }
    return rep;
}

ClassifyingSquareReport verify_classifying_square(const LInfinityMorphism& f, int m) {
    return verify_classifying_square(f, m, default_section(f, m));
}

}  // namespace linfty
