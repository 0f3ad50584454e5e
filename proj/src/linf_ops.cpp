#include "linfty/linf_ops.hpp"

#include <stdexcept>

namespace linfty {

std::optional<Vec> homology_class(const HomologyLie& h, const ChainComplex& c, const Vec& cycle) {
    if (!vec_is_zero(c.d.apply(cycle))) return std::nullopt;
    if (vec_is_zero(cycle)) return Vec{};
    int deg = c.space.degree_of(cycle.begin()->first);
    const auto& basis = c.space.basis(deg);
    auto it = h.reps.find(deg);
    // rows: homology representatives first, then image of d from above
    Matrix rows;
    int nreps = 0;
    if (it != h.reps.end()) {
        for (auto& rep : it->second) rows.push_back(vec_to_row(rep, basis));
        nreps = static_cast<int>(it->second.size());
    }
    for (auto& l : c.space.basis(deg + 1)) rows.push_back(vec_to_row(c.d.apply_basis(l), basis));
    auto x = solve_row_combination(rows, vec_to_row(cycle, basis));
    if (!x) return std::nullopt;
    Vec out;
    const auto& hb = h.space.basis(deg);
    for (int i = 0; i < nreps; ++i) vec_add(out, hb[i], (*x)[i]);
    return out;
}

HomologyLie homology_lie(const LInfinityAlgebra& L) {
    HomologyLie h;
    ChainComplex c = L.tangent_complex();
    auto hom = homology(c);
    for (auto& [deg, s] : hom) {
        for (int i = 0; i < s.dimension; ++i)
            h.space.add(deg, "h" + std::to_string(deg) + "_" + std::to_string(i));
        h.reps[deg] = s.representatives;
    }
    h.bracket.arity = 2;
    h.bracket.shift = 0;
    const SkewMultiMap* l2 = L.bracket(2);
    if (!l2) return h;
    for (auto& [dp, repsp] : h.reps)
        for (auto& [dq, repsq] : h.reps) {
            if (dp > dq) continue;
            for (size_t i = 0; i < repsp.size(); ++i)
                for (size_t j = 0; j < repsq.size(); ++j) {
                    if (dp == dq && j < i) continue;
                    Vec br = l2->eval(L.space, {repsp[i], repsq[j]});
                    if (vec_is_zero(br)) continue;
                    auto cls = homology_class(h, c, br);
                    if (!cls)
                        throw std::domain_error("homology bracket of cycles is not a cycle: Jacobi failure");
                    std::string li = "h" + std::to_string(dp) + "_" + std::to_string(i);
                    std::string lj = "h" + std::to_string(dq) + "_" + std::to_string(j);
                    for (auto& [t, coeff] : *cls) h.bracket.add(h.space, {li, lj}, t, coeff);
                }
        }
    return h;
}

TangentData tangent(const LInfinityMorphism& f) {
    TangentData t;
    t.chain_map = f.linear_part();
    t.source_h = homology_lie(f.source);
    t.target_h = homology_lie(f.target);
    ChainComplex tc = f.target.tangent_complex();
    t.h_map = GradedLinearMap(t.source_h.space, t.target_h.space, 0);
    for (auto& [deg, reps] : t.source_h.reps)
        for (size_t i = 0; i < reps.size(); ++i) {
            Vec img = t.chain_map.apply(reps[i]);
            auto cls = homology_class(t.target_h, tc, img);
            if (!cls) throw std::domain_error("tangent map does not send cycles to cycles");
            t.h_map.set("h" + std::to_string(deg) + "_" + std::to_string(i), *cls);
        }
    return t;
}

namespace {

bool map_bijective_in_degree(const GradedLinearMap& f, int deg) {
    int n = static_cast<int>(f.source.basis(deg).size());
    int m = static_cast<int>(f.target.basis(deg).size());
    if (n != m) return false;
    if (n == 0) return true;
    return matrix_rank(map_matrix(f, deg)) == n;
}

bool map_surjective_in_degree(const GradedLinearMap& f, int deg) {
    int m = static_cast<int>(f.target.basis(deg).size());
    if (m == 0) return true;
    return matrix_rank(map_matrix(f, deg)) == m;
}

std::set<int> all_degrees(const GradedSpace& a, const GradedSpace& b) {
    std::set<int> degs;
    for (auto& [d, ls] : a.degrees)
        if (!ls.empty()) degs.insert(d);
    for (auto& [d, ls] : b.degrees)
        if (!ls.empty()) degs.insert(d);
    return degs;
}

Vec lie_bracket_h(const HomologyLie& h, const Vec& a, const Vec& b) {
    return h.bracket.eval(h.space, {a, b});
}

}  // namespace

MorphismReport classify_morphism(const LInfinityMorphism& f) {
    MorphismReport r;
    r.strict = f.is_strict();
    GradedLinearMap f1 = f.linear_part();

    r.isomorphism = true;
    for (int d : all_degrees(f.source.space, f.target.space))
        if (!map_bijective_in_degree(f1, d)) r.isomorphism = false;

    r.fibration = true;
    for (int d : all_degrees(f.source.space, f.target.space))
        if (d > 0 && !map_surjective_in_degree(f1, d)) r.fibration = false;

    TangentData t = tangent(f);
    r.quasi_isomorphism = true;
    for (int d : all_degrees(t.source_h.space, t.target_h.space))
        if (!map_bijective_in_degree(t.h_map, d)) r.quasi_isomorphism = false;

    r.acyclic_fibration = r.fibration && r.quasi_isomorphism;

    if (r.strict && r.fibration) {
        LInfinityAlgebra ker = kernel_ideal(f);
        const SkewMultiMap* l1 = ker.bracket(1);
        r.minimal_fibration = (l1 == nullptr || l1->is_zero());
    }

    // quasi-split: H(f_1) surjective in all degrees, plus a Lie-algebra
    // splitting of H_0 with the kernel as a direct factor.
    if (r.fibration) {
        bool h_surj = true;
        for (int d : all_degrees(t.source_h.space, t.target_h.space))
            if (!map_surjective_in_degree(t.h_map, d)) h_surj = false;
        if (h_surj) {
            const auto& hb0 = t.source_h.space.basis(0);
            const auto& hb0t = t.target_h.space.basis(0);
            // kernel of H_0(f1)
            Matrix h0(hb0.size());
            for (size_t i = 0; i < hb0.size(); ++i) h0[i] = vec_to_row(t.h_map.apply_basis(hb0[i]), hb0t);
            Matrix kerrows = left_null_space(h0, hb0t.size());
            size_t nk = kerrows.size(), nt = hb0t.size();
            if (nk == 0) {
                r.quasi_split = true;  // H_0(f1) injective and surjective: unique section is Lie
            } else {
                // linear section tau0: solve tau0(b_j) for each target basis vector
                Matrix tau0(nt);
                bool ok = true;
                for (size_t j = 0; j < nt && ok; ++j) {
                    std::vector<Rational> target(nt, 0);
                    target[j] = 1;
                    auto x = solve_row_combination(h0, target);
                    if (!x) {
                        ok = false;
                        break;
                    }
                    tau0[j] = *x;  // coordinates in hb0
                }
                if (ok) {
                    // unknowns c_{j,a}: section correction tau(b_j) = tau0_j + sum_a c_{j,a} ker_a.
                    // Impose [tau b_j, k_b] = 0 and the linearized Lie-section equations.
                    auto to_vec = [&](const std::vector<Rational>& row) { return row_to_vec(row, hb0); };
                    std::vector<Vec> tau0v(nt), kerv(nk);
                    for (size_t j = 0; j < nt; ++j) tau0v[j] = to_vec(tau0[j]);
                    for (size_t a = 0; a < nk; ++a) kerv[a] = to_vec(kerrows[a]);
                    size_t nunk = nt * nk;
                    Matrix eqs;  // each row: coefficients of unknowns, last col = -constant
                    auto add_eq = [&](const std::map<size_t, Vec>& lin, const Vec& constant) {
                        // one equation per basis label of H_0(L)
                        for (auto& lbl : hb0) {
                            std::vector<Rational> row(nunk + 1, 0);
                            bool nonzero = false;
                            for (auto& [u, v] : lin) {
                                auto it = v.find(lbl);
                                if (it != v.end()) {
                                    row[u] = it->second;
                                    nonzero = true;
                                }
                            }
                            auto it = constant.find(lbl);
                            if (it != constant.end()) {
                                row[nunk] = -it->second;
                                nonzero = true;
                            }
                            if (nonzero) eqs.push_back(std::move(row));
                        }
                    };
                    // (a) [tau b_j, k_b] = 0
                    for (size_t j = 0; j < nt; ++j)
                        for (size_t b = 0; b < nk; ++b) {
                            std::map<size_t, Vec> lin;
                            for (size_t a = 0; a < nk; ++a)
                                lin[j * nk + a] = lie_bracket_h(t.source_h, kerv[a], kerv[b]);
                            add_eq(lin, lie_bracket_h(t.source_h, tau0v[j], kerv[b]));
                        }
                    // (b) tau[b_i,b_j] - [tau b_i, tau b_j] = 0, linearized (dropping [c,c])
                    SkewMultiMap tb = t.target_h.bracket;
                    for (size_t i = 0; i < nt; ++i)
                        for (size_t j = i + 1; j < nt; ++j) {
                            Vec bij = tb.eval(t.target_h.space, {Vec{{hb0t[i], 1}}, Vec{{hb0t[j], 1}}});
                            // constant: tau0(bij) - [tau0 b_i, tau0 b_j]
                            Vec cst;
                            for (auto& [lbl, coeff] : bij) {
                                size_t idx = std::find(hb0t.begin(), hb0t.end(), lbl) - hb0t.begin();
                                vec_add(cst, tau0v[idx], coeff);
                            }
                            vec_add(cst, lie_bracket_h(t.source_h, tau0v[i], tau0v[j]), -1);
                            std::map<size_t, Vec> lin;
                            for (size_t a = 0; a < nk; ++a) {
                                // c enters through tau(bij) and -[tau0 b_i, c(b_j)] - [c(b_i), tau0 b_j]
                                Vec li;
                                for (auto& [lbl, coeff] : bij) {
                                    size_t idx = std::find(hb0t.begin(), hb0t.end(), lbl) - hb0t.begin();
                                    if (idx == j) vec_add(li, kerv[a], coeff);
                                    if (idx == i) vec_add(li, kerv[a], coeff);
                                }
                                // indexed per unknown (j', a): assemble separately below
                                (void)li;
                            }
                            // build per-unknown linear coefficients properly
                            lin.clear();
                            for (size_t jp = 0; jp < nt; ++jp)
                                for (size_t a = 0; a < nk; ++a) {
                                    Vec coeffv;
                                    auto itb = bij.find(hb0t[jp]);
                                    if (itb != bij.end()) vec_add(coeffv, kerv[a], itb->second);
                                    if (jp == j)
                                        vec_add(coeffv, lie_bracket_h(t.source_h, tau0v[i], kerv[a]), -1);
                                    if (jp == i)
                                        vec_add(coeffv, lie_bracket_h(t.source_h, kerv[a], tau0v[j]), -1);
                                    if (!vec_is_zero(coeffv)) lin[jp * nk + a] = coeffv;
                                }
                            // constant sign: equation reads lin*c + cst_term = 0 with
                            // cst_term = tau0(bij) - [tau0 b_i, tau0 b_j]
                            add_eq(lin, vec_scale(cst, -1));
                        }
                    // solve eqs * c = rhs (augmented in last column with -constant moved over)
                    // rows: sum_u row[u] c_u = row[nunk]
                    Matrix aug = eqs;
                    Echelon e = row_reduce(aug);
                    bool feasible = true;
                    for (size_t rr = 0; rr < e.rows.size(); ++rr)
                        if (e.pivots[rr] == static_cast<int>(nunk)) feasible = false;
                    if (feasible) {
                        std::vector<Rational> c(nunk, 0);
                        for (size_t rr = 0; rr < e.rows.size(); ++rr)
                            if (e.pivots[rr] < static_cast<int>(nunk)) c[e.pivots[rr]] = e.rows[rr][nunk];
                        // verify the candidate satisfies the full (non-linearized) conditions
                        std::vector<Vec> tau(nt);
                        for (size_t j = 0; j < nt; ++j) {
                            tau[j] = tau0v[j];
                            for (size_t a = 0; a < nk; ++a) vec_add(tau[j], kerv[a], c[j * nk + a]);
                        }
                        bool good = true;
                        for (size_t j = 0; j < nt && good; ++j)
                            for (size_t b = 0; b < nk && good; ++b)
                                if (!vec_is_zero(lie_bracket_h(t.source_h, tau[j], kerv[b]))) good = false;
                        for (size_t i = 0; i < nt && good; ++i)
                            for (size_t j = i + 1; j < nt && good; ++j) {
                                Vec bij = tb.eval(t.target_h.space, {Vec{{hb0t[i], 1}}, Vec{{hb0t[j], 1}}});
                                Vec lhs;
                                for (auto& [lbl, coeff] : bij) {
                                    size_t idx = std::find(hb0t.begin(), hb0t.end(), lbl) - hb0t.begin();
                                    vec_add(lhs, tau[idx], coeff);
                                }
                                vec_add(lhs, lie_bracket_h(t.source_h, tau[i], tau[j]), -1);
                                if (!vec_is_zero(lhs)) good = false;
                            }
                        r.quasi_split = good;
                        if (!good) r.quasi_split_linear_only = true;
                    }
                }
            }
        }
    }
    return r;
}

std::pair<LInfinityAlgebra, GradedLinearMap> kernel_ideal_with_inclusion(const LInfinityMorphism& f) {
    if (!f.is_strict()) throw std::invalid_argument("kernel_ideal: morphism is not strict");
    GradedLinearMap f1 = f.linear_part();
    const GradedSpace& S = f.source.space;
    LInfinityAlgebra K;
    std::map<int, Matrix> kerrows;  // degree -> kernel basis rows in source coordinates
    for (auto& [deg, basis] : S.degrees) {
        if (basis.empty()) continue;
        Matrix rows = left_null_space(map_matrix(f1, deg), f.target.space.basis(deg).size());
        for (size_t i = 0; i < rows.size(); ++i)
            K.space.add(deg, "k" + std::to_string(deg) + "_" + std::to_string(i));
        if (!rows.empty()) kerrows[deg] = std::move(rows);
    }
    GradedLinearMap incl(K.space, S, 0);
    for (auto& [deg, rows] : kerrows)
        for (size_t i = 0; i < rows.size(); ++i)
            incl.set("k" + std::to_string(deg) + "_" + std::to_string(i), row_to_vec(rows[i], S.basis(deg)));
    // restrict brackets: values automatically land back in the kernel
    for (auto& [arity, br] : f.source.brackets) {
        if (br.is_zero()) continue;
        for (auto& idx : canonical_multi_indices(K.space, arity)) {
            std::vector<Vec> args;
            args.reserve(arity);
            for (auto& l : idx) args.push_back(incl.apply_basis(l));
            Vec v = br.eval(S, args);
            if (vec_is_zero(v)) continue;
            int outdeg = multi_degree(idx, K.space) + arity - 2;
            const auto& kb = K.space.basis(outdeg);
            auto it = kerrows.find(outdeg);
            if (it == kerrows.end()) throw std::domain_error("kernel_ideal: bracket escapes the kernel");
            auto x = solve_row_combination(it->second, vec_to_row(v, S.basis(outdeg)));
            if (!x) throw std::domain_error("kernel_ideal: bracket escapes the kernel");
            for (size_t i = 0; i < kb.size(); ++i)
                if ((*x)[i] != 0) K.ensure_bracket(arity).add(K.space, idx, kb[i], (*x)[i]);
        }
    }
    return {K, incl};
}

LInfinityAlgebra kernel_ideal(const LInfinityMorphism& f) { return kernel_ideal_with_inclusion(f).first; }

LInfinityAlgebra semidirect(const LInfinityAlgebra& g, const DgModule& module) {
    if (!g.is_lie_n_algebra(1)) throw std::invalid_argument("semidirect: g must be concentrated in degree 0");
    const ChainComplex& C = module.complex;
    // module axioms
    for (auto& [x, Ax] : module.action) {
        GradedLinearMap dA = compose(C.d, Ax), Ad = compose(Ax, C.d);
        for (auto& l : C.space.all_labels()) {
            Vec diff = dA.apply_basis(l);
            vec_add(diff, Ad.apply_basis(l), -1);
            if (!vec_is_zero(diff)) throw std::invalid_argument("semidirect: action does not commute with d");
        }
    }
    for (auto& xl : g.space.basis(0))
        for (auto& yl : g.space.basis(0)) {
            Vec bxy = g.apply_bracket_labels(2, {xl, yl});
            const GradedLinearMap& Ax = module.action.at(xl);
            const GradedLinearMap& Ay = module.action.at(yl);
            GradedLinearMap comm = compose(Ax, Ay);
            GradedLinearMap yx = compose(Ay, Ax);
            for (auto& l : C.space.all_labels()) {
                Vec lhs = comm.apply_basis(l);
                vec_add(lhs, yx.apply_basis(l), -1);
                // A_{[x,y]}
                for (auto& [zl, coeff] : bxy) vec_add(lhs, module.action.at(zl).apply_basis(l), -coeff);
                if (!vec_is_zero(lhs))
                    throw std::invalid_argument("semidirect: action does not respect the bracket");
            }
        }

    LInfinityAlgebra out;
    for (auto& l : g.space.basis(0)) out.space.add(0, l);
    for (auto& [d, labels] : C.space.degrees)
        for (auto& l : labels) out.space.add(d, l);
    // l1 = d_C
    for (auto& [l, v] : C.d.entries)
        for (auto& [t, coeff] : v) out.add_bracket(1, {l}, t, coeff);
    // l2 on g
    if (const SkewMultiMap* l2 = g.bracket(2))
        for (auto& [idx, v] : l2->entries)
            for (auto& [t, coeff] : v) out.add_bracket(2, idx, t, coeff);
    // l2 action terms: l2(x, c) = x . c
    for (auto& [x, Ax] : module.action)
        for (auto& [c, v] : Ax.entries)
            for (auto& [t, coeff] : v) out.add_bracket(2, {x, c}, t, coeff);
    return out;
}

LInfinityAlgebra product(const LInfinityAlgebra& a, const LInfinityAlgebra& b) {
    LInfinityAlgebra out;
    for (auto& [d, labels] : a.space.degrees)
        for (auto& l : labels) out.space.add(d, "l:" + l);
    for (auto& [d, labels] : b.space.degrees)
        for (auto& l : labels) out.space.add(d, "r:" + l);
    auto copy_brackets = [&](const LInfinityAlgebra& src, const std::string& prefix) {
        for (auto& [arity, br] : src.brackets)
            for (auto& [idx, v] : br.entries) {
                MultiIndex pidx;
                for (auto& l : idx) pidx.push_back(prefix + l);
                for (auto& [t, coeff] : v) out.add_bracket(arity, pidx, prefix + t, coeff);
            }
    };
    copy_brackets(a, "l:");
    copy_brackets(b, "r:");
    return out;
}

std::pair<LInfinityMorphism, LInfinityMorphism> product_projections(const LInfinityAlgebra& a,
                                                                    const LInfinityAlgebra& b) {
    LInfinityAlgebra p = product(a, b);
    LInfinityMorphism pa, pb;
    pa.source = p;
    pa.target = a;
    pb.source = p;
    pb.target = b;
    for (auto& l : a.space.all_labels()) pa.add_component(1, {"l:" + l}, l, 1);
    for (auto& l : b.space.all_labels()) pb.add_component(1, {"r:" + l}, l, 1);
    return {pa, pb};
}

LInfinityAlgebra end_lie_algebra(int n) {
    LInfinityAlgebra g;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.space.add(0, "E" + std::to_string(i) + std::to_string(j));
    // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    std::string eij = "E" + std::to_string(i) + std::to_string(j);
                    std::string ekl = "E" + std::to_string(k) + std::to_string(l);
                    if (eij >= ekl) continue;  // canonical pairs once; skew handles the rest
                    Vec v;
                    if (j == k) vec_add(v, "E" + std::to_string(i) + std::to_string(l), 1);
                    if (l == i) vec_add(v, "E" + std::to_string(k) + std::to_string(j), -1);
                    for (auto& [t, coeff] : v) g.add_bracket(2, {eij, ekl}, t, coeff);
                }
    return g;
}

namespace {

DgModule a_module(int dimA, int m, bool with_e) {
    // chain complex A[m] (labels a<i>) and, if with_e, A[m+1] (labels b<i>)
    // with d(b_i) = a_i; End(A) acts entrywise.
    DgModule mod;
    GradedSpace sp;
    for (int i = 0; i < dimA; ++i) sp.add(m, "a" + std::to_string(i));
    if (with_e)
        for (int i = 0; i < dimA; ++i) sp.add(m + 1, "b" + std::to_string(i));
    GradedLinearMap d(sp, sp, -1);
    if (with_e)
        for (int i = 0; i < dimA; ++i) d.add("b" + std::to_string(i), "a" + std::to_string(i), 1);
    mod.complex = ChainComplex(sp, d);
    for (int i = 0; i < dimA; ++i)
        for (int j = 0; j < dimA; ++j) {
            GradedLinearMap Ax(sp, sp, 0);
            Ax.add("a" + std::to_string(j), "a" + std::to_string(i), 1);
            if (with_e) Ax.add("b" + std::to_string(j), "b" + std::to_string(i), 1);
            mod.action["E" + std::to_string(i) + std::to_string(j)] = std::move(Ax);
        }
    return mod;
}

}  // namespace

LInfinityAlgebra lba_algebra(int dimA, int m) {
    DgModule mod = a_module(dimA, m, false);
    // shift A[m] up to A[m+1]: relabel degrees
    GradedSpace sp = suspend(mod.complex.space, 1);
    GradedLinearMap d(sp, sp, -1);
    DgModule mod2;
    mod2.complex = ChainComplex(sp, d);
    for (auto& [x, Ax] : mod.action) {
        GradedLinearMap A2(sp, sp, 0);
        for (auto& [l, v] : Ax.entries) A2.set(l, v);
        mod2.action[x] = std::move(A2);
    }
    return semidirect(end_lie_algebra(dimA), mod2);
}

LInfinityAlgebra lea_algebra(int dimA, int m) {
    return semidirect(end_lie_algebra(dimA), a_module(dimA, m, true));
}

}  // namespace linfty
