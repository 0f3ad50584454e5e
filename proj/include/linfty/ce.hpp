#pragma once

#include "linfty/linf.hpp"

#include <map>
#include <string>
#include <vector>

namespace linfty {

// ---------------------------------------------------------------------------
// Reduced cofree cocommutative coalgebra S(sL): words are sorted multisets of
// suspended basis labels, in symmetric (not skew) normal form.
// ---------------------------------------------------------------------------

using Word = std::vector<std::string>;
using CoalgElement = std::map<Word, Rational>;

inline void coalg_add(CoalgElement& a, const Word& w, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = a.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) a.erase(it);
    }
}

inline void coalg_add(CoalgElement& a, const CoalgElement& b, const Rational& scale = 1) {
    for (auto& [w, c] : b) coalg_add(a, w, c * scale);
}

/// Symmetric sparse multilinear map keyed on canonical sorted words.
struct SymMultiMap {
    int arity = 1;
    int shift = 0;
    std::map<Word, Vec> entries;

    Vec eval_word(const GradedSpace& susp, Word w) const {
        int sign = sort_sym(w, susp);
        if (sign == 0) return {};
        auto it = entries.find(w);
        if (it == entries.end()) return {};
        return sign == 1 ? it->second : vec_scale(it->second, -1);
    }

    void add(const GradedSpace& susp, Word w, const std::string& target, Rational c) {
        int sign = sort_sym(w, susp);
        if (sign == 0 || c == 0) return;
        Vec& v = entries[w];
        vec_add(v, target, sign == 1 ? c : -c);
        if (v.empty()) entries.erase(w);
    }

    bool is_zero() const { return entries.empty(); }
};

/// Canonical symmetric words of a given length over the suspended basis.
std::vector<Word> canonical_words(const GradedSpace& susp, int length);

/// Multiply a coalgebra element by one extra letter (symmetric product),
/// keeping canonical form. The letter is prepended, so signs move it left.
CoalgElement word_times_letter_left(const GradedSpace& susp, const std::string& letter,
                                    const CoalgElement& e);

/// Reduced coproduct: sum over proper splits with symmetric Koszul signs,
/// as pairs (left word, right word, coefficient).
struct SplitTerm {
    Word left, right;
    Rational coeff;
};
std::vector<SplitTerm> reduced_coproduct(const GradedSpace& susp, const Word& w);

// ---------------------------------------------------------------------------
// Coderivations and coalgebra morphisms via their structure maps
// ---------------------------------------------------------------------------

/// Degree -1 coderivation of S(sL), stored through its structure maps
/// delta^1_m : S^m(sL) -> sL and lifted on demand.
struct Coderivation {
    GradedSpace susp;  // sL
    std::map<int, SymMultiMap> maps;

    SymMultiMap& ensure(int m) {
        auto [it, fresh] = maps.emplace(m, SymMultiMap{m, -1, {}});
        return it->second;
    }
    const SymMultiMap* map(int m) const {
        auto it = maps.find(m);
        return it == maps.end() ? nullptr : &it->second;
    }

    Vec struct_map(const Word& w) const;      // delta^1 on a word
    CoalgElement apply_word(const Word& w) const;  // full lifted coderivation
    CoalgElement apply(const CoalgElement& e) const;

    /// delta^2 restricted to words of length <= max_len; empty means square zero.
    CoalgElement square_defect(int max_len) const;
    bool squares_to_zero(int max_len) const;

    /// Coderivation property against the coproduct, sampled on all words of
    /// length <= max_len.
    bool coderivation_property(int max_len) const;
};

/// Degree 0 coalgebra morphism S(sL) -> S(sL'), via F^1_m : S^m(sL) -> sL'.
struct CoalgMorphism {
    GradedSpace src, tgt;  // suspended spaces
    std::map<int, SymMultiMap> maps;

    SymMultiMap& ensure(int m) {
        auto [it, fresh] = maps.emplace(m, SymMultiMap{m, 0, {}});
        return it->second;
    }
    const SymMultiMap* map(int m) const {
        auto it = maps.find(m);
        return it == maps.end() ? nullptr : &it->second;
    }

    Vec struct_map(const Word& w) const;  // F^1 on a word
    /// Lifted component F^p_m applied to a word of length m.
    CoalgElement lift_component(const Word& w, int p) const;
    CoalgElement apply_word(const Word& w) const;  // sum over p
    CoalgElement apply(const CoalgElement& e) const;

    bool comultiplicative(int max_len) const;
};

CoalgMorphism identity_coalg_morphism(const GradedSpace& susp);

/// Composition via (GF)^1_m = sum_p G^1_p F^p_m.
CoalgMorphism compose(const CoalgMorphism& g, const CoalgMorphism& f);

/// Strict coalgebra morphism induced by a degree-0 linear map on cogenerators.
CoalgMorphism strict_coalg_morphism(const GradedSpace& src, const GradedSpace& tgt,
                                    const GradedLinearMap& f1);

// ---------------------------------------------------------------------------
// Chevalley-Eilenberg correspondence
// ---------------------------------------------------------------------------

/// delta^1_m = (-1)^{m(m-1)/2} s l_m (s^-1)^{(x) m}, Koszul signs from the
/// desuspensions included.
Coderivation ce_encode(const LInfinityAlgebra& L);
LInfinityAlgebra ce_decode(const Coderivation& d);

CoalgMorphism ce_encode_morphism(const LInfinityMorphism& f);
LInfinityMorphism ce_decode_morphism(const CoalgMorphism& F, const LInfinityAlgebra& src,
                                     const LInfinityAlgebra& tgt);

/// Normative morphism check: residual of F delta - delta' F as structure
/// maps, evaluated on all canonical words of length <= up_to.
std::map<int, Residual> check_morphism(const LInfinityMorphism& f, int up_to);
bool morphism_holds(const LInfinityMorphism& f, int up_to);

/// Composition of weak L-infinity morphisms through the coalgebra encoding.
LInfinityMorphism compose_morphisms(const LInfinityMorphism& g, const LInfinityMorphism& f);

// ---------------------------------------------------------------------------
// Coderivation dg Lie algebra g_{S(sA[m])} and twisting functions
// ---------------------------------------------------------------------------

/// g_{S(sA[m])} together with its identification with A[m+1]//End(A):
/// elements are Vec over lba_algebra(dimA, m) labels (Eij in degree 0,
/// a<i> in degree m+1).
struct CoderDgla {
    int dimA = 1;
    int m = 1;
    LInfinityAlgebra lba;        // A[m+1]//End(A)
    GradedSpace fiber_susp;      // s(A[m]): labels a<i> at degree m+1
};

CoderDgla coderivation_dgla(int dimA, int m);

/// Action of an element of g_C (in lba coordinates) on a fiber word,
/// as a coderivation of S(s A[m]).
CoalgElement coder_act(const CoderDgla& g, const Vec& elem, const Word& w);

/// Twisting function theta : S(s Z)-bar -> g_C of degree -1, values in lba
/// coordinates; theta(1) = 0 is implicit (no empty-word entry).
struct TwistingFunction {
    Coderivation base;  // delta_B on S(sZ)
    CoderDgla coder;
    std::map<Word, Vec> values;

    Vec value(const GradedSpace& susp, Word w) const {
        int sign = sort_sym(w, susp);
        if (sign == 0) return {};
        auto it = values.find(w);
        if (it == values.end()) return {};
        return sign == 1 ? it->second : vec_scale(it->second, -1);
    }
};

/// Maurer-Cartan residual of a twisting function on all base words of
/// length <= max_len: d theta + theta delta_B + 1/2 [theta, theta] Delta.
std::map<Word, Vec> twisting_mc_residual(const TwistingFunction& t, int max_len);
bool twisting_mc_holds(const TwistingFunction& t, int max_len);

/// theta -> F_theta, the coalgebra morphism into the CE coalgebra of g_C
/// with F^1 restricted to the reduced part equal to s theta.
CoalgMorphism twisting_to_morphism(const TwistingFunction& t);

/// Inverse direction: read the twisting function off a coalgebra morphism
/// into S(s g_C).
TwistingFunction twisting_from_morphism(const CoalgMorphism& F, const Coderivation& base,
                                        const CoderDgla& g, int max_len);

// ---------------------------------------------------------------------------
// Coalgebra bundles
// ---------------------------------------------------------------------------

/// Trivialized coalgebra bundle induced by a strict minimal fibration
/// q : T ->> Z with kernel A[m], surjective in degree 0, and a chosen linear
/// section. Everything is kept in split coordinates via the graded
/// vector-space iso phi : Z + A[m] -> T.
struct CoalgebraBundle {
    Coderivation total;       // delta_E on S(sT)
    Coderivation base;        // delta_B on S(sZ)
    CoalgMorphism projection; // Q : S(sT) -> S(sZ)
    CoderDgla coder;          // g_{S(sA[m])} with lba coordinates
    GradedLinearMap phi;      // Z + A[m] -> T (degree 0 iso); split space labels:
                              // base labels as-is, fiber labels "a<i>"
    GradedSpace split_susp;   // s(Z + A[m])
};

/// Assemble the bundle data for a strict fibration with chosen section.
/// `fiber_in_T` maps the fiber basis a<i> into T.
CoalgebraBundle bundle_from_fibration(const LInfinityAlgebra& T, const LInfinityAlgebra& Z,
                                      const GradedLinearMap& section, const GradedLinearMap& fiber_in_T,
                                      int dimA, int m);

GradedLinearMap invert_linear_iso(const GradedLinearMap& f);

/// theta_E(b)(c) = pr_C triv^{-1} delta_E triv(b (x) c), read off in lba
/// coordinates. Words of length <= max_len.
TwistingFunction twisting_from_bundle(const CoalgebraBundle& bundle, int max_len);

}  // namespace linfty
