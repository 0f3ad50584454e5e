#pragma once

#include "linfty/ce.hpp"
#include "linfty/linf_ops.hpp"

namespace linfty {

enum class TruncFlavor { LeqM, LtM };

struct Truncation {
    LInfinityAlgebra algebra;
    LInfinityMorphism projection;  // strict, from L
};

/// tau_{<= m} L (coker d_{m+1} in degree m) or tau_{< m} L (im d_m in degree
/// m), with brackets pushed along the strict surjection. Well-definedness of
/// the pushforward is asserted at construction.
Truncation truncate(const LInfinityAlgebra& L, int m, TruncFlavor flavor);

/// One interleaved stage of the absolute Postnikov tower.
struct TruncationPair {
    int m = 0;
    LInfinityAlgebra tau_leq, tau_lt;    // at level m
    LInfinityMorphism p_leq, p_lt;       // projections from L
    LInfinityMorphism q_leq;             // tau_leq m -> tau_lt m, minimal fibration
    LInfinityMorphism q_lt_next;         // tau_lt (m+1) -> tau_leq m, acyclic fibration
    LInfinityMorphism sigma_lt_next;     // weak section of q_lt_next
    MorphismReport q_leq_report, q_lt_next_report;
};

std::vector<TruncationPair> postnikov_tower(const LInfinityAlgebra& L, int depth);

/// Weak section of a strict acyclic fibration, found degree-and-arity-wise by
/// exact linear solving. Existence is guaranteed; failure to solve throws.
LInfinityMorphism solve_section(const LInfinityMorphism& q, int arity_bound);

/// Relative Postnikov stage tau_{<= m}(L, f) of a minimal fibration f: L ->> L'.
/// Labels: "lo:<L label>" in degrees <= m, "hi:<L' label>" above.
struct RelativeStage {
    int m = 0;
    LInfinityAlgebra algebra;
    LInfinityMorphism r;      // L -> stage (strict fibration)
    LInfinityMorphism tau_f;  // stage -> L' with tau_f . r = f
};

RelativeStage relative_truncation(const LInfinityMorphism& f, int m);

/// q^f_{<= m} : tau_{<= m}(L,f) -> tau_{<= m-1}(L,f), a minimal fibration
/// surjective in all degrees with kernel A[m], A = (ker f)_m.
LInfinityMorphism relative_q(const RelativeStage& upper, const RelativeStage& lower);

struct UniversalFibration {
    LInfinityAlgebra total, base;   // L_EA(m) x L', L_BA(m) x L'
    LInfinityMorphism p;            // minimal fibration
    LInfinityMorphism pi_E, pi_B;   // projections to End(A) x L'
    int dimA = 1, m = 1;
};

UniversalFibration universal_fibration(int dimA, int m, const LInfinityAlgebra& Lprime);

struct KInvariantData {
    int m = 1;
    int dimA = 0;
    LInfinityAlgebra total;               // tau_{<= m}(L,f)
    LInfinityAlgebra base;                // tau_{<= m-1}(L,f)
    LInfinityMorphism q;                  // the minimal fibration between them
    GradedLinearMap eta;                  // linear section of q from the base
    GradedLinearMap fiber_in_total;       // A[m] basis a<i> -> total, the kernel of q
    LInfinityMorphism psi;                // base -> A[m+1]//End(A)
    LInfinityMorphism psi_tilde;          // total -> EA[m]//End(A)
    LInfinityMorphism tau_f_total, tau_f_base;  // maps to L'
};

/// The k-invariant of the m-th stage of the relative tower of a minimal
/// fibration f, built from a degree-m linear section sigma_m of f.
KInvariantData k_invariant(const LInfinityMorphism& f, int m, const GradedLinearMap& sigma_m);

/// Default degree-m section by echelon.
GradedLinearMap default_section(const LInfinityMorphism& f, int m);

struct ClassifyingSquareReport {
    bool psi_is_morphism = false;
    bool psi_tilde_is_morphism = false;
    bool square_commutes = false;
    bool tangent_comparison_iso = false;
    bool twisting_matches_psi = false;  // theta_E = s^-1 Psi^1 (Appendix-B equality)
    bool ok() const {
        return psi_is_morphism && psi_tilde_is_morphism && square_commutes && tangent_comparison_iso &&
               twisting_matches_psi;
    }
};

/// Machine-check that the m-th relative stage of f is classified by its
/// k-invariant: the square against the universal fibration commutes, the
/// comparison into the pullback has invertible tangent, and the twisting
/// avatar of psi matches the bundle's twisting function.
ClassifyingSquareReport verify_classifying_square(const LInfinityMorphism& f, int m,
                                                  const GradedLinearMap& sigma_m);
ClassifyingSquareReport verify_classifying_square(const LInfinityMorphism& f, int m);

}  // namespace linfty
