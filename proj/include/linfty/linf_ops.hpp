#pragma once

#include "linfty/linf.hpp"

#include <optional>
#include <set>

namespace linfty {

// ---------------------------------------------------------------------------
// Tangent functor and homology Lie structure
// ---------------------------------------------------------------------------

/// Graded Lie algebra on homology: basis per degree from homology
/// representatives, bracket induced by l_2 on representatives.
struct HomologyLie {
    GradedSpace space;                     // label "h<deg>_<i>" per class
    std::map<int, std::vector<Vec>> reps;  // degree -> cycle representatives in the parent
    SkewMultiMap bracket;                  // arity 2, degree 0

    int dim(int degree) const { return space.dim(degree); }
};

/// Express a cycle's class in the chosen homology basis. Empty optional if
/// the vector is not a cycle of the complex.
std::optional<Vec> homology_class(const HomologyLie& h, const ChainComplex& c, const Vec& cycle);

HomologyLie homology_lie(const LInfinityAlgebra& L);

struct TangentData {
    GradedLinearMap chain_map;  // f_1
    HomologyLie source_h, target_h;
    GradedLinearMap h_map;  // induced map on homology bases
};

/// tan(f) plus the induced graded Lie map on homology.
TangentData tangent(const LInfinityMorphism& f);

// ---------------------------------------------------------------------------
// Morphism classification
// ---------------------------------------------------------------------------

struct MorphismReport {
    bool strict = false;
    bool isomorphism = false;
    bool quasi_isomorphism = false;
    bool fibration = false;
    bool quasi_split = false;
    bool acyclic_fibration = false;
    bool minimal_fibration = false;
    bool quasi_split_linear_only = false;  // splitting solved but full Lie check failed
};

MorphismReport classify_morphism(const LInfinityMorphism& f);

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// Kernel of a strict morphism with the restricted brackets (an L-infinity
/// ideal). The result's basis labels are "k<deg>_<i>".
LInfinityAlgebra kernel_ideal(const LInfinityMorphism& f);

/// The same, together with the inclusion expressing kernel basis vectors
/// inside the source.
std::pair<LInfinityAlgebra, GradedLinearMap> kernel_ideal_with_inclusion(const LInfinityMorphism& f);

/// dg module data for a semidirect product: a Lie algebra g (degree 0), a
/// chain complex C, and an action of g on C by degree-0 maps.
struct DgModule {
    ChainComplex complex;
    // action[(g label)] = degree-0 endomorphism of C
    std::map<std::string, GradedLinearMap> action;
};

/// C // g: strict dg Lie algebra g + C with l_2(x, c) = x.c. Labels from
/// both inputs must not clash. Verifies the module axioms.
LInfinityAlgebra semidirect(const LInfinityAlgebra& g, const DgModule& module);

/// Componentwise product. Labels get "l:" / "r:" prefixes; the projections
/// are available via product_projections.
LInfinityAlgebra product(const LInfinityAlgebra& a, const LInfinityAlgebra& b);
std::pair<LInfinityMorphism, LInfinityMorphism> product_projections(const LInfinityAlgebra& a,
                                                                    const LInfinityAlgebra& b);

/// End(A) as a Lie algebra in degree 0 with basis E<i><j> (elementary
/// matrices), dim A = n.
LInfinityAlgebra end_lie_algebra(int n);

/// A[m+1] // End(A): the coderivation dg Lie algebra target of k-invariants.
LInfinityAlgebra lba_algebra(int dimA, int m);

/// EA[m] // End(A): total space of the universal fibration.
LInfinityAlgebra lea_algebra(int dimA, int m);

inline const char* end_label(int i, int j) {
    static thread_local std::string buf;
    buf = "E" + std::to_string(i) + std::to_string(j);
    return buf.c_str();
}

}  // namespace linfty
