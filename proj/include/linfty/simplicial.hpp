#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace linfty {

// ---------------------------------------------------------------------------
// Levelwise-finite simplicial sets, truncated at a storage bound, with an
// optional coskeletality degree for on-demand extension.
// ---------------------------------------------------------------------------

struct FinSimpSet {
    int N = 0;                                        // levels 0..N stored
    std::vector<int> card;                            // card[k]
    std::vector<std::vector<std::vector<int>>> face;  // face[k][i] : X_k -> X_{k-1}, 1 <= k <= N
    std::vector<std::vector<std::vector<int>>> degen; // degen[k][i] : X_k -> X_{k+1}, 0 <= k < N
    int cosk = -1;                                    // declared coskeletality degree, -1 if none

    int levels() const { return N; }
    int size(int k) const { return (k >= 0 && k <= N) ? card[k] : 0; }

    int d(int i, int k, int x) const { return face.at(k).at(i).at(x); }
    int s(int i, int k, int x) const { return degen.at(k).at(i).at(x); }

    void init_levels(int n) {
        N = n;
        card.assign(n + 1, 0);
        face.assign(n + 1, {});
        degen.assign(n + 1, {});
    }

    /// Apply a face word removing the given sorted vertex positions from a
    /// k-simplex (restriction to the complementary face).
    int restrict_to(const std::vector<int>& keep, int k, int x) const;

    /// Spine: the tuple (x|_{01}, x|_{12}, ..., x|_{k-1,k}).
    std::vector<int> spine(int k, int x) const;

    /// Boundary tuple (d_0 x, ..., d_k x).
    std::vector<int> boundary(int k, int x) const;

    /// Whether x in level k is degenerate, and if so its Eilenberg-Zilber
    /// decomposition x = s_{i_r} ... s_{i_1} y with y nondegenerate.
    bool is_degenerate(int k, int x) const;
    std::pair<std::pair<int, int>, std::vector<int>> ez_decompose(int k, int x) const;
};

struct SimpIdentityFailure {
    std::string relation;
    int level = 0, i = 0, j = 0, simplex = 0;
};

/// Exhaustive check of all simplicial identities up to the given level.
std::optional<SimpIdentityFailure> verify_identities(const FinSimpSet& X, int up_to);

struct SimpMap {
    const FinSimpSet* source = nullptr;
    const FinSimpSet* target = nullptr;
    std::vector<std::vector<int>> level;  // level[k][x]

    int operator()(int k, int x) const { return level.at(k).at(x); }
};

/// Naturality of a simplicial map with respect to every face and degeneracy.
bool is_simplicial(const SimpMap& f, int up_to);
bool levelwise_bijective(const SimpMap& f, int up_to);

// ---------------------------------------------------------------------------
// Finite groups and simplicial groups
// ---------------------------------------------------------------------------

struct FiniteGroup {
    int n = 1;
    std::vector<std::vector<int>> mult;
    std::vector<int> inv;
    int unit = 0;
    bool abelian = false;
    std::string name;

    int mul(int a, int b) const { return mult[a][b]; }
    void validate() const;
};

FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group_3();
FiniteGroup trivial_group();

/// A levelwise group structure on a FinSimpSet whose operations are
/// simplicial homomorphisms.
struct FinSimpGroup {
    FinSimpSet set;
    std::vector<std::vector<std::vector<int>>> mult;  // mult[k][a][b]
    std::vector<std::vector<int>> inv;                // inv[k][a]
    std::vector<int> unit;                            // unit[k]

    int mul(int k, int a, int b) const { return mult[k][a][b]; }
    void validate(int up_to) const;  // group axioms + homomorphism property
};

// ---------------------------------------------------------------------------
// Finite shapes inside a standard simplex and hom sets
// ---------------------------------------------------------------------------

/// A downward-closed set of nondegenerate cells of Delta^n; each cell is a
/// sorted vertex subset.
struct Shape {
    int n = 0;
    std::vector<std::vector<int>> cells;  // sorted by (size, lex)
    std::map<std::vector<int>, int> cell_index;

    void finalize();
};

Shape shape_simplex(int n);
Shape shape_boundary(int n);
Shape shape_horn(int n, int i);
Shape shape_skeleton(int k, int n);
Shape shape_spine(int n);

/// Evaluated hom set hom(shape, X): tuples of simplex ids indexed by the
/// shape's cells, together with lookups.
struct HomSet {
    Shape shape;
    std::vector<std::vector<int>> elements;
    std::map<std::vector<int>, int> index;

    int find(const std::vector<int>& tuple) const {
        auto it = index.find(tuple);
        return it == index.end() ? -1 : it->second;
    }
};

HomSet hom_finite(const Shape& shape, const FinSimpSet& X);

/// Restriction of an n-simplex to the shape's cells.
std::vector<int> restrict_simplex(const Shape& shape, const FinSimpSet& X, int x);

/// Relative version: tuples over X paired with an n-simplex of the base that
/// agrees with the f-image on the shape.
struct RelHomSet {
    Shape shape;
    std::vector<std::pair<std::vector<int>, int>> elements;  // (tuple, y)
    std::map<std::pair<std::vector<int>, int>, int> index;

    int find(const std::vector<int>& tuple, int y) const {
        auto it = index.find({tuple, y});
        return it == index.end() ? -1 : it->second;
    }
};

RelHomSet hom_finite_relative(const Shape& shape, const SimpMap& f);

// ---------------------------------------------------------------------------
// Kan-type predicates
// ---------------------------------------------------------------------------

enum class MapKind { Kan, CoveringKan, Hypercover, NHypercover, NStack, CoveringNStack };

struct PredicateReport {
    bool holds = false;
    std::string witness;  // first failure, human-readable
};

/// Check the chosen predicate for f : X -> Y on all levels <= up_to.
/// Covers in finite sets are surjections.
PredicateReport predicate(const SimpMap& f, MapKind kind, int up_to, int n = 0);
PredicateReport predicate_absolute(const FinSimpSet& X, MapKind kind, int up_to, int n = 0);

/// The terminal object and the unique map to it.
FinSimpSet terminal_simplicial_set(int N);
SimpMap map_to_terminal(const FinSimpSet& X, const FinSimpSet& term);

// ---------------------------------------------------------------------------
// Horn filling and homotopy groups
// ---------------------------------------------------------------------------

/// All fillers of a horn: simplices whose faces match the given tuple at all
/// positions except the missing index.
std::vector<int> horn_fillers(const FinSimpSet& X, int k, int missing, const std::vector<int>& faces);
std::optional<int> first_horn_filler(const FinSimpSet& X, int k, int missing,
                                     const std::vector<int>& faces);

struct HomotopyGroup {
    FiniteGroup group;
    std::vector<int> class_of;           // X_n (spherical part) -> class id; -1 otherwise
    std::vector<int> representative;     // class id -> simplex id
};

/// pi_n of a finite Kan complex with basepoint vertex 0; classes of
/// n-simplices with degenerate boundary modulo homotopy, group law by
/// horn-filling search.
HomotopyGroup homotopy_group(const FinSimpSet& X, int n);

/// pi_0 as a partition of the vertices.
std::vector<int> pi0(const FinSimpSet& X);

}  // namespace linfty
